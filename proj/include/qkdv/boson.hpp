#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "matrix.hpp"
#include "partition.hpp"
#include "rational.hpp"

namespace qkdv {

// Element of the bosonic Fock space B = Q[p_1, p_2, ...], held in the
// power-sum monomial basis: the key mu stands for p_mu = prod_i p_{mu_i},
// of p-weight |mu|.
class BosonVector {
public:
    BosonVector() = default;

    static BosonVector one() {
        BosonVector v;
        v.terms_[Partition()] = Rational(1);
        return v;
    }

    static BosonVector pMonomial(const Partition& mu, const Rational& coeff = Rational(1)) {
        BosonVector v;
        if (!coeff.isZero()) v.terms_[mu] = coeff;
        return v;
    }

    const std::map<Partition, Rational>& terms() const { return terms_; }
    bool isZero() const { return terms_.empty(); }

    void addTerm(const Partition& mu, const Rational& coeff) {
        if (coeff.isZero()) return;
        auto [it, fresh] = terms_.emplace(mu, coeff);
        if (!fresh) {
            it->second += coeff;
            if (it->second.isZero()) terms_.erase(it);
        }
    }

    // Degree of a homogeneous vector (p_k has weight k); -1 for zero.
    long degree() const {
        long d = -1;
        for (const auto& [mu, c] : terms_) {
            if (d < 0) d = mu.size();
            else if (d != mu.size()) throw std::domain_error("BosonVector: not homogeneous");
        }
        return d;
    }

    BosonVector& operator+=(const BosonVector& o) {
        for (const auto& [mu, c] : o.terms_) addTerm(mu, c);
        return *this;
    }
    BosonVector& operator-=(const BosonVector& o) {
        for (const auto& [mu, c] : o.terms_) addTerm(mu, -c);
        return *this;
    }
    friend BosonVector operator+(BosonVector a, const BosonVector& b) { return a += b; }
    friend BosonVector operator-(BosonVector a, const BosonVector& b) { return a -= b; }

    friend BosonVector operator*(const BosonVector& a, const Rational& s) {
        BosonVector r;
        for (const auto& [mu, c] : a.terms_) r.addTerm(mu, c * s);
        return r;
    }

    friend BosonVector operator*(const BosonVector& a, const BosonVector& b) {
        BosonVector r;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                std::vector<int> parts = ma.parts();
                parts.insert(parts.end(), mb.parts().begin(), mb.parts().end());
                std::sort(parts.begin(), parts.end(), std::greater<int>());
                r.addTerm(Partition(std::move(parts)), ca * cb);
            }
        return r;
    }

    friend bool operator==(const BosonVector& a, const BosonVector& b) { return a.terms_ == b.terms_; }

    // Multiplication by p_a.
    BosonVector mulP(int a) const {
        BosonVector r;
        for (const auto& [mu, c] : terms_) {
            std::vector<int> parts = mu.parts();
            parts.insert(std::lower_bound(parts.begin(), parts.end(), a, std::greater<int>()), a);
            r.addTerm(Partition(std::move(parts)), c);
        }
        return r;
    }

    // Partial derivative d/dp_a.
    BosonVector diffP(int a) const {
        BosonVector r;
        for (const auto& [mu, c] : terms_) {
            int mult = 0;
            for (int p : mu.parts())
                if (p == a) ++mult;
            if (mult == 0) continue;
            std::vector<int> parts = mu.parts();
            parts.erase(std::find(parts.begin(), parts.end(), a));
            r.addTerm(Partition(std::move(parts)), c * Rational(mult));
        }
        return r;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [mu, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << c.str() << "*p[" << mu.str() << "]";
        }
        return os.str();
    }

private:
    std::map<Partition, Rational> terms_;
};

// <p_lambda, p_mu> = delta * z_lambda; the Schur basis is orthonormal.
inline Rational innerProduct(const BosonVector& u, const BosonVector& v) {
    const auto& a = u.terms();
    const auto& b = v.terms();
    Rational s;
    for (const auto& [mu, c] : (a.size() <= b.size() ? a : b)) {
        const auto& other = (a.size() <= b.size() ? b : a);
        auto it = other.find(mu);
        if (it != other.end()) s += c * it->second * mu.zFactor();
    }
    return s;
}

// Complete homogeneous symmetric function h_l in the power sums, via the
// Newton-style recurrence l h_l = sum_i p_i h_{l-i}.
inline BosonVector completeHomogeneous(int l) {
    if (l < 0) return BosonVector();
    static std::mutex mu;
    static std::vector<BosonVector> table{BosonVector::one()};
    std::lock_guard<std::mutex> lock(mu);
    while (static_cast<int>(table.size()) <= l) {
        const int m = static_cast<int>(table.size());
        BosonVector h;
        for (int i = 1; i <= m; ++i) h += table[m - i].mulP(i);
        table.push_back(h * Rational(1, m));
    }
    return table[l];
}

// Schur function s_lambda by the Jacobi-Trudi determinant det(h_{lambda_i-i+j}),
// expanded by memoized Laplace recursion over column subsets.
inline BosonVector schur(const Partition& lambda) {
    const int l = lambda.length();
    if (l == 0) return BosonVector::one();
    // det of rows r..l over the columns in `cols` (bitmask), expanding row r.
    std::map<unsigned, BosonVector> memo;
    auto det = [&](auto&& self, int r, unsigned cols) -> BosonVector {
        if (r > l) return BosonVector::one();
        auto it = memo.find(cols);
        if (it != memo.end()) return it->second;
        BosonVector sum;
        int sign = 1;
        for (int j = 1; j <= l; ++j) {
            if (!(cols & (1u << j))) continue;
            BosonVector h = completeHomogeneous(lambda.part(r) - r + j);
            if (!h.isZero()) {
                BosonVector sub = self(self, r + 1, cols & ~(1u << j));
                sum += (h * sub) * Rational(sign);
            }
            sign = -sign;
        }
        memo.emplace(cols, sum);
        return sum;
    };
    unsigned all = 0;
    for (int j = 1; j <= l; ++j) all |= 1u << j;
    return det(det, 1, all);
}

// Normal-ordered omega monomial with concrete integer modes: all nonnegative
// modes precede the negative ones.
struct OmegaMonomial {
    std::vector<int> modes;
    int hbarPower = 0;

    bool isNormalOrdered() const {
        bool seenNegative = false;
        for (int a : modes) {
            if (a < 0) seenNegative = true;
            else if (seenNegative) return false;
        }
        return true;
    }
};

// rho_c of a normal-ordered monomial: omega_a multiplies by p_a (a > 0),
// differentiates as -a d/dp_{-a} (a < 0), and omega_0 multiplies by c;
// hbar acts as 1. Factors act right to left.
inline BosonVector applyOmegaMonomial(const OmegaMonomial& mono, const Rational& c,
                                      const BosonVector& v) {
    if (!mono.isNormalOrdered())
        throw std::domain_error("applyOmegaMonomial: monomial is not normal-ordered");
    BosonVector cur = v;
    for (auto it = mono.modes.rbegin(); it != mono.modes.rend(); ++it) {
        const int a = *it;
        if (a > 0) cur = cur.mulP(a);
        else if (a < 0) cur = cur.diffP(-a) * Rational(-a);
        else cur = cur * c;
        if (cur.isZero()) break;
    }
    return cur;
}

// The Schur basis of B_n: partitions of n in the fixed enumeration order,
// with inner products delegated to the orthonormality of s_lambda.
class SchurBasis {
public:
    explicit SchurBasis(int n) : n_(n), partitions_(enumeratePartitions(n)) {
        for (const auto& lam : partitions_) vectors_.push_back(schur(lam));
        for (size_t i = 0; i < partitions_.size(); ++i) index_[partitions_[i]] = static_cast<int>(i);
    }

    int degree() const { return n_; }
    int dim() const { return static_cast<int>(partitions_.size()); }
    const std::vector<Partition>& partitions() const { return partitions_; }
    const BosonVector& vector(int i) const { return vectors_[i]; }
    int indexOf(const Partition& lam) const { return index_.at(lam); }

    // Coordinates of a degree-n vector in the Schur basis (orthonormal).
    std::vector<Rational> coordinates(const BosonVector& v) const {
        std::vector<Rational> x(dim());
        for (int i = 0; i < dim(); ++i) x[i] = innerProduct(vectors_[i], v);
        return x;
    }

    BosonVector fromCoordinates(const std::vector<Rational>& x) const {
        BosonVector v;
        for (int i = 0; i < dim(); ++i) v += vectors_[i] * x[i];
        return v;
    }

    // Matrix of a linear operator on B_n in the Schur basis.
    ExactMatrix materialize(const std::function<BosonVector(const BosonVector&)>& op) const {
        ExactMatrix m(dim(), dim());
        for (int j = 0; j < dim(); ++j) {
            std::vector<Rational> col = coordinates(op(vectors_[j]));
            for (int i = 0; i < dim(); ++i) m.at(i, j) = col[i];
        }
        return m;
    }

private:
    int n_;
    std::vector<Partition> partitions_;
    std::vector<BosonVector> vectors_;
    std::map<Partition, int> index_;
};

}  // namespace qkdv
