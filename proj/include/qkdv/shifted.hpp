#pragma once

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "partition.hpp"
#include "rational.hpp"
#include "series.hpp"

namespace qkdv {

// Q_k(lambda) via modified Frobenius coordinates:
// Q_k = beta_k + (1/(k-1)!) sum_{c in C_lambda} sgn(c) c^{k-1}.
inline Rational evalQ(int k, const Partition& lambda) {
    if (k < 0) throw std::domain_error("evalQ: negative index");
    if (k == 0) return Rational(1);
    FrobeniusData f = modifiedFrobenius(lambda);
    Rational s;
    for (int c : f.cPlus) s += Rational(c, 2).pow(k - 1);
    for (int c : f.cMinus) s -= Rational(c, 2).pow(k - 1);
    return beta(k) + s / factorial(k - 1);
}

// The defining row sum: Q_k = beta_k + (1/(k-1)!) sum_i [(lambda_i - i + 1/2)^{k-1}
// - (-i + 1/2)^{k-1}]; terms vanish beyond the length, so the sum is finite.
// Kept as an independent route for cross-checking evalQ.
inline Rational evalQRows(int k, const Partition& lambda) {
    if (k < 0) throw std::domain_error("evalQRows: negative index");
    if (k == 0) return Rational(1);
    Rational s;
    for (int i = 1; i <= lambda.length(); ++i) {
        s += Rational(2 * (lambda.part(i) - i) + 1, 2).pow(k - 1);
        s -= Rational(-2 * i + 1, 2).pow(k - 1);
    }
    return beta(k) + s / factorial(k - 1);
}

// Element of Lambda*[c]: a rational combination of monomials c^e Q_{m1} Q_{m2} ...
// with all m_i >= 2 (Q_1 vanishes identically and is excluded; Q_0 = 1 is the
// empty index list). Monomials are keyed by (c-exponent, descending indices).
class QExpr {
public:
    using Key = std::pair<int, std::vector<int>>;

    QExpr() = default;

    static QExpr constant(const Rational& v) {
        QExpr e;
        e.addTerm(0, {}, v);
        return e;
    }

    static QExpr monomial(int cExp, std::vector<int> qIndices, const Rational& coeff = Rational(1)) {
        QExpr e;
        e.addTerm(cExp, std::move(qIndices), coeff);
        return e;
    }

    void addTerm(int cExp, std::vector<int> qIndices, const Rational& coeff) {
        if (coeff.isZero()) return;
        if (cExp < 0) throw std::invalid_argument("QExpr: negative c exponent");
        std::sort(qIndices.begin(), qIndices.end(), std::greater<int>());
        for (int m : qIndices)
            if (m < 2) throw std::invalid_argument("QExpr: Q indices must be >= 2");
        Key key{cExp, std::move(qIndices)};
        auto [it, fresh] = terms_.emplace(std::move(key), coeff);
        if (!fresh) {
            it->second += coeff;
            if (it->second.isZero()) terms_.erase(it);
        }
    }

    const std::map<Key, Rational>& terms() const { return terms_; }
    bool isZero() const { return terms_.empty(); }

    static int monomialWeight(const Key& key) {
        int w = key.first;
        for (int m : key.second) w += m;
        return w;
    }

    bool isHomogeneous() const {
        if (terms_.empty()) return true;
        const int w = monomialWeight(terms_.begin()->first);
        for (const auto& [key, c] : terms_)
            if (monomialWeight(key) != w) return false;
        return true;
    }

    // Weight of a homogeneous expression (0 for the zero expression).
    int weight() const {
        if (!isHomogeneous()) throw std::domain_error("QExpr::weight: not homogeneous");
        return terms_.empty() ? 0 : monomialWeight(terms_.begin()->first);
    }

    QExpr& operator+=(const QExpr& o) {
        for (const auto& [key, c] : o.terms_) addTerm(key.first, key.second, c);
        return *this;
    }
    QExpr& operator-=(const QExpr& o) {
        for (const auto& [key, c] : o.terms_) addTerm(key.first, key.second, -c);
        return *this;
    }
    friend QExpr operator+(QExpr a, const QExpr& b) { return a += b; }
    friend QExpr operator-(QExpr a, const QExpr& b) { return a -= b; }

    friend QExpr operator*(const QExpr& a, const QExpr& b) {
        QExpr r;
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) {
                std::vector<int> idx = ka.second;
                idx.insert(idx.end(), kb.second.begin(), kb.second.end());
                r.addTerm(ka.first + kb.first, std::move(idx), ca * cb);
            }
        return r;
    }

    friend QExpr operator*(QExpr a, const Rational& s) {
        QExpr r;
        for (const auto& [key, c] : a.terms_) r.addTerm(key.first, key.second, c * s);
        return r;
    }

    friend bool operator==(const QExpr& a, const QExpr& b) { return a.terms_ == b.terms_; }

    // Substitution homomorphism at a concrete partition and c value.
    Rational eval(const Partition& lambda, const Rational& c) const {
        int maxIdx = 0;
        for (const auto& [key, v] : terms_)
            for (int m : key.second) maxIdx = std::max(maxIdx, m);
        std::vector<Rational> q(maxIdx + 1, Rational(1));
        for (int k = 2; k <= maxIdx; ++k) q[k] = evalQ(k, lambda);
        return evalWithQ(q, c);
    }

    // Same, with precomputed q[k] = Q_k(lambda) (q[0] and q[1] ignored).
    Rational evalWithQ(const std::vector<Rational>& q, const Rational& c) const {
        Rational s;
        for (const auto& [key, v] : terms_) {
            Rational t = v * c.pow(key.first);
            for (int m : key.second) t *= q[m];
            s += t;
        }
        return s;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [key, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << c.str();
            if (key.first > 0) os << "*c^" << key.first;
            for (int m : key.second) os << "*Q_" << m;
        }
        return os.str();
    }

private:
    std::map<Key, Rational> terms_;
};

// All monomials c^e Q_{m1}...Q_{mr} (m_i >= 2) of the given weight, ordered
// by descending c-exponent, then by reverse-lexicographic index partition.
inline std::vector<QExpr> monomialBasis(int weight) {
    if (weight < 0) throw std::domain_error("monomialBasis: negative weight");
    std::vector<QExpr> out;
    for (int e = weight; e >= 0; --e) {
        const int rest = weight - e;
        for (const auto& nu : enumeratePartitions(rest)) {
            if (!nu.empty() && nu.parts().back() < 2) continue;
            out.push_back(QExpr::monomial(e, nu.parts()));
        }
    }
    return out;
}

// E_k^[0](lambda;c) = sum_{j=0}^{k+2} c^{k+2-j}/(k+2-j)! Q_j as an element of
// Lambda*[c]; the j = 1 term is dropped since Q_1 vanishes identically.
inline QExpr dispersionlessEigenvalue(int k) {
    if (k < -2) throw std::domain_error("dispersionlessEigenvalue: k < -2");
    QExpr e;
    for (int j = 0; j <= k + 2; ++j) {
        if (j == 1) continue;
        std::vector<int> idx;
        if (j >= 2) idx.push_back(j);
        e.addTerm(k + 2 - j, idx, factorial(k + 2 - j).inverse());
    }
    return e;
}

}  // namespace qkdv
