#pragma once

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "boson.hpp"
#include "multipoly.hpp"
#include "partition.hpp"
#include "rational.hpp"

namespace qkdv {

// One homogeneous piece of a hierarchy generating function at level k:
// sum over ordered integer tuples a of P(a) hbar^h (eps/24)^j z^{sum a}
// :omega_{a_1} ... omega_{a_n}:, with P symmetric (the 1/n! of unordered
// descriptions is absorbed into P). n = 0 shapes are plain constants.
struct ShapeKey {
    int n = 0;
    int h = 0;
    int j = 0;
    friend bool operator<(const ShapeKey& x, const ShapeKey& y) {
        return std::tie(x.n, x.h, x.j) < std::tie(y.n, y.h, y.j);
    }
    friend bool operator==(const ShapeKey& x, const ShapeKey& y) {
        return std::tie(x.n, x.h, x.j) == std::tie(y.n, y.h, y.j);
    }
};

class GLevel {
public:
    explicit GLevel(int k) : k_(k) {}

    int level() const { return k_; }
    const std::map<ShapeKey, MultiPoly>& shapes() const { return shapes_; }

    void setShape(const ShapeKey& key, MultiPoly p) {
        if (p.nvars() != key.n) throw std::invalid_argument("GLevel::setShape: wrong universe");
        if (p.isZero()) return;
        shapes_.insert_or_assign(key, std::move(p));
    }

    // The symmetric coefficient polynomial of a shape (zero if absent).
    MultiPoly poly(int n, int h, int j) const {
        auto it = shapes_.find(ShapeKey{n, h, j});
        return it == shapes_.end() ? MultiPoly(n) : it->second;
    }

    bool hasShape(int n, int h, int j) const { return shapes_.count(ShapeKey{n, h, j}) > 0; }

private:
    int k_;
    std::map<ShapeKey, MultiPoly> shapes_;
};

// The initial level: g_{-1} = sum_a omega_a z^a.
inline GLevel initialLevel() {
    GLevel g(-1);
    g.setShape(ShapeKey{1, 0, 0}, MultiPoly::constant(1, Rational(1)));
    return g;
}

// Differential-polynomial view: coefficients of monomials
// u_{d_1}...u_{d_r} hbar^h (eps/24)^j with d_1 >= ... >= d_r >= 0.
struct DiffMonomial {
    std::vector<int> d;  // weakly decreasing u-indices
    int h = 0;
    int j = 0;
    friend bool operator<(const DiffMonomial& x, const DiffMonomial& y) {
        return std::tie(x.d, x.h, x.j) < std::tie(y.d, y.h, y.j);
    }
};

// Translate a level table into the differential polynomial g_k^poly. A shape
// monomial c * prod_i a_i^{e_i} with sorted exponent multiset d corresponds
// to (c * n!/prod mult(d)!) u_d, because symmetrizing u_d over ordered tuples
// divides by the same factor.
inline std::map<DiffMonomial, Rational> toDifferentialPolynomial(const GLevel& g) {
    std::map<DiffMonomial, Rational> out;
    for (const auto& [key, p] : g.shapes()) {
        std::map<std::vector<int>, Rational> bySorted;
        for (const auto& [e, c] : p.terms()) {
            std::vector<int> d = e;
            std::sort(d.begin(), d.end(), std::greater<int>());
            auto [it, fresh] = bySorted.emplace(std::move(d), c);
            if (!fresh && !(it->second == c))
                throw std::logic_error("toDifferentialPolynomial: coefficient not symmetric");
        }
        for (const auto& [d, c] : bySorted) {
            Rational count = factorial(key.n);
            int run = 1;
            for (size_t i = 1; i <= d.size(); ++i) {
                if (i < d.size() && d[i] == d[i - 1]) ++run;
                else {
                    count /= factorial(run);
                    run = 1;
                }
            }
            Rational coeff = c * count;
            if (!coeff.isZero()) out[DiffMonomial{d, key.h, key.j}] += coeff;
        }
    }
    for (auto it = out.begin(); it != out.end();)
        it = it->second.isZero() ? out.erase(it) : std::next(it);
    return out;
}

// rho_c of the z^0 layer of the (eps/24)^j part of g_k, as an operator on
// the bosonic space: tuples with sum zero act with positive entries as p_a
// multiplication, negative entries b as b d/dp_b, and zero entries as the
// scalar c; hbar acts as 1.
inline ExactMatrix extractHamiltonian(const GLevel& g, int j, int n, const Rational& c) {
    struct Term {
        std::vector<int> up;    // multiplication indices
        std::vector<int> down;  // differentiation indices
        Rational coeff;
    };
    std::vector<Term> terms;
    Rational scalar;

    auto arrangements = [](const std::vector<int>& signedTuple) {
        std::vector<int> s = signedTuple;
        std::sort(s.begin(), s.end());
        Rational count = factorial(static_cast<int>(s.size()));
        int run = 1;
        for (size_t i = 1; i <= s.size(); ++i) {
            if (i < s.size() && s[i] == s[i - 1]) ++run;
            else {
                count /= factorial(run);
                run = 1;
            }
        }
        return count;
    };

    for (const auto& [key, p] : g.shapes()) {
        if (key.j != j) continue;
        if (key.n == 0) {
            scalar += p.constantTerm();
            continue;
        }
        const int ns = key.n;
        for (int zc = 0; zc <= ns; ++zc) {
            if (zc > 0 && c.isZero()) continue;
            const int rest = ns - zc;
            for (int lp = 0; lp <= rest; ++lp) {
                const int ln = rest - lp;
                if ((lp == 0) != (ln == 0)) continue;  // a nonzero sum needs both signs
                const int wMax = (lp == 0) ? 0 : n;
                for (int w = std::max(lp, ln); w <= wMax; ++w) {
                    for (const auto& pp : enumeratePartitions(w)) {
                        if (pp.length() != lp) continue;
                        for (const auto& pm : enumeratePartitions(w)) {
                            if (pm.length() != ln) continue;
                            std::vector<int> tuple;
                            std::vector<Rational> at;
                            for (int v : pp.parts()) tuple.push_back(v);
                            for (int v : pm.parts()) tuple.push_back(-v);
                            tuple.resize(ns, 0);
                            for (int v : tuple) at.emplace_back(v);
                            Rational val = p.eval(at) * c.pow(zc) * arrangements(tuple);
                            if (val.isZero()) continue;
                            terms.push_back(Term{pp.parts(), pm.parts(), val});
                        }
                    }
                }
            }
        }
    }

    SchurBasis basis(n);
    return basis.materialize([&](const BosonVector& v) {
        BosonVector r = v * scalar;
        for (const auto& t : terms) {
            BosonVector cur = v;
            for (int b : t.down) {
                cur = cur.diffP(b) * Rational(b);
                if (cur.isZero()) break;
            }
            if (cur.isZero()) continue;
            for (int a : t.up) cur = cur.mulP(a);
            r += cur * t.coeff;
        }
        return r;
    });
}

}  // namespace qkdv
