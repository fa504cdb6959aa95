#pragma once

#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "multipoly.hpp"
#include "rational.hpp"
#include "series.hpp"

namespace qkdv {

// Coefficient polynomials A_k(a,b,c,d) and B_k(a,b) of the quartic and
// diagonal quadratic parts of the dispersive Hamiltonians in fermionic
// variables. Both live in the common four-variable universe (a,b,c,d);
// B_k only involves a and b.
namespace abdetail {

constexpr int kNumVars = 4;

inline MultiPoly var(int i) { return MultiPoly::variable(kNumVars, i); }
inline MultiPoly cnst(const Rational& r) { return MultiPoly::constant(kNumVars, r); }

// P_k = (1/(k! 2^k)) [ (a-b)^2 ((-a+b+c+d)^k - (a-b+c+d)^k)
//                    + (c-d)^2 ((a+b-c+d)^k - (a+b+c-d)^k) ].
inline MultiPoly pPoly(int k) {
    MultiPoly a = var(0), b = var(1), c = var(2), d = var(3);
    MultiPoly s = (a - b).pow(2) * ((b + c + d - a).pow(k) - (a - b + c + d).pow(k)) +
                  (c - d).pow(2) * ((a + b + d - c).pow(k) - (a + b + c - d).pow(k));
    return s * (factorial(k) * Rational(intPow(2, k))).inverse();
}

// R_k: the y^k coefficient of
//   e^{y(a-b)/2} ((b - d/dy)^2 - (a-b)^2) (1 - e^{-(a-b)y}) / sinh(y/2).
inline MultiPoly rPoly(int k) {
    MultiPoly a = var(0), b = var(1);
    MultiPoly u = a - b;
    const MultiPoly zero(kNumVars);
    const int ord = k + 2;

    // (1 - e^{-uy})/y and (y/2)/sinh(y/2); their product times 2 is the
    // regular series (1 - e^{-uy})/sinh(y/2).
    PowerSeries<MultiPoly> h(ord, zero);
    for (int j = 0; j <= ord; ++j) {
        MultiPoly t = u.pow(j + 1) * factorial(j + 1).inverse();
        h.set(j, (j % 2 == 0) ? t : -t);
    }
    PowerSeries<MultiPoly> s(ord, zero);
    for (int j = 0; j <= ord; ++j) s.set(j, cnst(beta(j)));
    PowerSeries<MultiPoly> g = (h * s).mulRational(Rational(2));

    PowerSeries<MultiPoly> g1 = g.derivative();
    PowerSeries<MultiPoly> w = g.derivative().derivative();
    w = w - g1.truncate(k).mulCoeff(b * Rational(2));
    w = w + g.truncate(k).mulCoeff(b * b - u * u);

    PowerSeries<MultiPoly> e(k, zero);
    for (int j = 0; j <= k; ++j) e.set(j, u.pow(j) * (factorial(j) * Rational(intPow(2, j))).inverse());
    return (e * w).at(k);
}

// T_k = (2/(3 k!)) (b(b^2 - 1/4) - a(a^2 - 1/4)) ((a+b)/2)^k.
inline MultiPoly tPoly(int k) {
    MultiPoly a = var(0), b = var(1);
    MultiPoly cubic = b * (b * b - cnst(Rational(1, 4))) - a * (a * a - cnst(Rational(1, 4)));
    return cubic * (a + b).pow(k) *
           (Rational(2, 3) / (factorial(k) * Rational(intPow(2, k))));
}

struct ABPair {
    MultiPoly a{kNumVars};
    MultiPoly b{kNumVars};
};

inline const ABPair& abPair(int k) {
    if (k < -1) throw std::domain_error("abPair: k < -1");
    static std::mutex mu;
    static std::vector<ABPair> table{ABPair{}};  // index k+1; A_{-1} = B_{-1} = 0
    std::lock_guard<std::mutex> lock(mu);
    while (static_cast<int>(table.size()) <= k + 1) {
        const int m = static_cast<int>(table.size()) - 1;
        const ABPair& prev = table.back();
        MultiPoly a = var(0), b = var(1), c = var(2), d = var(3);
        MultiPoly half = cnst(Rational(1, 2));
        ABPair cur;
        MultiPoly numA = (a * a - b * b + c * c - d * d) * half * prev.a - pPoly(m);
        cur.a = numA.divideExact((a - b + c - d) * Rational(m + 2));
        MultiPoly numB = (a * a - b * b) * half * prev.b - rPoly(m) - tPoly(m);
        cur.b = numB.divideExact((a - b) * Rational(m + 2));
        table.push_back(std::move(cur));
    }
    return table[k + 1];
}

}  // namespace abdetail

inline const MultiPoly& aPoly(int k) { return abdetail::abPair(k).a; }
inline const MultiPoly& bPoly(int k) { return abdetail::abPair(k).b; }

// Evaluations at concrete (half-integer) modes.
inline Rational aPolyAt(int k, const Rational& a, const Rational& b, const Rational& c,
                        const Rational& d) {
    return aPoly(k).eval({a, b, c, d});
}
inline Rational bPolyDiag(int k, const Rational& a) {
    return bPoly(k).eval({a, a, Rational(0), Rational(0)});
}

// Constant term gamma_k = 2 beta_2 beta_{k+1} + k(k+3) beta_{k+3}.
inline Rational gammaConstant(int k) {
    if (k < 0) throw std::domain_error("gammaConstant: negative index");
    return Rational(2) * beta(2) * beta(k + 1) + Rational(k) * Rational(k + 3) * beta(k + 3);
}

}  // namespace qkdv
