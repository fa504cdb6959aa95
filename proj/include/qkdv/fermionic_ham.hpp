#pragma once

#include <stdexcept>
#include <vector>

#include "abpoly.hpp"
#include "matrix.hpp"
#include "shifted.hpp"
#include "wedge.hpp"

namespace qkdv {

namespace fermdetail {

// Matrix of an operator on the span of v_lambda, |lambda| = n, in the fixed
// partition enumeration order (the same order as SchurBasis).
template <typename Op>
ExactMatrix materializeWedge(int n, Op&& op) {
    auto parts = enumeratePartitions(n);
    const int dim = static_cast<int>(parts.size());
    ExactMatrix m(dim, dim);
    for (int j = 0; j < dim; ++j) {
        WedgeVector img = op(WedgeVector::basis(parts[j]));
        for (int i = 0; i < dim; ++i)
            m.at(i, j) = innerProduct(WedgeVector::basis(parts[i]), img);
    }
    return m;
}

// Dispersionless piece at c = 0: beta_{k+2} + (1/(k+1)!) sum_a a^{k+1} Xi_aa,
// realized by the fermionic sum over modes |a| <= cut + 1/2.
inline ExactMatrix gHat0AtZero(int k, int n, int cut) {
    if (k < -2) throw std::domain_error("gHat0: k < -2");
    auto op = [&](const WedgeVector& w) {
        WedgeVector r = w * beta(k + 2);
        if (k == -2) return r;  // the operator is the constant 1... beta_0 = 1
        Rational pref = factorial(k + 1).inverse();
        for (int a = -(2 * cut + 1); a <= 2 * cut + 1; a += 2)
            r += applyXi2(a, a, w) * (pref * Rational(a, 2).pow(k + 1));
        return r;
    };
    return materializeWedge(n, op);
}

}  // namespace fermdetail

// Matrix of hat-G_k^{[0]}(c) on the degree-n block, via the fermionic
// realization. Diagonal with entries E_k^{[0]}(lambda; c).
inline ExactMatrix gHat0Matrix(int k, int n, const Rational& c) {
    if (k < -2) throw std::domain_error("gHat0Matrix: k < -2");
    const int dim = static_cast<int>(enumeratePartitions(n).size());
    ExactMatrix m(dim, dim);
    // Modes beyond n + 1/2 act by zero on the block; computing with the
    // window enlarged by one must not change the matrix.
    ExactMatrix witness(dim, dim);
    for (int pass = 0; pass < 2; ++pass) {
        ExactMatrix acc(dim, dim);
        for (int l = 0; l <= k + 2; ++l) {
            ExactMatrix base = fermdetail::gHat0AtZero(k - l, n, n + pass);
            Rational scale = c.pow(l) / factorial(l);
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) acc.at(i, j) += base.at(i, j) * scale;
        }
        if (pass == 0) m = acc;
        else witness = acc;
    }
    if (!(m == witness)) throw std::logic_error("gHat0Matrix: mode window is not saturated");
    return m;
}

// Matrix of hat-G_k^{[1]} (the first dispersive correction, in units of
// epsilon/24) on the degree-n block:
//   sum_{a,b,c} A_k(a,b,c,a+c-b) Xi_{a,b,c,a+c-b} + sum_a B_k(a,a) Xi_aa + gamma_k.
inline ExactMatrix gHat1Matrix(int k, int n) {
    if (k < 0) throw std::domain_error("gHat1Matrix: negative k");
    const MultiPoly& A = aPoly(k);
    const MultiPoly& B = bPoly(k);
    const Rational gamma = gammaConstant(k);
    auto block = [&](int cut) {
        const int M = 2 * cut + 1;
        struct Term {
            int a, b, c, d;
            Rational coeff;
        };
        std::vector<Term> quartic;
        std::vector<std::pair<int, Rational>> diag;
        for (int a = -M; a <= M; a += 2) {
            Rational ha(a, 2);
            diag.emplace_back(a, B.eval({ha, ha, Rational(0), Rational(0)}));
            for (int b = -M; b <= M; b += 2)
                for (int c = -M; c <= M; c += 2) {
                    const int d = a + c - b;
                    Rational coeff = A.eval({ha, Rational(b, 2), Rational(c, 2), Rational(d, 2)});
                    if (!coeff.isZero()) quartic.push_back({a, b, c, d, coeff});
                }
        }
        auto op = [&](const WedgeVector& w) {
            WedgeVector r = w * gamma;
            for (const auto& [a, bb] : diag) r += applyXi2(a, a, w) * bb;
            for (const auto& t : quartic) {
                WedgeVector x = applyXi4(t.a, t.b, t.c, t.d, w);
                if (!x.isZero()) r += x * t.coeff;
            }
            return r;
        };
        return fermdetail::materializeWedge(n, op);
    };
    ExactMatrix m = block(n);
    if (!(m == block(n + 1))) throw std::logic_error("gHat1Matrix: mode window is not saturated");
    return m;
}

}  // namespace qkdv
