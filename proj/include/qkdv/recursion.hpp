#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gtable.hpp"
#include "matrix.hpp"

namespace qkdv {

namespace recdetail {

// The commutator of a normal-ordered monomial with G_1 produces three
// channels (all other contraction patterns vanish). Each is evaluated at a
// concrete integer tuple t of the output shape; the results are divided by
// -(k_in + 2 + j) sum(t) to solve the graded recursion for the next level.

inline Rational evalAt(const MultiPoly& p, const std::vector<long>& t) {
    std::vector<Rational> x;
    x.reserve(t.size());
    for (long v : t) x.emplace_back(v);
    return p.eval(x);
}

// Cubic term of G_1, one contraction: from shape (n-1, h) of the same [j].
inline Rational channelCubicSingle(const GLevel& g, int j, int n, int h,
                                   const std::vector<long>& t) {
    if (n < 2) return Rational(0);
    MultiPoly in = g.poly(n - 1, h, j);
    if (in.isZero()) return Rational(0);
    Rational s;
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) {
            std::vector<long> rest;
            for (int i = 0; i < n; ++i)
                if (i != p && i != q) rest.push_back(t[i]);
            rest.push_back(t[p] + t[q]);
            s += Rational(-(t[p] + t[q])) * evalAt(in, rest);
        }
    return s * Rational(n - 1, 2) / binomial(n, 2);
}

// Quadratic term of G_1, one contraction: from shape (n, h) of [j-1].
inline Rational channelQuadSingle(const GLevel& g, int j, int n, int h,
                                  const std::vector<long>& t) {
    if (j < 1) return Rational(0);
    MultiPoly in = g.poly(n, h, j - 1);
    if (in.isZero()) return Rational(0);
    long cubes = 0;
    for (long v : t) cubes += v * v * v;
    return Rational(-2) * Rational(cubes) * evalAt(in, t);
}

// Cubic term of G_1, two contractions: from shape (n+1, h-1) of the same [j].
// The two contracted modes x, s-x must carry equal signs, which restricts the
// inner sum to a finite chamber.
inline Rational channelCubicDouble(const GLevel& g, int j, int n, int h,
                                   const std::vector<long>& t) {
    if (h < 1) return Rational(0);
    MultiPoly in = g.poly(n + 1, h - 1, j);
    if (in.isZero()) return Rational(0);
    Rational s;
    for (int p = 0; p < n; ++p) {
        const long sp = t[p];
        if (sp == 0) continue;
        std::vector<long> rest;
        for (int i = 0; i < n; ++i)
            if (i != p) rest.push_back(t[i]);
        rest.push_back(0);
        rest.push_back(0);
        Rational chamber;
        if (sp > 0) {
            for (long x = 1; x < sp; ++x) {
                rest[n - 1] = x;
                rest[n] = sp - x;
                chamber -= Rational(x * (sp - x)) * evalAt(in, rest);
            }
        } else {
            for (long x = sp + 1; x <= -1; ++x) {
                rest[n - 1] = x;
                rest[n] = sp - x;
                chamber += Rational(x * (sp - x)) * evalAt(in, rest);
            }
        }
        s += chamber;
    }
    return s * binomial(n + 1, 2) / Rational(n);
}

inline Rational channelValue(const GLevel& g, int j, int n, int h, const std::vector<long>& t) {
    long sum = 0;
    for (long v : t) sum += v;
    if (sum == 0) throw std::logic_error("channelValue: node with zero mode sum");
    Rational rhs = channelCubicSingle(g, j, n, h, t) + channelQuadSingle(g, j, n, h, t) +
                   channelCubicDouble(g, j, n, h, t);
    return rhs / Rational(-(g.level() + 2 + j) * sum);
}

// Interpolation basis for the output shape: products of power sums p_nu with
// parts at most n, of even total degree at most 2(h+j).
inline std::vector<Partition> fitBasis(int n, int degCap) {
    std::vector<Partition> out;
    for (int w = 0; w <= degCap; w += 2)
        for (const auto& nu : enumeratePartitions(w))
            if (nu.length() == 0 || nu.part(1) <= n) out.push_back(nu);
    return out;
}

inline MultiPoly powerSumProduct(int n, const Partition& nu) {
    MultiPoly r = MultiPoly::constant(n, Rational(1));
    for (int m : nu.parts()) {
        MultiPoly p(n);
        for (int i = 0; i < n; ++i) p += MultiPoly::variable(n, i, m);
        r = r * p;
    }
    return r;
}

inline Rational powerSumProductAt(const Partition& nu, const std::vector<long>& t) {
    Rational r(1);
    for (int m : nu.parts()) {
        Rational p;
        for (long v : t) p += Rational(v).pow(m);
        r *= p;
    }
    return r;
}

// Deterministic node tuples: distinct as multisets, with nonzero sum.
inline std::vector<std::vector<long>> makeNodes(int n, int count, int range, uint64_t seed) {
    std::vector<std::vector<long>> nodes;
    std::set<std::vector<long>> seen;
    uint64_t x = seed * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL;
    auto next = [&]() {
        x = x * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<long>((x >> 33) % (2 * range + 1)) - range;
    };
    int guard = 0;
    while (static_cast<int>(nodes.size()) < count) {
        if (++guard > 100000) throw std::logic_error("makeNodes: node generation stalled");
        std::vector<long> t(n);
        long sum = 0;
        for (int i = 0; i < n; ++i) sum += (t[i] = next());
        if (sum == 0) continue;
        std::vector<long> sorted = t;
        std::sort(sorted.begin(), sorted.end());
        if (!seen.insert(sorted).second) continue;
        nodes.push_back(std::move(t));
    }
    return nodes;
}

}  // namespace recdetail

// One step of the graded recursion: level k+1 from level k, for output
// shapes with n <= nCap, j <= jCap and n + h + j <= (k+1) + 2. The n = 0
// constants are not produced here (the recursion cannot see them); they are
// recovered afterwards through the string equation.
inline GLevel brStep(const GLevel& g, int jCap, int nCap) {
    using namespace recdetail;
    const int kOut = g.level() + 1;
    GLevel out(kOut);
    for (int n = 1; n <= std::min(nCap, kOut + 2); ++n)
        for (int h = 0; n + h <= kOut + 2; ++h)
            for (int j = 0; j <= jCap && n + h + j <= kOut + 2; ++j) {
                const int degCap = 2 * (h + j);
                auto basis = fitBasis(n, degCap);
                const int dim = static_cast<int>(basis.size());
                bool solved = false;
                for (int attempt = 0; attempt < 5 && !solved; ++attempt) {
                    const int range = 9 + 4 * attempt;
                    const uint64_t seed =
                        (static_cast<uint64_t>(kOut + 2) << 48) ^ (static_cast<uint64_t>(j) << 32) ^
                        (static_cast<uint64_t>(n) << 16) ^ static_cast<uint64_t>(h) ^
                        (static_cast<uint64_t>(attempt) << 60);
                    auto nodes = makeNodes(n, dim + 5, range, seed);
                    ExactMatrix m(static_cast<int>(nodes.size()), dim);
                    std::vector<Rational> rhs(nodes.size());
                    for (size_t r = 0; r < nodes.size(); ++r) {
                        for (int cidx = 0; cidx < dim; ++cidx)
                            m.at(static_cast<int>(r), cidx) = powerSumProductAt(basis[cidx], nodes[r]);
                        rhs[r] = channelValue(g, j, n, h, nodes[r]);
                    }
                    SolveReport rep = solveExact(m, rhs);
                    if (!rep.ok) {
                        if (rep.rankDeficient) continue;  // widen the node box and retry
                        std::ostringstream os;
                        os << "brStep: interpolation failed for level " << kOut << " shape (" << n
                           << "," << h << "," << j << "): " << rep.message;
                        throw std::logic_error(os.str());
                    }
                    MultiPoly q(n);
                    for (int cidx = 0; cidx < dim; ++cidx)
                        if (!rep.x[cidx].isZero())
                            q += powerSumProduct(n, basis[cidx]) * rep.x[cidx];
                    out.setShape(ShapeKey{n, h, j}, std::move(q));
                    solved = true;
                }
                if (!solved) {
                    std::ostringstream os;
                    os << "brStep: rank-deficient node systems for level " << kOut << " shape ("
                       << n << "," << h << "," << j << ")";
                    throw std::logic_error(os.str());
                }
            }
    return out;
}

// Fill in the n = 0 constants of level k from the n = 1 shapes of level k+1
// via the string equation: the constant of g_k at hbar^h (eps/24)^j is the
// value at a = 0 of the (1, h, j) coefficient of g_{k+1}.
inline void fillConstants(GLevel& g, const GLevel& next) {
    if (next.level() != g.level() + 1) throw std::invalid_argument("fillConstants: level mismatch");
    for (const auto& [key, p] : next.shapes()) {
        if (key.n != 1) continue;
        Rational c0 = p.eval({Rational(0)});
        if (!c0.isZero())
            g.setShape(ShapeKey{0, key.h, key.j}, MultiPoly::constant(0, c0));
    }
}

// The hierarchy levels g_{-1}, ..., g_{kMax}, complete with constants. The
// per-level cap jCap(k) bounds the dispersive order kept at level k; it must
// be non-decreasing for the inputs of each step to be available.
template <typename JCap>
std::vector<GLevel> computeHierarchy(int kMax, JCap&& jCap) {
    std::vector<GLevel> levels;
    levels.push_back(initialLevel());
    for (int k = 0; k <= kMax; ++k)
        levels.push_back(brStep(levels.back(), jCap(k), k + 2));
    // One extra partial level (n <= 1) feeds the constants of level kMax.
    GLevel partial = brStep(levels.back(), jCap(kMax), 1);
    for (int k = kMax; k >= 0; --k)
        fillConstants(levels[k + 1], k == kMax ? partial : levels[k + 2]);
    return levels;
}

inline std::vector<GLevel> computeHierarchy(int kMax, int jCap) {
    return computeHierarchy(kMax, [jCap](int) { return jCap; });
}

}  // namespace qkdv
