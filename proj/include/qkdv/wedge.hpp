#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "boson.hpp"
#include "partition.hpp"
#include "rational.hpp"

namespace qkdv {

// Basis state of the infinite wedge: the finite deviation of the index set S
// from the vacuum {-1/2, -3/2, ...}. Half-integer positions are stored
// doubled. Nonzero charge is allowed while composing fermionic operators.
struct WedgeKey {
    std::vector<int> plus;  // occupied positive positions, strictly decreasing
    std::vector<int> gaps;  // unoccupied negative positions, strictly decreasing

    bool occupied(int a) const {
        if (a > 0) return std::find(plus.begin(), plus.end(), a) != plus.end();
        return std::find(gaps.begin(), gaps.end(), a) == gaps.end();
    }

    int charge() const { return static_cast<int>(plus.size()) - static_cast<int>(gaps.size()); }

    // Number of elements of S strictly greater than the position a (doubled).
    int countAbove(int a) const {
        if (a > 0) {
            int c = 0;
            for (int s : plus)
                if (s > a) ++c;
            return c;
        }
        int c = static_cast<int>(plus.size()) + (-a - 1) / 2;
        for (int g : gaps)
            if (g > a) --c;
        return c;
    }

    friend bool operator<(const WedgeKey& x, const WedgeKey& y) {
        return std::tie(x.plus, x.gaps) < std::tie(y.plus, y.gaps);
    }
    friend bool operator==(const WedgeKey& x, const WedgeKey& y) {
        return x.plus == y.plus && x.gaps == y.gaps;
    }

    static WedgeKey of(const Partition& lambda) {
        FrobeniusData f = modifiedFrobenius(lambda);
        return WedgeKey{f.cPlus, f.cMinus};
    }

    Partition toPartition() const {
        if (charge() != 0) throw std::domain_error("WedgeKey: nonzero charge");
        std::vector<int> blacks = plus;
        int lowest = gaps.empty() ? 1 : gaps.back();
        for (int sd = -1; sd >= lowest; sd -= 2)
            if (occupied(sd)) blacks.push_back(sd);
        std::vector<int> parts;
        for (size_t j = 0; j < blacks.size(); ++j) {
            int lam = (blacks[j] - 1) / 2 + static_cast<int>(j) + 1;
            if (lam > 0) parts.push_back(lam);
        }
        return Partition(std::move(parts));
    }
};

// Element of the fermionic Fock space F over the orthonormal basis v_S.
class WedgeVector {
public:
    WedgeVector() = default;

    static WedgeVector vacuum() {
        WedgeVector v;
        v.terms_[WedgeKey{}] = Rational(1);
        return v;
    }

    static WedgeVector basis(const Partition& lambda, const Rational& coeff = Rational(1)) {
        WedgeVector v;
        if (!coeff.isZero()) v.terms_[WedgeKey::of(lambda)] = coeff;
        return v;
    }

    const std::map<WedgeKey, Rational>& terms() const { return terms_; }
    bool isZero() const { return terms_.empty(); }

    void addTerm(const WedgeKey& key, const Rational& coeff) {
        if (coeff.isZero()) return;
        auto [it, fresh] = terms_.emplace(key, coeff);
        if (!fresh) {
            it->second += coeff;
            if (it->second.isZero()) terms_.erase(it);
        }
    }

    WedgeVector& operator+=(const WedgeVector& o) {
        for (const auto& [k, c] : o.terms_) addTerm(k, c);
        return *this;
    }
    WedgeVector& operator-=(const WedgeVector& o) {
        for (const auto& [k, c] : o.terms_) addTerm(k, -c);
        return *this;
    }
    friend WedgeVector operator+(WedgeVector a, const WedgeVector& b) { return a += b; }
    friend WedgeVector operator-(WedgeVector a, const WedgeVector& b) { return a -= b; }
    friend WedgeVector operator*(const WedgeVector& a, const Rational& s) {
        WedgeVector r;
        for (const auto& [k, c] : a.terms_) r.addTerm(k, c * s);
        return r;
    }
    friend bool operator==(const WedgeVector& a, const WedgeVector& b) { return a.terms_ == b.terms_; }

private:
    std::map<WedgeKey, Rational> terms_;
};

inline Rational innerProduct(const WedgeVector& u, const WedgeVector& v) {
    const auto& a = u.terms();
    const auto& b = v.terms();
    Rational s;
    for (const auto& [k, c] : (a.size() <= b.size() ? a : b)) {
        const auto& other = (a.size() <= b.size() ? b : a);
        auto it = other.find(k);
        if (it != other.end()) s += c * it->second;
    }
    return s;
}

namespace detail {

inline WedgeKey withOccupied(WedgeKey key, int a, bool black) {
    auto insertDesc = [](std::vector<int>& v, int x) {
        v.insert(std::lower_bound(v.begin(), v.end(), x, std::greater<int>()), x);
    };
    if (a > 0) {
        if (black) insertDesc(key.plus, a);
        else key.plus.erase(std::find(key.plus.begin(), key.plus.end(), a));
    } else {
        if (black) key.gaps.erase(std::find(key.gaps.begin(), key.gaps.end(), a));
        else insertDesc(key.gaps, a);
    }
    return key;
}

}  // namespace detail

// psi_a: wedge with the position a in front, anticommuted into canonical
// order. a is a doubled half-integer.
inline WedgeVector applyPsi(int a, const WedgeVector& v) {
    if (a % 2 == 0) throw std::invalid_argument("applyPsi: mode must be a half-integer");
    WedgeVector r;
    for (const auto& [key, c] : v.terms()) {
        if (key.occupied(a)) continue;
        int sign = key.countAbove(a) % 2 == 0 ? 1 : -1;
        r.addTerm(detail::withOccupied(key, a, true), c * Rational(sign));
    }
    return r;
}

// psi_a^*: the adjoint, removing the position a.
inline WedgeVector applyPsiStar(int a, const WedgeVector& v) {
    if (a % 2 == 0) throw std::invalid_argument("applyPsiStar: mode must be a half-integer");
    WedgeVector r;
    for (const auto& [key, c] : v.terms()) {
        if (!key.occupied(a)) continue;
        int sign = key.countAbove(a) % 2 == 0 ? 1 : -1;
        r.addTerm(detail::withOccupied(key, a, false), c * Rational(sign));
    }
    return r;
}

// Xi_{ab} = :psi_a psi_b^*: = psi_a psi_b^* - delta_{ab}[a < 0].
inline WedgeVector applyXi2(int a, int b, const WedgeVector& v) {
    WedgeVector r = applyPsi(a, applyPsiStar(b, v));
    if (a == b && a < 0) r -= v;
    return r;
}

// Xi_{abcd} = :psi_a psi_b^* psi_c psi_d^*: via the Wick rearrangement
// Xi_{abcd} = Xi_{ab} Xi_{cd} + delta^-_{ad} Xi_{cb} - delta^+_{bc} Xi_{ad}
//             - delta^-_{ad} delta^+_{bc}.
inline WedgeVector applyXi4(int a, int b, int c, int d, const WedgeVector& v) {
    WedgeVector r = applyXi2(a, b, applyXi2(c, d, v));
    if (a == d && a < 0) r += applyXi2(c, b, v);
    if (b == c && b > 0) r -= applyXi2(a, d, v);
    if (a == d && a < 0 && b == c && b > 0) r -= v;
    return r;
}

// alpha_n = sum_a :psi_a psi_{a-n}^*: moving one occupied position up by n
// (doubled shift 2n). Acts on arbitrary wedge vectors.
inline WedgeVector applyAlpha(int n, const WedgeVector& v) {
    if (n == 0) throw std::domain_error("applyAlpha: n must be nonzero");
    WedgeVector r;
    const int shift = 2 * n;
    for (const auto& [key, c] : v.terms()) {
        // Occupied sources whose move can land on an empty position: all
        // positive occupied ones plus negatives down past the lowest hole.
        std::vector<int> sources = key.plus;
        int lowest = (key.gaps.empty() ? -1 : key.gaps.back()) - std::abs(shift) - 1;
        for (int sd = -1; sd >= lowest; sd -= 2)
            if (key.occupied(sd)) sources.push_back(sd);
        for (int s : sources) {
            int t = s + shift;
            if (key.occupied(t)) continue;
            // :psi_t psi_s^*: = psi_t psi_s^* for s != t.
            WedgeKey removed = detail::withOccupied(key, s, false);
            int sign = key.countAbove(s) + removed.countAbove(t);
            r.addTerm(detail::withOccupied(removed, t, true),
                      c * Rational(sign % 2 == 0 ? 1 : -1));
        }
    }
    return r;
}

// alpha_{-n} on basis states of partitions, through border strips:
// alpha_{-n} v_lambda = sum over strips gamma of size n of (-1)^{ht} v_{lambda minus gamma},
// and its adjoint alpha_n through addable strips. Independent route kept for
// cross-checking the fermionic sum.
inline WedgeVector applyAlphaStrips(int n, const WedgeVector& v) {
    if (n == 0) throw std::domain_error("applyAlphaStrips: n must be nonzero");
    WedgeVector r;
    for (const auto& [key, c] : v.terms()) {
        Partition lam = key.toPartition();
        auto strips = n < 0 ? borderStrips(lam, -n) : addableStrips(lam, n);
        for (const auto& s : strips)
            r += WedgeVector::basis(s.result, c * Rational(s.height % 2 == 0 ? 1 : -1));
    }
    return r;
}

// Boson-fermion dictionary: v_lambda <-> s_lambda (an isometry).
inline BosonVector phi(const WedgeVector& v) {
    BosonVector r;
    for (const auto& [key, c] : v.terms()) r += schur(key.toPartition()) * c;
    return r;
}

inline WedgeVector phiInverse(const BosonVector& v) {
    WedgeVector r;
    if (v.isZero()) return r;
    // Group terms by degree and project on the Schur basis of each.
    std::map<long, BosonVector> byDegree;
    for (const auto& [mu, c] : v.terms()) {
        BosonVector& slot = byDegree[mu.size()];
        slot.addTerm(mu, c);
    }
    for (const auto& [n, comp] : byDegree)
        for (const auto& lam : enumeratePartitions(static_cast<int>(n))) {
            Rational coord = innerProduct(schur(lam), comp);
            if (!coord.isZero()) r += WedgeVector::basis(lam, coord);
        }
    return r;
}

}  // namespace qkdv
