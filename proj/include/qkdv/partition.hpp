#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"

namespace qkdv {

// Integer partition: weakly decreasing positive parts.
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
        while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
        for (size_t i = 0; i < parts_.size(); ++i) {
            if (parts_[i] <= 0 || (i > 0 && parts_[i] > parts_[i - 1]))
                throw std::invalid_argument("Partition: parts must be weakly decreasing and positive");
        }
        size_ = 0;
        for (int p : parts_) size_ += p;
    }

    static Partition fromString(const std::string& s) {
        if (s.empty() || s == "0") return Partition();
        std::vector<int> parts;
        std::istringstream is(s);
        std::string tok;
        while (std::getline(is, tok, '+')) parts.push_back(std::stoi(tok));
        return Partition(std::move(parts));
    }

    const std::vector<int>& parts() const { return parts_; }
    long size() const { return size_; }
    int length() const { return static_cast<int>(parts_.size()); }
    bool empty() const { return parts_.empty(); }
    int part(int i) const {  // 1-based, zero beyond the length
        return (i >= 1 && i <= length()) ? parts_[i - 1] : 0;
    }

    Partition conjugate() const {
        std::vector<int> c;
        if (!parts_.empty()) {
            c.resize(parts_[0]);
            for (int p : parts_)
                for (int j = 0; j < p; ++j) ++c[j];
        }
        return Partition(std::move(c));
    }

    // Text form "7+2+1"; the empty partition prints as "0".
    std::string str() const {
        if (parts_.empty()) return "0";
        std::ostringstream os;
        for (size_t i = 0; i < parts_.size(); ++i) {
            if (i) os << "+";
            os << parts_[i];
        }
        return os.str();
    }

    friend bool operator==(const Partition& a, const Partition& b) { return a.parts_ == b.parts_; }
    friend bool operator!=(const Partition& a, const Partition& b) { return a.parts_ != b.parts_; }
    friend bool operator<(const Partition& a, const Partition& b) { return a.parts_ < b.parts_; }

    // z_lambda = prod_i i^{m_i} m_i! (symmetry factor of the power-sum basis).
    Rational zFactor() const {
        std::map<int, int> mult;
        for (int p : parts_) ++mult[p];
        Rational z(1);
        for (auto [p, m] : mult) z *= intPow(p, m) * factorial(m);
        return z;
    }

    // Multiset of (hook length, leg length) over all cells.
    std::vector<std::pair<int, int>> hookLegMultiset() const {
        Partition conj = conjugate();
        std::vector<std::pair<int, int>> out;
        for (int i = 1; i <= length(); ++i)
            for (int j = 1; j <= part(i); ++j) {
                int hook = part(i) - j + conj.part(j) - i + 1;
                int leg = conj.part(j) - i;
                out.emplace_back(hook, leg);
            }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    std::vector<int> parts_;
    long size_ = 0;
};

// All partitions of n in reverse lexicographic order: (n) first, (1^n) last.
inline std::vector<Partition> enumeratePartitions(int n) {
    if (n < 0) throw std::domain_error("enumeratePartitions: negative n");
    std::vector<Partition> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int rem, int maxPart) -> void {
        if (rem == 0) {
            out.emplace_back(cur);
            return;
        }
        for (int p = std::min(rem, maxPart); p >= 1; --p) {
            cur.push_back(p);
            self(self, rem - p, p);
            cur.pop_back();
        }
    };
    rec(rec, n, n);
    return out;
}

// Modified Frobenius coordinates. Half-integers are stored doubled: the
// positive coordinates a_i + 1/2 as odd integers 2a_i+1, the negative ones
// -(b_i + 1/2) as -(2b_i+1); both lists are strictly decreasing.
struct FrobeniusData {
    int d = 0;
    std::vector<int> armLengths;  // a_i, strictly decreasing
    std::vector<int> legLengths;  // b_i, strictly decreasing
    std::vector<int> cPlus;       // doubled, strictly decreasing, positive
    std::vector<int> cMinus;      // doubled, strictly decreasing, negative
};

inline FrobeniusData modifiedFrobenius(const Partition& lambda) {
    FrobeniusData f;
    const Partition conj = lambda.conjugate();
    while (lambda.part(f.d + 1) > f.d) ++f.d;
    for (int i = 1; i <= f.d; ++i) {
        f.armLengths.push_back(lambda.part(i) - i);
        f.legLengths.push_back(conj.part(i) - i);
        f.cPlus.push_back(2 * (lambda.part(i) - i) + 1);
    }
    for (int i = 1; i <= f.d; ++i) f.cMinus.push_back(-(2 * (conj.part(i) - i) + 1));
    std::sort(f.cMinus.begin(), f.cMinus.end(), std::greater<int>());
    return f;
}

// Maya sequence S_lambda = (lambda_j - j + 1/2), kept as the finite deviation
// from the vacuum: the positive occupied positions and the negative holes,
// all positions stored doubled. Intermediate states of nonzero charge are
// allowed while composing moves; toPartition requires charge zero.
class MayaSequence {
public:
    MayaSequence() = default;

    static MayaSequence of(const Partition& lambda) {
        FrobeniusData f = modifiedFrobenius(lambda);
        MayaSequence m;
        m.plus_.insert(f.cPlus.begin(), f.cPlus.end());
        m.gaps_.insert(f.cMinus.begin(), f.cMinus.end());
        return m;
    }

    // sd: doubled half-integer position (odd integer).
    bool isBlack(int sd) const { return sd > 0 ? plus_.count(sd) > 0 : gaps_.count(sd) == 0; }

    void setBlack(int sd, bool black) {
        if (sd % 2 == 0) throw std::invalid_argument("MayaSequence: position must be a half-integer");
        if (sd > 0) {
            if (black) plus_.insert(sd); else plus_.erase(sd);
        } else {
            if (black) gaps_.erase(sd); else gaps_.insert(sd);
        }
    }

    int charge() const { return static_cast<int>(plus_.size()) - static_cast<int>(gaps_.size()); }

    // Descending by construction; equal to C+ and C- respectively.
    const std::set<int, std::greater<int>>& occupiedPositive() const { return plus_; }
    const std::set<int, std::greater<int>>& holesNegative() const { return gaps_; }

    // Number of occupied positions strictly between lo and hi (doubled).
    int blacksBetween(int lo, int hi) const {
        if (lo > hi) std::swap(lo, hi);
        int count = 0;
        for (int sd : plus_)
            if (sd > lo && sd < hi) ++count;
        // Negative positions are vacuum-occupied except at the holes.
        for (int sd = -1; sd > lo; sd -= 2)
            if (sd < hi && !gaps_.count(sd)) ++count;
        return count;
    }

    Partition toPartition() const {
        if (charge() != 0) throw std::domain_error("MayaSequence: nonzero charge");
        // lambda_j = (s_j - 1)/2 + j over the occupied positions in decreasing order.
        std::vector<int> blacks(plus_.begin(), plus_.end());
        int lowest = gaps_.empty() ? 1 : *gaps_.rbegin();
        for (int sd = -1; sd >= lowest; sd -= 2)
            if (!gaps_.count(sd)) blacks.push_back(sd);
        std::vector<int> parts;
        for (size_t j = 0; j < blacks.size(); ++j) {
            int lam = (blacks[j] - 1) / 2 + static_cast<int>(j) + 1;
            if (lam > 0) parts.push_back(lam);
        }
        return Partition(std::move(parts));
    }

private:
    std::set<int, std::greater<int>> plus_;  // occupied, positive, doubled
    std::set<int, std::greater<int>> gaps_;  // holes, negative, doubled

    friend bool operator==(const MayaSequence& a, const MayaSequence& b) {
        return a.plus_ == b.plus_ && a.gaps_ == b.gaps_;
    }
};

// Hamming distance d(lambda, mu) = (1/2) |C_lambda symmetric-difference C_mu|.
inline int hammingDistance(const Partition& lambda, const Partition& mu) {
    FrobeniusData fl = modifiedFrobenius(lambda), fm = modifiedFrobenius(mu);
    auto symDiff = [](const std::vector<int>& x, const std::vector<int>& y) {
        std::set<int> sx(x.begin(), x.end()), sy(y.begin(), y.end());
        int c = 0;
        for (int v : sx) if (!sy.count(v)) ++c;
        for (int v : sy) if (!sx.count(v)) ++c;
        return c;
    };
    int total = symDiff(fl.cPlus, fm.cPlus) + symDiff(fl.cMinus, fm.cMinus);
    if (total % 2 != 0) throw std::logic_error("hammingDistance: odd symmetric difference");
    return total / 2;
}

// A removable (or addable) border strip, recorded by the Maya move that
// realizes it: the occupied position `from` moves to the empty position `to`
// (both doubled). size = |from - to| / 2; height = occupied positions
// strictly between.
struct BorderStrip {
    Partition host;
    int from = 0, to = 0;  // doubled Maya positions
    int size = 0;
    int height = 0;
    Partition result;
};

namespace detail {

// Occupied positions of S_lambda with doubled value >= lowBound, descending.
inline std::vector<int> occupiedDown(const MayaSequence& m, int lowBound) {
    std::vector<int> out(m.occupiedPositive().begin(), m.occupiedPositive().end());
    for (int sd = -1; sd >= lowBound; sd -= 2)
        if (m.isBlack(sd)) out.push_back(sd);
    return out;
}

inline BorderStrip makeStrip(const Partition& host, const MayaSequence& m, int from, int to) {
    BorderStrip s;
    s.host = host;
    s.from = from;
    s.to = to;
    s.size = std::abs(from - to) / 2;
    s.height = m.blacksBetween(std::min(from, to), std::max(from, to));
    MayaSequence moved = m;
    moved.setBlack(from, false);
    moved.setBlack(to, true);
    s.result = moved.toPartition();
    return s;
}

}  // namespace detail

// All border strips of size n removable from lambda.
inline std::vector<BorderStrip> borderStrips(const Partition& lambda, int n) {
    if (n < 1) throw std::domain_error("borderStrips: size must be positive");
    MayaSequence m = MayaSequence::of(lambda);
    const int low = -(2 * static_cast<int>(lambda.size()) + 2 * n + 1);
    std::vector<BorderStrip> out;
    for (int from : detail::occupiedDown(m, low)) {
        int to = from - 2 * n;
        if (!m.isBlack(to)) out.push_back(detail::makeStrip(lambda, m, from, to));
    }
    return out;
}

// All border strips of size n addable to lambda (result contains lambda).
inline std::vector<BorderStrip> addableStrips(const Partition& lambda, int n) {
    if (n < 1) throw std::domain_error("addableStrips: size must be positive");
    MayaSequence m = MayaSequence::of(lambda);
    const int low = -(2 * static_cast<int>(lambda.size()) + 2 * n + 1);
    std::vector<BorderStrip> out;
    for (int from : detail::occupiedDown(m, low)) {
        int to = from + 2 * n;
        if (!m.isBlack(to)) out.push_back(detail::makeStrip(lambda, m, from, to));
    }
    return out;
}

// A partition mu at Hamming distance 2 from lambda with |mu| = |lambda|,
// together with the row-index witness: lambda rows a < b and mu rows a' < b'
// with lambda_a - a + lambda_b - b = mu_{a'} - a' + mu_{b'} - b'.
struct Neighbor {
    Partition mu;
    int a = 0, b = 0, ap = 0, bp = 0;
};

namespace detail {

// Row index j with lambda_j - j + 1/2 equal to the doubled position sd
// (trailing zero parts allowed); lambda_j - j is strictly decreasing in j.
inline int rowIndexOf(const Partition& lambda, int sd) {
    const int target = (sd - 1) / 2;  // lambda_j - j
    for (int j = 1;; ++j) {
        int v = lambda.part(j) - j;
        if (v == target) return j;
        if (v < target) throw std::logic_error("rowIndexOf: position not occupied");
    }
}

}  // namespace detail

inline std::vector<Neighbor> neighborhood(const Partition& lambda) {
    const int n = static_cast<int>(lambda.size());
    MayaSequence m = MayaSequence::of(lambda);
    const int window = 2 * n + 1;
    std::vector<int> blacks, whites;
    for (int sd = window; sd >= -window; sd -= 2)
        (m.isBlack(sd) ? blacks : whites).push_back(sd);

    std::vector<Neighbor> out;
    for (size_t i = 0; i < blacks.size(); ++i)
        for (size_t j = i + 1; j < blacks.size(); ++j)
            for (size_t k = 0; k < whites.size(); ++k)
                for (size_t l = k + 1; l < whites.size(); ++l) {
                    if (blacks[i] + blacks[j] != whites[k] + whites[l]) continue;
                    MayaSequence moved = m;
                    moved.setBlack(blacks[i], false);
                    moved.setBlack(blacks[j], false);
                    moved.setBlack(whites[k], true);
                    moved.setBlack(whites[l], true);
                    Neighbor nb;
                    nb.mu = moved.toPartition();
                    nb.a = detail::rowIndexOf(lambda, blacks[i]);
                    nb.b = detail::rowIndexOf(lambda, blacks[j]);
                    nb.ap = detail::rowIndexOf(nb.mu, whites[k]);
                    nb.bp = detail::rowIndexOf(nb.mu, whites[l]);
                    out.push_back(std::move(nb));
                }
    std::sort(out.begin(), out.end(), [](const Neighbor& x, const Neighbor& y) { return x.mu < y.mu; });
    return out;
}

// The two border-strip pairs of Lemma-5.2 type connecting lambda and mu in
// its neighborhood: gamma1 inside gamma2 (strips of lambda), gamma1' inside
// gamma2' (strips of mu), |gamma_i| = |gamma_i'|, lambda minus gamma_i equals
// mu minus gamma_i'. w = +1 if lambda_i > mu_i at the smallest differing row.
struct StripPairData {
    BorderStrip gamma1, gamma2;    // removed from lambda, sizes increasing
    BorderStrip gamma1p, gamma2p;  // removed from mu, matching sizes
    int w = 0;
};

inline StripPairData stripPairs(const Partition& lambda, const Partition& mu) {
    if (lambda.size() != mu.size() || hammingDistance(lambda, mu) != 2)
        throw std::domain_error("stripPairs: mu is not in the neighborhood of lambda");
    MayaSequence ml = MayaSequence::of(lambda), mm = MayaSequence::of(mu);

    const int window = 2 * static_cast<int>(lambda.size()) + 1;
    std::vector<int> x, y;  // S_lambda \ S_mu and S_mu \ S_lambda, descending
    for (int sd = window; sd >= -window; sd -= 2) {
        if (ml.isBlack(sd) && !mm.isBlack(sd)) x.push_back(sd);
        if (mm.isBlack(sd) && !ml.isBlack(sd)) y.push_back(sd);
    }
    if (x.size() != 2 || y.size() != 2) throw std::logic_error("stripPairs: unexpected Maya difference");

    // A common inner partition removes x_i from lambda landing on the unused
    // y, and the matching y_j from mu landing on the unused x.
    std::vector<std::pair<BorderStrip, BorderStrip>> pairs;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const int lamTarget = y[1 - j], muTarget = x[1 - i];
            if (lamTarget >= x[i] || muTarget >= y[j]) continue;
            BorderStrip g = detail::makeStrip(lambda, ml, x[i], lamTarget);
            BorderStrip gp = detail::makeStrip(mu, mm, y[j], muTarget);
            if (!(g.result == gp.result)) throw std::logic_error("stripPairs: inner partitions differ");
            pairs.emplace_back(std::move(g), std::move(gp));
        }
    if (pairs.size() != 2) throw std::logic_error("stripPairs: expected exactly two strip pairs");
    if (pairs[0].first.size > pairs[1].first.size) std::swap(pairs[0], pairs[1]);

    StripPairData out;
    out.gamma1 = std::move(pairs[0].first);
    out.gamma1p = std::move(pairs[0].second);
    out.gamma2 = std::move(pairs[1].first);
    out.gamma2p = std::move(pairs[1].second);
    out.w = 0;
    for (int i = 1; out.w == 0; ++i) {
        if (lambda.part(i) != mu.part(i)) out.w = lambda.part(i) > mu.part(i) ? 1 : -1;
    }
    return out;
}

}  // namespace qkdv
