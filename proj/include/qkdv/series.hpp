#pragma once

#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "multipoly.hpp"
#include "rational.hpp"

namespace qkdv {

// Truncated univariate power series in an anonymous expansion variable, with
// coefficients in a ring C (Rational, or MultiPoly for parameter-dependent
// series). The coefficient ring may need construction data (e.g. a variable
// universe), so a zero prototype is carried along.
template <typename C>
class PowerSeries {
public:
    PowerSeries(int order, C zero)
        : order_(order), zero_(std::move(zero)), coeffs_(order + 1, zero_) {
        if (order < 0) throw std::invalid_argument("PowerSeries: negative order");
    }

    int order() const { return order_; }
    const C& zero() const { return zero_; }

    const C& at(int i) const {
        if (i < 0 || i > order_) throw std::out_of_range("PowerSeries::at");
        return coeffs_[i];
    }
    void set(int i, C v) {
        if (i < 0 || i > order_) throw std::out_of_range("PowerSeries::set");
        coeffs_[i] = std::move(v);
    }

    PowerSeries truncate(int order) const {
        if (order > order_) throw std::invalid_argument("PowerSeries::truncate: extending");
        PowerSeries r(order, zero_);
        for (int i = 0; i <= order; ++i) r.coeffs_[i] = coeffs_[i];
        return r;
    }

    friend PowerSeries operator+(const PowerSeries& a, const PowerSeries& b) {
        PowerSeries r(std::min(a.order_, b.order_), a.zero_);
        for (int i = 0; i <= r.order_; ++i) r.coeffs_[i] = a.coeffs_[i] + b.coeffs_[i];
        return r;
    }

    friend PowerSeries operator-(const PowerSeries& a, const PowerSeries& b) {
        PowerSeries r(std::min(a.order_, b.order_), a.zero_);
        for (int i = 0; i <= r.order_; ++i) r.coeffs_[i] = a.coeffs_[i] - b.coeffs_[i];
        return r;
    }

    friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
        PowerSeries r(std::min(a.order_, b.order_), a.zero_);
        for (int i = 0; i <= r.order_; ++i)
            for (int j = 0; i + j <= r.order_ && j <= b.order_; ++j) {
                if (a.coeffs_[i].isZero() || b.coeffs_[j].isZero()) continue;
                r.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
            }
        return r;
    }

    PowerSeries mulCoeff(const C& s) const {
        PowerSeries r(order_, zero_);
        for (int i = 0; i <= order_; ++i) r.coeffs_[i] = coeffs_[i] * s;
        return r;
    }

    PowerSeries mulRational(const Rational& s) const {
        PowerSeries r(order_, zero_);
        for (int i = 0; i <= order_; ++i) r.coeffs_[i] = coeffs_[i] * s;
        return r;
    }

    // d/dy; the truncation order drops by one.
    PowerSeries derivative() const {
        if (order_ == 0) return PowerSeries(0, zero_);
        PowerSeries r(order_ - 1, zero_);
        for (int i = 1; i <= order_; ++i) r.coeffs_[i - 1] = coeffs_[i] * Rational(i);
        return r;
    }

    // Division by y^m; the m lowest coefficients must vanish.
    PowerSeries shiftDown(int m) const {
        if (m < 0 || m > order_) throw std::invalid_argument("PowerSeries::shiftDown");
        for (int i = 0; i < m; ++i)
            if (!coeffs_[i].isZero())
                throw std::domain_error("PowerSeries::shiftDown: nonzero low coefficient");
        PowerSeries r(order_ - m, zero_);
        for (int i = m; i <= order_; ++i) r.coeffs_[i - m] = coeffs_[i];
        return r;
    }

    PowerSeries mulYPow(int m) const {
        if (m < 0) throw std::invalid_argument("PowerSeries::mulYPow");
        PowerSeries r(order_ + m, zero_);
        for (int i = 0; i <= order_; ++i) r.coeffs_[i + m] = coeffs_[i];
        return r;
    }

    // Multiplicative inverse; requires constant coefficient equal to `one`.
    PowerSeries recip(const C& one) const {
        if (!(coeffs_[0] == one))
            throw std::domain_error("PowerSeries::recip: constant term is not 1");
        PowerSeries r(order_, zero_);
        r.coeffs_[0] = one;
        for (int n = 1; n <= order_; ++n) {
            C s = zero_;
            for (int k = 1; k <= n; ++k) {
                if (coeffs_[k].isZero() || r.coeffs_[n - k].isZero()) continue;
                s += coeffs_[k] * r.coeffs_[n - k];
            }
            r.coeffs_[n] = -s;
        }
        return r;
    }

    // exp of a series with zero constant term, via E' = f'·E.
    PowerSeries exp(const C& one) const {
        if (!coeffs_[0].isZero())
            throw std::domain_error("PowerSeries::exp: nonzero constant term");
        PowerSeries r(order_, zero_);
        r.coeffs_[0] = one;
        for (int n = 1; n <= order_; ++n) {
            C s = zero_;
            for (int k = 1; k <= n; ++k) {
                if (coeffs_[k].isZero() || r.coeffs_[n - k].isZero()) continue;
                s += (coeffs_[k] * Rational(k)) * r.coeffs_[n - k];
            }
            r.coeffs_[n] = s * Rational(1, n);
        }
        return r;
    }

private:
    int order_;
    C zero_;
    std::vector<C> coeffs_;
};

// Bernoulli number B_k (B_1 = -1/2 convention), via the defining recurrence
// sum_{j<=m} C(m+1,j) B_j = 0. Memoized; safe for concurrent callers.
inline Rational bernoulli(int k) {
    if (k < 0) throw std::domain_error("bernoulli: negative index");
    static std::mutex mu;
    static std::vector<Rational> table{Rational(1)};
    std::lock_guard<std::mutex> lock(mu);
    while (static_cast<int>(table.size()) <= k) {
        const int m = static_cast<int>(table.size());
        Rational s;
        for (int j = 0; j < m; ++j) s += binomial(m + 1, j) * table[j];
        table.push_back(-s / binomial(m + 1, m));
    }
    return table[k];
}

// sinh(y/2)/(y/2) truncated: an even unit series.
inline PowerSeries<Rational> sinhcHalf(int order) {
    PowerSeries<Rational> s(order, Rational(0));
    for (int m = 0; 2 * m <= order; ++m)
        s.set(2 * m, Rational(1) / (intPow(4, m) * factorial(2 * m + 1)));
    return s;
}

// beta_k: the y^k coefficient of (y/2)/sinh(y/2). Memoized.
inline Rational beta(int k) {
    if (k < 0) throw std::domain_error("beta: negative index");
    static std::mutex mu;
    static std::vector<Rational> table;
    std::lock_guard<std::mutex> lock(mu);
    if (static_cast<int>(table.size()) <= k) {
        const int order = std::max(k, 2 * static_cast<int>(table.size()) + 8);
        PowerSeries<Rational> b = sinhcHalf(order).recip(Rational(1));
        table.resize(order + 1);
        for (int i = 0; i <= order; ++i) table[i] = b.at(i);
    }
    return table[k];
}

// Closed-form series description: a finite composition of polynomial factors
// (MultiPoly coefficients in the expansion variable), exp, reciprocal, sums
// and products, plus the regularized primitive (cy)/sinh(cy). Unsupported or
// ill-formed compositions (exp of a non-vanishing constant term, reciprocal
// of a non-unit) are rejected at construction.
class SeriesExpr {
public:
    static SeriesExpr poly(int nvars, std::vector<MultiPoly> coeffs) {
        for (const auto& c : coeffs)
            if (c.nvars() != nvars)
                throw std::invalid_argument("SeriesExpr::poly: mixed variable universes");
        SeriesExpr e(Kind::Poly, nvars);
        e.polyCoeffs_ = std::move(coeffs);
        return e;
    }

    static SeriesExpr sinhcRecip(int nvars, const Rational& c) {
        SeriesExpr e(Kind::SinhcRecip, nvars);
        e.scale_ = c;
        return e;
    }

    static SeriesExpr exp(SeriesExpr child) {
        if (!child.expand(0).at(0).isZero())
            throw std::invalid_argument("SeriesExpr::exp: nonzero constant term");
        SeriesExpr e(Kind::Exp, child.nvars_);
        e.children_.push_back(std::make_shared<SeriesExpr>(std::move(child)));
        return e;
    }

    static SeriesExpr recip(SeriesExpr child) {
        MultiPoly c0 = child.expand(0).at(0);
        if (!(c0 == MultiPoly::constant(child.nvars_, Rational(1))))
            throw std::invalid_argument("SeriesExpr::recip: constant term is not 1");
        SeriesExpr e(Kind::Recip, child.nvars_);
        e.children_.push_back(std::make_shared<SeriesExpr>(std::move(child)));
        return e;
    }

    static SeriesExpr mul(SeriesExpr a, SeriesExpr b) { return binary(Kind::Mul, std::move(a), std::move(b)); }
    static SeriesExpr add(SeriesExpr a, SeriesExpr b) { return binary(Kind::Add, std::move(a), std::move(b)); }

    int nvars() const { return nvars_; }

    PowerSeries<MultiPoly> expand(int order) const {
        const MultiPoly zero(nvars_);
        switch (kind_) {
            case Kind::Poly: {
                PowerSeries<MultiPoly> s(order, zero);
                for (int i = 0; i <= order && i < static_cast<int>(polyCoeffs_.size()); ++i)
                    s.set(i, polyCoeffs_[i]);
                return s;
            }
            case Kind::SinhcRecip: {
                // (cy)/sinh(cy) = 1 / sum_m (cy)^{2m}/(2m+1)!
                PowerSeries<MultiPoly> s(order, zero);
                for (int m = 0; 2 * m <= order; ++m)
                    s.set(2 * m, MultiPoly::constant(nvars_, scale_.pow(2 * m) / factorial(2 * m + 1)));
                return s.recip(MultiPoly::constant(nvars_, Rational(1)));
            }
            case Kind::Exp:
                return children_[0]->expand(order).exp(MultiPoly::constant(nvars_, Rational(1)));
            case Kind::Recip:
                return children_[0]->expand(order).recip(MultiPoly::constant(nvars_, Rational(1)));
            case Kind::Mul:
                return children_[0]->expand(order) * children_[1]->expand(order);
            case Kind::Add:
                return children_[0]->expand(order) + children_[1]->expand(order);
        }
        throw std::logic_error("SeriesExpr: unreachable");
    }

private:
    enum class Kind { Poly, SinhcRecip, Exp, Recip, Mul, Add };

    SeriesExpr(Kind k, int nvars) : kind_(k), nvars_(nvars) {}

    static SeriesExpr binary(Kind k, SeriesExpr a, SeriesExpr b) {
        if (a.nvars_ != b.nvars_)
            throw std::invalid_argument("SeriesExpr: mixed variable universes");
        SeriesExpr e(k, a.nvars_);
        e.children_.push_back(std::make_shared<SeriesExpr>(std::move(a)));
        e.children_.push_back(std::make_shared<SeriesExpr>(std::move(b)));
        return e;
    }

    Kind kind_;
    int nvars_;
    Rational scale_;
    std::vector<MultiPoly> polyCoeffs_;
    std::vector<std::shared_ptr<SeriesExpr>> children_;
};

// The exact coefficient of the k-th power of the expansion variable.
inline MultiPoly polySeriesCoeff(const SeriesExpr& spec, int k) {
    if (k < 0) throw std::domain_error("polySeriesCoeff: negative index");
    return spec.expand(k).at(k);
}

}  // namespace qkdv
