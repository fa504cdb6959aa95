#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"

namespace qkdv {

// Sparse multivariate polynomial over the rationals with a declared variable
// universe. Monomials are exponent vectors of fixed length; the map ordering
// (lexicographic on exponent vectors) provides a canonical form, so equality
// is structural.
class MultiPoly {
public:
    explicit MultiPoly(int nvars) : nvars_(nvars) {}

    static MultiPoly constant(int nvars, const Rational& c) {
        MultiPoly p(nvars);
        if (!c.isZero()) p.terms_[std::vector<int>(nvars, 0)] = c;
        return p;
    }

    static MultiPoly variable(int nvars, int i, int exp = 1) {
        if (i < 0 || i >= nvars) throw std::out_of_range("MultiPoly::variable");
        MultiPoly p(nvars);
        std::vector<int> e(nvars, 0);
        e[i] = exp;
        p.terms_[e] = Rational(1);
        return p;
    }

    int nvars() const { return nvars_; }
    bool isZero() const { return terms_.empty(); }
    size_t termCount() const { return terms_.size(); }
    const std::map<std::vector<int>, Rational>& terms() const { return terms_; }

    bool isConstant() const {
        return terms_.empty() ||
               (terms_.size() == 1 && terms_.begin()->first == std::vector<int>(nvars_, 0));
    }

    Rational constantTerm() const {
        auto it = terms_.find(std::vector<int>(nvars_, 0));
        return it == terms_.end() ? Rational(0) : it->second;
    }

    int degree() const {
        int d = -1;
        for (const auto& [e, c] : terms_) {
            int s = 0;
            for (int x : e) s += x;
            d = std::max(d, s);
        }
        return d;
    }

    void addTerm(const std::vector<int>& e, const Rational& c) {
        if (c.isZero()) return;
        auto [it, fresh] = terms_.emplace(e, c);
        if (!fresh) {
            it->second += c;
            if (it->second.isZero()) terms_.erase(it);
        }
    }

    MultiPoly operator-() const {
        MultiPoly r(nvars_);
        for (const auto& [e, c] : terms_) r.terms_[e] = -c;
        return r;
    }

    MultiPoly& operator+=(const MultiPoly& o) {
        checkUniverse(o);
        for (const auto& [e, c] : o.terms_) addTerm(e, c);
        return *this;
    }
    MultiPoly& operator-=(const MultiPoly& o) {
        checkUniverse(o);
        for (const auto& [e, c] : o.terms_) addTerm(e, -c);
        return *this;
    }

    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }

    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        a.checkUniverse(b);
        MultiPoly r(a.nvars_);
        std::vector<int> e(a.nvars_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                for (int i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
                r.addTerm(e, ca * cb);
            }
        return r;
    }

    friend MultiPoly operator*(const MultiPoly& a, const Rational& s) {
        MultiPoly r(a.nvars_);
        if (s.isZero()) return r;
        for (const auto& [e, c] : a.terms_) r.terms_[e] = c * s;
        return r;
    }

    MultiPoly pow(int e) const {
        if (e < 0) throw std::domain_error("MultiPoly::pow: negative exponent");
        MultiPoly r = constant(nvars_, Rational(1));
        MultiPoly base = *this;
        while (e > 0) {
            if (e & 1) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

    friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    Rational eval(const std::vector<Rational>& x) const {
        if (static_cast<int>(x.size()) != nvars_)
            throw std::invalid_argument("MultiPoly::eval: arity mismatch");
        Rational s;
        for (const auto& [e, c] : terms_) {
            Rational t = c;
            for (int i = 0; i < nvars_; ++i)
                if (e[i] != 0) t *= x[i].pow(e[i]);
            s += t;
        }
        return s;
    }

    // Exact division: throws unless divisor divides *this exactly.
    MultiPoly divideExact(const MultiPoly& d) const {
        checkUniverse(d);
        if (d.isZero()) throw std::domain_error("MultiPoly::divideExact: zero divisor");
        MultiPoly q(nvars_), r = *this;
        const auto& dl = *d.terms_.rbegin();  // lex-leading divisor term
        while (!r.isZero()) {
            const auto& rl = *r.terms_.rbegin();
            std::vector<int> e(nvars_);
            bool divisible = true;
            for (int i = 0; i < nvars_; ++i) {
                e[i] = rl.first[i] - dl.first[i];
                if (e[i] < 0) { divisible = false; break; }
            }
            if (!divisible)
                throw std::domain_error("MultiPoly::divideExact: inexact division");
            Rational c = rl.second / dl.second;
            MultiPoly t(nvars_);
            t.terms_[e] = c;
            q += t;
            r -= t * d;
        }
        return q;
    }

    std::string str(const std::vector<std::string>& names) const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            if (!first) os << " + ";
            first = false;
            os << it->second.str();
            for (int i = 0; i < nvars_; ++i) {
                if (it->first[i] == 0) continue;
                os << "*" << names[i];
                if (it->first[i] > 1) os << "^" << it->first[i];
            }
        }
        return os.str();
    }

private:
    void checkUniverse(const MultiPoly& o) const {
        if (nvars_ != o.nvars_)
            throw std::invalid_argument("MultiPoly: mixed variable universes");
    }

    int nvars_;
    std::map<std::vector<int>, Rational> terms_;
};

}  // namespace qkdv
