#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qkdv/fermionic_ham.hpp"
#include "qkdv/recursion.hpp"

using namespace qkdv;

namespace {

const std::vector<GLevel>& levels() {
    static std::vector<GLevel> ls = computeHierarchy(4, [](int k) { return k + 1; });
    return ls;
}

const GLevel& level(int k) { return levels()[static_cast<size_t>(k + 1)]; }

MultiPoly c1(const Rational& v) { return MultiPoly::constant(1, v); }

ExactMatrix extract(int k, int j, int n, const Rational& c) {
    return extractHamiltonian(level(k), j, n, c);
}

bool isZeroMatrix(const ExactMatrix& m) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (!m.at(i, j).isZero()) return false;
    return true;
}

ExactMatrix matMul(const ExactMatrix& x, const ExactMatrix& y) {
    ExactMatrix r(x.rows(), y.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < y.cols(); ++j) {
            Rational s;
            for (int l = 0; l < x.cols(); ++l) s += x.at(i, l) * y.at(l, j);
            r.at(i, j) = s;
        }
    return r;
}

}  // namespace

TEST_CASE("first levels of the hierarchy") {
    const GLevel& gm1 = level(-1);
    REQUIRE(gm1.shapes().size() == 1);
    CHECK(gm1.poly(1, 0, 0) == c1(Rational(1)));

    const GLevel& g0 = level(0);
    REQUIRE(g0.shapes().size() == 3);
    CHECK(g0.poly(2, 0, 0) == MultiPoly::constant(2, Rational(1, 2)));
    CHECK(g0.poly(1, 0, 1) == MultiPoly::variable(1, 0, 2));
    CHECK(g0.poly(0, 1, 0) == MultiPoly::constant(0, Rational(-1, 24)));

    const GLevel& g1 = level(1);
    REQUIRE(g1.shapes().size() == 5);
    CHECK(g1.poly(3, 0, 0) == MultiPoly::constant(3, Rational(1, 6)));
    CHECK(g1.poly(1, 1, 0) ==
          (MultiPoly::variable(1, 0, 2) - c1(Rational(1))) * Rational(1, 24));
    CHECK(g1.poly(2, 0, 1) ==
          (MultiPoly::variable(2, 0, 2) + MultiPoly::variable(2, 1, 2)) * Rational(1, 2));
    CHECK(g1.poly(1, 0, 2) == MultiPoly::variable(1, 0, 4) * Rational(1, 2));
    CHECK(g1.poly(0, 1, 1) == MultiPoly::constant(0, Rational(1, 120)));
}

TEST_CASE("differential polynomial view") {
    auto d0 = toDifferentialPolynomial(level(0));
    REQUIRE(d0.size() == 3);
    CHECK(d0.at(DiffMonomial{{0, 0}, 0, 0}) == Rational(1, 2));
    CHECK(d0.at(DiffMonomial{{2}, 0, 1}) == Rational(1));
    CHECK(d0.at(DiffMonomial{{}, 1, 0}) == Rational(-1, 24));

    auto d1 = toDifferentialPolynomial(level(1));
    REQUIRE(d1.size() == 6);
    CHECK(d1.at(DiffMonomial{{0, 0, 0}, 0, 0}) == Rational(1, 6));
    CHECK(d1.at(DiffMonomial{{2, 0}, 0, 1}) == Rational(1));
    CHECK(d1.at(DiffMonomial{{4}, 0, 2}) == Rational(1, 2));
    CHECK(d1.at(DiffMonomial{{2}, 1, 0}) == Rational(1, 24));
    CHECK(d1.at(DiffMonomial{{0}, 1, 0}) == Rational(-1, 24));
    CHECK(d1.at(DiffMonomial{{}, 1, 1}) == Rational(1, 120));
}

TEST_CASE("coefficients are symmetric and even") {
    std::mt19937 rng(20240821);
    std::uniform_int_distribution<long> coord(-7, 7);
    for (int k = -1; k <= 4; ++k)
        for (const auto& [key, p] : level(k).shapes()) {
            if (key.n == 0) continue;
            for (int t = 0; t < 8; ++t) {
                std::vector<Rational> x, nx, px;
                for (int i = 0; i < key.n; ++i) x.emplace_back(coord(rng));
                for (const auto& v : x) nx.push_back(-v);
                px = x;
                std::shuffle(px.begin(), px.end(), rng);
                CHECK(p.eval(x) == p.eval(nx));
                CHECK(p.eval(x) == p.eval(px));
            }
        }
}

TEST_CASE("string equation links consecutive levels") {
    std::mt19937 rng(777);
    std::uniform_int_distribution<long> coord(-6, 6);
    for (int k = -1; k <= 3; ++k)
        for (const auto& [key, p] : level(k).shapes()) {
            if (key.n == 0) continue;  // constants are produced by this very relation
            MultiPoly up = level(k + 1).poly(key.n + 1, key.h, key.j);
            for (int t = 0; t < 10; ++t) {
                std::vector<Rational> x;
                for (int i = 0; i < key.n; ++i) x.emplace_back(coord(rng));
                std::vector<Rational> x0 = x;
                x0.emplace_back(0);
                CHECK(Rational(key.n + 1) * up.eval(x0) == p.eval(x));
            }
        }
}

TEST_CASE("the two realizations of the dispersionless Hamiltonians agree") {
    const Rational cs[] = {Rational(0), Rational(1), Rational(-1, 2)};
    for (int n = 0; n <= 5; ++n) {
        for (const Rational& c : cs) {
            // Level -1: the zero mode alone.
            ExactMatrix m = extract(-1, 0, n, c);
            for (int i = 0; i < m.rows(); ++i)
                for (int j = 0; j < m.cols(); ++j)
                    CHECK(m.at(i, j) == (i == j ? c : Rational(0)));
            for (int k = 0; k <= 4; ++k) CHECK(extract(k, 0, n, c) == gHat0Matrix(k, n, c));
        }
    }
}

TEST_CASE("the two realizations of the first dispersive correction agree") {
    for (int k = 0; k <= 4; ++k)
        for (int n = 0; n <= 5; ++n) CHECK(extract(k, 1, n, Rational(0)) == gHat1Matrix(k, n));
}

TEST_CASE("the residue has epsilon degree k") {
    for (int k = 0; k <= 4; ++k)
        for (int n = 0; n <= 4; ++n) CHECK(isZeroMatrix(extract(k, k + 1, n, Rational(0))));
}

TEST_CASE("zero modes reduce to a shift of the level index") {
    const Rational cs[] = {Rational(1), Rational(-1, 2)};
    for (const Rational& c : cs)
        for (int k = 0; k <= 3; ++k)
            for (int j = 0; j <= 1; ++j)
                for (int n = 0; n <= 4; ++n) {
                    ExactMatrix lhs = extract(k, j, n, c);
                    const int dim = lhs.rows();
                    ExactMatrix rhs(dim, dim);
                    for (int l = 0; l <= k + 2; ++l) {
                        Rational s = c.pow(l) / factorial(l);
                        if (l <= k + 1) {
                            ExactMatrix base = (l == k + 1)
                                                   ? ExactMatrix(dim, dim)  // the zero mode at c=0
                                                   : extract(k - l, j, n, Rational(0));
                            for (int i = 0; i < dim; ++i)
                                for (int jj = 0; jj < dim; ++jj)
                                    rhs.at(i, jj) += base.at(i, jj) * s;
                        } else if (j == 0) {
                            for (int i = 0; i < dim; ++i) rhs.at(i, i) += s;  // the unit
                        }
                    }
                    CHECK(lhs == rhs);
                }
}

TEST_CASE("commutativity of the extracted Hamiltonians order by order") {
    for (int n = 0; n <= 5; ++n)
        for (int k = 1; k <= 3; ++k)
            for (int l = 1; l <= 3; ++l)
                for (int m = 0; m <= 2; ++m) {
                    const int dim = extract(k, 0, n, Rational(0)).rows();
                    ExactMatrix total(dim, dim);
                    for (int j1 = 0; j1 <= m; ++j1) {
                        ExactMatrix a = extract(k, j1, n, Rational(0));
                        ExactMatrix b = extract(l, m - j1, n, Rational(0));
                        ExactMatrix ab = matMul(a, b);
                        ExactMatrix ba = matMul(b, a);
                        for (int i = 0; i < dim; ++i)
                            for (int jj = 0; jj < dim; ++jj)
                                total.at(i, jj) += ab.at(i, jj) - ba.at(i, jj);
                    }
                    CHECK(isZeroMatrix(total));
                }
}
