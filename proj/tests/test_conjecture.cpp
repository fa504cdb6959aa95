#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qkdv/conjecture.hpp"
#include "qkdv/recursion.hpp"
#include "qkdv/spectral.hpp"

using namespace qkdv;

namespace {

const std::vector<GLevel>& levels() {
    static std::vector<GLevel> ls =
        computeHierarchy(5, [](int k) { return std::min(k + 1, 3); });
    return ls;
}

std::vector<std::pair<Partition, Rational>> tabulate(const QExpr& f, int N) {
    std::vector<std::pair<Partition, Rational>> values;
    for (int n = 0; n <= N; ++n)
        for (const auto& lam : enumeratePartitions(n))
            values.emplace_back(lam, f.eval(lam, Rational(0)));
    return values;
}

// Eigenvalues of order m for one level k, over all |lambda| <= N.
std::vector<std::pair<Partition, Rational>> eigenvalueTable(int k, int m, int N,
                                                            std::vector<int> kSet) {
    std::vector<std::pair<Partition, Rational>> values;
    for (int n = 0; n <= N; ++n) {
        EigenData data = perturb(levels(), n, m, kSet);
        for (const auto& e : data.entries) values.emplace_back(e.lambda, e.E.at(k)[m]);
    }
    return values;
}

// The conjectured second-order eigenvalue in closed form.
QExpr secondCorrectionConjecture(int k) {
    QExpr e;
    auto add = [&](std::vector<int> idx, const Rational& coeff) {
        std::vector<int> clean;
        for (int i : idx) {
            if (i == 1) return;  // Q_1 = 0 kills the term
            if (i >= 2) clean.push_back(i);
        }
        e.addTerm(0, clean, coeff);
    };
    const Rational s = Rational(1, 576);
    add({3, k + 1}, s * 2);
    add({2, 2, k}, s * 2);
    add({2, k + 2}, s * Rational(2 * (k * k + 2 * k - 1)));
    add({k + 4}, s * Rational(k * (k + 4) * (3 * k * k + 16 * k + 17), 6));
    return e;
}

}  // namespace

TEST_CASE("fits of shifted symmetric functions round trip") {
    // A basis monomial is its own fit.
    QExpr q23 = QExpr::monomial(0, {3, 2});
    ShiftedFit fit = fitShiftedSymmetric(tabulate(q23, 6), 5);
    REQUIRE_FALSE(fit.falsified);
    CHECK(fit.expr == q23);

    // Random homogeneous expressions of weight up to 8.
    std::mt19937 rng(20240822);
    std::uniform_int_distribution<int> num(-6, 6), den(1, 4), wdist(1, 8);
    for (int trial = 0; trial < 100; ++trial) {
        const int w = wdist(rng);
        QExpr f;
        for (const auto& mono : shiftedMonomialBasis(w)) {
            Rational c(num(rng), den(rng));
            if (!c.isZero()) f += mono * c;
        }
        ShiftedFit r = fitShiftedSymmetric(tabulate(f, 9), w);
        REQUIRE_FALSE(r.falsified);
        CHECK(r.expr == f);
    }
}

TEST_CASE("fit failures are loud") {
    // Q_2 is not homogeneous of weight 3: the overdetermined system breaks.
    ShiftedFit bad = fitShiftedSymmetric(tabulate(QExpr::monomial(0, {2}), 6), 3);
    CHECK(bad.falsified);
    CHECK(bad.witness.size() <= 6);

    // Too little data cannot decide a weight-6 fit.
    CHECK_THROWS_WITH(fitShiftedSymmetric(tabulate(QExpr::monomial(0, {2}), 1), 6),
                      Catch::Matchers::ContainsSubstring("increase N"));
}

TEST_CASE("computed first order eigenvalues fit their closed forms") {
    for (int k = 1; k <= 3; ++k) {
        auto values = eigenvalueTable(k, 1, 8, {1, 2, 3});
        ShiftedFit fit = fitShiftedSymmetric(values, k + 3);
        REQUIRE_FALSE(fit.falsified);
        CHECK(fit.expr == firstCorrectionClosedForm(k));
    }
}

TEST_CASE("computed second order eigenvalues match the conjectured closed form") {
    for (int k = 0; k <= 3; ++k) {
        auto values = eigenvalueTable(k, 2, 8, {0, 1, 2, 3});
        ShiftedFit fit = fitShiftedSymmetric(values, k + 4);
        REQUIRE_FALSE(fit.falsified);
        CHECK(fit.expr == secondCorrectionConjecture(k));
    }
}

TEST_CASE("third order eigenvalues match every reference structure row") {
    // At k = 3 and k = 4 none of the seven order-3 designated monomials is
    // shared, so each structure value can be read off a single coefficient.
    std::map<int, std::vector<std::pair<Partition, Rational>>> values;
    for (int n = 0; n <= 9; ++n) {
        EigenData data = perturb(levels(), n, 3, {1, 2, 3, 4});
        for (const auto& e : data.entries)
            for (int k : {3, 4}) values[k].emplace_back(e.lambda, e.E.at(k)[3]);
    }
    std::vector<std::pair<int, Partition>> pairs = {
        {3, Partition(std::vector<int>{})}, {2, Partition({1})},    {1, Partition({2})},
        {1, Partition({1, 1})},             {0, Partition({3})},    {0, Partition({2, 1})},
        {0, Partition({1, 1, 1})}};
    for (int k : {3, 4}) {
        ShiftedFit fit = fitShiftedSymmetric(values[k], k + 5);
        REQUIRE_FALSE(fit.falsified);
        QExpr rebuilt;
        for (const auto& [D, nu] : pairs) {
            bool alive = false;
            auto idx = conjdetail::monomialIndices(D, nu, k, alive);
            REQUIRE(alive);
            auto it = fit.expr.terms().find(QExpr::Key{0, idx});
            REQUIRE(it != fit.expr.terms().end());
            Rational ref;
            REQUIRE(referenceStructureValue(D, nu, k, ref));
            CHECK(it->second == ref);
            rebuilt.addTerm(0, idx, ref);
        }
        // The seven rows account for the entire eigenvalue.
        CHECK(rebuilt == fit.expr);
    }
}

TEST_CASE("structure polynomials at first order") {
    std::map<int, QExpr> fits;
    for (int k = 0; k <= 10; ++k) fits.emplace(k, firstCorrectionClosedForm(k));
    StructureFit sf = fitStructurePolynomials(fits, 1);
    REQUIRE(sf.records.size() == 2);
    CHECK(sf.reconstructed);
    for (const auto& rec : sf.records) {
        REQUIRE_FALSE(rec.falsified);
        CHECK(static_cast<int>(rec.poly.size()) <= 2 * rec.D + 1);
        if (rec.nu.empty()) {
            REQUIRE(rec.D == 1);
            for (int k = 0; k <= 10; ++k) CHECK(rec.eval(k) == Rational(k * (k + 3), 24));
        } else {
            REQUIRE(rec.nu == Partition({1}));
            REQUIRE(rec.D == 0);
            CHECK(rec.eval(0) == Rational(1, 12));
            CHECK(rec.poly.size() == 1);
        }
    }
}

TEST_CASE("structure polynomials at second order round trip") {
    auto f2e = [](int k) { return Rational(k * (k + 4) * (3 * k * k + 16 * k + 17), 3456); };
    auto f11 = [](int k) { return Rational(k * k + 2 * k - 1, 288); };
    auto f02 = [](int) { return Rational(1, 288); };
    auto f011 = [](int) { return Rational(1, 288); };

    std::map<int, QExpr> fits;
    for (int k = 0; k <= 10; ++k) fits.emplace(k, secondCorrectionConjecture(k));
    StructureFit sf = fitStructurePolynomials(fits, 2);
    REQUIRE(sf.records.size() == 4);
    CHECK(sf.reconstructed);
    for (const auto& rec : sf.records) {
        REQUIRE_FALSE(rec.falsified);
        CHECK(static_cast<int>(rec.poly.size()) <= 2 * rec.D + 1);
        for (int k = 0; k <= 10; ++k) {
            Rational expect;
            if (rec.nu.empty()) expect = f2e(k);
            else if (rec.nu == Partition({1})) expect = f11(k);
            else if (rec.nu == Partition({2})) expect = f02(k);
            else expect = f011(k);
            CHECK(rec.eval(k) == expect);
        }
    }
}

TEST_CASE("q bracket basics") {
    PowerSeries<Rational> one = qBracket(QExpr::constant(Rational(1)), 12);
    for (int n = 0; n <= 12; ++n) CHECK(one.at(n) == (n == 0 ? Rational(1) : Rational(0)));

    PowerSeries<Rational> q2 = qBracket(QExpr::monomial(0, {2}), 12);
    CHECK(q2.at(0) == Rational(-1, 24));
    CHECK(q2.at(1) == Rational(1));
    CHECK(q2.at(2) == Rational(3));
    CHECK(q2.at(3) == Rational(4));
    CHECK(q2.at(4) == Rational(7));

    // The two evaluation routes agree.
    PowerSeries<Rational> viaFn =
        qBracket([](const Partition& lam) { return evalQ(2, lam); }, 12);
    for (int n = 0; n <= 12; ++n) CHECK(viaFn.at(n) == q2.at(n));
}

TEST_CASE("quasimodularity of brackets") {
    const int N = 40;

    // Everything in one partition sweep: the basis monomials of weight <= 8,
    // then three eigenvalue series.
    std::vector<QExpr> exprs;
    std::vector<int> weights;
    size_t q2Index = 0;
    for (int w = 0; w <= 8; ++w)
        for (const auto& mono : shiftedMonomialBasis(w)) {
            if (w == 2) q2Index = exprs.size();
            exprs.push_back(mono);
            weights.push_back(w);
        }
    exprs.push_back(firstCorrectionClosedForm(1));
    weights.push_back(4);
    exprs.push_back(firstCorrectionClosedForm(3));
    weights.push_back(6);
    exprs.push_back(secondCorrectionConjecture(2));
    weights.push_back(6);

    auto series = qBrackets(exprs, N);
    for (size_t i = 0; i < series.size(); ++i) {
        QuasimodularResult r = quasimodularCheck(series[i], weights[i], N);
        CHECK(r.pass);
    }

    // The Q_2 bracket is -E_2/24.
    QuasimodularResult r2 = quasimodularCheck(series[q2Index], 2, N);
    REQUIRE(r2.pass);
    REQUIRE(r2.basis.size() == 1);
    CHECK(r2.basis[0] == std::array<int, 3>{1, 0, 0});
    CHECK(r2.coeffs[0] == Rational(-1, 24));

    // A wrong weight is rejected, and too short a truncation refuses to answer.
    QuasimodularResult wrong = quasimodularCheck(series[q2Index], 4, N);
    CHECK_FALSE(wrong.pass);
    PowerSeries<Rational> shorty = qBracket(QExpr::monomial(0, {2}), 12);
    CHECK_THROWS_WITH(quasimodularCheck(shorty, 8, 12),
                      Catch::Matchers::ContainsSubstring("truncation too small"));
}
