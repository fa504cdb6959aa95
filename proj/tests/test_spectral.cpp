#include <catch2/catch_amalgamated.hpp>

#include "qkdv/fermionic_ham.hpp"
#include "qkdv/recursion.hpp"
#include "qkdv/spectral.hpp"

using namespace qkdv;

namespace {

const std::vector<GLevel>& levels() {
    static std::vector<GLevel> ls =
        computeHierarchy(5, [](int k) { return std::min(k + 1, 3); });
    return ls;
}

EigenData perturbN(int n, int mMax, std::vector<int> kSet) {
    return perturb(levels(), n, mMax, std::move(kSet));
}

}  // namespace

TEST_CASE("the dispersionless order is exactly the shifted symmetric spectrum") {
    for (int n = 0; n <= 5; ++n) {
        EigenData data = perturbN(n, 0, {1, 2, 3});
        for (size_t i = 0; i < data.entries.size(); ++i) {
            const EigenEntry& e = data.entries[i];
            for (int k : data.kSet) CHECK(e.E.at(k)[0] == evalQ(k + 2, e.lambda));
            for (size_t j = 0; j < data.partitions.size(); ++j)
                CHECK(e.r[0][j] == (i == j ? Rational(1) : Rational(0)));
        }
    }
}

TEST_CASE("first correction at a single box") {
    EigenData data = perturbN(1, 1, {1, 2, 3});
    const EigenEntry& e = data.at(Partition({1}));
    CHECK(e.E.at(1)[1] == Rational(241, 2880));
    CHECK(e.r[1][0].isZero());  // no distance-2 neighbor
}

TEST_CASE("first eigenvector correction at degree two") {
    EigenData data = perturbN(2, 1, {1, 2, 3});
    const int i2 = 0, i11 = 1;
    REQUIRE(data.partitions[i2] == Partition({2}));
    REQUIRE(data.partitions[i11] == Partition({1, 1}));
    CHECK(data.entries[i2].r[1][i11] == Rational(-1, 8));
    CHECK(data.entries[i2].r[1][i2].isZero());  // gauge
    CHECK(data.entries[i11].r[1][i2] == Rational(1, 8));
}

TEST_CASE("closed form for the first dispersive eigenvalue") {
    CHECK(firstCorrectionClosedForm(0).isZero());
    for (int n = 0; n <= 6; ++n) {
        EigenData data = perturbN(n, 1, {0, 1, 2, 3, 4, 5});
        SpectralReport report = verifyFirstCorrection(data);
        for (const auto& m : report.mismatches) UNSCOPED_INFO(m);
        CHECK(report.pass);
    }
}

TEST_CASE("border strip formula for the eigenvector correction") {
    for (int n = 0; n <= 6; ++n) {
        EigenData data = perturbN(n, 1, {1, 2, 3});
        SpectralReport report = verifyStripFormula(data);
        for (const auto& m : report.mismatches) UNSCOPED_INFO(m);
        CHECK(report.pass);
    }

    // The worked pair: removing the 3-strip resp. 7-strip from (7,2,1) and
    // re-adding it produces (4,2,2,2), with heights 0 and 1.
    auto coeffs = stripCorrectionCoefficients(Partition({7, 2, 1}));
    REQUIRE(coeffs.count(Partition({4, 2, 2, 2})) == 1);
    CHECK(coeffs.at(Partition({4, 2, 2, 2})) == Rational(10, 63));

    EigenData big = perturbN(10, 1, {1, 2, 3});
    const EigenEntry& e = big.at(Partition({7, 2, 1}));
    for (size_t j = 0; j < big.partitions.size(); ++j)
        if (big.partitions[j] == Partition({4, 2, 2, 2}))
            CHECK(e.r[1][j] == Rational(10, 63));
}

TEST_CASE("degenerate pair at degree eight") {
    const Partition a({4, 2, 1, 1}), b({3, 3, 2});
    REQUIRE(a.conjugate() == a);
    REQUIRE(b.conjugate() == b);
    CHECK(evalQ(3, a).isZero());
    CHECK(evalQ(3, b).isZero());
    CHECK(!(evalQ(4, a) == evalQ(4, b)));

    // A single level cannot resolve the pair...
    REQUIRE_THROWS_WITH(perturbN(8, 1, {1}),
                        Catch::Matchers::ContainsSubstring("insufficient family"));

    // ...but the family can, and both first-order theorems hold on the block.
    EigenData data = perturbN(8, 1, {1, 2});
    CHECK(verifyFirstCorrection(data).pass);
    CHECK(verifyStripFormula(data).pass);
}

TEST_CASE("second order corrections assemble consistently") {
    // The eigen-equation residual and cross-level agreement are asserted
    // inside perturb; surviving the call is the property being tested.
    EigenData data = perturbN(4, 2, {1, 2, 3});
    for (const auto& e : data.entries) {
        REQUIRE(e.r.size() == 3);
        for (int k : data.kSet) REQUIRE(e.E.at(k).size() == 3);
    }
    // Vacuum values: E_k^[m](emptyset) are the constants of the tables.
    EigenData vac = perturbN(0, 2, {1, 2, 3});
    CHECK(vac.entries[0].E.at(1)[1] == Rational(1, 2880));
}

TEST_CASE("double Hodge integrals") {
    CHECK(hodgeIntegral(levels(), 2, 1) == Rational(1, 2880));
    for (int g = 2; g <= 4; ++g)
        CHECK(hodgeIntegral(levels(), g, 1) == hodgeClosedForm(g));
    CHECK_THROWS_AS(hodgeIntegral(levels(), 1, 1), std::domain_error);
    CHECK_THROWS_AS(hodgeIntegral(levels(), 3, 3), std::domain_error);
}

TEST_CASE("first dispersive matrix elements vanish outside the neighborhood") {
    for (int n = 2; n <= 6; ++n) {
        auto parts = enumeratePartitions(n);
        for (int k = 0; k <= 4; ++k) {
            ExactMatrix m = gHat1Matrix(k, n);
            for (size_t i = 0; i < parts.size(); ++i)
                for (size_t j = 0; j < parts.size(); ++j)
                    if (i != j && hammingDistance(parts[i], parts[j]) > 2)
                        CHECK(m.at(static_cast<int>(i), static_cast<int>(j)).isZero());
        }
    }
}

TEST_CASE("eigenvalue generators under conjugation") {
    for (int n = 0; n <= 8; ++n)
        for (const auto& lam : enumeratePartitions(n)) {
            Partition conj = lam.conjugate();
            for (int k = 2; k <= 11; ++k) {
                Rational v = evalQ(k, lam), w = evalQ(k, conj);
                CHECK(w == (k % 2 == 0 ? v : -v));
            }
        }
}
