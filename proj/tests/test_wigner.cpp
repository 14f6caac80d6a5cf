#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "zetaquad/wigner.hpp"

#include <cmath>
#include <stdexcept>

using namespace zetaquad;

namespace {

double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

const QuadraticForm kUnit{1.0, 0.0, 1.0};
const QuadraticForm kAniso{2.0, 0.4, 1.3};

} // namespace

TEST_CASE("wigner limits: degree zero reduces to the Epstein value") {
    for (double s : {1.0, 3.0}) {
        CAPTURE(s);
        CHECK(rel_diff(wigner_limit(s, kUnit, 0, 0), epstein_zeta(s, kUnit)) <= 1e-13);
        CHECK(rel_diff(wigner_limit(s, kAniso, 0, 0), epstein_zeta(s, kAniso)) <= 1e-13);
    }
}

TEST_CASE("wigner limits: windowed-sum oracle at s = 1") {
    // degree-two monomials on the unit form
    CHECK(std::abs(wigner_limit(1.0, kUnit, 2, 0) - wigner_oracle(1.0, kUnit, 2, 0)) <= 1e-6);
    CHECK(std::abs(wigner_limit(1.0, kUnit, 1, 1) - wigner_oracle(1.0, kUnit, 1, 1)) <= 1e-6);
    CHECK(std::abs(wigner_limit(1.0, kUnit, 0, 2) - wigner_oracle(1.0, kUnit, 0, 2)) <= 1e-6);
    // degree zero and a mixed monomial on an anisotropic form
    CHECK(std::abs(wigner_limit(1.0, kAniso, 0, 0) - wigner_oracle(1.0, kAniso, 0, 0)) <= 1e-6);
    CHECK(std::abs(wigner_limit(1.0, kAniso, 1, 1) - wigner_oracle(1.0, kAniso, 1, 1)) <= 1e-6);
}

TEST_CASE("wigner limits: odd total degree vanishes identically") {
    for (auto [a, b] : {std::pair{1, 0}, {0, 1}, {2, 1}, {1, 2}, {3, 0}}) {
        CAPTURE(a);
        CAPTURE(b);
        CHECK(wigner_limit(1.0, kAniso, a, b) == 0.0);
        CHECK(wigner_limit(3.0, kAniso, a, b) == 0.0);
    }
}

TEST_CASE("wigner limits: chart relabeling (u, E) <-> (v, G)") {
    const QuadraticForm q{1.8, 0.35, 1.05};
    const QuadraticForm swapped{1.05, 0.35, 1.8};
    for (double s : {1.0, 3.0, 5.0, 7.0}) {
        for (int n : {1, 2}) {
            CAPTURE(s);
            CAPTURE(n);
            CHECK(rel_diff(wigner_limit(s, q, 2 * n, 0),
                           wigner_limit(s, swapped, 0, 2 * n)) <= 1e-11);
        }
    }
}

TEST_CASE("wigner limits: F reflection flips the sign of W[uv]") {
    const QuadraticForm q{1.8, 0.35, 1.05};
    const QuadraticForm flipped{1.8, -0.35, 1.05};
    for (double s : {1.0, 3.0}) {
        CAPTURE(s);
        const double w = wigner_limit(s, q, 1, 1);
        CHECK(rel_diff(wigner_limit(s, flipped, 1, 1), -w) <= 1e-11);
        // even monomials are invariant under the same reflection
        CHECK(rel_diff(wigner_limit(s, flipped, 2, 0), wigner_limit(s, q, 2, 0)) <= 1e-11);
    }
}

TEST_CASE("wigner rows: shared-table evaluation matches single limits") {
    const auto row = wigner_row(1.0, kAniso, 1);
    REQUIRE(row.size() == 3);
    for (int l = 0; l <= 2; ++l) {
        CAPTURE(l);
        CHECK(rel_diff(row[l], wigner_limit(1.0, kAniso, 2 - l, l)) <= 1e-14);
    }
}

TEST_CASE("wigner limits and oracle: domain guards") {
    CHECK_THROWS_AS(wigner_limit(1.0, kUnit, -1, 0), std::invalid_argument);
    // prefactor pole at s = 2n for degree 2n
    CHECK_THROWS_AS(wigner_limit(2.0, kUnit, 2, 0), std::domain_error);
    // oracle window 0 < s < 2 + a + b
    CHECK_THROWS_AS(wigner_oracle(4.5, kUnit, 2, 0), std::domain_error);
    CHECK_THROWS_AS(wigner_oracle(-1.0, kUnit, 0, 0), std::domain_error);
    WignerOracleConfig cfg;
    cfg.levels = 2;
    CHECK_THROWS_AS(wigner_oracle(1.0, kUnit, 0, 0, cfg), std::invalid_argument);
}
