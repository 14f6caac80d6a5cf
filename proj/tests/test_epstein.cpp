#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "testutil.hpp"
#include "zetaquad/epstein.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace zetaquad;
using zetaquad::testing::gl_integrate;

namespace {

double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

/// Brute-force lattice sum over the punctured square |i|,|j| <= R plus a
/// Gauss-Legendre estimate of the exterior integral, for Re s > 2.  The
/// interior uses the i -> -i symmetry (half lattice, doubled); the exterior
/// ring integral int_{|x|_inf > R + 1/2} Q(x)^{-s/2} dx is taken in polar
/// form over eight octant panels where the boundary radius
/// R(theta) = (R + 1/2) / max(|cos|, |sin|) is smooth.
double brute_epstein(double s, const QuadraticForm& Q, int R) {
    const double p = 0.5 * s;
    CompensatedSum sum;
    auto term = [&](double i, double j) {
        return std::pow(Q(i, j), -p);
    };
    for (int i = 1; i <= R; ++i)
        for (int j = -R; j <= R; ++j) sum.add(term(i, j));
    double half = sum.value();
    CompensatedSum axis;
    for (int j = 1; j <= R; ++j) axis.add(term(0.0, j));
    double total = 2.0 * (half + axis.value());

    const double edge = R + 0.5;
    CompensatedSum tail;
    for (int oct = 0; oct < 8; ++oct) {
        const double th0 = oct * kPi / 4.0, th1 = th0 + kPi / 4.0;
        tail.add(gl_integrate(
            [&](double th) {
                const double c = std::cos(th), sn = std::sin(th);
                const double rad = edge / std::max(std::abs(c), std::abs(sn));
                // int_rad^inf Q(c,sn)^{-s/2} r^{1-s} dr = Q^{-s/2} rad^{2-s}/(s-2)
                return std::pow(Q(c, sn), -p) * std::pow(rad, 2.0 - s) / (s - 2.0);
            },
            th0, th1, 48));
    }
    return total + tail.value();
}

const QuadraticForm kUnit{1.0, 0.0, 1.0};
const QuadraticForm kAniso{1.3, 0.2, 0.9};

} // namespace

TEST_CASE("epstein zeta: brute-force lattice sum oracle") {
    CHECK(std::abs(epstein_zeta(4.0, kUnit) - brute_epstein(4.0, kUnit, 2000)) <= 1e-10);
    const QuadraticForm q{1.3, 0.2, 0.9};
    CHECK(std::abs(epstein_zeta(5.0, q) - brute_epstein(5.0, q, 2000)) <= 1e-10);
}

TEST_CASE("epstein zeta: unit-form factorization into Dirichlet series") {
    // Z(s; I) = 4 zeta(s/2) beta(s/2).  At s = 8 both factors come from
    // rapidly convergent sums (zeta(4) = pi^4 / 90 exactly).
    const double zeta4 = std::pow(kPi, 4) / 90.0;
    double beta4 = 0.0;
    for (int k = 20000; k >= 0; --k)
        beta4 += (k % 2 == 0 ? 1.0 : -1.0) / std::pow(2.0 * k + 1.0, 4);
    CHECK(rel_diff(epstein_zeta(8.0, kUnit), 4.0 * zeta4 * beta4) <= 1e-13);

    // s = 4 needs Catalan's constant for beta(2).
    const double zeta2 = kPi * kPi / 6.0;
    const double catalan = 0.915965594177219015054603514932;
    CHECK(rel_diff(epstein_zeta(4.0, kUnit), 4.0 * zeta2 * catalan) <= 1e-13);
}

TEST_CASE("epstein zeta: form symmetries") {
    const QuadraticForm q{1.7, 0.4, 1.1};
    const QuadraticForm swapped{1.1, 0.4, 1.7};
    const QuadraticForm flipped{1.7, -0.4, 1.1};
    for (double s : {0.5, 1.0, 3.0, 4.5}) {
        CAPTURE(s);
        CHECK(rel_diff(epstein_zeta(s, q), epstein_zeta(s, swapped)) <= 5e-13);
        CHECK(rel_diff(epstein_zeta(s, q), epstein_zeta(s, flipped)) <= 5e-13);
    }
}

TEST_CASE("epstein zeta: homogeneity Z(s; cQ) = c^{-s/2} Z(s; Q)") {
    const double c = 3.7;
    const QuadraticForm q{1.5, 0.3, 1.1};
    const QuadraticForm cq{c * q.E, c * q.F, c * q.G};
    for (double s : {1.0, 3.0}) {
        CAPTURE(s);
        CHECK(rel_diff(epstein_zeta(s, cq),
                       std::pow(c, -0.5 * s) * epstein_zeta(s, q)) <= 1e-12);
    }
}

TEST_CASE("epstein zeta: functional equation on unimodular forms") {
    // pi^{-s/2} Gamma(s/2) Z(s) = pi^{-(2-s)/2} Gamma((2-s)/2) Z(2-s) when
    // det Q = 1; Gamma from libm keeps the check independent.
    auto xi = [](double s, const QuadraticForm& q) {
        return std::pow(kPi, -0.5 * s) * std::tgamma(0.5 * s) * epstein_zeta(s, q);
    };
    const QuadraticForm q1{1.25, 0.5, 1.0};
    const QuadraticForm q2{2.0, 0.6, 0.68};
    REQUIRE(q1.det() == doctest::Approx(1.0).epsilon(1e-15));
    REQUIRE(q2.det() == doctest::Approx(1.0).epsilon(1e-15));
    for (double s : {0.5, 1.0, 1.5, 3.0}) {
        CAPTURE(s);
        const double lhs = xi(s, q1), rhs = xi(2.0 - s, q1);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
    }
    const double lhs = xi(1.2, q2), rhs = xi(0.8, q2);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
}

TEST_CASE("epstein zeta: domain errors") {
    CHECK_THROWS_AS(epstein_zeta(2.0, kUnit), std::domain_error);
    CHECK_THROWS_AS(epstein_zeta(0.0, kUnit), std::domain_error);
    CHECK_THROWS_AS(epstein_zeta(1.0, QuadraticForm{1.0, 1.2, 1.0}), std::domain_error);
    CHECK_THROWS_AS(epstein_zeta(1.0, QuadraticForm{-1.0, 0.0, 1.0}), std::domain_error);
}

TEST_CASE("epstein derivatives: order zero reproduces the plain value") {
    for (double s : {1.0, 3.0}) {
        CAPTURE(s);
        const auto d = epstein_derivatives(s, kAniso, {1.0, 0.0, 0.0}, 2);
        REQUIRE(d.size() == 3);
        CHECK(rel_diff(d[0], epstein_zeta(s, kAniso)) <= 1e-13);
    }
}

TEST_CASE("epstein derivatives: finite-difference cross-check") {
    // first derivative along E
    {
        const double s = 1.0, eps = 1e-5;
        const auto d = epstein_derivatives(s, kAniso, {1.0, 0.0, 0.0}, 1);
        QuadraticForm qp = kAniso, qm = kAniso;
        qp.E += eps;
        qm.E -= eps;
        const double fd = (epstein_zeta(s, qp) - epstein_zeta(s, qm)) / (2.0 * eps);
        CHECK(rel_diff(d[1], fd) <= 1e-6);
    }
    // mixed direction, first and second order
    {
        const double s = 3.0, eps = 1e-4;
        const QuadraticForm q{2.0, 0.3, 1.5};
        const FormDirection dir{0.7, -0.4, 1.1};
        const auto d = epstein_derivatives(s, q, dir, 2);
        auto at = [&](double t) {
            return epstein_zeta(
                s, QuadraticForm{q.E + t * dir.L, q.F + t * dir.M, q.G + t * dir.N});
        };
        const double fd1 = (at(eps) - at(-eps)) / (2.0 * eps);
        const double fd2 = (at(eps) - 2.0 * at(0.0) + at(-eps)) / (eps * eps);
        CHECK(rel_diff(d[1], fd1) <= 1e-5);
        CHECK(rel_diff(d[2], fd2) <= 1e-5);
    }
    CHECK_THROWS_AS(epstein_derivatives(1.0, kUnit, {1, 0, 0}, 13),
                    std::invalid_argument);
}

TEST_CASE("epstein derivatives: Euler identity from homogeneity") {
    // (E dE + F dF + G dG) Z = -(s/2) Z
    const QuadraticForm q{1.5, 0.3, 1.1};
    for (double s : {1.0, 3.0}) {
        CAPTURE(s);
        const auto d = epstein_derivatives(s, q, {q.E, q.F, q.G}, 1);
        const double z = d[0];
        CHECK(std::abs(d[1] + 0.5 * s * z) / std::max(1.0, std::abs(z)) <= 1e-9);
    }
}

TEST_CASE("epstein partials: structure and finite differences") {
    // at F = 0 the form is even in F, so the first F-partial vanishes
    {
        const QuadraticForm q{1.4, 0.0, 0.9};
        const auto t = epstein_partials(1.0, q, 1);
        REQUIRE(t.dE.size() == 2);
        CHECK(std::abs(t.dE[1]) <= 1e-11 * std::max(1.0, std::abs(t.dE[0])));
    }
    // unit form: d^2/dE^2 Z = d^2/dG^2 Z by lattice relabeling
    {
        const auto t = epstein_partials(1.0, kUnit, 2);
        CHECK(rel_diff(t.dE[0], t.dG[0]) <= 1e-11);
    }
    // the shared pure-F column is computed twice; both copies must agree
    {
        const QuadraticForm q{1.5, 0.3, 1.1};
        for (int n : {1, 2, 3}) {
            CAPTURE(n);
            const auto t = epstein_partials(1.0, q, n);
            CHECK(rel_diff(t.dE[n], t.dG[n]) <= 1e-12);
        }
    }
    // second partials against finite differences of the plain value
    {
        const double s = 1.0, eps = 1e-4;
        const QuadraticForm q{1.5, 0.3, 1.1};
        const auto t = epstein_partials(s, q, 2);
        auto zq = [&](double de, double df, double dg) {
            return epstein_zeta(s, QuadraticForm{q.E + de, q.F + df, q.G + dg});
        };
        const double fd_ee =
            (zq(eps, 0, 0) - 2.0 * zq(0, 0, 0) + zq(-eps, 0, 0)) / (eps * eps);
        CHECK(rel_diff(t.dE[0], fd_ee) <= 1e-5);
        // dE[1] = dE (1/2 dF) Z
        const double fd_ef = (zq(eps, eps, 0) - zq(eps, -eps, 0) - zq(-eps, eps, 0) +
                              zq(-eps, -eps, 0)) /
                             (4.0 * eps * eps) * 0.5;
        CHECK(rel_diff(t.dE[1], fd_ef) <= 1e-5);
        const double fd_gg =
            (zq(0, 0, eps) - 2.0 * zq(0, 0, 0) + zq(0, 0, -eps)) / (eps * eps);
        CHECK(rel_diff(t.dG[0], fd_gg) <= 1e-5);
    }
    CHECK_THROWS_AS(epstein_partials(1.0, kUnit, 13), std::invalid_argument);
}

TEST_CASE("epstein partials: consistency with directional derivatives") {
    const QuadraticForm q{1.5, 0.3, 1.1};
    const double s = 1.0;
    const auto t = epstein_partials(s, q, 1);
    const auto de = epstein_derivatives(s, q, {1.0, 0.0, 0.0}, 1);
    const auto df_half = epstein_derivatives(s, q, {0.0, 0.5, 0.0}, 1);
    const auto dg = epstein_derivatives(s, q, {0.0, 0.0, 1.0}, 1);
    CHECK(rel_diff(t.dE[0], de[1]) <= 1e-12);
    CHECK(rel_diff(t.dE[1], df_half[1]) <= 1e-12);
    CHECK(rel_diff(t.dG[0], dg[1]) <= 1e-12);
}

TEST_CASE("lattice truncation radius grows with derivative order") {
    CHECK(lattice_truncation(0) >= 30.0);
    for (int k = 0; k < 12; ++k) {
        CAPTURE(k);
        CHECK(lattice_truncation(k + 1) > lattice_truncation(k));
    }
}
