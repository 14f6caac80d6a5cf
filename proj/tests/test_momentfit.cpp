#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "zetaquad/momentfit.hpp"
#include "zetaquad/util.hpp"
#include "zetaquad/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

using namespace zetaquad;

namespace {

const QuadraticForm kUnit{1.0, 0.0, 1.0};
const QuadraticForm kAniso{1.5, 0.3, 1.1};

double tau_at(const WeightSet& w, int mu, int nu) {
    for (std::size_t i = 0; i < w.points.size(); ++i)
        if (w.points[i].mu == mu && w.points[i].nu == nu) return w.tau[i];
    FAIL("stencil point (" << mu << ", " << nu << ") not present");
    return 0.0;
}

/// Recompute every moment equation of a solved weight set from scratch:
/// sum_U mu^{2k-l} nu^l tau must equal -W^s[u^{2k-l} v^l] for K1 <= k <= K2,
/// 0 <= l <= 2k.  Returns the worst residual scaled by max(1, |W|).
double substitution_residual(const WeightSet& w) {
    double worst = 0.0;
    for (int k = w.K1; k <= w.K2; ++k) {
        for (int l = 0; l <= 2 * k; ++l) {
            CompensatedSum lhs;
            for (std::size_t i = 0; i < w.points.size(); ++i) {
                const double mu = w.points[i].mu, nu = w.points[i].nu;
                lhs.add(std::pow(mu, 2 * k - l) * std::pow(nu, l) * w.tau[i]);
            }
            const double rhs = -wigner_limit(w.s, w.Q, 2 * k - l, l);
            const double res =
                std::abs(lhs.value() - rhs) / std::max(1.0, std::abs(rhs));
            worst = std::max(worst, res);
        }
    }
    return worst;
}

} // namespace

TEST_CASE("stencils: closed-form cardinality and membership") {
    CHECK(stencil_size(0, 1) == 9);
    CHECK(stencil_size(0, 3) == 37);
    CHECK(stencil_size(2, 2) == 16);
    for (int K1 = 0; K1 <= 6; ++K1) {
        for (int K2 = K1; K2 <= 6; ++K2) {
            CAPTURE(K1);
            CAPTURE(K2);
            const auto pts = build_stencil(K1, K2);
            CHECK(static_cast<int>(pts.size()) == stencil_size(K1, K2));

            std::set<std::pair<int, int>> seen;
            for (const auto& p : pts) {
                const int taxi = std::abs(p.mu) + std::abs(p.nu);
                CHECK(taxi >= K1);
                CHECK(taxi <= K2 + 1);
                CHECK(std::max(std::abs(p.mu), std::abs(p.nu)) <= K2);
                seen.insert({p.mu, p.nu});
            }
            CHECK(seen.size() == pts.size());  // no duplicates

            // independent census over the bounding box
            int count = 0;
            for (int mu = -K2; mu <= K2; ++mu)
                for (int nu = -K2; nu <= K2; ++nu) {
                    const int taxi = std::abs(mu) + std::abs(nu);
                    if (taxi >= K1 && taxi <= K2 + 1) ++count;
                }
            CHECK(count == static_cast<int>(pts.size()));
        }
    }
    CHECK_THROWS_AS(build_stencil(2, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_stencil(-1, 1), std::invalid_argument);
}

TEST_CASE("weights: moment system residuals recomputed from Wigner limits") {
    struct Cfg {
        double s;
        QuadraticForm Q;
        int K1, K2;
    };
    const std::vector<Cfg> cfgs = {
        {3.0, kUnit, 0, 1},
        {3.0, kAniso, 0, 3},
        {5.0, kAniso, 2, 2},
        {7.0, kAniso, 3, 4},
    };
    for (const auto& c : cfgs) {
        CAPTURE(c.s);
        CAPTURE(c.K1);
        CAPTURE(c.K2);
        const WeightSet w = solve_weights(c.s, c.Q, c.K1, c.K2);
        CHECK(substitution_residual(w) <= 1e-9);
        // the library's own bookkeeping should agree with the recomputation
        CHECK(w.max_scaled_residual <= 1e-9);
    }
}

TEST_CASE("weights: built-in symmetries of the solution") {
    const WeightSet w = solve_weights(3.0, kAniso, 0, 3);
    // central symmetry everywhere
    for (const auto& p : w.points)
        CHECK(tau_at(w, p.mu, p.nu) == tau_at(w, -p.mu, -p.nu));
    // reflection antisymmetry on the outer layer |mu| + |nu| = K2 + 1
    CHECK(tau_at(w, 1, 3) == -tau_at(w, -1, 3));
    CHECK(tau_at(w, 3, 1) == -tau_at(w, -3, 1));
    // reflection symmetry on the inner layer |mu| + |nu| = K1
    const WeightSet w2 = solve_weights(5.0, kAniso, 2, 2);
    CHECK(tau_at(w2, 1, 1) == tau_at(w2, -1, 1));
    CHECK(tau_at(w2, 2, 0) == tau_at(w2, -2, 0));
}

TEST_CASE("weights: unit form gains the (mu, nu) swap symmetry") {
    const WeightSet w = solve_weights(3.0, kUnit, 0, 2);
    for (const auto& p : w.points) {
        CAPTURE(p.mu);
        CAPTURE(p.nu);
        CHECK(tau_at(w, p.mu, p.nu) ==
              doctest::Approx(tau_at(w, p.nu, p.mu)).epsilon(1e-12));
    }
}

TEST_CASE("weights: F reflection maps tau(mu, nu) to tau(mu, -nu)") {
    const QuadraticForm flipped{kAniso.E, -kAniso.F, kAniso.G};
    const WeightSet w = solve_weights(3.0, kAniso, 0, 2);
    const WeightSet wf = solve_weights(3.0, flipped, 0, 2);
    for (const auto& p : w.points) {
        CAPTURE(p.mu);
        CAPTURE(p.nu);
        CHECK(tau_at(wf, p.mu, p.nu) ==
              doctest::Approx(tau_at(w, p.mu, -p.nu)).epsilon(1e-13));
    }
}

TEST_CASE("weights: scaling the form rescales tau by c^{-s/2}") {
    const double c = 2.3, s = 3.0;
    const QuadraticForm scaled{c * kAniso.E, c * kAniso.F, c * kAniso.G};
    const WeightSet w = solve_weights(s, kAniso, 0, 2);
    const WeightSet ws = solve_weights(s, scaled, 0, 2);
    const double factor = std::pow(c, -0.5 * s);
    for (std::size_t i = 0; i < w.points.size(); ++i) {
        CAPTURE(w.points[i].mu);
        CAPTURE(w.points[i].nu);
        CHECK(tau_at(ws, w.points[i].mu, w.points[i].nu) ==
              doctest::Approx(factor * w.tau[i]).epsilon(1e-11));
    }
}

TEST_CASE("correction plans: term shapes follow the grading formulas") {
    auto check_plan = [](int p, int q, int P) {
        CAPTURE(p);
        CAPTURE(q);
        CAPTURE(P);
        const CorrectionPlan plan = correction_plan(p, q, P);
        CHECK(plan.p == p);
        CHECK(plan.q == q);
        CHECK(plan.P == P);
        const int half = (P + p + 1) / 2;  // ceil((P + p) / 2) for odd p
        const int M = 2 * half - 2 * q - 4;
        std::size_t idx = 0;
        for (int m = 0; m <= M; ++m) {
            const int K1 = q + (3 * m + 1) / 2;  // q + ceil(3m/2)
            const int K2 = half + m - 2;
            if (K1 > K2) continue;
            REQUIRE(idx < plan.terms.size());
            const CorrectionTerm& t = plan.terms[idx++];
            CHECK(t.m == m);
            CHECK(t.K1 == K1);
            CHECK(t.K2 == K2);
            CHECK(t.coef == doctest::Approx(binom_real(-0.5 * p, m)).epsilon(1e-15));
        }
        CHECK(idx == plan.terms.size());
    };
    for (int p : {1, 3, 5})
        for (int q = 0; q <= (p - 1) / 2; ++q)
            for (int P = 1; P <= 9; P += 2) check_plan(p, q, P);

    // pinned shapes quoted throughout the correction literature here:
    // a 3rd-order single-layer rule corrects with one point, the 5th-order
    // rule with the 9-point box plus two graded annuli.
    const CorrectionPlan slp3 = correction_plan(1, 0, 3);
    REQUIRE(slp3.terms.size() == 1);
    CHECK(slp3.terms[0].m == 0);
    CHECK(slp3.terms[0].K1 == 0);
    CHECK(slp3.terms[0].K2 == 0);

    const CorrectionPlan slp5 = correction_plan(1, 0, 5);
    REQUIRE(slp5.terms.size() == 3);
    CHECK(slp5.terms[0].K1 == 0);
    CHECK(slp5.terms[0].K2 == 1);
    CHECK(slp5.terms[1].K1 == 2);
    CHECK(slp5.terms[1].K2 == 2);
    CHECK(slp5.terms[2].K1 == 3);
    CHECK(slp5.terms[2].K2 == 3);
    CHECK(slp5.terms[1].coef == doctest::Approx(-0.5).epsilon(1e-16));

    const CorrectionPlan hyp3 = correction_plan(5, 2, 3);
    REQUIRE(hyp3.terms.size() == 1);
    CHECK(hyp3.terms[0].m == 0);
    CHECK(hyp3.terms[0].K1 == 2);
    CHECK(hyp3.terms[0].K2 == 2);

    CHECK_THROWS_AS(correction_plan(2, 0, 3), std::invalid_argument);
    CHECK_THROWS_AS(correction_plan(3, -1, 3), std::invalid_argument);
}

TEST_CASE("weight dump: binary round-trip") {
    const WeightSet w = solve_weights(5.0, kAniso, 2, 2);
    const auto path =
        (std::filesystem::temp_directory_path() / "zq_weights_test.bin").string();
    dump_weights(w, path);
    const WeightSet r = load_weights(path);
    std::filesystem::remove(path);

    CHECK(r.s == w.s);
    CHECK(r.Q.E == w.Q.E);
    CHECK(r.Q.F == w.Q.F);
    CHECK(r.Q.G == w.Q.G);
    CHECK(r.K1 == w.K1);
    CHECK(r.K2 == w.K2);
    REQUIRE(r.points.size() == w.points.size());
    REQUIRE(r.tau.size() == w.tau.size());
    for (std::size_t i = 0; i < w.tau.size(); ++i) {
        CHECK(r.points[i].mu == w.points[i].mu);
        CHECK(r.points[i].nu == w.points[i].nu);
        CHECK(r.tau[i] == w.tau[i]);  // bitwise
    }
    CHECK_THROWS_AS(load_weights("/nonexistent/zq_weights.bin"), std::runtime_error);
}
