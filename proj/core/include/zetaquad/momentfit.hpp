#pragma once

#include "zetaquad/epstein.hpp"

#include <string>
#include <vector>

namespace zetaquad {

/// Integer lattice offset inside a correction stencil.
struct StencilPoint {
    int mu = 0;
    int nu = 0;
};

/// Annular stencil
///   U(K1, K2) = { (mu, nu) : K1 <= |mu| + |nu| <= K2 + 1,  max(|mu|, |nu|) <= K2 }
/// enumerated in lexicographic (mu, nu) order.  Requires 0 <= K1 <= K2.
std::vector<StencilPoint> build_stencil(int K1, int K2);

/// Closed-form cardinality of U(K1, K2):
///   2 (K1 + K2)(K2 - K1 + 1) + 4 K2 + [K1 == 0].
int stencil_size(int K1, int K2);

/// Correction weights tau on U(K1, K2) fitted so that discrete moments
/// reproduce the (negated) zeta-regularized lattice moments:
///
///   sum_{(mu,nu) in U} mu^{2k-l} nu^l tau_{mu nu} = -W^s[u^{2k-l} v^l]
///
/// for K1 <= k <= K2, 0 <= l <= 2k.  The square system is closed by the
/// exact symmetries of the solution (central symmetry everywhere, full
/// reflection symmetry on layer |mu|+|nu| = K1, reflection antisymmetry on
/// layer K2 + 1), reducing to one unknown per orbit; offsets are scaled by
/// 1/max(K2,1) before the LU solve and one iterative-refinement step is
/// applied.  `max_scaled_residual` reports the worst full-system moment
/// residual relative to max(1, |W|).
struct WeightSet {
    double s = 0.0;
    QuadraticForm Q;
    int K1 = 0;
    int K2 = 0;
    std::vector<StencilPoint> points;
    std::vector<double> tau;          ///< parallel to `points`
    double max_scaled_residual = 0.0;
};

WeightSet solve_weights(double s, const QuadraticForm& Q, int K1, int K2);

/// One smoothness-graded term of a locally corrected rule for 1/r^p kernels.
struct CorrectionTerm {
    int m = 0;        ///< power of (r^2 - Q) multiplying the density
    int K1 = 0;
    int K2 = 0;
    double coef = 0;  ///< binom(-p/2, m)
};

/// The full correction recipe for target order P applied to a kernel
/// phi / r^p whose numerator vanishes to order 2q at the target:
///
///   M      = 2 ceil((P + p)/2) - 2q - 4
///   K1(m)  = q + ceil(3m/2)
///   K2(m)  = ceil((P + p)/2) + m - 2
///
/// keeping only m with K1(m) <= K2(m).  The m-th term weights use
/// s = p + 2m and contribute at h^{2 - p - 2m} with the density factor
/// (r^2 - Q)^m phi sampled on U(K1(m), K2(m)).
struct CorrectionPlan {
    int p = 1;
    int q = 0;
    int P = 3;
    std::vector<CorrectionTerm> terms;
};

CorrectionPlan correction_plan(int p, int q, int P);

/// Binary dump of a weight set (for offline inspection).  Layout, all
/// little-endian: magic "ZQWT", uint32 version = 1, int32 K1, K2,
/// float64 s, E, F, G, int64 count, then count * (int32 mu, int32 nu,
/// float64 tau).
void dump_weights(const WeightSet& w, const std::string& path);

/// Reader matching dump_weights (round-trip checking).
WeightSet load_weights(const std::string& path);

} // namespace zetaquad
