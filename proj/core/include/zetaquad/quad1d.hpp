#pragma once

#include "zetaquad/geom.hpp"

#include <Eigen/Core>

#include <functional>
#include <vector>

namespace zetaquad {

/// Symmetric second-difference weights c_{-M..M} (returned as c[0..M] with
/// c_{-j} = c_j), the unique solution of
///
///   sum_{j=-M}^{M} c_j j^{2m} = 2 delta_{m,1},   m = 0..M,
///
/// in closed form c_j = 2 (-1)^{j+1} (M!)^2 / (j^2 (M-j)! (M+j)!) for j >= 1
/// and c_0 = -2 sum_{j>=1} c_j.  The closed form is evaluated as a product
/// of ratios; solving the moment system numerically loses all accuracy past
/// M ~ 10 while the closed form is uniformly stable (M <= 15 supported).
std::vector<double> central_diff_coeffs(int M);

/// Finite-part integral of a 1/x^2-type periodic singularity over one
/// period [-a, a):
///
///   I[f] = T_n[f] - (pi^2 / (3h)) phi(0) + (1/(2h)) sum_{|j| <= M} c_j phi(j h)
///
/// with T_n[f] = h sum_{i = -n..n-1, i != 0} f(i h), h = a / n, where
/// f(x) = phi(x) / x^2 near 0 with phi smooth (phi supplied separately since
/// f cannot be evaluated at 0).  Error O(h^{2M+1}).
double finite_part_central(const std::function<double(double)>& f,
                           const std::function<double(double)>& phi,
                           double a, int n, int M);

/// Alternating-grid variant: only odd multiples of h are sampled, with
/// doubled weights, and the entire local correction collapses to one term:
///
///   I[f] = 2h sum_{i odd} f(i h) - (pi^2 / (2h)) phi(0).
///
/// Superalgebraically accurate for integrands of this class.
double finite_part_alternating(const std::function<double(double)>& f,
                               double phi0, double a, int n);

enum class GridVariant { central, alternating };

/// Nystrom matrix of the hypersingular normal-derivative-of-double-layer
/// operator on a closed curve,
///
///   (H sigma)(x) = fp int [ n_x . n_y / r^2 - 2 ((x-y).n_x)((x-y).n_y)/r^4 ]
///                      sigma(y) ds_y / (2 pi),
///
/// acting on nodal density samples.  `central` uses kernel-times-weight
/// entries plus a (2M+1)-wide locally corrected band (order 2M+1); the
/// `alternating` variant keeps only odd-offset columns with doubled weights
/// (superalgebraic) and ignores M.  N must be even for `alternating`;
/// 2M + 1 <= N is required for `central`.
Eigen::MatrixXd hypersingular_matrix(const CurveGrid& g, int M,
                                     GridVariant variant = GridVariant::central);

/// Nystrom matrix of the adjoint double-layer operator
///   (D* tau)(x) = int dG/dn_x (x, y) tau(y) ds_y,
/// G = -log r / (2 pi).  The kernel is smooth on a smooth curve, so the
/// plain trapezoid row with the curvature limit -kappa w / (4 pi) on the
/// diagonal is spectrally accurate.
Eigen::MatrixXd dlp_adjoint_matrix(const CurveGrid& g);

} // namespace zetaquad
