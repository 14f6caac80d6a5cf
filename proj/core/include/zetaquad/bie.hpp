#pragma once

#include "zetaquad/geom.hpp"
#include "zetaquad/quad1d.hpp"
#include "zetaquad/quad3d.hpp"

#include <Eigen/Core>

#include <vector>

namespace zetaquad {

enum class BvpSide { interior, exterior };

/// Telemetry for one linear solve (and, when run through a BVP driver, the
/// accuracy of the resulting potential at the test targets).
struct LinearSolveReport {
    int n = 0;                  ///< system size
    double residual = 0.0;      ///< relative residual ||b - A x|| / ||b||
    int iterations = 0;         ///< GMRES iterations (0 for direct solves)
    bool converged = true;
    double seconds = 0.0;       ///< assembly + solve wall time
    double max_rel_error = 0.0; ///< sup-norm target error / sup-norm exact
};

/// Dense GMRES with modified Gram-Schmidt orthogonalization.  `restart` = 0
/// runs a single Krylov cycle of up to `max_iter` steps; otherwise cycles of
/// length `restart` until `max_iter` total steps.  Deterministic: fixed
/// arithmetic order, no randomization.  Convergence is declared on the
/// relative residual reaching `tol`.
Eigen::VectorXd gmres_dense(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                            double tol = 1e-12, int max_iter = 400,
                            int restart = 0, LinearSolveReport* report = nullptr);

/// Harmonic point charges manufacturing exact test solutions.
struct Charge2d {
    Vec2 z = Vec2::Zero();
    double q = 1.0;
};
struct Charge3d {
    Vec3 z = Vec3::Zero();
    double q = 1.0;
};

/// u(x) = -sum_k q_k log|x - z_k| / (2 pi)
double charge_potential_2d(const std::vector<Charge2d>& charges, const Vec2& x);
/// u(x) = sum_k q_k / (4 pi |x - z_k|)
double charge_potential_3d(const std::vector<Charge3d>& charges, const Vec3& x);
/// n . grad u for the 3D charge field.
double charge_normal_derivative_3d(const std::vector<Charge3d>& charges,
                                   const Vec3& x, const Vec3& n);

/// Laplace Dirichlet problem on a closed planar curve, either side.
/// Boundary data and target values are sampled from the charge field (plus
/// the prescribed far-field constant `omega` on the exterior side, where
/// u -> (Sigma / 2 pi) log|x| + omega with Sigma = -sum q_k).  Charges must
/// lie strictly on the non-solution side, targets strictly on the solution
/// side.
struct Bvp2d {
    Curve2D curve;
    BvpSide side = BvpSide::interior;
    std::vector<Charge2d> charges;
    std::vector<Vec2> targets;
    double omega = 0.0;   ///< exterior far-field constant (ignored interior)

    /// Constant added to the interior Dirichlet data; the manufactured
    /// solution gains the same constant (u = const alone has tau = 0).
    /// Interior only: on the exterior side the far-field constant already
    /// plays this role, so a nonzero value there is rejected.
    double constant_data = 0.0;
};

struct Bvp2dSolution {
    LinearSolveReport report;
    std::vector<double> tau;  ///< recovered Neumann data at the nodes
    double flux = 0.0;        ///< sum_i w_i tau_i (equals -sum q_k exterior)
    std::vector<double> u;    ///< computed potential at the targets
};

/// Solve for the Neumann data via the hypersingular route,
///
///   interior: (-1/2 + D*) tau = H sigma
///   exterior: ( 1/2 + D*) tau + int tau ds = H sigma + Sigma,
///
/// then evaluate u = +-(S[tau] - D[sigma]) (+ omega exterior) at the
/// targets with the plain trapezoid.  H is assembled at order 2M+1
/// (`central`) or superalgebraically (`alternating`); the system is solved
/// densely by LU.
Bvp2dSolution solve_laplace_dirichlet_2d(const Bvp2d& problem, int N, int M,
                                         GridVariant variant = GridVariant::central);

/// Interior Dirichlet problem on a (wobbly) torus with exterior charges and
/// interior targets.
struct Bvp3dTorus {
    TorusSurface surf;
    std::vector<Charge3d> charges;
    std::vector<Vec3> targets;

    /// Constant added to the Dirichlet data (and to the manufactured
    /// solution); with no charges this solves u = const directly.
    double constant_data = 0.0;
};

struct Bvp3dSolution {
    LinearSolveReport report;
    std::vector<double> sigma; ///< double-layer density at the nodes
    std::vector<double> u;     ///< computed potential at the targets
};

/// Double-layer ansatz u = D[sigma], second-kind equation
/// (-1/2 + D) sigma = f with D the locally corrected Nystrom matrix at
/// order P.  GMRES (tolerance `tol`, 400 iterations, no restart) by
/// default; `use_direct` switches to dense LU (allowed up to 10k nodes).
Bvp3dSolution solve_laplace_dirichlet_3d_torus(const Bvp3dTorus& problem, int Nv,
                                               int P, WeightCache& cache,
                                               double tol = 1e-12,
                                               bool use_direct = false);

} // namespace zetaquad
