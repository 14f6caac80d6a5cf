#pragma once

#include "zetaquad/geom.hpp"
#include "zetaquad/momentfit.hpp"

#include <Eigen/Core>

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace zetaquad {

/// Singular surface operators handled by the locally corrected trapezoid
/// rule.  All kernels are for the 3D Laplace/Helmholtz free-space Green
/// function G = 1/(4 pi r) (e^{i kappa r} / (4 pi r) for Helmholtz).
enum class SurfaceOperator {
    laplace_slp,        ///< single layer: 1/(4 pi r)
    laplace_dlp,        ///< double layer: (x-y).n_y / (4 pi r^3)
    laplace_slp_normal, ///< target-normal derivative of the single layer
    laplace_dlp_normal, ///< target-normal derivative of the double layer (hypersingular)
    helmholtz_slp,      ///< complex single layer, kappa > 0
};

struct OperatorSpec {
    SurfaceOperator op = SurfaceOperator::laplace_slp;
    double kappa = 0.0;   ///< used by helmholtz_slp only
};

/// One 1/r^p component of an operator kernel; the numerator vanishes to
/// order 2q at the target (q per-term, not per-operator).
struct KernelTerm {
    int p = 1;
    int q = 0;
};

/// Kernel decomposition of the singular (locally corrected) part of `op`.
/// helmholtz_slp lists only its real part; the imaginary part is smooth
/// and handled by the plain trapezoid.
std::vector<KernelTerm> kernel_terms(SurfaceOperator op);

/// Memoizing store for moment-fitted weight sets, keyed on
/// (s, K1, K2, E, F, G) with the form quantized to 12 significant digits.
/// Distinct charts never collide; re-evaluating the same chart row is free.
class WeightCache {
public:
    const WeightSet& get(double s, const QuadraticForm& Q, int K1, int K2);
    std::size_t size() const { return cache_.size(); }

private:
    std::map<std::string, WeightSet> cache_;
};

/// Apply a real operator to nodal density samples at one target node.
///
/// The value is the punctured trapezoid sum over the whole grid plus the
/// moment-fitted local correction of order P: for each kernel term (p, q)
/// and each graded index m, the stencil U(K1(m), K2(m)) contributes
/// binom(-p/2, m) h^{2-p-2m} sum tau (r^2 - Q)^m phi at the neighbor nodes.
///
/// On a patch grid the target must keep a margin of K2_max + 1 nodes to
/// every edge (std::invalid_argument otherwise); torus grids wrap.
double apply_operator(const SurfaceGrid& g, const OperatorSpec& spec,
                      const std::vector<double>& sigma, int target, int P,
                      WeightCache& cache);

/// Diagnostic: the graded m-term of the local correction alone, summed over
/// kernel terms whose plan carries that m, exactly as apply_operator adds
/// it.  Zero when no plan includes m.  Used to verify the per-term h-scaling
/// and that curvature terms (m >= 1) die on flat charts.
double correction_term_value(const SurfaceGrid& g, const OperatorSpec& spec,
                             const std::vector<double>& sigma, int target, int P,
                             int m, WeightCache& cache);

/// Complex Helmholtz single layer at one target: corrected real part plus
/// smooth imaginary part (plain trapezoid with the sinc diagonal limit
/// kappa J sigma h^2 / (4 pi)).
std::complex<double> apply_helmholtz_slp(const SurfaceGrid& g, double kappa,
                                         const std::vector<double>& sigma,
                                         int target, int P, WeightCache& cache);

/// Dense Nystrom matrix of a real operator: row i gives the corrected rule
/// at target i as a linear functional of nodal densities.
Eigen::MatrixXd operator_matrix(const SurfaceGrid& g, const OperatorSpec& spec,
                                int P, WeightCache& cache);

/// Off-surface potential evaluation (smooth kernels, plain trapezoid).
double eval_slp_point(const SurfaceGrid& g, const std::vector<double>& sigma, const Vec3& x);
double eval_dlp_point(const SurfaceGrid& g, const std::vector<double>& sigma, const Vec3& x);

using ChartDensity = std::function<double(double, double)>;

/// Adaptive polar-coordinate reference value for single-layer-type patch
/// integrals (p = 1 kernels: laplace_slp and both Helmholtz parts).  The
/// chart integral over [-1/2, 1/2]^2 is computed in polar coordinates
/// around the center target — the integrand is smooth there — with
/// Gauss-Legendre panels: 8 angular panels split at the square's corner
/// directions, and geometrically graded radial panels per angular node.
struct PolarReferenceParams {
    int n_angular = 32;       ///< GL nodes per angular panel
    int n_radial = 16;        ///< GL nodes per radial panel
    int n_radial_panels = 12; ///< graded panels between 1e-4 R and R
};

double patch_reference_slp(const PatchSurface& surf, const ChartDensity& density,
                           const PolarReferenceParams& prm = {});
std::complex<double> patch_reference_helmholtz_slp(const PatchSurface& surf, double kappa,
                                                   const ChartDensity& density,
                                                   const PolarReferenceParams& prm = {});

/// Self-reference for operators without a polar-integrable kernel: the same
/// operator evaluated on the 4x refined grid at order P + 2.
double patch_self_reference(const PatchSurface& surf, const OperatorSpec& spec,
                            const ChartDensity& density, int n, int P,
                            WeightCache& cache);

/// Corrected-rule value at the center of a patch grid sampled from `density`.
double patch_apply(const PatchSurface& surf, const OperatorSpec& spec,
                   const ChartDensity& density, int n, int P, WeightCache& cache);
std::complex<double> patch_apply_helmholtz(const PatchSurface& surf, double kappa,
                                           const ChartDensity& density, int n, int P,
                                           WeightCache& cache);

} // namespace zetaquad
