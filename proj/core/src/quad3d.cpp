#include "zetaquad/quad3d.hpp"

#include "zetaquad/util.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace zetaquad {

namespace {

constexpr double kFourPiInv = 1.0 / (4.0 * kPi);

double ipow(double x, int m) {
    double r = 1.0;
    for (int i = 0; i < m; ++i) r *= x;
    return r;
}

/// One kernel term with its graded correction recipe.
struct TermPlan {
    KernelTerm term;
    CorrectionPlan plan;
};

std::vector<TermPlan> plans_for(const OperatorSpec& spec, int P) {
    std::vector<TermPlan> out;
    for (KernelTerm t : kernel_terms(spec.op))
        out.push_back({t, correction_plan(t.p, t.q, P)});
    return out;
}

int plans_k2max(const std::vector<TermPlan>& plans) {
    int k2 = 0;
    for (const TermPlan& tp : plans)
        for (const CorrectionTerm& t : tp.plan.terms)
            k2 = std::max(k2, t.K2);
    return k2;
}

/// Full kernel value (Jacobian included, density and h^2 excluded) for
/// source j seen from target i.  For helmholtz_slp this is the real part;
/// the smooth imaginary part never goes through the corrected path.
double kernel_value(const SurfaceGrid& g, const OperatorSpec& spec, int i, int j) {
    const SurfaceSample& si = g.node[i];
    const SurfaceSample& sj = g.node[j];
    const Vec3 d = si.pos - sj.pos;
    const double r2 = d.squaredNorm();
    const double r = std::sqrt(r2);
    switch (spec.op) {
    case SurfaceOperator::laplace_slp:
        return sj.J * kFourPiInv / r;
    case SurfaceOperator::helmholtz_slp:
        return std::cos(spec.kappa * r) * sj.J * kFourPiInv / r;
    case SurfaceOperator::laplace_dlp:
        return d.dot(sj.n) * sj.J * kFourPiInv / (r2 * r);
    case SurfaceOperator::laplace_slp_normal:
        return -d.dot(si.n) * sj.J * kFourPiInv / (r2 * r);
    case SurfaceOperator::laplace_dlp_normal: {
        const double mu = d.dot(sj.n);
        const double mu0 = d.dot(si.n);
        return (si.n.dot(sj.n) / (r2 * r) - 3.0 * mu0 * mu / (r2 * r2 * r)) *
               sj.J * kFourPiInv;
    }
    }
    throw std::logic_error("kernel_value: unhandled operator");
}

/// Smooth numerator of one kernel term: r^p times the term's kernel value,
/// again with Jacobian but without density.  Finite through j == i.
double numerator_value(const SurfaceGrid& g, const OperatorSpec& spec,
                       const KernelTerm& t, int i, int j) {
    const SurfaceSample& si = g.node[i];
    const SurfaceSample& sj = g.node[j];
    const Vec3 d = si.pos - sj.pos;
    switch (spec.op) {
    case SurfaceOperator::laplace_slp:
        return sj.J * kFourPiInv;
    case SurfaceOperator::helmholtz_slp:
        return std::cos(spec.kappa * d.norm()) * sj.J * kFourPiInv;
    case SurfaceOperator::laplace_dlp:
        return d.dot(sj.n) * sj.J * kFourPiInv;
    case SurfaceOperator::laplace_slp_normal:
        return -d.dot(si.n) * sj.J * kFourPiInv;
    case SurfaceOperator::laplace_dlp_normal:
        if (t.p == 3)
            return si.n.dot(sj.n) * sj.J * kFourPiInv;
        return -3.0 * d.dot(si.n) * d.dot(sj.n) * sj.J * kFourPiInv;
    }
    throw std::logic_error("numerator_value: unhandled operator");
}

/// Resolve the node at chart offset (mu, nu) from the target, wrapping on
/// periodic charts.  The caller has already checked patch margins.
int stencil_node(const SurfaceGrid& g, int tu, int tv, int mu, int nu) {
    if (g.periodic)
        return g.idx(g.wrap_u(tu + mu), g.wrap_v(tv + nu));
    return g.idx(tu + mu, tv + nu);
}

void check_target(const SurfaceGrid& g, const std::vector<double>& sigma,
                  int target, int k2max) {
    if (sigma.size() != static_cast<std::size_t>(g.size()))
        throw std::invalid_argument("apply: sigma size != grid size");
    if (target < 0 || target >= g.size())
        throw std::invalid_argument("apply: target out of range");
    if (!g.periodic) {
        const int tu = target / g.nv, tv = target % g.nv;
        const int margin =
            std::min(std::min(tu, g.nu - 1 - tu), std::min(tv, g.nv - 1 - tv));
        if (margin < k2max + 1) {
            char buf[128];
            std::snprintf(buf, sizeof buf,
                          "apply: target needs a %d-node margin to the patch "
                          "edge, has %d",
                          k2max + 1, margin);
            throw std::invalid_argument(buf);
        }
    }
}

/// The local correction at one target: every kernel term, every graded m
/// (or just one m if `only_m` >= 0).  Powers of (r^2 - Q) are taken on the
/// h^2-scaled difference so intermediates stay O(1).
double correction_sum(const SurfaceGrid& g, const OperatorSpec& spec,
                      const std::vector<TermPlan>& plans,
                      const std::vector<double>& sigma, int target,
                      WeightCache& cache, int only_m) {
    const int tu = target / g.nv, tv = target % g.nv;
    const double h2 = g.h * g.h;
    const QuadraticForm& Q = g.node[target].I;

    CompensatedSum total;
    for (const TermPlan& tp : plans) {
        const double hp = std::pow(g.h, 2 - tp.term.p);
        for (const CorrectionTerm& ct : tp.plan.terms) {
            if (only_m >= 0 && ct.m != only_m) continue;
            const WeightSet& w =
                cache.get(tp.term.p + 2 * ct.m, Q, ct.K1, ct.K2);
            CompensatedSum acc;
            for (std::size_t k = 0; k < w.points.size(); ++k) {
                const int mu = w.points[k].mu, nu = w.points[k].nu;
                const int j = stencil_node(g, tu, tv, mu, nu);
                double val = w.tau[k] * sigma[j] *
                             numerator_value(g, spec, tp.term, target, j);
                if (ct.m > 0)
                    val *= ipow(
                        r2_minus_Q(g, target, j, mu * g.h, nu * g.h) / h2,
                        ct.m);
                acc.add(val);
            }
            total.add(ct.coef * hp * acc.value());
        }
    }
    return total.value();
}

} // namespace

std::vector<KernelTerm> kernel_terms(SurfaceOperator op) {
    switch (op) {
    case SurfaceOperator::laplace_slp:
    case SurfaceOperator::helmholtz_slp:
        return {{1, 0}};
    case SurfaceOperator::laplace_dlp:
    case SurfaceOperator::laplace_slp_normal:
        return {{3, 1}};
    case SurfaceOperator::laplace_dlp_normal:
        return {{3, 0}, {5, 2}};
    }
    throw std::logic_error("kernel_terms: unhandled operator");
}

const WeightSet& WeightCache::get(double s, const QuadraticForm& Q, int K1, int K2) {
    char key[160];
    std::snprintf(key, sizeof key, "%.12e|%.12e|%.12e|%.12e|%d|%d", s, Q.E,
                  Q.F, Q.G, K1, K2);
    auto it = cache_.find(key);
    if (it == cache_.end())
        it = cache_.emplace(key, solve_weights(s, Q, K1, K2)).first;
    return it->second;
}

double apply_operator(const SurfaceGrid& g, const OperatorSpec& spec,
                      const std::vector<double>& sigma, int target, int P,
                      WeightCache& cache) {
    const std::vector<TermPlan> plans = plans_for(spec, P);
    check_target(g, sigma, target, plans_k2max(plans));

    CompensatedSum far;
    for (int j = 0; j < g.size(); ++j) {
        if (j == target) continue;
        far.add(kernel_value(g, spec, target, j) * sigma[j]);
    }
    const double h2 = g.h * g.h;
    return h2 * far.value() +
           correction_sum(g, spec, plans, sigma, target, cache, -1);
}

double correction_term_value(const SurfaceGrid& g, const OperatorSpec& spec,
                             const std::vector<double>& sigma, int target,
                             int P, int m, WeightCache& cache) {
    if (m < 0) throw std::invalid_argument("correction_term_value: m >= 0");
    const std::vector<TermPlan> plans = plans_for(spec, P);
    check_target(g, sigma, target, plans_k2max(plans));
    return correction_sum(g, spec, plans, sigma, target, cache, m);
}

std::complex<double> apply_helmholtz_slp(const SurfaceGrid& g, double kappa,
                                         const std::vector<double>& sigma,
                                         int target, int P, WeightCache& cache) {
    OperatorSpec spec{SurfaceOperator::helmholtz_slp, kappa};
    const double re = apply_operator(g, spec, sigma, target, P, cache);

    // sin(kappa r)/(4 pi r) is smooth through r = 0 with limit kappa/(4 pi);
    // the plain trapezoid keeps the full order of the smooth part.
    const SurfaceSample& st = g.node[target];
    CompensatedSum im;
    for (int j = 0; j < g.size(); ++j) {
        if (j == target) continue;
        const SurfaceSample& sj = g.node[j];
        const double r = (st.pos - sj.pos).norm();
        im.add(std::sin(kappa * r) / r * sj.J * sigma[j]);
    }
    im.add(kappa * st.J * sigma[target]);
    const double h2 = g.h * g.h;
    return {re, h2 * kFourPiInv * im.value()};
}

Eigen::MatrixXd operator_matrix(const SurfaceGrid& g, const OperatorSpec& spec,
                                int P, WeightCache& cache) {
    if (spec.op == SurfaceOperator::helmholtz_slp)
        throw std::invalid_argument("operator_matrix: real operators only");
    const int N = g.size();
    if (N > 40000)
        throw std::invalid_argument(
            "operator_matrix: refusing to assemble a dense system beyond "
            "40000 nodes");

    const std::vector<TermPlan> plans = plans_for(spec, P);
    const int k2max = plans_k2max(plans);
    const double h2 = g.h * g.h;

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
    std::vector<double> unit(static_cast<std::size_t>(N), 0.0);
    for (int i = 0; i < N; ++i) {
        check_target(g, unit, i, k2max);
        for (int j = 0; j < N; ++j) {
            if (j == i) continue;
            A(i, j) = h2 * kernel_value(g, spec, i, j);
        }
        const int tu = i / g.nv, tv = i % g.nv;
        const QuadraticForm& Q = g.node[i].I;
        for (const TermPlan& tp : plans) {
            const double hp = std::pow(g.h, 2 - tp.term.p);
            for (const CorrectionTerm& ct : tp.plan.terms) {
                const WeightSet& w =
                    cache.get(tp.term.p + 2 * ct.m, Q, ct.K1, ct.K2);
                for (std::size_t k = 0; k < w.points.size(); ++k) {
                    const int mu = w.points[k].mu, nu = w.points[k].nu;
                    const int j = stencil_node(g, tu, tv, mu, nu);
                    double val = ct.coef * hp * w.tau[k] *
                                 numerator_value(g, spec, tp.term, i, j);
                    if (ct.m > 0)
                        val *= ipow(
                            r2_minus_Q(g, i, j, mu * g.h, nu * g.h) / h2,
                            ct.m);
                    A(i, j) += val;
                }
            }
        }
    }
    return A;
}

double eval_slp_point(const SurfaceGrid& g, const std::vector<double>& sigma,
                      const Vec3& x) {
    CompensatedSum acc;
    for (int j = 0; j < g.size(); ++j) {
        const SurfaceSample& sj = g.node[j];
        acc.add(sj.J * sigma[j] / (x - sj.pos).norm());
    }
    return g.h * g.h * kFourPiInv * acc.value();
}

double eval_dlp_point(const SurfaceGrid& g, const std::vector<double>& sigma,
                      const Vec3& x) {
    CompensatedSum acc;
    for (int j = 0; j < g.size(); ++j) {
        const SurfaceSample& sj = g.node[j];
        const Vec3 d = x - sj.pos;
        const double r = d.norm();
        acc.add(d.dot(sj.n) * sj.J * sigma[j] / (r * r * r));
    }
    return g.h * g.h * kFourPiInv * acc.value();
}

// ---------------------------------------------------------------------------
// patch references
// ---------------------------------------------------------------------------

namespace {

/// Shared polar-panel driver: integrates `f(u, v, r) * rho` over the square
/// chart in polar coordinates about the origin.  Eight angular panels split
/// at the corner directions keep R(theta) smooth per panel; radial panels
/// grade geometrically from 1e-4 R up to R to resolve the density shoulder.
template <typename F>
void polar_integrate(const PatchSurface& surf, const PolarReferenceParams& prm,
                     F&& accumulate) {
    if (prm.n_angular < 2 || prm.n_radial < 2 || prm.n_radial_panels < 2)
        throw std::invalid_argument("polar reference: degenerate panel counts");

    std::vector<double> xa, wa, xr, wr;
    gauss_legendre(prm.n_angular, xa, wa);
    gauss_legendre(prm.n_radial, xr, wr);

    const Vec3 x0 = surf.at(0.0, 0.0).pos;

    for (int pa = 0; pa < 8; ++pa) {
        const double t0 = kPi / 4.0 + pa * kPi / 4.0;
        const double t1 = t0 + kPi / 4.0;
        for (int ia = 0; ia < prm.n_angular; ++ia) {
            const double th = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * xa[ia];
            const double wth = 0.5 * (t1 - t0) * wa[ia];
            const double ct = std::cos(th), st = std::sin(th);
            const double R = 0.5 / std::max(std::abs(ct), std::abs(st));

            for (int pr = 0; pr < prm.n_radial_panels; ++pr) {
                const double r0 =
                    pr == 0 ? 0.0
                            : R * std::pow(10.0, -4.0 + 4.0 * (pr - 1) /
                                                         (prm.n_radial_panels - 1));
                const double r1 =
                    R * std::pow(10.0, -4.0 +
                                           4.0 * pr / (prm.n_radial_panels - 1));
                for (int ir = 0; ir < prm.n_radial; ++ir) {
                    const double rho =
                        0.5 * (r0 + r1) + 0.5 * (r1 - r0) * xr[ir];
                    const double wrho = 0.5 * (r1 - r0) * wr[ir];
                    const double u = rho * ct, v = rho * st;
                    const SurfaceSample s = surf.at(u, v);
                    const double r = (s.pos - x0).norm();
                    accumulate(u, v, s.J, r, rho * wth * wrho);
                }
            }
        }
    }
}

} // namespace

double patch_reference_slp(const PatchSurface& surf, const ChartDensity& density,
                           const PolarReferenceParams& prm) {
    CompensatedSum acc;
    polar_integrate(surf, prm, [&](double u, double v, double J, double r, double w) {
        acc.add(w * density(u, v) * J / r);
    });
    return kFourPiInv * acc.value();
}

std::complex<double> patch_reference_helmholtz_slp(const PatchSurface& surf,
                                                   double kappa,
                                                   const ChartDensity& density,
                                                   const PolarReferenceParams& prm) {
    CompensatedSum re, im;
    polar_integrate(surf, prm, [&](double u, double v, double J, double r, double w) {
        const double f = w * density(u, v) * J / r;
        re.add(f * std::cos(kappa * r));
        im.add(f * std::sin(kappa * r));
    });
    return {kFourPiInv * re.value(), kFourPiInv * im.value()};
}

namespace {

std::vector<double> sample_density(const SurfaceGrid& g, const ChartDensity& density) {
    std::vector<double> sigma(static_cast<std::size_t>(g.size()));
    for (int i = 0; i < g.size(); ++i)
        sigma[static_cast<std::size_t>(i)] = density(g.u[i], g.v[i]);
    return sigma;
}

} // namespace

double patch_apply(const PatchSurface& surf, const OperatorSpec& spec,
                   const ChartDensity& density, int n, int P, WeightCache& cache) {
    const SurfaceGrid g = make_patch_grid(surf, n);
    const std::vector<double> sigma = sample_density(g, density);
    return apply_operator(g, spec, sigma, g.idx(n, n), P, cache);
}

std::complex<double> patch_apply_helmholtz(const PatchSurface& surf, double kappa,
                                           const ChartDensity& density, int n,
                                           int P, WeightCache& cache) {
    const SurfaceGrid g = make_patch_grid(surf, n);
    const std::vector<double> sigma = sample_density(g, density);
    return apply_helmholtz_slp(g, kappa, sigma, g.idx(n, n), P, cache);
}

double patch_self_reference(const PatchSurface& surf, const OperatorSpec& spec,
                            const ChartDensity& density, int n, int P,
                            WeightCache& cache) {
    // Two orders up where the weight machinery allows it (partial tables cap
    // at order 12), otherwise the same order on the finer grid alone.
    int P_ref = P + 2;
    if (plans_k2max(plans_for(spec, P_ref)) > 12)
        P_ref = P;
    return patch_apply(surf, spec, density, 4 * n, P_ref, cache);
}

} // namespace zetaquad
