// Command-line harness for the zetaquad library.
//
// Each subcommand drives one verification experiment end to end and writes
// a CSV report: `sample` rows carry raw measurements, `fit` rows carry a
// least-squares convergence order for the preceding series, and `check`
// rows carry a single pass/fail gate with its tolerance.  The process exits
// 0 when every gate passed, 1 on usage errors, and 2 on numerical failure
// (a failed gate or an exception, which is reported as a trailing `error`
// row).
//
// All numbers are printed with %.16e, and a fixed configuration reproduces
// a byte-identical report; the only exception is the `seconds` column of
// the solver subcommands, which can be pinned to zero with --timing 0.

#include "zetaquad/bie.hpp"
#include "zetaquad/epstein.hpp"
#include "zetaquad/geom.hpp"
#include "zetaquad/momentfit.hpp"
#include "zetaquad/quad1d.hpp"
#include "zetaquad/quad3d.hpp"
#include "zetaquad/util.hpp"
#include "zetaquad/wigner.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace zetaquad;

namespace {

// ---------------------------------------------------------------------------
// CSV plumbing
// ---------------------------------------------------------------------------

std::string num(double x) { return fmt_sci(x); }
std::string num(int x) { return std::to_string(x); }

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void header(const std::vector<std::string>& cols) {
        width_ = cols.size();
        line(cols);
    }
    void row(const std::vector<std::string>& cells) {
        if (cells.size() != width_)
            throw std::logic_error("csv row width mismatch");
        line(cells);
    }

private:
    void line(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << ',';
            os_ << cells[i];
        }
        os_ << '\n';
    }

    std::ostream& os_;
    std::size_t width_ = 0;
};

/// Aggregates gate outcomes; `add` returns the status cell for the row.
struct Verdict {
    bool ok = true;
    std::string add(bool pass) {
        if (!pass) ok = false;
        return pass ? "pass" : "fail";
    }
};

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

// ---------------------------------------------------------------------------
// shared test fixtures
// ---------------------------------------------------------------------------

/// Random quartic graph patch: coefficients c_ij for 1 <= i+j <= 4 are
/// amp-scaled standard normals drawn in row-major (i, j) order from a
/// SplitMix64-seeded Box-Muller stream, so one (seed, amp) pair names the
/// same surface on every platform.
PatchSurface random_quartic_patch(std::uint64_t seed, double amp) {
    SplitMix64 rng(seed);
    double c[5][5] = {};
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            if (i + j >= 1 && i + j <= 4) c[i][j] = amp * rng.next_normal();
    return PatchSurface(c);
}

PatchSurface flat_patch() {
    double c[5][5] = {};
    return PatchSurface(c);
}

const std::map<std::string, SurfaceOperator> kOpNames = {
    {"slp", SurfaceOperator::laplace_slp},
    {"dlp", SurfaceOperator::laplace_dlp},
    {"slpn", SurfaceOperator::laplace_slp_normal},
    {"dlpn", SurfaceOperator::laplace_dlp_normal},
};

/// Exterior charge set and on-tube target points for the torus problems.
/// The targets sit on the tube center circle, as far from the surface as
/// an interior point can be, so that the plain-trapezoid potential
/// evaluation stays far below the solve error on every tested grid.
std::vector<Charge3d> torus_charges() {
    return {{Vec3(2.2, 0.7, 0.5), 1.0},
            {Vec3(-2.0, 1.0, -0.4), -0.6},
            {Vec3(0.3, -2.3, 0.6), 0.8}};
}
std::vector<Vec3> torus_targets() {
    return {Vec3(1.0, 0.0, 0.0),
            Vec3(-0.5, 0.8660254037844386, 0.0),
            Vec3(-0.5, -0.8660254037844386, 0.0)};
}

// ---------------------------------------------------------------------------
// epstein-check
// ---------------------------------------------------------------------------

struct EpsteinCfg {
    std::string mode = "all";
    int radius = 2000;
    double tol_brute = 1e-10;
    double tol_feq = 1e-10;
    double tol_fd = 1e-5;
    double tol_euler = 1e-9;
};

/// Direct lattice sum of Q(i,j)^{-s/2} over 0 < |i|_inf <= R plus the
/// exact integral over |x|_inf > R + 1/2, which cancels the truncated
/// tail to far below 1e-10 at R = 2000.  Central symmetry halves the sum.
double brute_epstein(double s, const QuadraticForm& Q, int R) {
    auto term = [s](double q) {
        if (s == 3.0) return 1.0 / (q * std::sqrt(q));
        if (s == 4.0) return 1.0 / (q * q);
        if (s == 5.0) return 1.0 / (q * q * std::sqrt(q));
        return std::pow(q, -0.5 * s);
    };
    CompensatedSum half;
    for (int i = 1; i <= R; ++i)
        for (int j = -R; j <= R; ++j)
            half.add(term(Q(i, j)));
    for (int j = 1; j <= R; ++j)
        half.add(term(Q(0, j)));

    // integral over the exterior of the square, radially exact and with
    // 8 angular Gauss-Legendre panels split at the corner directions
    double p = 2.0 - s;
    double edge = R + 0.5;
    std::vector<double> xg, wg;
    gauss_legendre(48, xg, wg);
    CompensatedSum tail;
    for (int pan = 0; pan < 8; ++pan) {
        double t0 = pan * kPi / 4.0, t1 = t0 + kPi / 4.0;
        for (std::size_t k = 0; k < xg.size(); ++k) {
            double th = 0.5 * (t1 - t0) * xg[k] + 0.5 * (t0 + t1);
            double c = std::cos(th), sn = std::sin(th);
            double rth = edge / std::max(std::abs(c), std::abs(sn));
            tail.add(0.5 * (t1 - t0) * wg[k] * std::pow(Q(c, sn), -0.5 * s) *
                     std::pow(rth, p) / (-p));
        }
    }
    return 2.0 * half.value() + tail.value();
}

bool run_epstein(const EpsteinCfg& cfg, std::ostream& os) {
    CsvWriter csv(os);
    Verdict verdict;
    csv.header({"kind", "check", "s", "E", "F", "G", "k", "value",
                "reference", "diff", "tol", "status"});

    const std::vector<QuadraticForm> forms = {{1.0, 0.0, 1.0}, {2.0, 0.3, 1.5}};
    bool all = cfg.mode == "all";

    if (all || cfg.mode == "brute") {
        for (const QuadraticForm& Q : forms) {
            for (double s : {3.0, 4.0, 5.0}) {
                double z = epstein_zeta(s, Q);
                double b = brute_epstein(s, Q, cfg.radius);
                double diff = std::abs(z - b);
                csv.row({"sample", "brute", num(s), num(Q.E), num(Q.F), num(Q.G),
                         "0", num(z), num(b), num(diff), num(cfg.tol_brute),
                         verdict.add(diff <= cfg.tol_brute)});
            }
        }
    }

    if (all || cfg.mode == "functional") {
        // det = 1 form; the completed function pi^{-s/2} Gamma(s/2) Z(s)
        // is invariant under s -> 2 - s
        QuadraticForm Q{1.25, 0.5, (1.0 + 0.25) / 1.25};
        auto completed = [&Q](double s) {
            return std::pow(kPi, -0.5 * s) * std::tgamma(0.5 * s) *
                   epstein_zeta(s, Q);
        };
        for (double s : {0.5, 1.0, 1.5, 3.0}) {
            double lhs = completed(s);
            double rhs = completed(2.0 - s);
            double diff = std::abs(lhs - rhs) / std::abs(rhs);
            csv.row({"sample", "functional", num(s), num(Q.E), num(Q.F),
                     num(Q.G), "0", num(lhs), num(rhs), num(diff),
                     num(cfg.tol_feq), verdict.add(diff <= cfg.tol_feq)});
        }
    }

    if (all || cfg.mode == "derivatives") {
        QuadraticForm Q{2.0, 0.3, 1.5};
        FormDirection dir{0.7, -0.4, 1.1};
        double s = 3.0, eps = 1e-4;
        auto zf = [&](double t) {
            return epstein_zeta(s, {Q.E + dir.L * t, Q.F + dir.M * t,
                                    Q.G + dir.N * t});
        };
        std::vector<double> d = epstein_derivatives(s, Q, dir, 2);
        double fd1 = (zf(eps) - zf(-eps)) / (2.0 * eps);
        double fd2 = (zf(eps) - 2.0 * zf(0.0) + zf(-eps)) / (eps * eps);
        double r1 = std::abs(d[1] - fd1) / std::abs(fd1);
        double r2 = std::abs(d[2] - fd2) / std::abs(fd2);
        csv.row({"sample", "finite-difference", num(s), num(Q.E), num(Q.F),
                 num(Q.G), "1", num(d[1]), num(fd1), num(r1), num(cfg.tol_fd),
                 verdict.add(r1 <= cfg.tol_fd)});
        csv.row({"sample", "finite-difference", num(s), num(Q.E), num(Q.F),
                 num(Q.G), "2", num(d[2]), num(fd2), num(r2), num(cfg.tol_fd),
                 verdict.add(r2 <= cfg.tol_fd)});

        // homogeneity: the (E,F,G)-weighted derivative equals -(s/2) Z
        for (const QuadraticForm& Qh : forms) {
            for (double sh : {1.5, 3.0}) {
                FormDirection along{Qh.E, Qh.F, Qh.G};
                std::vector<double> dh = epstein_derivatives(sh, Qh, along, 1);
                double ref = -0.5 * sh * dh[0];
                double resid = std::abs(dh[1] - ref) / std::max(1.0, std::abs(dh[0]));
                csv.row({"sample", "euler", num(sh), num(Qh.E), num(Qh.F),
                         num(Qh.G), "1", num(dh[1]), num(ref), num(resid),
                         num(cfg.tol_euler), verdict.add(resid <= cfg.tol_euler)});
            }
        }
    }

    return verdict.ok;
}

// ---------------------------------------------------------------------------
// wigner-check
// ---------------------------------------------------------------------------

struct WignerCfg {
    double s = 1.0;
    double tol = 1e-6;
};

bool run_wigner(const WignerCfg& cfg, std::ostream& os) {
    CsvWriter csv(os);
    Verdict verdict;
    csv.header({"kind", "check", "s", "E", "F", "G", "a", "b", "value",
                "reference", "diff", "tol", "status"});

    const std::vector<QuadraticForm> forms = {{1.0, 0.0, 1.0}, {2.0, 0.3, 1.5}};
    const std::vector<std::pair<int, int>> even = {{0, 0}, {2, 0}, {1, 1}, {0, 2}};
    const std::vector<std::pair<int, int>> odd = {{1, 0}, {0, 1}, {2, 1}, {1, 2}};

    for (const QuadraticForm& Q : forms) {
        for (auto [a, b] : even) {
            double lim = wigner_limit(cfg.s, Q, a, b);
            double ora = wigner_oracle(cfg.s, Q, a, b);
            double diff = std::abs(lim - ora);
            csv.row({"sample", "moment", num(cfg.s), num(Q.E), num(Q.F),
                     num(Q.G), num(a), num(b), num(lim), num(ora), num(diff),
                     num(cfg.tol), verdict.add(diff <= cfg.tol)});
        }
        for (auto [a, b] : odd) {
            double lim = wigner_limit(cfg.s, Q, a, b);
            csv.row({"sample", "odd-degree", num(cfg.s), num(Q.E), num(Q.F),
                     num(Q.G), num(a), num(b), num(lim), num(0.0),
                     num(std::abs(lim)), num(0.0), verdict.add(lim == 0.0)});
        }
    }

    return verdict.ok;
}

// ---------------------------------------------------------------------------
// conv1d
// ---------------------------------------------------------------------------

struct Conv1dCfg {
    double tol_m8 = 1e-10;   // absolute error at the n = 512 gate
    double tol_alt = 1e-12;  // absolute error at the n = 256 gate
};

/// Period-1 test integrand with a second-order pole at 0 and finite-part
/// integral exactly zero: f(x) = pi^2 / sin^2(pi x) = phi(x) / x^2 with
/// phi(x) = (pi x / sin(pi x))^2.
double csc2_f(double x) {
    double s = std::sin(kPi * x);
    return kPi * kPi / (s * s);
}
double csc2_phi(double x) {
    if (x == 0.0) return 1.0;
    double r = kPi * x / std::sin(kPi * x);
    return r * r;
}

bool run_conv1d(const Conv1dCfg& cfg, std::ostream& os) {
    CsvWriter csv(os);
    Verdict verdict;
    csv.header({"kind", "series", "M", "n", "h", "value", "abs_error",
                "order", "tol", "status"});

    auto f = [](double x) { return csc2_f(x); };
    auto phi = [](double x) { return csc2_phi(x); };
    const double a = 0.5;

    auto run_central = [&](int M, const std::vector<int>& ladder, bool fit) {
        std::string series = "central-M" + std::to_string(M);
        std::vector<double> hs, errs;
        double last = 0.0;
        for (int n : ladder) {
            double v = finite_part_central(f, phi, a, n, M);
            hs.push_back(a / n);
            errs.push_back(std::abs(v));
            last = v;
            csv.row({"sample", series, num(M), num(n), num(a / n), num(v),
                     num(std::abs(v)), "", "", ""});
        }
        if (fit) {
            double want = 2.0 * M + 0.5;
            OrderFit of = fit_order(hs, errs);
            csv.row({"fit", series, num(M), "", "", "", "", num(of.order),
                     num(want), verdict.add(of.order >= want)});
        }
        return last;
    };

    run_central(2, {16, 24, 32, 48, 64}, true);
    run_central(4, {8, 12, 16, 24}, true);
    double v8 = run_central(8, {12, 16, 24, 32, 48, 64, 96, 128, 192, 256,
                                384, 512},
                            false);
    csv.row({"check", "central-M8", "8", "512", num(a / 512.0), num(v8),
             num(std::abs(v8)), "", num(cfg.tol_m8),
             verdict.add(std::abs(v8) <= cfg.tol_m8)});

    double valt = 0.0;
    for (int n : {8, 16, 32, 64, 128, 256}) {
        valt = finite_part_alternating(f, phi(0.0), a, n);
        csv.row({"sample", "alternating", "", num(n), num(a / n), num(valt),
                 num(std::abs(valt)), "", "", ""});
    }
    csv.row({"check", "alternating", "", "256", num(a / 256.0), num(valt),
             num(std::abs(valt)), "", num(cfg.tol_alt),
             verdict.add(std::abs(valt) <= cfg.tol_alt)});

    return verdict.ok;
}

// ---------------------------------------------------------------------------
// conv3d-patch
// ---------------------------------------------------------------------------

struct PatchCfg {
    std::string mode = "convergence";
    std::string suite = "acceptance";   // or "full": adds the top-order rows
    std::uint64_t seed = 4;             // frozen random patch
    double amp = 2.0;
    double bump_a = 0.22;
    double bump_b = -0.018;
    double window = 0.6;                // allowed |fitted - expected| order gap
    double tol_moments = 1e-9;
    // single-series override (used by parameter scans)
    std::string op;
    int P = 0;
    double kappa = 2.0;
    std::vector<int> ladder;
    std::string dump_nodes;
};

struct PatchSeries {
    std::string op;
    int P;
    std::vector<int> ladder;
};

/// Frozen resolution ladders for the convergence suite on the default
/// (seed, amp) patch.  Each window was picked by a parameter scan so that
/// all four rungs show the asymptotic slope while staying well above the
/// error floor set by the density's edge truncation; the finest rung keeps
/// every grid, including the 4x self-reference, at or below 249^2 nodes.
std::vector<PatchSeries> patch_suite(const std::string& suite) {
    std::vector<PatchSeries> s = {
        {"slp", 3, {20, 24, 28, 31}},
        {"slp", 5, {11, 12, 14, 16}},
        {"slp", 7, {11, 12, 14, 16}},
        {"dlp", 3, {20, 24, 28, 31}},
        {"dlp", 5, {18, 20, 24, 28}},
        {"dlp", 7, {14, 16, 18, 20}},
        {"slpn", 3, {20, 24, 28, 31}},
        {"slpn", 5, {11, 12, 14, 16}},
        {"slpn", 7, {14, 16, 18, 20}},
        {"dlpn", 1, {20, 24, 28, 31}},
        {"dlpn", 3, {8, 9, 10, 11}},
        {"dlpn", 5, {11, 12, 14, 16}},
    };
    if (suite == "full") {
        s.push_back({"slp", 9, {16, 18, 20, 24}});
        s.push_back({"dlp", 9, {18, 19, 20, 22}});
        s.push_back({"slpn", 9, {16, 18, 20, 24}});
        s.push_back({"dlpn", 7, {16, 18, 20, 24}});
    }
    return s;
}

void run_patch_series(const PatchCfg& cfg, const PatchSurface& surf,
                      const ChartDensity& den, const PatchSeries& series,
                      CsvWriter& csv, Verdict& verdict, WeightCache& cache) {
    bool helm = series.op == "helm";
    SurfaceOperator op =
        helm ? SurfaceOperator::helmholtz_slp : kOpNames.at(series.op);
    OperatorSpec spec{op, helm ? cfg.kappa : 0.0};

    double slp_ref = 0.0;
    std::complex<double> helm_ref;
    bool polar = op == SurfaceOperator::laplace_slp || helm;
    if (op == SurfaceOperator::laplace_slp)
        slp_ref = patch_reference_slp(surf, den);
    else if (helm)
        helm_ref = patch_reference_helmholtz_slp(surf, cfg.kappa, den);

    std::string name = series.op + "-P" + std::to_string(series.P);
    std::vector<double> hs, errs;
    for (int n : series.ladder) {
        double ref, err;
        std::string value;
        if (helm) {
            std::complex<double> v =
                patch_apply_helmholtz(surf, cfg.kappa, den, n, series.P, cache);
            err = std::abs(v - helm_ref);
            ref = helm_ref.real();
            value = num(v.real());
        } else {
            double v = patch_apply(surf, spec, den, n, series.P, cache);
            ref = polar ? slp_ref
                        : patch_self_reference(surf, spec, den, n, series.P,
                                               cache);
            err = std::abs(v - ref);
            value = num(v);
        }
        hs.push_back(0.5 / n);
        errs.push_back(err);
        csv.row({"sample", "convergence", name, series.op,
                 num(series.P), num(n), num(0.5 / n), value, num(ref),
                 num(err), "", ""});
    }
    OrderFit of = fit_order(hs, errs);
    double expected = series.P;
    double gap = std::abs(of.order - expected);
    csv.row({"fit", "convergence", name, series.op, num(series.P), "", "",
             num(of.order), num(expected), num(gap), num(cfg.window),
             verdict.add(gap <= cfg.window)});
}

void run_patch_moments(const PatchCfg& cfg, const PatchSurface& surf,
                       CsvWriter& csv, Verdict& verdict) {
    // every correction plan the operator set can request up to order 9,
    // solved on the unit form and on the patch's own center form
    QuadraticForm unit{1.0, 0.0, 1.0};
    QuadraticForm center = surf.at(0.0, 0.0).I;
    const std::vector<std::pair<int, int>> kernels = {
        {1, 0}, {3, 1}, {3, 0}, {5, 2}};

    WeightCache cache;
    for (auto [p, q] : kernels) {
        for (int P = 1; P <= 9; ++P) {
            CorrectionPlan plan = correction_plan(p, q, P);
            for (const CorrectionTerm& t : plan.terms) {
                for (int which = 0; which < 2; ++which) {
                    const QuadraticForm& Q = which ? center : unit;
                    const WeightSet& w =
                        cache.get(p + 2 * t.m, Q, t.K1, t.K2);
                    std::string series = "p" + std::to_string(p) + "q" +
                                         std::to_string(q) + "P" +
                                         std::to_string(P) + "m" +
                                         std::to_string(t.m);
                    csv.row({"sample", "moments", series,
                             which ? "patch" : "unit", num(P),
                             num(static_cast<int>(w.points.size())), "",
                             num(w.max_scaled_residual), "", "",
                             num(cfg.tol_moments),
                             verdict.add(w.max_scaled_residual <=
                                         cfg.tol_moments)});
                }
            }
        }
    }

    csv.row({"check", "moments", "stencil-size-U01", "", "", num(stencil_size(0, 1)),
             "", num(9.0), num(9.0), num(0.0), num(0.0),
             verdict.add(stencil_size(0, 1) == 9)});
    csv.row({"check", "moments", "stencil-size-U03", "", "", num(stencil_size(0, 3)),
             "", num(37.0), num(37.0), num(0.0), num(0.0),
             verdict.add(stencil_size(0, 3) == 37)});
}

void run_patch_gates(const PatchCfg& cfg, const PatchSurface& surf,
                     const ChartDensity& den, CsvWriter& csv,
                     Verdict& verdict) {
    // 1. kappa = 0 reduces the Helmholtz single layer to the Laplace one
    //    exactly (identical arithmetic), with identically zero imaginary part
    {
        WeightCache cache;
        int n = 12, P = 5;
        double lap = patch_apply(surf, {SurfaceOperator::laplace_slp, 0.0},
                                 den, n, P, cache);
        std::complex<double> h =
            patch_apply_helmholtz(surf, 0.0, den, n, P, cache);
        double dre = std::abs(h.real() - lap);
        csv.row({"check", "gates", "helm-kappa0-real", "helm", num(P), num(n),
                 "", num(h.real()), num(lap), num(dre), num(0.0),
                 verdict.add(dre == 0.0)});
        csv.row({"check", "gates", "helm-kappa0-imag", "helm", num(P), num(n),
                 "", num(h.imag()), num(0.0), num(std::abs(h.imag())),
                 num(0.0), verdict.add(h.imag() == 0.0)});
    }

    // 2. on a flat patch every curvature correction (m >= 1) vanishes
    //    identically: r^2 equals the chart form exactly
    {
        PatchSurface flat = flat_patch();
        WeightCache cache;
        SurfaceGrid g = make_patch_grid(flat, 12);
        std::vector<double> sig(g.size());
        for (int k = 0; k < g.size(); ++k) sig[k] = den(g.u[k], g.v[k]);
        int target = g.idx(12, 12);
        for (auto [opname, P, mmax] :
             {std::tuple<const char*, int, int>{"slp", 7, 4},
              std::tuple<const char*, int, int>{"dlpn", 5, 4}}) {
            OperatorSpec spec{kOpNames.at(opname), 0.0};
            for (int m = 1; m <= mmax; ++m) {
                double v = correction_term_value(g, spec, sig, target, P, m,
                                                 cache);
                csv.row({"check", "gates",
                         std::string("flat-m") + std::to_string(m), opname,
                         num(P), num(12), "", num(v), num(0.0),
                         num(std::abs(v)), num(0.0), verdict.add(v == 0.0)});
            }
        }
    }

    // 3. the hypersingular operator annihilates constants on a closed
    //    surface, converging at the nominal order
    {
        TorusSurface torus(1.0, 0.3);
        const std::map<int, std::vector<int>> ladders = {
            {3, {8, 12, 16, 24, 32}}, {5, {48, 64, 96, 128, 192}}};
        for (const auto& [P, ladder] : ladders) {
            WeightCache cache;
            std::vector<double> hs, errs;
            for (int Nv : ladder) {
                SurfaceGrid g = make_torus_grid(torus, Nv);
                std::vector<double> one(g.size(), 1.0);
                double v = apply_operator(
                    g, {SurfaceOperator::laplace_dlp_normal, 0.0}, one,
                    g.idx(0, 0), P, cache);
                hs.push_back(g.h);
                errs.push_back(std::abs(v));
                csv.row({"sample", "gates", "dlpn-const-P" + std::to_string(P),
                         "dlpn", num(P), num(Nv), num(g.h), num(v),
                         num(0.0), num(std::abs(v)), "", ""});
            }
            OrderFit of = fit_order(hs, errs);
            double gap = std::abs(of.order - P);
            csv.row({"fit", "gates", "dlpn-const-P" + std::to_string(P),
                     "dlpn", num(P), "", "", num(of.order), num(double(P)),
                     num(gap), num(cfg.window), verdict.add(gap <= cfg.window)});
        }
    }
}

bool run_patch(const PatchCfg& cfg, std::ostream& os) {
    CsvWriter csv(os);
    Verdict verdict;
    csv.header({"kind", "mode", "series", "op", "P", "n", "h", "value",
                "reference", "error", "tol", "status"});

    PatchSurface surf = random_quartic_patch(cfg.seed, cfg.amp);
    BumpDensity bump{cfg.bump_a, cfg.bump_b};
    ChartDensity den = [bump](double u, double v) { return bump(u, v); };

    if (!cfg.dump_nodes.empty()) {
        std::ofstream nf(cfg.dump_nodes);
        if (!nf) throw std::runtime_error("cannot open " + cfg.dump_nodes);
        write_node_table(make_patch_grid(surf, 16), nf);
    }

    if (cfg.mode == "moments") {
        run_patch_moments(cfg, surf, csv, verdict);
        return verdict.ok;
    }
    if (cfg.mode == "gates") {
        run_patch_gates(cfg, surf, den, csv, verdict);
        return verdict.ok;
    }

    WeightCache cache;
    if (!cfg.op.empty()) {
        if (cfg.P <= 0 || cfg.ladder.empty())
            throw std::runtime_error("--op needs --order and --ladder");
        run_patch_series(cfg, surf, den, {cfg.op, cfg.P, cfg.ladder}, csv,
                         verdict, cache);
        return verdict.ok;
    }

    for (const PatchSeries& series : patch_suite(cfg.suite))
        run_patch_series(cfg, surf, den, series, csv, verdict, cache);
    return verdict.ok;
}

// ---------------------------------------------------------------------------
// green-identity-torus
// ---------------------------------------------------------------------------

struct GreenCfg {
    std::string check = "green";
    std::vector<int> orders = {3, 5};
    double window = 0.6;
};

bool run_green(const GreenCfg& cfg, std::ostream& os) {
    CsvWriter csv(os);
    Verdict verdict;
    csv.header({"kind", "check", "P", "Nv", "h", "value", "reference",
                "error", "order", "tol", "status"});

    if (cfg.check == "green") {
        // interior Green representation on a wobbly torus: for u harmonic
        // inside, u/2 - S[du/dn] + D[u] vanishes on the surface; probe a
        // fixed set of chart nodes and track the worst residual
        TorusSurface surf(1.0, 0.3, 0.2, 3);
        std::vector<Charge3d> charges{{Vec3(2.0, 0.6, 0.4), 1.0},
                                      {Vec3(-1.8, 0.9, -0.3), -0.6},
                                      {Vec3(0.2, -2.1, 0.5), 0.8}};
        for (int P : cfg.orders) {
            WeightCache cache;
            std::vector<double> hs, errs;
            for (int Nv : {8, 12, 16, 24, 32}) {
                SurfaceGrid g = make_torus_grid(surf, Nv);
                std::vector<double> u(g.size()), un(g.size());
                for (int i = 0; i < g.size(); ++i) {
                    u[i] = charge_potential_3d(charges, g.node[i].pos);
                    un[i] = charge_normal_derivative_3d(charges, g.node[i].pos,
                                                        g.node[i].n);
                }
                double worst = 0.0;
                for (int iu : {0, g.nu / 3}) {
                    for (int iv : {0, g.nv / 3, g.nv / 2}) {
                        int tgt = g.idx(iu, iv);
                        double S = apply_operator(
                            g, {SurfaceOperator::laplace_slp, 0.0}, un, tgt, P,
                            cache);
                        double D = apply_operator(
                            g, {SurfaceOperator::laplace_dlp, 0.0}, u, tgt, P,
                            cache);
                        worst = std::max(worst,
                                         std::abs(0.5 * u[tgt] - S + D));
                    }
                }
                hs.push_back(g.h);
                errs.push_back(worst);
                csv.row({"sample", "green", num(P), num(Nv), num(g.h),
                         num(worst), num(0.0), num(worst), "", "", ""});
            }
            OrderFit of = fit_order(hs, errs);
            double gap = std::abs(of.order - P);
            csv.row({"fit", "green", num(P), "", "", "", "", "",
                     num(of.order), num(cfg.window),
                     verdict.add(gap <= cfg.window)});
        }
        return verdict.ok;
    }

    // gauss: the double layer of a constant density is -1/2 on the surface
    TorusSurface torus(1.0, 0.3);
    const std::map<int, std::vector<int>> ladders = {
        {3, {8, 12, 16, 24, 32}}, {5, {24, 32, 48, 64, 96}}};
    for (int P : cfg.orders) {
        WeightCache cache;
        std::vector<double> hs, errs;
        for (int Nv : ladders.at(P)) {
            SurfaceGrid g = make_torus_grid(torus, Nv);
            std::vector<double> one(g.size(), 1.0);
            double v = apply_operator(g, {SurfaceOperator::laplace_dlp, 0.0},
                                      one, g.idx(0, 0), P, cache);
            hs.push_back(g.h);
            errs.push_back(std::abs(v + 0.5));
            csv.row({"sample", "gauss", num(P), num(Nv), num(g.h), num(v),
                     num(-0.5), num(std::abs(v + 0.5)), "", "", ""});
        }
        OrderFit of = fit_order(hs, errs);
        double gap = std::abs(of.order - P);
        csv.row({"fit", "gauss", num(P), "", "", "", "", "", num(of.order),
                 num(cfg.window), verdict.add(gap <= cfg.window)});
    }
    return verdict.ok;
}

// ---------------------------------------------------------------------------
// solve-bvp2d
// ---------------------------------------------------------------------------

struct Bvp2dCfg {
    std::string side = "both";
    std::string variant = "both";
    int M = 8;
    std::vector<int> ladder = {64, 96, 128, 192, 256};
    double tol_err = 1e-10;   // target error floor that must be reached
    double tol_flux = 1e-8;   // exterior flux recovery at the finest grid
    bool timing = true;
};

bool run_bvp2d(const Bvp2dCfg& cfg, std::ostream& os) {
    CsvWriter csv(os);
    Verdict verdict;
    csv.header({"kind", "side", "variant", "M", "N", "h", "max_rel_err",
                "residual", "flux_err", "seconds", "tol", "status"});

    Curve2D wobbly = Curve2D::star({0.15, 0.0, 0.1, 0.05});

    std::vector<std::string> sides;
    if (cfg.side == "both") sides = {"interior", "exterior"};
    else sides = {cfg.side};
    std::vector<std::string> variants;
    if (cfg.variant == "both") variants = {"central", "alternating"};
    else variants = {cfg.variant};

    for (const std::string& side : sides) {
        Bvp2d prob{wobbly, BvpSide::interior, {}, {}, 0.0};
        double flux_expected = 0.0;
        if (side == "interior") {
            // exterior charges, interior targets; net interior flux is zero
            prob.charges = {{Vec2(2.1, 1.3), 1.0},
                            {Vec2(-1.9, 0.4), -0.7},
                            {Vec2(0.3, -2.2), 0.4}};
            prob.targets = {Vec2(0.1, 0.2), Vec2(-0.3, 0.1),
                            Vec2(0.05, -0.25)};
        } else {
            prob.side = BvpSide::exterior;
            prob.charges = {{Vec2(0.3, 0.1), 1.0},
                            {Vec2(-0.25, 0.2), -0.6},
                            {Vec2(0.1, -0.3), 0.4}};
            prob.targets = {Vec2(2.2, 1.1), Vec2(-1.9, 1.6),
                            Vec2(0.6, -2.4)};
            for (const Charge2d& c : prob.charges) flux_expected -= c.q;
        }

        for (const std::string& variant : variants) {
            GridVariant gv = variant == "central" ? GridVariant::central
                                                  : GridVariant::alternating;
            double best = 1.0;
            int best_n = 0;
            double flux_err_fine = 0.0;
            for (int N : cfg.ladder) {
                Bvp2dSolution sol =
                    solve_laplace_dirichlet_2d(prob, N, cfg.M, gv);
                double ferr = std::abs(sol.flux - flux_expected);
                if (sol.report.max_rel_error < best) {
                    best = sol.report.max_rel_error;
                    best_n = N;
                }
                flux_err_fine = ferr;
                csv.row({"sample", side, variant, num(cfg.M), num(N),
                         num(kTwoPi / N), num(sol.report.max_rel_error),
                         num(sol.report.residual), num(ferr),
                         num(cfg.timing ? sol.report.seconds : 0.0), "", ""});
            }
            csv.row({"check", side, variant, num(cfg.M), num(best_n), "",
                     num(best), "", "", "", num(cfg.tol_err),
                     verdict.add(best <= cfg.tol_err && best_n <= 800)});
            csv.row({"check", side, variant + "-flux", num(cfg.M),
                     num(cfg.ladder.back()), "", "", "", num(flux_err_fine),
                     "", num(cfg.tol_flux),
                     verdict.add(flux_err_fine <= cfg.tol_flux)});
        }
    }
    return verdict.ok;
}

// ---------------------------------------------------------------------------
// solve-bvp3d
// ---------------------------------------------------------------------------

struct Bvp3dCfg {
    std::vector<int> orders = {3, 5};
    std::vector<int> ladder;        // only with a single --order
    double gmres_tol = 1e-12;
    bool direct = false;
    double window = 0.6;
    double iter_growth = 0.2;       // allowed GMRES growth over a 4x node jump
    bool timing = true;
};

bool run_bvp3d(const Bvp3dCfg& cfg, std::ostream& os) {
    CsvWriter csv(os);
    Verdict verdict;
    csv.header({"kind", "check", "P", "Nv", "N", "h", "max_rel_err", "iters",
                "residual", "seconds", "order", "tol", "status"});

    Bvp3dTorus prob{TorusSurface(1.0, 0.3, 0.2, 3), torus_charges(),
                    torus_targets()};
    const std::map<int, std::vector<int>> default_ladders = {
        {3, {12, 16, 24, 32}}, {5, {16, 24, 32, 48}}};

    for (int P : cfg.orders) {
        std::vector<int> ladder = cfg.ladder;
        if (ladder.empty()) ladder = default_ladders.at(P);
        WeightCache cache;
        std::vector<double> hs, errs;
        std::map<int, int> iters_at;
        bool all_converged = true;
        for (int Nv : ladder) {
            Bvp3dSolution sol = solve_laplace_dirichlet_3d_torus(
                prob, Nv, P, cache, cfg.gmres_tol, cfg.direct);
            hs.push_back(1.0 / (2.0 * Nv));
            errs.push_back(sol.report.max_rel_error);
            iters_at[Nv] = sol.report.iterations;
            all_converged = all_converged && sol.report.converged;
            csv.row({"sample", "ladder", num(P), num(Nv), num(sol.report.n),
                     num(1.0 / (2.0 * Nv)), num(sol.report.max_rel_error),
                     num(sol.report.iterations), num(sol.report.residual),
                     num(cfg.timing ? sol.report.seconds : 0.0), "", "", ""});
        }
        OrderFit of = fit_order(hs, errs);
        double gap = std::abs(of.order - P);
        csv.row({"fit", "order", num(P), "", "", "", "", "", "", "",
                 num(of.order), num(cfg.window),
                 verdict.add(gap <= cfg.window)});
        csv.row({"check", "converged", num(P), "", "", "", "", "", "", "", "",
                 "", verdict.add(all_converged)});
        // iteration counts must stay flat as the grid refines: compare every
        // (Nv, 2 Nv) pair in the ladder, a 4x increase in unknowns
        for (int Nv : ladder) {
            auto it = iters_at.find(2 * Nv);
            if (it == iters_at.end()) continue;
            double growth =
                double(it->second) / std::max(1, iters_at[Nv]) - 1.0;
            csv.row({"check", "iter-growth", num(P), num(Nv), num(2 * Nv), "",
                     "", num(it->second), "", "", num(growth),
                     num(cfg.iter_growth),
                     verdict.add(growth <= cfg.iter_growth)});
        }
    }
    return verdict.ok;
}

// ---------------------------------------------------------------------------
// main
// ---------------------------------------------------------------------------

template <typename F>
int dispatch(const std::string& out, F&& runner) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (out != "-") {
        file.open(out);
        if (!file) {
            std::cerr << "cannot open output file: " << out << "\n";
            return 1;
        }
        os = &file;
    }
    try {
        return runner(*os) ? 0 : 2;
    } catch (const std::exception& e) {
        *os << "error," << sanitize(e.what()) << "\n";
        return 2;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"zetaquad: corrected-trapezoid quadrature experiments"};
    app.require_subcommand(1);
    std::string out = "-";
    app.add_option("--out", out, "output CSV path ('-' for stdout)")
        ->capture_default_str();

    EpsteinCfg ecfg;
    CLI::App* ep = app.add_subcommand(
        "epstein-check", "lattice zeta values, functional equation, derivatives");
    ep->add_option("--mode", ecfg.mode, "brute | functional | derivatives | all")
        ->check(CLI::IsMember({"brute", "functional", "derivatives", "all"}))
        ->capture_default_str();
    ep->add_option("--radius", ecfg.radius, "brute lattice sum radius")
        ->capture_default_str();
    ep->add_option("--tol-brute", ecfg.tol_brute, "brute-sum gate")
        ->capture_default_str();
    ep->add_option("--tol-functional", ecfg.tol_feq, "functional-equation gate")
        ->capture_default_str();
    ep->add_option("--tol-fd", ecfg.tol_fd, "finite-difference gate")
        ->capture_default_str();
    ep->add_option("--tol-euler", ecfg.tol_euler, "homogeneity gate")
        ->capture_default_str();

    WignerCfg wcfg;
    CLI::App* wi = app.add_subcommand(
        "wigner-check", "lattice moments against the windowed-sum oracle");
    wi->add_option("--s", wcfg.s, "zeta order s")->capture_default_str();
    wi->add_option("--tol", wcfg.tol, "comparison gate")->capture_default_str();

    Conv1dCfg c1cfg;
    CLI::App* c1 = app.add_subcommand(
        "conv1d", "finite-part rule convergence on the periodic 1/x^2 family");
    c1->add_option("--tol-m8", c1cfg.tol_m8, "M=8 absolute gate at n=512")
        ->capture_default_str();
    c1->add_option("--tol-alt", c1cfg.tol_alt,
                   "alternating absolute gate at n=256")
        ->capture_default_str();

    PatchCfg pcfg;
    CLI::App* pa = app.add_subcommand(
        "conv3d-patch", "surface operator convergence on a random quartic patch");
    pa->add_option("--mode", pcfg.mode, "convergence | moments | gates")
        ->check(CLI::IsMember({"convergence", "moments", "gates"}))
        ->capture_default_str();
    pa->add_option("--suite", pcfg.suite,
                   "acceptance (12 series) | full (adds the top-order row)")
        ->check(CLI::IsMember({"acceptance", "full"}))
        ->capture_default_str();
    pa->add_option("--seed", pcfg.seed, "patch coefficient seed")
        ->capture_default_str();
    pa->add_option("--amp", pcfg.amp, "patch coefficient amplitude")
        ->capture_default_str();
    pa->add_option("--bump-a", pcfg.bump_a, "density parameter a")
        ->capture_default_str();
    pa->add_option("--bump-b", pcfg.bump_b, "density parameter b")
        ->capture_default_str();
    pa->add_option("--window", pcfg.window, "allowed fitted-order deviation")
        ->capture_default_str();
    pa->add_option("--tol-moments", pcfg.tol_moments,
                   "moment residual gate (moments mode)")
        ->capture_default_str();
    pa->add_option("--op", pcfg.op,
                   "single series: slp | dlp | slpn | dlpn | helm")
        ->check(CLI::IsMember({"slp", "dlp", "slpn", "dlpn", "helm"}));
    pa->add_option("-P,--order", pcfg.P, "single series: correction order");
    pa->add_option("--kappa", pcfg.kappa, "wavenumber for --op helm")
        ->capture_default_str();
    pa->add_option("--ladder", pcfg.ladder,
                   "single series: patch half-resolutions n")
        ->delimiter(',');
    pa->add_option("--dump-nodes", pcfg.dump_nodes,
                   "write the n=16 patch grid nodes to this CSV");

    GreenCfg gcfg;
    CLI::App* gr = app.add_subcommand(
        "green-identity-torus", "on-surface Green identity / Gauss law on tori");
    gr->add_option("--check", gcfg.check, "green | gauss")
        ->check(CLI::IsMember({"green", "gauss"}))
        ->capture_default_str();
    gr->add_option("-P,--order", gcfg.orders, "correction orders")
        ->delimiter(',')
        ->capture_default_str();
    gr->add_option("--window", gcfg.window, "allowed fitted-order deviation")
        ->capture_default_str();

    Bvp2dCfg b2cfg;
    CLI::App* b2 = app.add_subcommand(
        "solve-bvp2d", "Laplace Dirichlet problem on a wobbly closed curve");
    b2->add_option("--side", b2cfg.side, "interior | exterior | both")
        ->check(CLI::IsMember({"interior", "exterior", "both"}))
        ->capture_default_str();
    b2->add_option("--variant", b2cfg.variant, "central | alternating | both")
        ->check(CLI::IsMember({"central", "alternating", "both"}))
        ->capture_default_str();
    b2->add_option("-M,--half-width", b2cfg.M,
                   "correction half-width (order 2M+1)")
        ->capture_default_str();
    b2->add_option("--ladder", b2cfg.ladder, "boundary node counts N")
        ->delimiter(',')
        ->capture_default_str();
    b2->add_option("--tol-err", b2cfg.tol_err, "target error floor gate")
        ->capture_default_str();
    b2->add_option("--tol-flux", b2cfg.tol_flux, "exterior flux gate")
        ->capture_default_str();
    b2->add_option("--timing", b2cfg.timing, "report wall seconds (0 pins to 0)")
        ->capture_default_str();

    Bvp3dCfg b3cfg;
    CLI::App* b3 = app.add_subcommand(
        "solve-bvp3d", "interior Laplace Dirichlet problem on a wobbly torus");
    b3->add_option("-P,--order", b3cfg.orders, "correction orders")
        ->delimiter(',')
        ->capture_default_str();
    b3->add_option("--ladder", b3cfg.ladder,
                   "poloidal node counts Nv (single --order only)")
        ->delimiter(',');
    b3->add_option("--gmres-tol", b3cfg.gmres_tol, "GMRES relative residual")
        ->capture_default_str();
    b3->add_flag("--direct", b3cfg.direct, "dense LU instead of GMRES");
    b3->add_option("--window", b3cfg.window, "allowed fitted-order deviation")
        ->capture_default_str();
    b3->add_option("--iter-growth", b3cfg.iter_growth,
                   "allowed relative GMRES iteration growth per 4x nodes")
        ->capture_default_str();
    b3->add_option("--timing", b3cfg.timing, "report wall seconds (0 pins to 0)")
        ->capture_default_str();

    // let --out appear after the subcommand name
    for (CLI::App* sub : {ep, wi, c1, pa, gr, b2, b3}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (*ep)
        return dispatch(out, [&](std::ostream& os) { return run_epstein(ecfg, os); });
    if (*wi)
        return dispatch(out, [&](std::ostream& os) { return run_wigner(wcfg, os); });
    if (*c1)
        return dispatch(out, [&](std::ostream& os) { return run_conv1d(c1cfg, os); });
    if (*pa)
        return dispatch(out, [&](std::ostream& os) { return run_patch(pcfg, os); });
    if (*gr)
        return dispatch(out, [&](std::ostream& os) { return run_green(gcfg, os); });
    if (*b2)
        return dispatch(out, [&](std::ostream& os) { return run_bvp2d(b2cfg, os); });
    if (*b3)
        return dispatch(out, [&](std::ostream& os) { return run_bvp3d(b3cfg, os); });
    return 1;
}
