#include "zetaquad/bie.hpp"

#include "zetaquad/util.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace zetaquad {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

} // namespace

// ---------------------------------------------------------------------------
// GMRES
// ---------------------------------------------------------------------------

Eigen::VectorXd gmres_dense(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                            double tol, int max_iter, int restart,
                            LinearSolveReport* report) {
    const int n = static_cast<int>(b.size());
    if (A.rows() != n || A.cols() != n)
        throw std::invalid_argument("gmres_dense: square system required");

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    const double bnorm = b.norm();
    LinearSolveReport rep;
    rep.n = n;
    if (bnorm == 0.0) {
        rep.converged = true;
        if (report) *report = rep;
        return x;
    }

    int total_iters = 0;
    double rel = 1.0;
    bool converged = false;

    while (total_iters < max_iter && !converged) {
        Eigen::VectorXd r = b - A * x;
        const double beta = r.norm();
        rel = beta / bnorm;
        if (rel <= tol) {
            converged = true;
            break;
        }

        const int m = restart > 0 ? std::min(restart, max_iter - total_iters)
                                  : max_iter - total_iters;
        Eigen::MatrixXd V(n, m + 1);
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
        Eigen::VectorXd cs = Eigen::VectorXd::Zero(m);
        Eigen::VectorXd sn = Eigen::VectorXd::Zero(m);
        Eigen::VectorXd g = Eigen::VectorXd::Zero(m + 1);
        V.col(0) = r / beta;
        g(0) = beta;

        int j = 0;
        for (; j < m; ++j) {
            Eigen::VectorXd w = A * V.col(j);
            for (int i = 0; i <= j; ++i) {
                H(i, j) = V.col(i).dot(w);
                w -= H(i, j) * V.col(i);
            }
            H(j + 1, j) = w.norm();
            if (H(j + 1, j) > 0.0)
                V.col(j + 1) = w / H(j + 1, j);

            // apply the accumulated Givens rotations, then form a new one
            for (int i = 0; i < j; ++i) {
                const double t = cs(i) * H(i, j) + sn(i) * H(i + 1, j);
                H(i + 1, j) = -sn(i) * H(i, j) + cs(i) * H(i + 1, j);
                H(i, j) = t;
            }
            const double denom = std::hypot(H(j, j), H(j + 1, j));
            cs(j) = H(j, j) / denom;
            sn(j) = H(j + 1, j) / denom;
            H(j, j) = denom;
            H(j + 1, j) = 0.0;
            g(j + 1) = -sn(j) * g(j);
            g(j) = cs(j) * g(j);

            ++total_iters;
            rel = std::abs(g(j + 1)) / bnorm;
            if (rel <= tol || total_iters >= max_iter) {
                ++j;
                break;
            }
        }

        // back-substitute the triangularized least-squares system
        Eigen::VectorXd y(j);
        for (int i = j - 1; i >= 0; --i) {
            double s = g(i);
            for (int k = i + 1; k < j; ++k) s -= H(i, k) * y(k);
            y(i) = s / H(i, i);
        }
        x += V.leftCols(j) * y;
        if (rel <= tol) converged = true;
    }

    rep.iterations = total_iters;
    rep.residual = (b - A * x).norm() / bnorm;
    rep.converged = converged && rep.residual <= tol * 10.0;
    if (report) *report = rep;
    return x;
}

// ---------------------------------------------------------------------------
// manufactured charge fields
// ---------------------------------------------------------------------------

double charge_potential_2d(const std::vector<Charge2d>& charges, const Vec2& x) {
    double u = 0.0;
    for (const Charge2d& c : charges)
        u -= c.q * std::log((x - c.z).norm()) / kTwoPi;
    return u;
}

double charge_potential_3d(const std::vector<Charge3d>& charges, const Vec3& x) {
    double u = 0.0;
    for (const Charge3d& c : charges)
        u += c.q / (4.0 * kPi * (x - c.z).norm());
    return u;
}

double charge_normal_derivative_3d(const std::vector<Charge3d>& charges,
                                   const Vec3& x, const Vec3& n) {
    double un = 0.0;
    for (const Charge3d& c : charges) {
        const Vec3 d = x - c.z;
        const double r = d.norm();
        un -= c.q * d.dot(n) / (4.0 * kPi * r * r * r);
    }
    return un;
}

// ---------------------------------------------------------------------------
// 2D Laplace Dirichlet, hypersingular route
// ---------------------------------------------------------------------------

Bvp2dSolution solve_laplace_dirichlet_2d(const Bvp2d& problem, int N, int M,
                                         GridVariant variant) {
    const bool ext = problem.side == BvpSide::exterior;
    if (problem.charges.empty() && problem.constant_data == 0.0)
        throw std::invalid_argument("solve 2d: no charges to manufacture data");
    if (ext && problem.constant_data != 0.0)
        throw std::invalid_argument("solve 2d: constant data is interior-only");
    const auto t0 = std::chrono::steady_clock::now();

    const CurveGrid g = make_curve_grid(problem.curve, N);

    // Dirichlet data from the charge field (plus the far-field constant on
    // the exterior side, where it shifts the trace as well).
    Eigen::VectorXd sigma(N);
    for (int i = 0; i < N; ++i) {
        const Vec2 y(g.x[i], g.y[i]);
        sigma(i) = charge_potential_2d(problem.charges, y) +
                   (ext ? problem.omega : problem.constant_data);
    }

    const Eigen::MatrixXd Hm = hypersingular_matrix(g, M, variant);
    Eigen::MatrixXd A = dlp_adjoint_matrix(g);
    Eigen::VectorXd b = Hm * sigma;

    double Sigma = 0.0;
    if (ext) {
        for (const Charge2d& c : problem.charges) Sigma -= c.q;
        for (int i = 0; i < N; ++i) {
            A(i, i) += 0.5;
            for (int j = 0; j < N; ++j) A(i, j) += g.w[j];
            b(i) += Sigma;
        }
    } else {
        for (int i = 0; i < N; ++i) A(i, i) -= 0.5;
    }

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    Eigen::VectorXd tau = lu.solve(b);

    Bvp2dSolution sol;
    sol.report.n = N;
    sol.report.iterations = 0;
    sol.report.residual = (b - A * tau).norm() / std::max(b.norm(), 1e-300);
    sol.report.converged = true;

    sol.tau.assign(tau.data(), tau.data() + N);
    CompensatedSum flux;
    for (int i = 0; i < N; ++i) flux.add(g.w[i] * tau(i));
    sol.flux = flux.value();

    // representation ansatz at the (well-separated) targets
    double max_err = 0.0, max_ex = 0.0;
    sol.u.reserve(problem.targets.size());
    for (const Vec2& xt : problem.targets) {
        CompensatedSum slp, dlp;
        for (int j = 0; j < N; ++j) {
            const Vec2 d = xt - Vec2(g.x[j], g.y[j]);
            const double r2 = d.squaredNorm();
            slp.add(-std::log(std::sqrt(r2)) / kTwoPi * tau(j) * g.w[j]);
            dlp.add(d.dot(Vec2(g.nx[j], g.ny[j])) / (kTwoPi * r2) * sigma(j) * g.w[j]);
        }
        const double u = ext ? dlp.value() - slp.value() + problem.omega
                             : slp.value() - dlp.value();
        const double u_ex = charge_potential_2d(problem.charges, xt) +
                            (ext ? problem.omega : problem.constant_data);
        sol.u.push_back(u);
        max_err = std::max(max_err, std::abs(u - u_ex));
        max_ex = std::max(max_ex, std::abs(u_ex));
    }
    sol.report.max_rel_error = max_ex > 0.0 ? max_err / max_ex : max_err;
    sol.report.seconds = seconds_since(t0);
    return sol;
}

// ---------------------------------------------------------------------------
// 3D Laplace Dirichlet, interior torus, double-layer ansatz
// ---------------------------------------------------------------------------

Bvp3dSolution solve_laplace_dirichlet_3d_torus(const Bvp3dTorus& problem, int Nv,
                                               int P, WeightCache& cache,
                                               double tol, bool use_direct) {
    if (problem.charges.empty() && problem.constant_data == 0.0)
        throw std::invalid_argument("solve 3d: no charges to manufacture data");
    const auto t0 = std::chrono::steady_clock::now();

    const SurfaceGrid g = make_torus_grid(problem.surf, Nv);
    const int N = g.size();
    if (use_direct && N > 10000)
        throw std::invalid_argument("solve 3d: direct solve limited to 10000 nodes");

    Eigen::VectorXd f(N);
    for (int i = 0; i < N; ++i)
        f(i) = charge_potential_3d(problem.charges, g.node[i].pos) +
               problem.constant_data;

    Eigen::MatrixXd A =
        operator_matrix(g, {SurfaceOperator::laplace_dlp, 0.0}, P, cache);
    for (int i = 0; i < N; ++i) A(i, i) -= 0.5;

    Bvp3dSolution sol;
    Eigen::VectorXd s;
    if (use_direct) {
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
        s = lu.solve(f);
        sol.report.n = N;
        sol.report.iterations = 0;
        sol.report.residual = (f - A * s).norm() / std::max(f.norm(), 1e-300);
        sol.report.converged = true;
    } else {
        // stagnation shows up as converged = false in the report; the solve
        // still returns its best iterate.
        s = gmres_dense(A, f, tol, 400, 0, &sol.report);
    }

    sol.sigma.assign(s.data(), s.data() + N);

    double max_err = 0.0, max_ex = 0.0;
    sol.u.reserve(problem.targets.size());
    for (const Vec3& xt : problem.targets) {
        const double u = eval_dlp_point(g, sol.sigma, xt);
        const double u_ex =
            charge_potential_3d(problem.charges, xt) + problem.constant_data;
        sol.u.push_back(u);
        max_err = std::max(max_err, std::abs(u - u_ex));
        max_ex = std::max(max_ex, std::abs(u_ex));
    }
    sol.report.max_rel_error = max_ex > 0.0 ? max_err / max_ex : max_err;
    sol.report.seconds = seconds_since(t0);
    return sol;
}

} // namespace zetaquad
