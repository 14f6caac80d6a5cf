#include "zetaquad/momentfit.hpp"

#include "zetaquad/util.hpp"
#include "zetaquad/wigner.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace zetaquad {

namespace {

void check_ks(int K1, int K2) {
    if (K1 < 0 || K2 < K1)
        throw std::invalid_argument("stencil: need 0 <= K1 <= K2");
}

/// Orbit structure of a stencil under its exact symmetry group: every point
/// maps to (index of representative unknown, sign).
struct OrbitMap {
    std::vector<int> dof;      // per point
    std::vector<double> sign;  // per point
    int n_dofs = 0;
};

OrbitMap orbit_reduce(const std::vector<StencilPoint>& pts, int K1, int K2) {
    OrbitMap om;
    om.dof.assign(pts.size(), -1);
    om.sign.assign(pts.size(), 1.0);

    // Representative key -> dof index, assigned in first-seen order.
    std::vector<std::pair<int, int>> reps;
    auto rep_index = [&](int mu, int nu) {
        for (std::size_t r = 0; r < reps.size(); ++r)
            if (reps[r].first == mu && reps[r].second == nu)
                return static_cast<int>(r);
        reps.emplace_back(mu, nu);
        return static_cast<int>(reps.size()) - 1;
    };

    for (std::size_t idx = 0; idx < pts.size(); ++idx) {
        int mu = pts[idx].mu, nu = pts[idx].nu;
        int layer = std::abs(mu) + std::abs(nu);
        if (layer == K2 + 1) {
            // Outer layer: odd under each single reflection.
            om.dof[idx] = rep_index(std::abs(mu), std::abs(nu));
            om.sign[idx] = ((mu < 0) ? -1.0 : 1.0) * ((nu < 0) ? -1.0 : 1.0);
        } else if (layer == K1) {
            // Inner layer: even under both reflections.
            om.dof[idx] = rep_index(std::abs(mu), std::abs(nu));
            om.sign[idx] = 1.0;
        } else {
            // Interim layers: central symmetry only.
            int rmu = mu, rnu = nu;
            if (mu < 0 || (mu == 0 && nu < 0)) { rmu = -mu; rnu = -nu; }
            om.dof[idx] = rep_index(rmu, rnu);
            om.sign[idx] = 1.0;
        }
    }
    om.n_dofs = static_cast<int>(reps.size());
    return om;
}

} // namespace

std::vector<StencilPoint> build_stencil(int K1, int K2) {
    check_ks(K1, K2);
    std::vector<StencilPoint> pts;
    for (int mu = -(K2 + 1); mu <= K2 + 1; ++mu) {
        for (int nu = -(K2 + 1); nu <= K2 + 1; ++nu) {
            int l1 = std::abs(mu) + std::abs(nu);
            int linf = std::max(std::abs(mu), std::abs(nu));
            if (l1 >= K1 && l1 <= K2 + 1 && linf <= K2)
                pts.push_back({mu, nu});
        }
    }
    return pts;
}

int stencil_size(int K1, int K2) {
    check_ks(K1, K2);
    return 2 * (K1 + K2) * (K2 - K1 + 1) + 4 * K2 + (K1 == 0 ? 1 : 0);
}

WeightSet solve_weights(double s, const QuadraticForm& Q, int K1, int K2) {
    check_ks(K1, K2);

    WeightSet w;
    w.s = s;
    w.Q = Q;
    w.K1 = K1;
    w.K2 = K2;
    w.points = build_stencil(K1, K2);

    OrbitMap om = orbit_reduce(w.points, K1, K2);

    // Moment rows (k, l), k = K1..K2, l = 0..2k; count matches n_dofs.
    int n_rows = 0;
    for (int k = K1; k <= K2; ++k) n_rows += 2 * k + 1;
    if (n_rows != om.n_dofs)
        throw std::logic_error("solve_weights: orbit count != moment count");

    const double scale = static_cast<double>(std::max(K2, 1));
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n_rows, om.n_dofs);
    Eigen::VectorXd b(n_rows);
    std::vector<std::vector<double>> wrows;   // rhs values, unscaled
    wrows.reserve(K2 - K1 + 1);

    int row = 0;
    for (int k = K1; k <= K2; ++k) {
        std::vector<double> W = wigner_row(s, Q, k);
        wrows.push_back(W);
        const double rscale = std::pow(scale, -2.0 * k);
        for (int l = 0; l <= 2 * k; ++l, ++row) {
            for (std::size_t ip = 0; ip < w.points.size(); ++ip) {
                double mu = w.points[ip].mu / scale;
                double nu = w.points[ip].nu / scale;
                A(row, om.dof[ip]) +=
                    om.sign[ip] * std::pow(mu, 2 * k - l) * std::pow(nu, l);
            }
            b(row) = -W[l] * rscale;
        }
    }

    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (lu.rank() < om.n_dofs) {
        std::ostringstream msg;
        msg << "solve_weights: moment system numerically singular"
            << " (K1=" << K1 << ", K2=" << K2 << ", s=" << s
            << ", rank=" << lu.rank() << "/" << om.n_dofs
            << ", max pivot=" << lu.maxPivot() << ")";
        throw std::runtime_error(msg.str());
    }
    Eigen::VectorXd y = lu.solve(b);
    // One step of iterative refinement tightens the worst moments by ~2
    // digits at K2 = 9 without changing the well-conditioned cases.
    y += lu.solve(b - A * y);

    w.tau.resize(w.points.size());
    for (std::size_t ip = 0; ip < w.points.size(); ++ip)
        w.tau[ip] = om.sign[ip] * y(om.dof[ip]);

    // Residuals of the full, unscaled moment system.
    double worst = 0.0;
    row = 0;
    for (int k = K1; k <= K2; ++k) {
        const std::vector<double>& W = wrows[static_cast<std::size_t>(k - K1)];
        for (int l = 0; l <= 2 * k; ++l, ++row) {
            CompensatedSum acc;
            for (std::size_t ip = 0; ip < w.points.size(); ++ip)
                acc.add(std::pow(static_cast<double>(w.points[ip].mu), 2 * k - l) *
                        std::pow(static_cast<double>(w.points[ip].nu), l) * w.tau[ip]);
            double res = std::abs(acc.value() + W[l]) / std::max(1.0, std::abs(W[l]));
            worst = std::max(worst, res);
        }
    }
    w.max_scaled_residual = worst;
    return w;
}

CorrectionPlan correction_plan(int p, int q, int P) {
    if (p < 1 || p % 2 == 0)
        throw std::invalid_argument("correction_plan: p must be odd and >= 1");
    if (q < 0 || P < 1)
        throw std::invalid_argument("correction_plan: q >= 0, P >= 1");

    CorrectionPlan plan;
    plan.p = p;
    plan.q = q;
    plan.P = P;
    int half = (P + p + 1) / 2;               // ceil((P + p)/2)
    int M = 2 * half - 2 * q - 4;
    for (int m = 0; m <= M; ++m) {
        CorrectionTerm t;
        t.m = m;
        t.K1 = q + (3 * m + 1) / 2;           // q + ceil(3m/2)
        t.K2 = half + m - 2;
        t.coef = binom_real(-0.5 * p, m);
        if (t.K1 <= t.K2)
            plan.terms.push_back(t);
    }
    return plan;
}

void dump_weights(const WeightSet& w, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("dump_weights: cannot open " + path);
    auto put = [&](const void* p, std::size_t n) {
        f.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    };
    put("ZQWT", 4);
    std::uint32_t version = 1;
    put(&version, 4);
    std::int32_t k1 = w.K1, k2 = w.K2;
    put(&k1, 4);
    put(&k2, 4);
    double vals[4] = {w.s, w.Q.E, w.Q.F, w.Q.G};
    put(vals, 32);
    std::int64_t count = static_cast<std::int64_t>(w.points.size());
    put(&count, 8);
    for (std::size_t i = 0; i < w.points.size(); ++i) {
        std::int32_t mu = w.points[i].mu, nu = w.points[i].nu;
        put(&mu, 4);
        put(&nu, 4);
        put(&w.tau[i], 8);
    }
}

WeightSet load_weights(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("load_weights: cannot open " + path);
    auto get = [&](void* p, std::size_t n) {
        f.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (!f) throw std::runtime_error("load_weights: truncated file");
    };
    char magic[4];
    get(magic, 4);
    if (std::memcmp(magic, "ZQWT", 4) != 0)
        throw std::runtime_error("load_weights: bad magic");
    std::uint32_t version = 0;
    get(&version, 4);
    if (version != 1) throw std::runtime_error("load_weights: unknown version");
    WeightSet w;
    std::int32_t k1, k2;
    get(&k1, 4);
    get(&k2, 4);
    w.K1 = k1;
    w.K2 = k2;
    double vals[4];
    get(vals, 32);
    w.s = vals[0];
    w.Q = {vals[1], vals[2], vals[3]};
    std::int64_t count;
    get(&count, 8);
    w.points.resize(static_cast<std::size_t>(count));
    w.tau.resize(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
        std::int32_t mu, nu;
        double tau;
        get(&mu, 4);
        get(&nu, 4);
        get(&tau, 8);
        w.points[static_cast<std::size_t>(i)] = {mu, nu};
        w.tau[static_cast<std::size_t>(i)] = tau;
    }
    return w;
}

} // namespace zetaquad
