#include "zetaquad/quad1d.hpp"

#include "zetaquad/util.hpp"

#include <cmath>
#include <stdexcept>

namespace zetaquad {

std::vector<double> central_diff_coeffs(int M) {
    if (M < 1 || M > 15)
        throw std::invalid_argument("central_diff_coeffs: M in [1, 15]");
    std::vector<double> c(M + 1, 0.0);
    for (int j = 1; j <= M; ++j) {
        // (M!)^2 / ((M-j)! (M+j)!) = prod_{i=1}^{j} (M - j + i) / (M + i)
        double ratio = 1.0;
        for (int i = 1; i <= j; ++i)
            ratio *= static_cast<double>(M - j + i) / static_cast<double>(M + i);
        c[j] = 2.0 * ((j % 2) ? 1.0 : -1.0) * ratio / (static_cast<double>(j) * j);
    }
    double sum = 0.0;
    for (int j = 1; j <= M; ++j) sum += c[j];
    c[0] = -2.0 * sum;
    return c;
}

double finite_part_central(const std::function<double(double)>& f,
                           const std::function<double(double)>& phi,
                           double a, int n, int M) {
    if (n < M + 1) throw std::invalid_argument("finite_part_central: n > M required");
    const double h = a / n;
    CompensatedSum trap;
    for (int i = -n; i < n; ++i) {
        if (i == 0) continue;
        trap.add(f(i * h));
    }
    std::vector<double> c = central_diff_coeffs(M);
    CompensatedSum corr;
    corr.add(c[0] * phi(0.0));
    for (int j = 1; j <= M; ++j)
        corr.add(c[j] * (phi(j * h) + phi(-j * h)));
    return h * trap.value() - kPi * kPi / (3.0 * h) * phi(0.0) +
           corr.value() / (2.0 * h);
}

double finite_part_alternating(const std::function<double(double)>& f,
                               double phi0, double a, int n) {
    const double h = a / n;
    CompensatedSum trap;
    for (int i = -n; i < n; ++i) {
        if (i % 2 == 0) continue;
        trap.add(f(i * h));
    }
    return 2.0 * h * trap.value() - kPi * kPi / (2.0 * h) * phi0;
}

namespace {

/// Smooth numerator of the hypersingular kernel's 1/x^2 part along the
/// curve, sampled between nodes i and j at parameter offset x:
///   g(x) = (n_i . n_j) |rho'_j| / (2 pi |rho'_i|^2) (1 - B + B^2),
///   B    = (r^2 - |rho'_i|^2 x^2) / (|rho'_i|^2 x^2),
/// which matches 1/(1 + B) to the order the band corrections can see
/// (B is an even O(x^2) function on a smooth closed curve).
double band_numerator(const CurveGrid& g, int i, int j, double x) {
    const double ndot = g.nx[i] * g.nx[j] + g.ny[i] * g.ny[j];
    const double dx = g.x[i] - g.x[j];
    const double dy = g.y[i] - g.y[j];
    const double r2 = dx * dx + dy * dy;
    const double sx2 = g.speed[i] * g.speed[i] * x * x;
    const double B = (r2 - sx2) / sx2;
    return ndot * g.speed[j] / (kTwoPi * g.speed[i] * g.speed[i]) *
           (1.0 - B + B * B);
}

double kernel_H(const CurveGrid& g, int i, int j) {
    const double dx = g.x[i] - g.x[j];
    const double dy = g.y[i] - g.y[j];
    const double r2 = dx * dx + dy * dy;
    const double mu_x = (dx * g.nx[i] + dy * g.ny[i]) / r2;
    const double mu_y = (dx * g.nx[j] + dy * g.ny[j]) / r2;
    const double ndot = g.nx[i] * g.nx[j] + g.ny[i] * g.ny[j];
    return (ndot / r2 - 2.0 * mu_x * mu_y) / kTwoPi;
}

} // namespace

Eigen::MatrixXd hypersingular_matrix(const CurveGrid& g, int M, GridVariant variant) {
    const int N = g.N;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);

    if (variant == GridVariant::alternating) {
        if (N % 2 != 0)
            throw std::invalid_argument("hypersingular_matrix: alternating needs even N");
        for (int i = 0; i < N; ++i) {
            for (int off = -N / 2; off < N / 2; ++off) {
                if (off % 2 == 0) continue;
                int j = (i + off + N) % N;
                A(i, j) += kernel_H(g, i, j) * 2.0 * g.w[j];
            }
            A(i, i) = -kPi / (4.0 * g.w[i]);
        }
        return A;
    }

    if (2 * M + 1 > N)
        throw std::invalid_argument("hypersingular_matrix: band wider than grid");
    std::vector<double> c = central_diff_coeffs(M);
    const double h = g.h;
    for (int i = 0; i < N; ++i) {
        for (int off = -N / 2; off < N - N / 2; ++off) {
            if (off == 0) continue;
            int j = (i + off + N) % N;
            A(i, j) += kernel_H(g, i, j) * g.w[j];
        }
        // local band: corrected 1/x^2 moments of the kernel numerator
        const double g0 = 1.0 / (kTwoPi * g.speed[i]);
        for (int off = -M; off <= M; ++off) {
            int j = (i + off + N) % N;
            double gx = (off == 0) ? g0 : band_numerator(g, i, j, off * h);
            A(i, j) += c[std::abs(off)] * gx / (2.0 * h);
        }
        const double kap = g.curvature[i];
        A(i, i) += kap * kap * g.w[i] / (4.0 * kPi) -
                   kPi * kPi / (3.0 * h) * g0;
    }
    return A;
}

Eigen::MatrixXd dlp_adjoint_matrix(const CurveGrid& g) {
    const int N = g.N;
    Eigen::MatrixXd A(N, N);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            if (i == j) {
                A(i, i) = -g.curvature[i] * g.w[i] / (4.0 * kPi);
                continue;
            }
            const double dx = g.x[i] - g.x[j];
            const double dy = g.y[i] - g.y[j];
            const double r2 = dx * dx + dy * dy;
            const double mu_x = (dx * g.nx[i] + dy * g.ny[i]) / r2;
            A(i, j) = -mu_x / kTwoPi * g.w[j];
        }
    }
    return A;
}

} // namespace zetaquad
