#include "zetaquad/epstein.hpp"

#include "zetaquad/specfun.hpp"
#include "zetaquad/util.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <stdexcept>

namespace zetaquad {

double lattice_truncation(int k) {
    return -std::log(1e-15) + 8.0 * (1.0 + k * std::log(2.0 + k));
}

namespace {

void check_form(double s, const QuadraticForm& Q) {
    if (!Q.positive_definite())
        throw std::domain_error("epstein: form must be positive definite");
    if (s == 2.0 || s == 0.0)
        throw std::domain_error("epstein: s in {0, 2} excluded (pole / trivial zero)");
}

/// Polynomial in (H, K) represented as coefficients on monomials H^i K^j.
/// The mean/Gauss curvature pair of the coefficient flow is closed under
/// the directional derivative:
///   box H = K - 2 H^2,   box K = -2 H K
/// so box(H^i K^j) = i H^{i-1} K^{j+1} - 2 (i + j) H^{i+1} K^j,
/// and every iterated derivative box^k H stays a small polynomial.
std::vector<double> iterated_H(double H, double K, int kmax) {
    std::map<std::pair<int, int>, double> poly{{{1, 0}, 1.0}};
    std::vector<double> out;
    out.reserve(kmax + 1);
    for (int k = 0; k <= kmax; ++k) {
        double val = 0.0;
        for (const auto& [ij, c] : poly)
            val += c * std::pow(H, ij.first) * std::pow(K, ij.second);
        out.push_back(val);
        std::map<std::pair<int, int>, double> next;
        for (const auto& [ij, c] : poly) {
            auto [i, j] = ij;
            if (i > 0) next[{i - 1, j + 1}] += c * i;
            next[{i + 1, j}] += -2.0 * c * (i + j);
        }
        poly.swap(next);
    }
    return out;
}

struct DerivativeScratch {
    double s1, s2, D, C;
    std::vector<double> a;   // (box - H)^k 1
    std::vector<double> b;   // (box + s1 H)^k 1
    int imax, jmax;
    double cutoff;           // on the raw form value Q(i,j)
};

DerivativeScratch make_scratch(double s, const QuadraticForm& Q,
                               const FormDirection& dir, int kmax) {
    DerivativeScratch w;
    w.s1 = 0.5 * s;
    w.s2 = 1.0 - 0.5 * s;
    w.D = Q.det();
    w.C = std::pow(kPi / std::sqrt(w.D), w.s1) / gamma_fn(w.s1);

    const double H = (Q.G * dir.L + Q.E * dir.N - 2.0 * Q.F * dir.M) / (2.0 * w.D);
    const double K = (dir.L * dir.N - dir.M * dir.M) / w.D;
    std::vector<double> Hk = iterated_H(H, K, kmax + 1);

    auto bell = bell_table(Hk, kmax);
    w.a.assign(kmax + 1, 0.0);
    w.b.assign(kmax + 1, 0.0);
    for (int k = 0; k <= kmax; ++k) {
        double ak = 0.0, bk = 0.0;
        for (int i = 0; i <= k; ++i) {
            double B = bell[k][i];
            ak += ((i % 2) ? -1.0 : 1.0) * B;
            bk += std::pow(w.s1, i) * B;
        }
        w.a[k] = ak;
        w.b[k] = bk;
    }

    const double T = lattice_truncation(kmax);
    w.cutoff = T * std::sqrt(w.D) / kPi;
    w.imax = static_cast<int>(std::floor(std::sqrt(w.cutoff * Q.G / w.D))) + 1;
    w.jmax = static_cast<int>(std::floor(std::sqrt(w.cutoff * Q.E / w.D))) + 1;
    return w;
}

} // namespace

std::vector<double> epstein_derivatives(double s, const QuadraticForm& Q,
                                        const FormDirection& dir, int kmax) {
    check_form(s, Q);
    if (kmax < 0 || kmax > 12)
        throw std::invalid_argument("epstein_derivatives: kmax in [0, 12]");

    DerivativeScratch w = make_scratch(s, Q, dir, kmax);
    const double scale = kPi / std::sqrt(w.D);

    // Lattice pass: accumulate sum_k = sum'_{(i,j)} box^k G(x; s) where
    // x = pi Q(i,j)/sqrt(D).  Incomplete gammas ascend by recurrence
    // Gamma(a+1,x) = a Gamma(a,x) + x^a e^{-x} from the two base orders.
    std::vector<CompensatedSum> sums(kmax + 1);
    std::vector<double> gi(kmax + 1), d(kmax + 1);

    for (int i = -w.imax; i <= w.imax; ++i) {
        for (int j = -w.jmax; j <= w.jmax; ++j) {
            if (i == 0 && j == 0) continue;
            const double q = Q(i, j);
            if (q > w.cutoff) continue;
            const double x = scale * q;
            const double r = dir.L * i * i + 2.0 * dir.M * i * j + dir.N * j * j;
            const double rt = scale * r;

            const double ex = std::exp(-x);
            double ga = gamma_upper(w.s1, x);
            double gb = gamma_upper(w.s2, x);
            double xa = std::pow(x, -w.s1);
            double xb = std::pow(x, -w.s2);
            gi[0] = ga * xa + gb * xb;
            double pa = 1.0 / xa;   // x^{s1 + i} accumulators
            double pb = 1.0 / xb;
            for (int k = 1; k <= kmax; ++k) {
                ga = (w.s1 + k - 1.0) * ga + pa * ex;
                gb = (w.s2 + k - 1.0) * gb + pb * ex;
                pa *= x;
                pb *= x;
                gi[k] = ga / pa + gb / pb;
            }

            sums[0].add(gi[0]);
            if (kmax > 0) {
                for (int k = 1; k <= kmax; ++k)
                    d[k - 1] = w.a[k] * x + k * w.a[k - 1] * rt;
                std::vector<double> dk(d.begin(), d.begin() + kmax);
                auto B = bell_table(dk, kmax);
                for (int k = 1; k <= kmax; ++k) {
                    double acc = 0.0;
                    for (int i2 = 1; i2 <= k; ++i2)
                        acc += ((i2 % 2) ? -1.0 : 1.0) * gi[i2] * B[k][i2];
                    sums[k].add(acc);
                }
            }
        }
    }

    std::vector<double> Z(kmax + 1, 0.0);
    Z[0] = w.C * (-1.0 / (w.s1 * w.s2) + sums[0].value());
    for (int k = 1; k <= kmax; ++k) {
        double val = w.C * sums[k].value();
        for (int i = 0; i < k; ++i)
            val -= binom(k, i) * w.b[k - i] * Z[i];
        Z[k] = val;
    }
    return Z;
}

double epstein_zeta(double s, const QuadraticForm& Q) {
    return epstein_derivatives(s, Q, FormDirection{}, 0)[0];
}

PartialTable epstein_partials(double s, const QuadraticForm& Q, int n) {
    check_form(s, Q);
    if (n < 0 || n > 12)
        throw std::invalid_argument("epstein_partials: n in [0, 12]");

    PartialTable t;
    t.n = n;
    if (n == 0) {
        double z = epstein_zeta(s, Q);
        t.dE = {z};
        t.dG = {z};
        return t;
    }

    // Directions fan over a quarter circle; the n-th directional derivative
    // along (a, b/2, 0) expands as sum_l binom(n,l) a^{n-l} b^l dE[l], so the
    // n+1 samples determine the n+1 partials through a binomial Vandermonde.
    Eigen::MatrixXd V(n + 1, n + 1);
    Eigen::VectorXd rhsE(n + 1), rhsG(n + 1);
    for (int m = 0; m <= n; ++m) {
        const double a = std::cos(m * kPi / (2.0 * n));
        const double b = std::sin(m * kPi / (2.0 * n));
        for (int l = 0; l <= n; ++l)
            V(m, l) = binom(n, l) * std::pow(a, n - l) * std::pow(b, l);
        rhsE(m) = epstein_derivatives(s, Q, FormDirection{a, 0.5 * b, 0.0}, n)[n];
        rhsG(m) = epstein_derivatives(s, Q, FormDirection{0.0, 0.5 * b, a}, n)[n];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(V);
    Eigen::VectorXd te = lu.solve(rhsE);
    Eigen::VectorXd tg = lu.solve(rhsG);

    t.dE.assign(te.data(), te.data() + n + 1);
    t.dG.assign(tg.data(), tg.data() + n + 1);
    return t;
}

} // namespace zetaquad
