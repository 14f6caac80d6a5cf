#include "zetaquad/wigner.hpp"

#include "zetaquad/util.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>

namespace zetaquad {

namespace {

/// Partial tables are re-requested with identical arguments many times while
/// assembling correction weights (every stencil layer of every target shares
/// the chart form), so they are memoized.  Keys quantize the continuous
/// arguments to 12 significant digits: forms differing below that are treated
/// as identical, while genuinely different charts always miss.
std::string table_key(double s, const QuadraticForm& Q, int n) {
    char buf[100];
    std::snprintf(buf, sizeof(buf), "%.12e|%.12e|%.12e|%.12e|%d", s, Q.E, Q.F, Q.G, n);
    return buf;
}

const PartialTable& cached_partials(double s, const QuadraticForm& Q, int n) {
    static std::map<std::string, PartialTable> cache;
    std::string key = table_key(s, Q, n);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, epstein_partials(s, Q, n)).first;
    return it->second;
}

double window(double r) {
    double r2 = r * r;
    if (r2 >= 1.0 - 1e-12) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - r2));
}

} // namespace

std::vector<double> wigner_row(double s, const QuadraticForm& Q, int n) {
    if (n < 0) throw std::invalid_argument("wigner_row: n >= 0");
    if (n == 0)
        return {epstein_zeta(s, Q)};

    // prod_{j=0}^{n-1} (1 - s/2 + j) = Gamma(n + 1 - s/2) / Gamma(1 - s/2),
    // computed as a plain product to stay exact at integer s.
    double denom = 1.0;
    for (int j = 0; j < n; ++j)
        denom *= 1.0 - 0.5 * s + j;
    if (denom == 0.0)
        throw std::domain_error("wigner_row: prefactor pole (s = 2, 4, ..., 2n)");

    const PartialTable& t = cached_partials(s - 2.0 * n, Q, n);
    std::vector<double> out(2 * n + 1);
    for (int l = 0; l <= 2 * n; ++l) {
        double p = (l <= n) ? t.dE[l] : t.dG[2 * n - l];
        out[l] = p / denom;
    }
    return out;
}

double wigner_limit(double s, const QuadraticForm& Q, int a, int b) {
    if (a < 0 || b < 0)
        throw std::invalid_argument("wigner_limit: exponents must be >= 0");
    if ((a + b) % 2 == 1)
        return 0.0;   // odd monomials cancel pairwise under i -> -i
    int n = (a + b) / 2;
    return wigner_row(s, Q, n)[b];
}

double wigner_oracle(double s, const QuadraticForm& Q, int a, int b,
                     const WignerOracleConfig& cfg) {
    if (a < 0 || b < 0)
        throw std::invalid_argument("wigner_oracle: exponents must be >= 0");
    if (!(s > 0.0) || !(s < 2.0 + a + b))
        throw std::domain_error("wigner_oracle: requires 0 < s < 2 + a + b");
    if (cfg.levels < 3)
        throw std::invalid_argument("wigner_oracle: need >= 3 levels");
    if ((a + b) % 2 == 1)
        return 0.0;

    // Angular factor of the windowed integral (periodic trapezoid).
    CompensatedSum ang;
    for (int k = 0; k < cfg.n_angular; ++k) {
        double th = kTwoPi * k / cfg.n_angular;
        double c = std::cos(th), sn = std::sin(th);
        ang.add(std::pow(c, a) * std::pow(sn, b) * std::pow(Q(c, sn), -0.5 * s));
    }
    double i_ang = ang.value() * kTwoPi / cfg.n_angular;

    // Radial factor int_0^1 t^{a+b+1-s} eta(t) dt, smoothed by t = w^2.
    std::vector<double> gx, gw;
    gauss_legendre(cfg.n_radial, gx, gw);
    double i_rad = 0.0;
    double expo = 2.0 * (a + b) + 3.0 - 2.0 * s;
    for (int k = 0; k < cfg.n_radial; ++k) {
        double w = 0.5 * (gx[k] + 1.0);
        i_rad += 0.5 * gw[k] * 2.0 * std::pow(w, expo) * window(w * w);
    }

    auto windowed_sum = [&](double h) {
        int imax = static_cast<int>(std::ceil(1.0 / h)) + 1;
        CompensatedSum acc;
        for (int i = -imax; i <= imax; ++i) {
            for (int j = -imax; j <= imax; ++j) {
                if (i == 0 && j == 0) continue;
                double r = std::hypot(static_cast<double>(i), static_cast<double>(j));
                double eta = window(r * h);
                if (eta == 0.0) continue;
                acc.add(std::pow(static_cast<double>(i), a) *
                        std::pow(static_cast<double>(j), b) *
                        std::pow(Q(i, j), -0.5 * s) * eta);
            }
        }
        double integral = i_ang * i_rad * std::pow(h, s - a - b - 2.0);
        return acc.value() - integral;
    };

    std::vector<double> A(cfg.levels);
    for (int k = 0; k < cfg.levels; ++k)
        A[k] = windowed_sum(cfg.h0 / std::pow(2.0, k));

    // Two Richardson passes against the even error expansion in h.
    std::vector<double> R1(cfg.levels - 1), R2(cfg.levels - 2);
    for (int k = 0; k + 1 < cfg.levels; ++k)
        R1[k] = (4.0 * A[k + 1] - A[k]) / 3.0;
    for (int k = 0; k + 2 < cfg.levels; ++k)
        R2[k] = (16.0 * R1[k + 1] - R1[k]) / 15.0;
    return R2.back();
}

} // namespace zetaquad
