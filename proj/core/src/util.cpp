#include "zetaquad/util.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace zetaquad {

double SplitMix64::next_normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Box-Muller on two fresh uniforms; u1 is kept away from 0.
    double u1 = 0.0;
    do {
        u1 = next_uniform();
    } while (u1 <= 0.0);
    double u2 = next_uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * kPi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

OrderFit fit_order(const std::vector<double>& h, const std::vector<double>& err) {
    if (h.size() != err.size() || h.size() < 2)
        throw std::invalid_argument("fit_order: need >= 2 matching (h, err) points");

    double emin = *std::min_element(err.begin(), err.end());
    double floor = std::max(1e-13, 0.1 * emin);

    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < err.size(); ++i)
        if (err[i] > floor) keep.push_back(i);
    if (keep.size() < 2) {
        keep.clear();
        for (std::size_t i = 0; i < err.size(); ++i) keep.push_back(i);
    }
    // Last (finest) up-to-4 surviving points.  Series are ordered
    // coarse-to-fine by the callers.
    if (keep.size() > 4) keep.erase(keep.begin(), keep.end() - 4);

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i : keep) {
        double x = std::log10(h[i]);
        double y = std::log10(err[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    double n = static_cast<double>(keep.size());
    double denom = n * sxx - sx * sx;
    OrderFit fit;
    fit.points_used = static_cast<int>(keep.size());
    fit.order = (denom != 0.0) ? (n * sxy - sx * sy) / denom : 0.0;
    return fit;
}

std::string fmt_sci(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", x);
    return buf;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n(x) = 0.
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

double binom_real(double alpha, int m) {
    if (m < 0) return 0.0;
    double r = 1.0;
    for (int i = 0; i < m; ++i)
        r *= (alpha - static_cast<double>(i)) / static_cast<double>(i + 1);
    return r;
}

} // namespace zetaquad
