#pragma once

// Shared helpers for the test binaries: plain least-squares slope fitting
// (no floor logic, every point counts) and a panel-based integrator for
// building quadrature oracles that are independent of the library's own
// special-function code.

#include "zetaquad/util.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace zetaquad::testing {

/// Least-squares slope of log10(err) vs log10(h) over all points.
inline double lsq_slope(const std::vector<double>& h, const std::vector<double>& err) {
    if (h.size() != err.size() || h.size() < 2)
        throw std::invalid_argument("lsq_slope: need >= 2 matching points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = static_cast<int>(h.size());
    for (int i = 0; i < n; ++i) {
        const double x = std::log10(h[i]);
        const double y = std::log10(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Gauss-Legendre integral of f over [a, b] with n nodes.
inline double gl_integrate(const std::function<double(double)>& f, double a,
                           double b, int n) {
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    CompensatedSum s;
    for (int i = 0; i < n; ++i) s.add(w[i] * f(mid + half * x[i]));
    return half * s.value();
}

/// Integral of an exponentially decaying f over [x0, inf): unit panels with
/// 32-node Gauss-Legendre each, stopping once a panel falls below the
/// requested relative tolerance (floored absolutely for tiny totals).
inline double gl_integrate_to_inf(const std::function<double(double)>& f,
                                  double x0, double rel_tol = 1e-16) {
    CompensatedSum total;
    for (int k = 0; k < 400; ++k) {
        const double piece = gl_integrate(f, x0 + k, x0 + k + 1.0, 32);
        total.add(piece);
        const double scale = std::abs(total.value());
        if (k > 2 && std::abs(piece) < rel_tol * scale + 1e-320) break;
    }
    return total.value();
}

} // namespace zetaquad::testing
