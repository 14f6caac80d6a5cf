#include "zetaquad/specfun.hpp"

#include "zetaquad/util.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace zetaquad {

namespace {

// Lanczos coefficients for g = 7, n = 9 (Godfrey's table).
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

// Lower-series branch: Gamma(a, x) = Gamma(a) - x^a e^{-x} sum_k x^k / (a (a+1) ... (a+k)).
double gamma_upper_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < 1000; ++k) {
        term *= x / (a + k);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-17) break;
    }
    double lower = std::exp(a * std::log(x) - x) * sum;
    return gamma_fn(a) - lower;
}

// Lentz continued fraction for Gamma(a, x); converges for x > 0 when
// x >= a (and for any a <= x including a <= 0, used for the a = 0 seed).
double gamma_upper_cf(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 2000; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(a * std::log(x) - x) * h;
}

double gamma_upper_positive(double a, double x) {
    return (x >= a) ? gamma_upper_cf(a, x) : gamma_upper_series(a, x);
}

} // namespace

double gamma_fn(double x) {
    if (is_nonpositive_integer(x))
        throw std::domain_error("gamma_fn: pole at nonpositive integer");
    if (x < 0.5) {
        // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
        return kPi / (std::sin(kPi * x) * gamma_fn(1.0 - x));
    }
    double z = x - 1.0;
    double acc = kLanczos[0];
    for (int i = 1; i < 9; ++i)
        acc += kLanczos[i] / (z + i);
    double t = z + kLanczosG + 0.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * acc;
}

double gamma_upper(double a, double x) {
    if (!(x > 0.0))
        throw std::domain_error("gamma_upper: requires x > 0");
    if (a > 0.0)
        return gamma_upper_positive(a, x);

    // a <= 0, x away from 0: the continued fraction converges directly and
    // avoids the recurrence below, which subtracts two nearly equal terms
    // once x is large (ruinous for a <= -4, x >= 25).
    if (x >= 2.0)
        return gamma_upper_cf(a, x);

    // a <= 0, small x: descend from a positive (or a = 0) seed via
    //   Gamma(a, x) = (Gamma(a+1, x) - x^a e^{-x}) / a.
    // Here x^a e^{-x} dominates the numerator, so nothing cancels.
    double a0;
    int steps;
    double seed;
    if (a == std::floor(a)) {
        a0 = 0.0;
        steps = static_cast<int>(-a);
        seed = gamma_upper_cf(0.0, x);   // Gamma(0, x) = E_1(x)
    } else {
        a0 = a - std::floor(a);          // in (0, 1)
        steps = static_cast<int>(std::floor(a0 - a) + 0.5);
        seed = gamma_upper_positive(a0, x);
    }
    double g = seed;
    double ai = a0;
    for (int i = 0; i < steps; ++i) {
        ai -= 1.0;
        g = (g - std::pow(x, ai) * std::exp(-x)) / ai;
    }
    return g;
}

double combined_gamma_k(double x, double s, int k) {
    if (!(x > 0.0))
        throw std::domain_error("combined_gamma_k: requires x > 0");
    double s1 = 0.5 * s + k;
    double s2 = 1.0 - 0.5 * s + k;
    return gamma_upper(s1, x) * std::pow(x, -s1) +
           gamma_upper(s2, x) * std::pow(x, -s2);
}

double bell_partial(const std::vector<double>& x, int n, int m) {
    if (n < 0 || m < 0)
        throw std::invalid_argument("bell_partial: negative index");
    if (m > n) return 0.0;
    if (n == 0) return 1.0;   // m == 0 here
    if (m == 0) return 0.0;
    if (static_cast<int>(x.size()) < n - m + 1)
        throw std::invalid_argument("bell_partial: argument list too short");
    return bell_table(x, n)[n][m];
}

std::vector<std::vector<double>> bell_table(const std::vector<double>& x, int nmax) {
    std::vector<std::vector<double>> B(nmax + 1, std::vector<double>(nmax + 1, 0.0));
    B[0][0] = 1.0;
    for (int n = 1; n <= nmax; ++n) {
        for (int m = 1; m <= n; ++m) {
            double acc = 0.0;
            for (int i = 1; i <= n - m + 1; ++i) {
                if (i > static_cast<int>(x.size())) break;
                acc += binom(n - 1, i - 1) * x[i - 1] * B[n - i][m - 1];
            }
            B[n][m] = acc;
        }
    }
    return B;
}

} // namespace zetaquad
