#pragma once

#include <vector>

namespace zetaquad {

/// Gamma function by the Lanczos approximation (g = 7, 9 coefficients) with
/// the reflection formula for x < 0.5.  Relative accuracy ~1e-14 on |x| <= 30.
/// Throws std::domain_error at poles (x = 0, -1, -2, ...).
double gamma_fn(double x);

/// Upper incomplete gamma function Gamma(a, x) = int_x^inf t^{a-1} e^{-t} dt,
/// for real a and x > 0.
///
/// Branches:
///  * a > 0, x >= a : Lentz continued fraction.
///  * a > 0, x <  a : series for the lower function, complemented.
///  * a <= 0        : downward recurrence Gamma(a,x) = (Gamma(a+1,x) - x^a e^{-x}) / a
///                    from a positive seed (Gamma(0,x) via continued fraction
///                    when a is a nonpositive integer).
///
/// Throws std::domain_error for x <= 0.
double gamma_upper(double a, double x);

/// The paired incomplete-gamma combination used by lattice-sum kernels:
///
///   G_k(x; s) = Gamma(s/2 + k, x) x^{-(s/2 + k)} + Gamma(1 - s/2 + k, x) x^{-(1 - s/2 + k)}
///
/// with k = 0 giving the bare kernel.  Positive and exponentially decaying
/// in x; satisfies d/dx G_k = -G_{k+1}.
double combined_gamma_k(double x, double s, int k);

/// Partial (incomplete) Bell polynomial B_{n,m}(x_1, ..., x_{n-m+1}),
/// by the standard recurrence
///   B_{n,m} = sum_{i=1}^{n-m+1} binom(n-1, i-1) x_i B_{n-i, m-1},
/// with B_{0,0} = 1 and B_{n,0} = B_{0,m} = 0 otherwise.
///
/// `x` must hold at least n - m + 1 entries (x[0] = x_1).
double bell_partial(const std::vector<double>& x, int n, int m);

/// All B_{n,m} for 0 <= m <= n <= nmax against a fixed argument sequence;
/// table[n][m].  Used by derivative recursions that consume whole rows.
std::vector<std::vector<double>> bell_table(const std::vector<double>& x, int nmax);

} // namespace zetaquad
