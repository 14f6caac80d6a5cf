#pragma once

#include <vector>

namespace zetaquad {

/// Positive-definite binary quadratic form Q(i, j) = E i^2 + 2 F i j + G j^2,
/// i.e. the first fundamental form of a surface chart.
struct QuadraticForm {
    double E = 1.0;
    double F = 0.0;
    double G = 1.0;

    double det() const { return E * G - F * F; }
    double operator()(double i, double j) const {
        return E * i * i + 2.0 * F * i * j + G * j * j;
    }
    bool positive_definite() const { return E > 0.0 && det() > 0.0; }
};

/// Direction in coefficient space for directional derivatives
/// box = L d/dE + M d/dF + N d/dG applied to Q |-> Z(s; Q).
struct FormDirection {
    double L = 0.0;
    double M = 0.0;
    double N = 0.0;
};

/// Epstein zeta function
///   Z(s; Q) = sum_{(i,j) != 0} Q(i,j)^{-s/2}     (Re s > 2)
/// analytically continued to all real s except the pole at s = 2, via the
/// incomplete-gamma (Riemann theta) representation, which converges for
/// every admissible s with a finite exponentially-weighted lattice sum.
///
/// Q must be positive definite; s = 2 throws std::domain_error.
double epstein_zeta(double s, const QuadraticForm& Q);

/// Repeated directional derivatives box^k Z(s; Q) along `dir`, returned for
/// all orders 0..kmax (element [k] = box^k Z).  kmax <= 12 supported.
std::vector<double> epstein_derivatives(double s, const QuadraticForm& Q,
                                        const FormDirection& dir, int kmax);

/// Homogeneous partial derivatives of total order n, extracted from
/// directional derivatives on a quarter-circle fan of directions.
///
///   dE[l] = d^{n-l}/dE^{n-l} (d/2 dF)^l Z        l = 0..n
///   dG[l] = d^{n-l}/dG^{n-l} (d/2 dF)^l Z        l = 0..n
///
/// (the F-derivative enters only as the halved operator, matching the
/// symmetric role of F in the form).  dE[n] == dG[n] identically; both are
/// computed and the pair is returned for consistency checking.
struct PartialTable {
    int n = 0;
    std::vector<double> dE;   ///< size n+1
    std::vector<double> dG;   ///< size n+1
};

PartialTable epstein_partials(double s, const QuadraticForm& Q, int n);

/// Lattice truncation radius in the scaled variable x = pi Q / sqrt(det):
/// terms with x beyond this bound are dropped.  Grows with the derivative
/// order k to absorb the polynomial factors multiplying exp(-x).
double lattice_truncation(int k);

} // namespace zetaquad
