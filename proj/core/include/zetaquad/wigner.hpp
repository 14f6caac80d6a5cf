#pragma once

#include "zetaquad/epstein.hpp"

#include <vector>

namespace zetaquad {

/// Zeta-regularized lattice moments ("Wigner limits")
///
///   W^s[u^a v^b] = reg sum_{(i,j) != 0} i^a j^b Q(i,j)^{-s/2}
///
/// defined for monomials of even total degree a + b = 2n by analytic
/// continuation in s, and equal to an explicit rational multiple of a
/// partial derivative of Z(s - 2n; Q):
///
///   W^s[u^{2n-l} v^l] = [prod_{j=0}^{n-1} (1 - s/2 + j)]^{-1} * P_l
///
/// where P_l is the l-th entry of the order-n partial table of Z(s-2n; Q)
/// (the dE half for l <= n, mirrored into dG for l > n).  Odd total degree
/// gives exactly zero by central symmetry of the lattice.
///
/// Requires a, b >= 0; s != 2n + 2 (pole) and the other exclusions of the
/// underlying zeta evaluation.
double wigner_limit(double s, const QuadraticForm& Q, int a, int b);

/// All limits of one even total degree 2n, sharing a single partial-table
/// evaluation: entry [l] = W^s[u^{2n-l} v^l], l = 0..2n.
std::vector<double> wigner_row(double s, const QuadraticForm& Q, int n);

/// Summation oracle for W^s[u^a v^b], independent of the zeta machinery.
///
/// Uses a smooth compactly-supported window eta(r) = exp(1 - 1/(1 - r^2))
/// on [0, 1): for fixed h the windowed lattice sum minus the corresponding
/// windowed integral,
///
///   A(h) = sum'_{i} i^a j^b Q(i)^{-s/2} eta(|i| h)
///        - [int_0^{2pi} cos^a sin^b Q(th)^{-s/2} dth] *
///          [int_0^1 t^{a+b+1-s} eta(t) dt] * h^{s-a-b-2},
///
/// converges to the limit with an even error expansion in h; the oracle
/// returns two Richardson extrapolation passes over a dyadic h sequence.
///
/// Valid for 0 < s < 2 + a + b with s <= 1.5 + (a+b)/2 kept well-resolved by
/// the radial quadrature; degrees a + b <= 2 are what the tests exercise.
struct WignerOracleConfig {
    double h0 = 0.025;       ///< coarsest window scale
    int levels = 4;          ///< dyadic refinements of h (>= 3 for Richardson^2)
    int n_angular = 512;     ///< trapezoid points for the angular factor
    int n_radial = 96;       ///< Gauss-Legendre points for the radial factor
};

double wigner_oracle(double s, const QuadraticForm& Q, int a, int b,
                     const WignerOracleConfig& cfg = {});

} // namespace zetaquad
