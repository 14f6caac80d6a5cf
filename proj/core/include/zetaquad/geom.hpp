#pragma once

#include "zetaquad/epstein.hpp"

#include <Eigen/Core>

#include <functional>
#include <iosfwd>
#include <vector>

namespace zetaquad {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

// ---------------------------------------------------------------------------
// Closed planar curves
// ---------------------------------------------------------------------------

/// Position and first two parameter derivatives of a closed curve at t.
struct CurveSample {
    double x = 0, y = 0;
    double xp = 0, yp = 0;
    double xpp = 0, ypp = 0;
};

/// Analytic smooth closed curve, parameterized counterclockwise over
/// t in [0, 2 pi).  Outward unit normal is (y', -x') / |(x', y')|.
class Curve2D {
public:
    static Curve2D circle(double radius);
    static Curve2D ellipse(double a, double b);

    /// Star-shaped curve r(t) = 1 + sum_k c[k] cos((k+1) t + k); the fixed
    /// integer phases break all symmetry so nothing cancels by accident.
    static Curve2D star(std::vector<double> c);

    CurveSample at(double t) const { return f_(t); }

    double speed(double t) const;
    double curvature(double t) const;   ///< signed; positive for a circle
    Vec2 normal(double t) const;        ///< outward unit normal

private:
    explicit Curve2D(std::function<CurveSample(double)> f) : f_(std::move(f)) {}
    std::function<CurveSample(double)> f_;
};

/// Periodic trapezoid sampling of a curve: N nodes t_i = i h, h = 2 pi / N.
struct CurveGrid {
    int N = 0;
    double h = 0;
    std::vector<double> t, x, y;
    std::vector<double> nx, ny;          ///< outward normal
    std::vector<double> speed, curvature;
    std::vector<double> w;               ///< quadrature weight speed * h
};

CurveGrid make_curve_grid(const Curve2D& curve, int N);

// ---------------------------------------------------------------------------
// Surfaces
// ---------------------------------------------------------------------------

/// Pointwise surface data: position, chart derivatives, area element,
/// outward unit normal, and the first fundamental form.
struct SurfaceSample {
    Vec3 pos = Vec3::Zero();
    Vec3 ru = Vec3::Zero();
    Vec3 rv = Vec3::Zero();
    double J = 0;
    Vec3 n = Vec3::Zero();
    QuadraticForm I;    ///< E = ru.ru, F = ru.rv, G = rv.rv
};

/// Torus of major radius R whose tube radius may wobble with the major
/// angle: rt(phi) = r (1 + alpha cos(k phi)).  Chart: u in [0,1) with
/// phi = 2 pi u, v in [0, 1/2) with theta = 4 pi v, chosen so equal grid
/// spacing in u and v needs twice as many u samples.  Normal points out
/// of the tube.  Requires 0 < r (1 + |alpha|) < R so the tube never
/// self-intersects.
class TorusSurface {
public:
    TorusSurface(double R, double r, double alpha = 0.0, int k = 0);

    SurfaceSample at(double u, double v) const;

    double major() const { return R_; }
    double minor() const { return r_; }

private:
    double R_, r_, alpha_;
    int k_;
};

/// Open graph patch z = f(u, v) over [-1/2, 1/2]^2 with quartic
/// f(u, v) = sum_{1 <= i + j <= 4} c[i][j] u^i v^j (c[0][0] ignored).
class PatchSurface {
public:
    explicit PatchSurface(const double coeffs[5][5]);

    SurfaceSample at(double u, double v) const;

    double height(double u, double v) const;

private:
    double c_[5][5];
};

/// Uniform tensor grid over a chart, row-major in (iu, iv).
struct SurfaceGrid {
    int nu = 0, nv = 0;
    double h = 0;                    ///< common spacing in u and v
    bool periodic = false;           ///< torus chart (wraps both directions)
    std::vector<SurfaceSample> node; ///< size nu * nv
    std::vector<double> u, v;        ///< chart coordinates per node

    const SurfaceSample& at(int iu, int iv) const { return node[idx(iu, iv)]; }
    int idx(int iu, int iv) const { return iu * nv + iv; }
    int size() const { return nu * nv; }

    /// Wrap indices on periodic charts (u mod nu, v mod nv).
    int wrap_u(int iu) const;
    int wrap_v(int iv) const;
};

/// Torus grid with nu = 2 Nv, nv = Nv, h = 1 / (2 Nv).
SurfaceGrid make_torus_grid(const TorusSurface& surf, int Nv);

/// Patch grid with (2n+1)^2 nodes, h = 1 / (2n); the singular target sits
/// at the center node (n, n).
SurfaceGrid make_patch_grid(const PatchSurface& surf, int n);

/// Squared chordal distance between two grid nodes.
double chordal_r2(const SurfaceGrid& g, int i, int j);

/// (r^2 - Q(du, dv)) for a stencil neighbor at chart offset (du, dv) from
/// `target`, where Q is the target's first fundamental form.  Evaluated as
/// (r - sqrt(Q))(r + sqrt(Q)) to keep the O(h^3) difference accurate.
double r2_minus_Q(const SurfaceGrid& g, int target, int neighbor,
                  double du, double dv);

/// Compactly supported test density
///   sigma(u, v) = (a cos(a + u) + b sin(b + v)) exp(-2400 (u^2 + v^2)^4),
/// the patch workload used throughout the convergence studies.
struct BumpDensity {
    double a = 0.22;
    double b = -0.018;
    double operator()(double u, double v) const;
};

/// Debug export: one CSV row per node (u, v, x, y, z, J, E, F, G).
void write_node_table(const SurfaceGrid& g, std::ostream& os);

/// Debug export: one CSV row per node (t, x, y, nx, ny, speed, curvature).
void write_node_table(const CurveGrid& g, std::ostream& os);

} // namespace zetaquad
