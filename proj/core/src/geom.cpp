#include "zetaquad/geom.hpp"

#include "zetaquad/util.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace zetaquad {

// ---------------------------------------------------------------------------
// curves
// ---------------------------------------------------------------------------

Curve2D Curve2D::circle(double radius) {
    return Curve2D([radius](double t) {
        CurveSample s;
        s.x = radius * std::cos(t);
        s.y = radius * std::sin(t);
        s.xp = -radius * std::sin(t);
        s.yp = radius * std::cos(t);
        s.xpp = -s.x;
        s.ypp = -s.y;
        return s;
    });
}

Curve2D Curve2D::ellipse(double a, double b) {
    return Curve2D([a, b](double t) {
        CurveSample s;
        s.x = a * std::cos(t);
        s.y = b * std::sin(t);
        s.xp = -a * std::sin(t);
        s.yp = b * std::cos(t);
        s.xpp = -s.x;
        s.ypp = -s.y;
        return s;
    });
}

Curve2D Curve2D::star(std::vector<double> c) {
    return Curve2D([c = std::move(c)](double t) {
        double r = 1.0, rp = 0.0, rpp = 0.0;
        for (std::size_t k = 0; k < c.size(); ++k) {
            double m = static_cast<double>(k + 1);
            double ph = m * t + static_cast<double>(k);
            r += c[k] * std::cos(ph);
            rp -= c[k] * m * std::sin(ph);
            rpp -= c[k] * m * m * std::cos(ph);
        }
        double ct = std::cos(t), st = std::sin(t);
        CurveSample s;
        s.x = r * ct;
        s.y = r * st;
        s.xp = rp * ct - r * st;
        s.yp = rp * st + r * ct;
        s.xpp = (rpp - r) * ct - 2.0 * rp * st;
        s.ypp = (rpp - r) * st + 2.0 * rp * ct;
        return s;
    });
}

double Curve2D::speed(double t) const {
    CurveSample s = at(t);
    return std::hypot(s.xp, s.yp);
}

double Curve2D::curvature(double t) const {
    CurveSample s = at(t);
    double sp = std::hypot(s.xp, s.yp);
    return (s.xp * s.ypp - s.yp * s.xpp) / (sp * sp * sp);
}

Vec2 Curve2D::normal(double t) const {
    CurveSample s = at(t);
    double sp = std::hypot(s.xp, s.yp);
    return Vec2(s.yp / sp, -s.xp / sp);
}

CurveGrid make_curve_grid(const Curve2D& curve, int N) {
    if (N < 16 || N % 2 != 0)
        throw std::invalid_argument("make_curve_grid: N must be even and >= 16");
    CurveGrid g;
    g.N = N;
    g.h = kTwoPi / N;
    g.t.resize(N);
    g.x.resize(N);
    g.y.resize(N);
    g.nx.resize(N);
    g.ny.resize(N);
    g.speed.resize(N);
    g.curvature.resize(N);
    g.w.resize(N);
    for (int i = 0; i < N; ++i) {
        double t = i * g.h;
        CurveSample s = curve.at(t);
        double sp = std::hypot(s.xp, s.yp);
        if (!(sp > 1e-12))
            throw std::domain_error("make_curve_grid: degenerate parameterization (|rho'| ~ 0)");
        g.t[i] = t;
        g.x[i] = s.x;
        g.y[i] = s.y;
        g.nx[i] = s.yp / sp;
        g.ny[i] = -s.xp / sp;
        g.speed[i] = sp;
        g.curvature[i] = (s.xp * s.ypp - s.yp * s.xpp) / (sp * sp * sp);
        g.w[i] = sp * g.h;
    }
    return g;
}

// ---------------------------------------------------------------------------
// torus
// ---------------------------------------------------------------------------

TorusSurface::TorusSurface(double R, double r, double alpha, int k)
    : R_(R), r_(r), alpha_(alpha), k_(k) {
    if (!(r > 0.0) || !(r * (1.0 + std::abs(alpha)) < R))
        throw std::domain_error("TorusSurface: need 0 < r (1 + |alpha|) < R");
}

SurfaceSample TorusSurface::at(double u, double v) const {
    const double phi = kTwoPi * u;
    const double th = 2.0 * kTwoPi * v;
    const double cp = std::cos(phi), sp = std::sin(phi);
    const double ct = std::cos(th), st = std::sin(th);

    // tube radius and its phi-derivative
    const double rt = r_ * (1.0 + alpha_ * std::cos(k_ * phi));
    const double rt_p = -r_ * alpha_ * k_ * std::sin(k_ * phi);

    const double ring = R_ + rt * ct;

    SurfaceSample s;
    s.pos = Vec3(ring * cp, ring * sp, rt * st);

    // d/du = 2 pi d/dphi ; d/dv = 4 pi d/dtheta
    Vec3 dphi(rt_p * ct * cp - ring * sp,
              rt_p * ct * sp + ring * cp,
              rt_p * st);
    Vec3 dth(-rt * st * cp, -rt * st * sp, rt * ct);
    s.ru = kTwoPi * dphi;
    s.rv = 2.0 * kTwoPi * dth;

    Vec3 cr = s.ru.cross(s.rv);
    s.J = cr.norm();
    s.n = cr / s.J;
    s.I.E = s.ru.dot(s.ru);
    s.I.F = s.ru.dot(s.rv);
    s.I.G = s.rv.dot(s.rv);
    return s;
}

// ---------------------------------------------------------------------------
// patch
// ---------------------------------------------------------------------------

PatchSurface::PatchSurface(const double coeffs[5][5]) {
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            c_[i][j] = (i + j >= 1 && i + j <= 4) ? coeffs[i][j] : 0.0;
}

double PatchSurface::height(double u, double v) const {
    double z = 0.0;
    for (int i = 0; i <= 4; ++i)
        for (int j = 0; j <= 4 - i; ++j)
            if (c_[i][j] != 0.0)
                z += c_[i][j] * std::pow(u, i) * std::pow(v, j);
    return z;
}

SurfaceSample PatchSurface::at(double u, double v) const {
    double fu = 0.0, fv = 0.0;
    for (int i = 0; i <= 4; ++i) {
        for (int j = 0; j <= 4 - i; ++j) {
            if (c_[i][j] == 0.0) continue;
            if (i >= 1) fu += c_[i][j] * i * std::pow(u, i - 1) * std::pow(v, j);
            if (j >= 1) fv += c_[i][j] * j * std::pow(u, i) * std::pow(v, j - 1);
        }
    }
    SurfaceSample s;
    s.pos = Vec3(u, v, height(u, v));
    s.ru = Vec3(1.0, 0.0, fu);
    s.rv = Vec3(0.0, 1.0, fv);
    Vec3 cr = s.ru.cross(s.rv);   // (-fu, -fv, 1)
    s.J = cr.norm();
    s.n = cr / s.J;
    s.I.E = 1.0 + fu * fu;
    s.I.F = fu * fv;
    s.I.G = 1.0 + fv * fv;
    return s;
}

// ---------------------------------------------------------------------------
// grids
// ---------------------------------------------------------------------------

int SurfaceGrid::wrap_u(int iu) const {
    if (!periodic) return iu;
    int m = iu % nu;
    return m < 0 ? m + nu : m;
}

int SurfaceGrid::wrap_v(int iv) const {
    if (!periodic) return iv;
    int m = iv % nv;
    return m < 0 ? m + nv : m;
}

SurfaceGrid make_torus_grid(const TorusSurface& surf, int Nv) {
    if (Nv < 8) throw std::invalid_argument("make_torus_grid: Nv >= 8");
    SurfaceGrid g;
    g.nu = 2 * Nv;
    g.nv = Nv;
    g.h = 1.0 / (2.0 * Nv);
    g.periodic = true;
    g.node.resize(static_cast<std::size_t>(g.nu) * g.nv);
    g.u.resize(g.node.size());
    g.v.resize(g.node.size());
    for (int iu = 0; iu < g.nu; ++iu) {
        for (int iv = 0; iv < g.nv; ++iv) {
            double u = iu * g.h;
            double v = iv * g.h;
            int k = g.idx(iu, iv);
            g.node[k] = surf.at(u, v);
            g.u[k] = u;
            g.v[k] = v;
        }
    }
    return g;
}

SurfaceGrid make_patch_grid(const PatchSurface& surf, int n) {
    if (n < 4) throw std::invalid_argument("make_patch_grid: n >= 4");
    SurfaceGrid g;
    g.nu = 2 * n + 1;
    g.nv = 2 * n + 1;
    g.h = 0.5 / n;
    g.periodic = false;
    g.node.resize(static_cast<std::size_t>(g.nu) * g.nv);
    g.u.resize(g.node.size());
    g.v.resize(g.node.size());
    for (int iu = 0; iu < g.nu; ++iu) {
        for (int iv = 0; iv < g.nv; ++iv) {
            double u = (iu - n) * g.h;
            double v = (iv - n) * g.h;
            int k = g.idx(iu, iv);
            g.node[k] = surf.at(u, v);
            g.u[k] = u;
            g.v[k] = v;
        }
    }
    return g;
}

double chordal_r2(const SurfaceGrid& g, int i, int j) {
    return (g.node[i].pos - g.node[j].pos).squaredNorm();
}

double r2_minus_Q(const SurfaceGrid& g, int target, int neighbor,
                  double du, double dv) {
    double r = (g.node[neighbor].pos - g.node[target].pos).norm();
    double q = std::sqrt(g.node[target].I(du, dv));
    return (r - q) * (r + q);
}

// ---------------------------------------------------------------------------
// densities and exports
// ---------------------------------------------------------------------------

double BumpDensity::operator()(double u, double v) const {
    double s2 = u * u + v * v;
    return (a * std::cos(a + u) + b * std::sin(b + v)) *
           std::exp(-2400.0 * s2 * s2 * s2 * s2);
}

void write_node_table(const SurfaceGrid& g, std::ostream& os) {
    os << "u,v,x,y,z,J,E,F,G\n";
    for (int k = 0; k < g.size(); ++k) {
        const SurfaceSample& s = g.node[k];
        os << fmt_sci(g.u[k]) << ',' << fmt_sci(g.v[k]) << ','
           << fmt_sci(s.pos[0]) << ',' << fmt_sci(s.pos[1]) << ','
           << fmt_sci(s.pos[2]) << ',' << fmt_sci(s.J) << ','
           << fmt_sci(s.I.E) << ',' << fmt_sci(s.I.F) << ','
           << fmt_sci(s.I.G) << '\n';
    }
}

void write_node_table(const CurveGrid& g, std::ostream& os) {
    os << "t,x,y,nx,ny,speed,curvature\n";
    for (int i = 0; i < g.N; ++i) {
        os << fmt_sci(g.t[i]) << ',' << fmt_sci(g.x[i]) << ','
           << fmt_sci(g.y[i]) << ',' << fmt_sci(g.nx[i]) << ','
           << fmt_sci(g.ny[i]) << ',' << fmt_sci(g.speed[i]) << ','
           << fmt_sci(g.curvature[i]) << '\n';
    }
}

} // namespace zetaquad
