#pragma once

// Exact 2D convex geometry: Chebyshev in-ball (small LP), minimal enclosing
// ball (Welzl), the concentric ball-sandwich certificate with its cone
// bound, the Bonnesen deficit, and the two convex-hull / radial-bump
// counterexample generators with the boundary curvature formula.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "mixlap/shapes.hpp"

namespace mixlap {

struct Ball {
    Vec2 center{};
    double radius = 0.0;
};

struct ConvexPolygon {
    std::vector<Vec2> vertices;  // CCW, strictly convex

    explicit ConvexPolygon(std::vector<Vec2> v) : vertices(std::move(v)) {
        if (vertices.size() < 3) throw std::invalid_argument("ConvexPolygon: need >= 3 vertices");
        const std::size_t n = vertices.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 a = vertices[i], b = vertices[(i + 1) % n], c = vertices[(i + 2) % n];
            if (cross(b - a, c - b) <= 0.0)
                throw std::invalid_argument("ConvexPolygon: vertices not strictly convex CCW");
            if (a.x == b.x && a.y == b.y)
                throw std::invalid_argument("ConvexPolygon: repeated vertex");
        }
    }

    std::size_t size() const { return vertices.size(); }
};

inline double area(const ConvexPolygon& p) {
    double a2 = 0.0;
    const auto& v = p.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) a2 += cross(v[i], v[(i + 1) % v.size()]);
    return 0.5 * a2;
}

inline double perimeter(const ConvexPolygon& p) {
    double per = 0.0;
    const auto& v = p.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) per += norm(v[(i + 1) % v.size()] - v[i]);
    return per;
}

inline bool contains(const ConvexPolygon& p, Vec2 q, double tol = 1e-12) {
    const auto& v = p.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
        Vec2 a = v[i], b = v[(i + 1) % v.size()];
        if (cross(b - a, q - a) < -tol * norm(b - a)) return false;
    }
    return true;
}

namespace detail {

// ---- Seidel randomized incremental LP, dimension <= 3 ------------------
// maximize c.x subject to a_i.x <= b_i; the caller supplies box bounds so
// every subproblem is bounded.

struct LpConstraint {
    std::array<double, 3> a{};
    double b = 0.0;
};

inline std::array<double, 3> lp_box_corner(int dim, const std::array<double, 3>& c, double M) {
    std::array<double, 3> x{};
    for (int k = 0; k < dim; ++k) x[k] = c[k] >= 0 ? M : -M;
    return x;
}

inline std::array<double, 3> lp_solve(int dim, std::array<double, 3> c,
                                      std::vector<LpConstraint> cons, double M,
                                      std::mt19937& rng) {
    if (dim == 1) {
        double lo = -M, hi = M;
        for (const auto& t : cons) {
            if (t.a[0] > 0)
                hi = std::min(hi, t.b / t.a[0]);
            else if (t.a[0] < 0)
                lo = std::max(lo, t.b / t.a[0]);
            else if (t.b < 0)
                throw std::runtime_error("lp_solve: infeasible");
        }
        if (lo > hi + 1e-9) throw std::runtime_error("lp_solve: infeasible");
        return {c[0] >= 0 ? hi : lo, 0.0, 0.0};
    }

    std::shuffle(cons.begin(), cons.end(), rng);
    std::array<double, 3> x = lp_box_corner(dim, c, M);
    for (std::size_t i = 0; i < cons.size(); ++i) {
        const auto& h = cons[i];
        double ax = 0.0, an = 0.0;
        for (int k = 0; k < dim; ++k) {
            ax += h.a[k] * x[k];
            an += h.a[k] * h.a[k];
        }
        if (ax <= h.b + 1e-12 * (1.0 + std::abs(h.b))) continue;
        if (an == 0.0) throw std::runtime_error("lp_solve: infeasible");
        // optimum lies on h; eliminate the variable with the largest pivot
        int piv = 0;
        for (int k = 1; k < dim; ++k)
            if (std::abs(h.a[k]) > std::abs(h.a[piv])) piv = k;
        const double inv = 1.0 / h.a[piv];

        auto project_vec = [&](const std::array<double, 3>& v, double coeff_piv,
                               std::array<double, 3>& out) {
            int m = 0;
            for (int k = 0; k < dim; ++k) {
                if (k == piv) continue;
                out[m++] = v[k] - coeff_piv * h.a[k] * inv;
            }
        };

        std::array<double, 3> c2{};
        project_vec(c, c[piv], c2);
        std::vector<LpConstraint> sub;
        sub.reserve(i + 2 * dim);
        auto push_projected = [&](const LpConstraint& g) {
            LpConstraint q;
            project_vec(g.a, g.a[piv], q.a);
            q.b = g.b - g.a[piv] * h.b * inv;
            sub.push_back(q);
        };
        for (std::size_t j = 0; j < i; ++j) push_projected(cons[j]);
        // box bounds on the eliminated variable become constraints too
        {
            LpConstraint up, dn;
            up.a[piv] = 1.0;
            up.b = M;
            dn.a[piv] = -1.0;
            dn.b = M;
            push_projected(up);
            push_projected(dn);
        }
        std::array<double, 3> y = lp_solve(dim - 1, c2, std::move(sub), M, rng);
        // lift back
        std::array<double, 3> xf{};
        int m = 0;
        double dotv = 0.0;
        for (int k = 0; k < dim; ++k) {
            if (k == piv) continue;
            xf[k] = y[m++];
            dotv += h.a[k] * xf[k];
        }
        xf[piv] = (h.b - dotv) * inv;
        x = xf;
    }
    return x;
}

}  // namespace detail

/// Center maximizing the minimum distance to the edge lines (3-variable LP
/// over the edge half-planes, Seidel's algorithm with a fixed seed).
inline Ball chebyshev_inball(const ConvexPolygon& p) {
    std::vector<detail::LpConstraint> cons;
    double M = 0.0;
    for (const Vec2& v : p.vertices) M = std::max({M, std::abs(v.x), std::abs(v.y)});
    M = 4.0 * (M + 1.0);
    const auto& v = p.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
        Vec2 a = v[i], b = v[(i + 1) % v.size()];
        Vec2 t = (1.0 / norm(b - a)) * (b - a);
        Vec2 nin{-t.y, t.x};  // inward for CCW
        // nin . c - nin . a >= r
        detail::LpConstraint h;
        h.a = {-nin.x, -nin.y, 1.0};
        h.b = -dot(nin, a);
        cons.push_back(h);
    }
    {
        detail::LpConstraint rpos;
        rpos.a = {0.0, 0.0, -1.0};
        rpos.b = 0.0;
        cons.push_back(rpos);
    }
    std::mt19937 rng(0x5e1de1u);
    auto x = detail::lp_solve(3, {0.0, 0.0, 1.0}, std::move(cons), M, rng);
    return Ball{{x[0], x[1]}, x[2]};
}

namespace detail {

inline Ball circle_two(Vec2 a, Vec2 b) {
    Vec2 c = 0.5 * (a + b);
    return {c, norm(a - c)};
}

inline Ball circle_three(Vec2 a, Vec2 b, Vec2 c) {
    const double d = 2.0 * cross(b - a, c - a);
    if (d == 0.0) {
        // collinear: fall back to the widest pair
        Ball ab = circle_two(a, b), ac = circle_two(a, c), bc = circle_two(b, c);
        Ball best = ab;
        if (ac.radius > best.radius) best = ac;
        if (bc.radius > best.radius) best = bc;
        return best;
    }
    const double a2 = dot(a, a), b2 = dot(b, b), c2 = dot(c, c);
    Vec2 ctr{(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
             (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d};
    return {ctr, norm(a - ctr)};
}

inline bool in_ball(const Ball& ball, Vec2 p, double slack) {
    return norm(p - ball.center) <= ball.radius * (1.0 + slack) + 1e-14;
}

inline Ball welzl_recurse(std::vector<Vec2>& pts, std::size_t n, std::vector<Vec2>& support) {
    if (n == 0 || support.size() == 3) {
        switch (support.size()) {
            case 0: return {Vec2{}, 0.0};
            case 1: return {support[0], 0.0};
            case 2: return circle_two(support[0], support[1]);
            default: return circle_three(support[0], support[1], support[2]);
        }
    }
    Vec2 p = pts[n - 1];
    Ball d = welzl_recurse(pts, n - 1, support);
    if (in_ball(d, p, 1e-12)) return d;
    support.push_back(p);
    Ball d2 = welzl_recurse(pts, n - 1, support);
    support.pop_back();
    return d2;
}

}  // namespace detail

/// Smallest circle enclosing the vertices (Welzl's randomized incremental
/// algorithm, deterministic shuffle).
inline Ball min_enclosing_ball(const ConvexPolygon& p) {
    std::vector<Vec2> pts = p.vertices;
    std::mt19937 rng(0x3e121u);
    std::shuffle(pts.begin(), pts.end(), rng);
    std::vector<Vec2> support;
    return detail::welzl_recurse(pts, pts.size(), support);
}

/// Concentric inner/outer ball certificate for a convex polygon, with the
/// cone quantities from the similitude construction. The cone volume is
/// reported, never asserted: the comparison constant is structural.
struct SandwichCertificate {
    Ball inner{}, outer{};
    double delta = 0.0;         // max vertex distance to the center, minus R
    double eps_in = 0.0;        // 1 - |inner| / |Omega|
    double outer_defect = 0.0;  // 1 - |Omega| / |outer|
    double cone_r = 0.0;        // r = delta R / sqrt((R+delta)^2 - R^2)
    double cone_volume_bound = 0.0;  // n = 2 cone (triangle) area r * delta
    double excess_area = 0.0;        // |Omega \ inner| = |Omega| - pi R^2
};

inline SandwichCertificate ball_sandwich(const ConvexPolygon& p, const Ball& inner) {
    const auto& v = p.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
        Vec2 a = v[i], b = v[(i + 1) % v.size()];
        Vec2 t = (1.0 / norm(b - a)) * (b - a);
        Vec2 nin{-t.y, t.x};
        if (dot(nin, inner.center - a) < inner.radius * (1.0 - 1e-9))
            throw std::invalid_argument("ball_sandwich: inner ball not contained in polygon");
    }
    SandwichCertificate cert;
    cert.inner = inner;
    double far = 0.0;
    for (const Vec2& q : v) far = std::max(far, norm(q - inner.center));
    const double R = inner.radius;
    cert.delta = std::max(0.0, far - R);
    cert.outer = Ball{inner.center, R + cert.delta};
    const double a_omega = area(p);
    cert.eps_in = 1.0 - M_PI * R * R / a_omega;
    cert.outer_defect = 1.0 - a_omega / (M_PI * cert.outer.radius * cert.outer.radius);
    cert.excess_area = a_omega - M_PI * R * R;
    if (cert.delta > 0.0) {
        cert.cone_r = cert.delta * R / std::sqrt((R + cert.delta) * (R + cert.delta) - R * R);
        cert.cone_volume_bound = cert.cone_r * cert.delta;
    }
    return cert;
}

/// Bonnesen-type inequality at n = 2: lhs >= rhs for convex polygons with
/// their Chebyshev in-ball.
struct BonnesenDeficit {
    double lhs = 0.0, rhs = 0.0;
};

inline BonnesenDeficit bonnesen_deficit(const ConvexPolygon& p, const Ball& inball) {
    const double ratio = perimeter(p) / (2.0 * M_PI * inball.radius);
    BonnesenDeficit d;
    d.lhs = ratio * ratio - area(p) / (M_PI * inball.radius * inball.radius);
    d.rhs = (ratio - 1.0) * (ratio - 1.0);
    return d;
}

/// Convex hull of the unit disk and the point P = (0, 1 + delta),
/// polygonized at the given arc resolution, plus the closed-form tangent
/// length and added area (kite minus circular sector).
struct HullCounterexample {
    ConvexPolygon polygon;
    double tangent_length = 0.0;  // PT = sqrt(2 delta + delta^2)
    double added_area = 0.0;      // PT - arccos(1/(1+delta))
};

inline HullCounterexample hull_counterexample(double delta, int arc_vertices = 2048) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("hull_counterexample: need delta in (0,1)");
    const double phi = std::acos(1.0 / (1.0 + delta));  // half-angle of the kite
    std::vector<Vec2> v;
    v.reserve(std::size_t(arc_vertices) + 2);
    // CCW: arc from the left tangent point around the bottom to the right
    // tangent point, then the apex P
    const double th0 = 0.5 * M_PI + phi;
    const double th1 = 0.5 * M_PI - phi + 2.0 * M_PI;
    for (int i = 0; i < arc_vertices; ++i) {
        double th = th0 + (th1 - th0) * double(i) / double(arc_vertices - 1);
        v.push_back({std::cos(th), std::sin(th)});
    }
    v.push_back({0.0, 1.0 + delta});
    HullCounterexample out{ConvexPolygon(std::move(v)),
                           std::sqrt(2.0 * delta + delta * delta),
                           0.0};
    out.added_area = out.tangent_length - phi;
    return out;
}

/// Uniformly convex radial bump body g(theta) = 1 + c delta f(theta/sqrt(delta))
/// with the fixed C0-infinity profile f(t) = exp(1 - 1/(1-t^2)).
struct RadialBody {
    double delta = 0.0;
    double c = 0.0;  // 1 / (4 (1 + ||f||_C2))
    std::vector<double> theta;
    std::vector<double> g;

    ShapeSpec to_shape() const {
        // resample on the uniform (-pi, pi] grid expected by ShapeSpec
        std::vector<double> r(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            r[i] = g_of(-M_PI + 2.0 * M_PI * double(i) / double(g.size()));
        return ShapeSpec::radial_body(std::move(r));
    }

    double g_of(double th) const {
        const double t = th / std::sqrt(delta);
        return 1.0 + c * delta * bump(t);
    }

    static double bump(double t) {
        if (std::abs(t) >= 1.0) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - t * t));
    }
    static double bump_d1(double t) {
        if (std::abs(t) >= 1.0) return 0.0;
        const double w = 1.0 / (1.0 - t * t);
        return -2.0 * t * w * w * bump(t);
    }
    static double bump_d2(double t) {
        if (std::abs(t) >= 1.0) return 0.0;
        const double w = 1.0 / (1.0 - t * t);
        return (-2.0 * w * w - 8.0 * t * t * w * w * w + 4.0 * t * t * w * w * w * w) * bump(t);
    }

    /// max of the sup norms of f, f', f'' on a dense grid
    static double bump_c2_norm() {
        double m = 0.0;
        const int n = 20001;
        for (int i = 0; i < n; ++i) {
            double t = -1.0 + 2.0 * double(i) / double(n - 1);
            m = std::max({m, std::abs(bump(t)), std::abs(bump_d1(t)), std::abs(bump_d2(t))});
        }
        return m;
    }

    /// |Omega \ B_1| = int (g^2 - 1)/2 dtheta over the bump support, by
    /// composite Simpson quadrature.
    double excess_area(int panels = 4096) const {
        const double a = -std::sqrt(delta), b = std::sqrt(delta);
        auto f = [&](double th) {
            const double gg = g_of(th);
            return 0.5 * (gg * gg - 1.0);
        };
        const double hh = (b - a) / panels;
        double acc = f(a) + f(b);
        for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * hh);
        return acc * hh / 3.0;
    }
};

inline RadialBody bump_counterexample(double delta, int samples = 4096) {
    if (!(delta > 0.0 && delta < 0.5))
        throw std::invalid_argument("bump_counterexample: need 0 < delta << 1");
    RadialBody body;
    body.delta = delta;
    body.c = 1.0 / (4.0 * (1.0 + RadialBody::bump_c2_norm()));
    body.theta.resize(samples);
    body.g.resize(samples);
    for (int i = 0; i < samples; ++i) {
        body.theta[i] = -M_PI + 2.0 * M_PI * double(i) / double(samples);
        body.g[i] = body.g_of(body.theta[i]);
    }
    return body;
}

/// kappa = (2 g'^2 - g g'' + g^2) / (g'^2 + g^2)^(3/2) with analytic
/// derivatives of the fixed bump profile.
inline double curvature(const RadialBody& body, double theta) {
    const double sd = std::sqrt(body.delta);
    const double t = theta / sd;
    const double g = body.g_of(theta);
    const double gd = body.c * sd * RadialBody::bump_d1(t);
    const double gdd = body.c * RadialBody::bump_d2(t);
    return (2.0 * gd * gd - g * gdd + g * g) / std::pow(gd * gd + g * g, 1.5);
}

/// Random strictly convex polygon: jittered radii on sorted angles, convex
/// hull, collinear vertices dropped. Used by property tests and the
/// harness sweeps.
inline ConvexPolygon random_convex_polygon(std::mt19937& rng, int n_points = 16) {
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI), rad(0.5, 1.5);
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<Vec2> pts(n_points);
        for (auto& p : pts) {
            double th = ang(rng), r = rad(rng);
            p = {r * std::cos(th), r * std::sin(th)};
        }
        std::sort(pts.begin(), pts.end(),
                  [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
        auto cr = [](Vec2 o, Vec2 a, Vec2 b) { return cross(a - o, b - o); };
        std::vector<Vec2> hull(2 * pts.size());
        std::size_t k = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            while (k >= 2 && cr(hull[k - 2], hull[k - 1], pts[i]) <= 1e-12) --k;
            hull[k++] = pts[i];
        }
        for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
            while (k >= t && cr(hull[k - 2], hull[k - 1], pts[i]) <= 1e-12) --k;
            hull[k++] = pts[i];
        }
        hull.resize(k - 1);
        if (hull.size() < 3) continue;
        try {
            return ConvexPolygon(std::move(hull));
        } catch (const std::invalid_argument&) {
            continue;
        }
    }
    throw std::runtime_error("random_convex_polygon: generation failed");
}

}  // namespace mixlap
