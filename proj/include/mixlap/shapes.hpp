#pragma once

// Analytic shape descriptions used to rasterize grid domains.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mixlap {

struct Vec2 {
    double x = 0.0, y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

enum class ShapeKind {
    Interval,       // 1D (a,b)
    IntervalUnion,  // 1D union of disjoint open intervals
    Disk,
    Ellipse,
    Rectangle,
    Stadium,
    Polygon,
    Radial,         // r(theta) sampled on a uniform theta grid
};

/// Tagged analytic description of a bounded open set in R^1 or R^2.
/// Membership is always tested at a point (cell center); the boundary
/// itself is never "in" the set.
struct ShapeSpec {
    ShapeKind kind = ShapeKind::Disk;
    // interval / interval union: list of (a,b) pairs
    std::vector<std::pair<double, double>> intervals;
    // 2D shapes
    Vec2 center{0.0, 0.0};
    double radius = 1.0;          // disk / stadium cap radius
    double ax = 1.0, by = 1.0;    // ellipse semi-axes, rectangle w/ht
    double length = 1.0;          // stadium straight segment length
    std::vector<Vec2> polygon;    // CCW simple polygon
    std::vector<double> radial;   // r(theta_k), theta_k = -pi + 2*pi*k/n

    int dim() const {
        return (kind == ShapeKind::Interval || kind == ShapeKind::IntervalUnion) ? 1 : 2;
    }

    static ShapeSpec interval(double a, double b) {
        if (!(b > a)) throw std::invalid_argument("interval: need b > a");
        ShapeSpec s;
        s.kind = ShapeKind::Interval;
        s.intervals = {{a, b}};
        return s;
    }

    static ShapeSpec interval_union(std::vector<std::pair<double, double>> parts) {
        if (parts.empty()) throw std::invalid_argument("interval_union: empty");
        for (auto& [a, b] : parts)
            if (!(b > a)) throw std::invalid_argument("interval_union: need b > a");
        ShapeSpec s;
        s.kind = ShapeKind::IntervalUnion;
        s.intervals = std::move(parts);
        return s;
    }

    static ShapeSpec disk(Vec2 c, double r) {
        if (!(r > 0)) throw std::invalid_argument("disk: need r > 0");
        ShapeSpec s;
        s.kind = ShapeKind::Disk;
        s.center = c;
        s.radius = r;
        return s;
    }

    static ShapeSpec ellipse(double a, double b, Vec2 c = {}) {
        if (!(a > 0) || !(b > 0)) throw std::invalid_argument("ellipse: need a,b > 0");
        ShapeSpec s;
        s.kind = ShapeKind::Ellipse;
        s.center = c;
        s.ax = a;
        s.by = b;
        return s;
    }

    static ShapeSpec rectangle(double w, double ht, Vec2 c = {}) {
        if (!(w > 0) || !(ht > 0)) throw std::invalid_argument("rectangle: need w,ht > 0");
        ShapeSpec s;
        s.kind = ShapeKind::Rectangle;
        s.center = c;
        s.ax = w;
        s.by = ht;
        return s;
    }

    static ShapeSpec stadium(double len, double r, Vec2 c = {}) {
        if (!(len > 0) || !(r > 0)) throw std::invalid_argument("stadium: need len,r > 0");
        ShapeSpec s;
        s.kind = ShapeKind::Stadium;
        s.center = c;
        s.length = len;
        s.radius = r;
        return s;
    }

    static ShapeSpec simple_polygon(std::vector<Vec2> verts) {
        if (verts.size() < 3) throw std::invalid_argument("polygon: need >= 3 vertices");
        ShapeSpec s;
        s.kind = ShapeKind::Polygon;
        s.polygon = std::move(verts);
        if (s.signed_polygon_area() <= 0)
            throw std::invalid_argument("polygon: vertices must be CCW with positive area");
        return s;
    }

    /// r(theta) samples on the uniform grid theta_k = -pi + 2*pi*k/n.
    static ShapeSpec radial_body(std::vector<double> samples, Vec2 c = {}) {
        if (samples.size() < 8) throw std::invalid_argument("radial: need >= 8 samples");
        for (double r : samples)
            if (!(r > 0)) throw std::invalid_argument("radial: need r(theta) > 0");
        ShapeSpec s;
        s.kind = ShapeKind::Radial;
        s.center = c;
        s.radial = std::move(samples);
        return s;
    }

    /// Perturbed disk r(theta) = 1 + a*cos(k*theta).
    static ShapeSpec perturbed_disk(double a, int k, std::size_t n_samples = 1024, Vec2 c = {}) {
        if (!(std::abs(a) < 1)) throw std::invalid_argument("perturbed_disk: need |a| < 1");
        std::vector<double> r(n_samples);
        for (std::size_t i = 0; i < n_samples; ++i) {
            double th = -M_PI + 2.0 * M_PI * double(i) / double(n_samples);
            r[i] = 1.0 + a * std::cos(k * th);
        }
        return radial_body(std::move(r), c);
    }

    double signed_polygon_area() const {
        double a2 = 0.0;
        for (std::size_t i = 0; i < polygon.size(); ++i) {
            const Vec2& p = polygon[i];
            const Vec2& q = polygon[(i + 1) % polygon.size()];
            a2 += cross(p, q);
        }
        return 0.5 * a2;
    }

    double radial_at(double theta) const {
        // periodic linear interpolation of the sample table
        const std::size_t n = radial.size();
        double t = (theta + M_PI) / (2.0 * M_PI) * double(n);
        t -= std::floor(t / double(n)) * double(n);
        std::size_t i0 = std::size_t(t) % n;
        std::size_t i1 = (i0 + 1) % n;
        double frac = t - std::floor(t);
        return radial[i0] * (1.0 - frac) + radial[i1] * frac;
    }

    bool contains(double x) const {
        for (auto& [a, b] : intervals)
            if (x > a && x < b) return true;
        return false;
    }

    bool contains(Vec2 p) const {
        switch (kind) {
            case ShapeKind::Interval:
            case ShapeKind::IntervalUnion:
                return contains(p.x);
            case ShapeKind::Disk: {
                Vec2 d = p - center;
                return dot(d, d) < radius * radius;
            }
            case ShapeKind::Ellipse: {
                Vec2 d = p - center;
                double u = d.x / ax, v = d.y / by;
                return u * u + v * v < 1.0;
            }
            case ShapeKind::Rectangle: {
                Vec2 d = p - center;
                return std::abs(d.x) < 0.5 * ax && std::abs(d.y) < 0.5 * by;
            }
            case ShapeKind::Stadium: {
                Vec2 d = p - center;
                double cx = std::clamp(d.x, -0.5 * length, 0.5 * length);
                double dx = d.x - cx;
                return dx * dx + d.y * d.y < radius * radius;
            }
            case ShapeKind::Polygon: {
                // even-odd crossing test
                bool inside = false;
                const auto& v = polygon;
                for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
                    if ((v[i].y > p.y) != (v[j].y > p.y)) {
                        double xint = v[j].x + (v[i].x - v[j].x) * (p.y - v[j].y) / (v[i].y - v[j].y);
                        if (p.x < xint) inside = !inside;
                    }
                }
                return inside;
            }
            case ShapeKind::Radial: {
                Vec2 d = p - center;
                double r = norm(d);
                if (r == 0.0) return true;
                return r < radial_at(std::atan2(d.y, d.x));
            }
        }
        return false;
    }

    /// Tight axis-aligned bounds [lo, hi] per axis (1D: y-bounds are zero).
    void bounds(Vec2& lo, Vec2& hi) const {
        switch (kind) {
            case ShapeKind::Interval:
            case ShapeKind::IntervalUnion: {
                double a = intervals.front().first, b = intervals.front().second;
                for (auto& [u, v] : intervals) {
                    a = std::min(a, u);
                    b = std::max(b, v);
                }
                lo = {a, 0.0};
                hi = {b, 0.0};
                return;
            }
            case ShapeKind::Disk:
                lo = center - Vec2{radius, radius};
                hi = center + Vec2{radius, radius};
                return;
            case ShapeKind::Ellipse:
                lo = center - Vec2{ax, by};
                hi = center + Vec2{ax, by};
                return;
            case ShapeKind::Rectangle:
                lo = center - Vec2{0.5 * ax, 0.5 * by};
                hi = center + Vec2{0.5 * ax, 0.5 * by};
                return;
            case ShapeKind::Stadium:
                lo = center - Vec2{0.5 * length + radius, radius};
                hi = center + Vec2{0.5 * length + radius, radius};
                return;
            case ShapeKind::Polygon: {
                lo = hi = polygon.front();
                for (const Vec2& p : polygon) {
                    lo.x = std::min(lo.x, p.x);
                    lo.y = std::min(lo.y, p.y);
                    hi.x = std::max(hi.x, p.x);
                    hi.y = std::max(hi.y, p.y);
                }
                return;
            }
            case ShapeKind::Radial: {
                double rmax = 0.0;
                for (double r : radial) rmax = std::max(rmax, r);
                lo = center - Vec2{rmax, rmax};
                hi = center + Vec2{rmax, rmax};
                return;
            }
        }
    }
};

}  // namespace mixlap
