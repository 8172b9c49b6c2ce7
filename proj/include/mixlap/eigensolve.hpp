#pragma once

// Principal Dirichlet eigenpair of the mixed operator: inverse power
// iteration with warm-started conjugate-gradient inner solves, plus the
// boundary normal-derivative trace used by the Hopf sign check.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mixlap/grid.hpp"
#include "mixlap/operator.hpp"

namespace mixlap {

struct EigenPair {
    double lambda = 0.0;
    ScalarField u0;
    double residual = 0.0;   // max|L u0 - lambda u0| / (lambda * max|u0|), interior cells
    int iterations = 0;
    bool negative_cells = false;  // iterate had strictly negative cells before the Perron fix-up
    std::vector<double> residual_history;
};

struct SolverFailure : std::runtime_error {
    double last_residual;
    int iterations;
    SolverFailure(double res, int iters)
        : std::runtime_error("principal_eigenpair: no convergence, last residual " +
                             std::to_string(res)),
          last_residual(res), iterations(iters) {}
};

namespace detail {

inline double dot_plain(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// CG on the SPD operator; x holds the warm start on entry, the solution on
/// exit. Stops when ||r|| <= tol_abs.
inline int conjugate_gradient(const MixedOperator& op, const ScalarField& b, ScalarField& x,
                              double tol_abs, int max_iter) {
    ScalarField ax = op.apply_mixed(x);
    ScalarField r(b.domain), p(b.domain);
    for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] = b.values[i] - ax.values[i];
    p.values = r.values;
    double rr = dot_plain(r.values, r.values);
    int it = 0;
    while (std::sqrt(rr) > tol_abs && it < max_iter) {
        ScalarField ap = op.apply_mixed(p);
        const double pap = dot_plain(p.values, ap.values);
        if (pap <= 0.0) break;  // cannot happen for an SPD operator; guards roundoff
        const double alpha = rr / pap;
        for (std::size_t i = 0; i < x.values.size(); ++i) {
            x.values[i] += alpha * p.values[i];
            r.values[i] -= alpha * ap.values[i];
        }
        const double rr_new = dot_plain(r.values, r.values);
        const double beta = rr_new / rr;
        rr = rr_new;
        for (std::size_t i = 0; i < p.values.size(); ++i)
            p.values[i] = r.values[i] + beta * p.values[i];
        ++it;
    }
    return it;
}

}  // namespace detail

/// Inverse power iteration on the SPD mixed operator. Deterministic start
/// vector (distance transform), Perron sign fix-up on exit.
inline EigenPair principal_eigenpair(const MixedOperator& op, double tol = 1e-10,
                                     int max_iter = 200) {
    if (!(op.local_scale() > 0.0))
        throw std::invalid_argument("principal_eigenpair: operator must have local_scale > 0");
    const auto dom = op.domain_ptr();
    const double hn = std::pow(dom->h, dom->dim);

    ScalarField x = distance_transform(dom);
    {
        const double n = l2_norm(x);
        for (double& v : x.values) v /= n;
    }
    ScalarField z = x;  // warm start carrier for the inner solves

    auto eval = [&](const ScalarField& u, double& lambda, double& res) {
        ScalarField au = op.apply_mixed(u);
        lambda = inner_product(au, u) / inner_product(u, u);
        double m = 0.0, umax = u.max_abs();
        for (std::size_t i = 0; i < u.values.size(); ++i)
            if (dom->mask[i]) m = std::max(m, std::abs(au.values[i] - lambda * u.values[i]));
        res = m / (lambda * umax);
    };

    double lambda = 0.0, res = 0.0;
    eval(x, lambda, res);

    EigenPair pair{lambda, x, res, 0, false, {res}};
    const int cg_cap = int(10 * dom->cells()) + 1000;
    for (int it = 1; it <= max_iter; ++it) {
        // scale the warm start so z approximates A^{-1} x
        for (double& v : z.values) v /= lambda;
        const double cg_tol = 0.1 * tol * l2_norm(x) / std::sqrt(hn);
        detail::conjugate_gradient(op, x, z, cg_tol, cg_cap);
        x = z;
        const double n = l2_norm(x);
        for (double& v : x.values) v /= n;
        eval(x, lambda, res);
        pair.residual_history.push_back(res);
        pair.iterations = it;
        if (res <= tol) break;
        z = x;
    }
    if (res > tol) throw SolverFailure(res, pair.iterations);

    // Perron fix-up: flip to the nonnegative representative
    double pos = 0.0, neg = 0.0;
    for (double v : x.values) (v >= 0 ? pos : neg) += std::abs(v);
    if (neg > pos)
        for (double& v : x.values) v = -v;
    const double floor = -1e-12 * x.max_abs();
    for (std::size_t i = 0; i < x.values.size(); ++i)
        if (dom->mask[i] && x.values[i] < floor) pair.negative_cells = true;
    for (double& v : x.values) v = std::abs(v);
    const double n = l2_norm(x);
    for (double& v : x.values) v /= n;

    double lam2, res2;
    eval(x, lam2, res2);
    pair.lambda = lam2;
    pair.residual = res2;
    pair.u0 = std::move(x);
    return pair;
}

/// Any nonzero trial field upper-bounds the principal eigenvalue.
inline double rayleigh_upper_bound(const MixedOperator& op, const ScalarField& trial) {
    return rayleigh_quotient(op, trial);
}

struct BoundarySample {
    Vec2 point{};         // boundary point of the analytic spec
    Vec2 inward{};        // unit inward normal (1D: {+-1, 0})
    bool valid = false;   // stencil fully inside Omega
    double d_nu = 0.0;    // one-sided outward normal derivative estimate
};

struct BoundaryTrace {
    std::vector<BoundarySample> samples;
    bool degenerate = false;  // all sampled derivatives vanish
};

namespace detail {

/// Boundary points + inward unit normals of the analytic spec.
inline std::vector<std::pair<Vec2, Vec2>> boundary_points(const ShapeSpec& s, int n) {
    std::vector<std::pair<Vec2, Vec2>> out;
    switch (s.kind) {
        case ShapeKind::Interval:
        case ShapeKind::IntervalUnion:
            for (auto& [a, b] : s.intervals) {
                out.push_back({{a, 0}, {1, 0}});
                out.push_back({{b, 0}, {-1, 0}});
            }
            return out;
        case ShapeKind::Disk:
            for (int i = 0; i < n; ++i) {
                double th = 2.0 * M_PI * (i + 0.5) / n;
                Vec2 nrm{std::cos(th), std::sin(th)};
                out.push_back({s.center + s.radius * nrm, -1.0 * nrm});
            }
            return out;
        case ShapeKind::Ellipse:
            for (int i = 0; i < n; ++i) {
                double th = 2.0 * M_PI * (i + 0.5) / n;
                Vec2 p{s.center.x + s.ax * std::cos(th), s.center.y + s.by * std::sin(th)};
                Vec2 g{std::cos(th) / s.ax, std::sin(th) / s.by};
                double gn = norm(g);
                out.push_back({p, {-g.x / gn, -g.y / gn}});
            }
            return out;
        case ShapeKind::Rectangle: {
            int per_side = std::max(1, n / 4);
            for (int i = 0; i < per_side; ++i) {
                double tx = s.ax * (i + 0.5) / per_side - 0.5 * s.ax;
                double ty = s.by * (i + 0.5) / per_side - 0.5 * s.by;
                out.push_back({{s.center.x + tx, s.center.y - 0.5 * s.by}, {0, 1}});
                out.push_back({{s.center.x + tx, s.center.y + 0.5 * s.by}, {0, -1}});
                out.push_back({{s.center.x - 0.5 * s.ax, s.center.y + ty}, {1, 0}});
                out.push_back({{s.center.x + 0.5 * s.ax, s.center.y + ty}, {-1, 0}});
            }
            return out;
        }
        case ShapeKind::Stadium: {
            // two caps + two straight sides, sampled by arc length
            const double L = s.length, R = s.radius;
            const double total = 2.0 * L + 2.0 * M_PI * R;
            for (int i = 0; i < n; ++i) {
                double t = total * (i + 0.5) / n;
                Vec2 p, nrm;
                if (t < L) {  // bottom side
                    p = {s.center.x - 0.5 * L + t, s.center.y - R};
                    nrm = {0, 1};
                } else if (t < L + M_PI * R) {  // right cap
                    double th = -0.5 * M_PI + (t - L) / R;
                    nrm = {-std::cos(th), -std::sin(th)};
                    p = {s.center.x + 0.5 * L - R * nrm.x, s.center.y - R * nrm.y};
                } else if (t < 2 * L + M_PI * R) {  // top side
                    p = {s.center.x + 0.5 * L - (t - L - M_PI * R), s.center.y + R};
                    nrm = {0, -1};
                } else {  // left cap
                    double th = 0.5 * M_PI + (t - 2 * L - M_PI * R) / R;
                    nrm = {-std::cos(th), -std::sin(th)};
                    p = {s.center.x - 0.5 * L - R * nrm.x, s.center.y - R * nrm.y};
                }
                out.push_back({p, nrm});
            }
            return out;
        }
        case ShapeKind::Polygon: {
            double per = 0.0;
            for (std::size_t i = 0; i < s.polygon.size(); ++i)
                per += norm(s.polygon[(i + 1) % s.polygon.size()] - s.polygon[i]);
            for (std::size_t i = 0; i < s.polygon.size(); ++i) {
                Vec2 a = s.polygon[i], b = s.polygon[(i + 1) % s.polygon.size()];
                double len = norm(b - a);
                int ns = std::max(1, int(std::lround(n * len / per)));
                Vec2 t = (1.0 / len) * (b - a);
                Vec2 nrm{-t.y, t.x};  // inward for CCW
                for (int q = 0; q < ns; ++q)
                    out.push_back({a + (len * (q + 0.5) / ns) * t, nrm});
            }
            return out;
        }
        case ShapeKind::Radial: {
            const int m = int(s.radial.size());
            for (int i = 0; i < n; ++i) {
                double th = -M_PI + 2.0 * M_PI * (i + 0.5) / n;
                double g = s.radial_at(th);
                // dg/dtheta by central difference on the sample grid spacing
                double dth = 2.0 * M_PI / m;
                double gp = (s.radial_at(th + dth) - s.radial_at(th - dth)) / (2.0 * dth);
                Vec2 er{std::cos(th), std::sin(th)}, et{-std::sin(th), std::cos(th)};
                Vec2 tan = gp * er + g * et;
                double tn = norm(tan);
                Vec2 outward{tan.y / tn, -tan.x / tn};
                out.push_back({s.center + g * er, -1.0 * outward});
            }
            return out;
        }
    }
    return out;
}

/// Multilinear interpolation from cell centers; nullopt when any cell of
/// the stencil is exterior.
inline std::optional<double> interp_interior(const ScalarField& u, Vec2 p) {
    const GridDomain& d = *u.domain;
    const double gx = (p.x - d.origin.x) / d.h - 0.5;
    int i0 = int(std::floor(gx));
    double fx = gx - i0;
    if (d.dim == 1) {
        if (!d.interior(i0, 0) || !d.interior(i0 + 1, 0)) return std::nullopt;
        return u.values[d.index(i0, 0)] * (1 - fx) + u.values[d.index(i0 + 1, 0)] * fx;
    }
    const double gy = (p.y - d.origin.y) / d.h - 0.5;
    int j0 = int(std::floor(gy));
    double fy = gy - j0;
    for (int dj = 0; dj <= 1; ++dj)
        for (int di = 0; di <= 1; ++di)
            if (!d.interior(i0 + di, j0 + dj)) return std::nullopt;
    const double v00 = u.values[d.index(i0, j0)], v10 = u.values[d.index(i0 + 1, j0)];
    const double v01 = u.values[d.index(i0, j0 + 1)], v11 = u.values[d.index(i0 + 1, j0 + 1)];
    return (v00 * (1 - fx) + v10 * fx) * (1 - fy) + (v01 * (1 - fx) + v11 * fx) * fy;
}

}  // namespace detail

/// One-sided outward normal derivative of u0 at analytic boundary points,
/// from values at inward depths h and 2h. Samples whose stencil escapes the
/// domain are kept with valid = false.
inline BoundaryTrace normal_derivative_trace(const EigenPair& pair, const GridDomain& d,
                                             int n_samples) {
    BoundaryTrace trace;
    const double h = d.h;
    double max_abs = 0.0;
    for (auto& [p, inward] : detail::boundary_points(d.spec, n_samples)) {
        BoundarySample s;
        s.point = p;
        s.inward = inward;
        auto u1 = detail::interp_interior(pair.u0, p + h * inward);
        auto u2 = detail::interp_interior(pair.u0, p + (2.0 * h) * inward);
        if (u1 && u2) {
            s.valid = true;
            s.d_nu = -(*u2 - *u1) / h;  // outward derivative
            max_abs = std::max(max_abs, std::abs(s.d_nu));
        }
        trace.samples.push_back(s);
    }
    trace.degenerate = max_abs == 0.0;
    return trace;
}

}  // namespace mixlap
