#pragma once

// Experiment runners behind the CLI subcommands. Each runner is
// deterministic under a fixed config, executes independent rows up to the
// configured thread count, assembles results in config order, and emits
// one schema-versioned CSV.
//
// Pass/fail policy: hard assertions are certificate checks (bounds that
// must hold up to stated slack). Eigenvalue comparisons smaller than the
// discretization noise floor are labeled "inconclusive", not failed.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "mixlap/config.hpp"
#include "mixlap/convexgeom.hpp"
#include "mixlap/csv.hpp"
#include "mixlap/eigensolve.hpp"
#include "mixlap/levelset.hpp"
#include "mixlap/rearrange.hpp"

namespace mixlap {

struct RunOutcome {
    bool hard_fail = false;
    bool solver_fail = false;
    int rows = 0;
    std::string csv_path;

    int exit_code() const { return hard_fail ? 2 : (solver_fail ? 3 : 0); }
};

namespace detail {

template <typename F>
inline void parallel_rows(int n, int threads, F&& f) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    const int nw = std::min(threads, n);
    workers.reserve(nw);
    for (int t = 0; t < nw; ++t)
        workers.emplace_back([&] {
            for (int i; (i = next.fetch_add(1)) < n;) f(i);
        });
    for (auto& w : workers) w.join();
}

inline std::string shape_label(const ShapeSpec& s) {
    switch (s.kind) {
        case ShapeKind::Interval: return "interval";
        case ShapeKind::IntervalUnion: return "interval-union";
        case ShapeKind::Disk: return "disk";
        case ShapeKind::Ellipse: return "ellipse";
        case ShapeKind::Rectangle: return "rectangle";
        case ShapeKind::Stadium: return "stadium";
        case ShapeKind::Polygon: return "polygon";
        case ShapeKind::Radial: return "radial";
    }
    return "?";
}

/// Ball (interval at n = 1) with the given volume, anchored at the origin.
inline ShapeSpec matched_ball(int dim, double m) {
    if (dim == 1) return ShapeSpec::interval(0.0, m);
    return ShapeSpec::disk({0.0, 0.0}, std::sqrt(m / M_PI));
}

struct Solve {
    std::shared_ptr<GridDomain> dom;
    EigenPair pair;
};

inline Solve solve_domain(const ShapeSpec& spec, const ExperimentConfig& cfg) {
    auto dom = build_grid_domain(spec, cfg.h);
    MixedOperator op(dom, cfg.s, cfg.local_scale, cfg.nonlocal_scale);
    return Solve{dom, principal_eigenpair(op, cfg.tolerance, cfg.max_iterations)};
}

/// Eigenvalue of the equal-volume ball on a grid with the same h.
inline double matched_ball_lambda(int dim, double m, const ExperimentConfig& cfg) {
    return solve_domain(matched_ball(dim, m), cfg).pair.lambda;
}

inline std::string csv_path(const std::string& out_dir, const std::string& name) {
    std::filesystem::create_directories(out_dir);
    return (std::filesystem::path(out_dir) / (name + ".csv")).string();
}

/// Least-squares slope of log(y) against log(x); pairs with nonpositive
/// entries are skipped.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) return std::nan("");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// eigenvalue differences below this relative size are rasterization noise
inline constexpr double kRelNoiseFloor = 1e-3;

}  // namespace detail

// ---------------------------------------------------------------------------

inline RunOutcome run_eig(const ExperimentConfig& cfg, const std::string& out_dir,
                          bool verbose = false) {
    if (cfg.domains.empty()) throw ConfigError("eig: need at least one domain");
    RunOutcome out;
    out.csv_path = detail::csv_path(out_dir, "eig");
    const int n = int(cfg.domains.size());

    struct Row {
        double lambda = std::nan(""), residual = std::nan(""), vol = 0, per = 0;
        int iterations = 0;
        bool negative = false;
        std::string status = "ok";
    };
    std::vector<Row> rows(n);
    detail::parallel_rows(n, cfg.threads, [&](int i) {
        Row& r = rows[i];
        try {
            auto sol = detail::solve_domain(cfg.domains[i], cfg);
            r.lambda = sol.pair.lambda;
            r.residual = sol.pair.residual;
            r.iterations = sol.pair.iterations;
            r.negative = sol.pair.negative_cells;
            r.vol = volume(*sol.dom);
            r.per = perimeter_estimate(*sol.dom);
        } catch (const SolverFailure& e) {
            r.status = "solver_failure";
            r.residual = e.last_residual;
            r.iterations = e.iterations;
        }
    });

    CsvWriter csv(out.csv_path, "eig", 1,
                  {"index", "kind", "h", "s", "local_scale", "nonlocal_scale", "lambda",
                   "residual", "iterations", "volume", "perimeter", "negative_cells",
                   "extrapolation", "status"});
    for (int i = 0; i < n; ++i) {
        const Row& r = rows[i];
        csv.row(i, detail::shape_label(cfg.domains[i]), cfg.h, cfg.s, cfg.local_scale,
                cfg.nonlocal_scale, r.lambda, r.residual, r.iterations, r.vol, r.per, r.negative,
                cfg.extrapolation(), r.status);
        if (r.status != "ok") out.solver_fail = true;
        if (verbose)
            std::fprintf(stderr, "eig[%d] %s lambda=%.8g status=%s\n", i,
                         detail::shape_label(cfg.domains[i]).c_str(), r.lambda, r.status.c_str());
    }
    out.rows = n;
    return out;
}

// ---------------------------------------------------------------------------

inline RunOutcome run_fk_sweep(const ExperimentConfig& cfg, const std::string& out_dir,
                               bool verbose = false) {
    // domain family: explicit domains, plus ellipse aspects at area pi
    std::vector<ShapeSpec> family = cfg.domains;
    std::vector<std::string> labels;
    for (const auto& d : family) labels.push_back(detail::shape_label(d));
    for (double a : cfg.aspects) {
        // aspect a at area pi: semi-axes sqrt(a), 1/sqrt(a)
        family.push_back(ShapeSpec::ellipse(std::sqrt(a), 1.0 / std::sqrt(a)));
        char buf[48];
        std::snprintf(buf, sizeof buf, "ellipse-aspect-%g", a);
        labels.push_back(buf);
    }
    if (family.empty()) throw ConfigError("fk-sweep: need domains or aspects");

    RunOutcome out;
    out.csv_path = detail::csv_path(out_dir, "fk-sweep");
    const int n = int(family.size());

    struct Row {
        double vol = 0, lambda = std::nan(""), lambda_ball = std::nan(""), margin = std::nan("");
        bool ps_local = false, ps_nonlocal = false, ps_flagged = false;
        std::string status = "pass";
    };
    std::vector<Row> rows(n);
    detail::parallel_rows(n, cfg.threads, [&](int i) {
        Row& r = rows[i];
        try {
            auto sol = detail::solve_domain(family[i], cfg);
            r.vol = volume(*sol.dom);
            r.lambda = sol.pair.lambda;
            r.lambda_ball = detail::matched_ball_lambda(sol.dom->dim, r.vol, cfg);
            r.margin = r.lambda - r.lambda_ball;
            const double rel = r.margin / r.lambda_ball;
            if (rel <= -detail::kRelNoiseFloor)
                r.status = "fail";
            else if (rel < detail::kRelNoiseFloor)
                r.status = "inconclusive";
            MixedOperator op(sol.dom, cfg.s, cfg.local_scale, cfg.nonlocal_scale);
            auto ps = polya_szego_report(op, sol.pair.u0, cfg.slack);
            r.ps_local = ps.local_ok;
            r.ps_nonlocal = ps.nonlocal_ok;
            r.ps_flagged = ps.flagged;
        } catch (const SolverFailure&) {
            r.status = "solver_failure";
        }
    });

    CsvWriter csv(out.csv_path, "fk-sweep", 1,
                  {"index", "label", "volume", "lambda", "lambda_ball", "margin", "rel_margin",
                   "ps_local_ok", "ps_nonlocal_ok", "ps_flagged", "status"});
    for (int i = 0; i < n; ++i) {
        const Row& r = rows[i];
        csv.row(i, labels[i], r.vol, r.lambda, r.lambda_ball, r.margin, r.margin / r.lambda_ball,
                r.ps_local, r.ps_nonlocal, r.ps_flagged, r.status);
        if (r.status == "fail") out.hard_fail = true;
        if (r.status == "solver_failure") out.solver_fail = true;
        if (verbose)
            std::fprintf(stderr, "fk[%d] %s lambda=%.8g ball=%.8g %s\n", i, labels[i].c_str(),
                         r.lambda, r.lambda_ball, r.status.c_str());
    }
    out.rows = n;
    return out;
}

// ---------------------------------------------------------------------------

inline RunOutcome run_stability(const ExperimentConfig& cfg, const std::string& out_dir,
                                bool verbose = false) {
    std::vector<double> amps = cfg.amplitudes;
    if (amps.empty()) amps = {0.0, 0.02, 0.04, 0.08};
    RunOutcome out;
    out.csv_path = detail::csv_path(out_dir, "stability");
    const int n = int(amps.size());

    struct Row {
        double eps = std::nan(""), inner = std::nan(""), outer = std::nan("");
        bool convex = false;
        std::string status = "pass";
    };
    std::vector<Row> rows(n);
    detail::parallel_rows(n, cfg.threads, [&](int i) {
        Row& r = rows[i];
        const double a = amps[i];
        try {
            ShapeSpec spec = ShapeSpec::perturbed_disk(a, cfg.wave_k);
            auto sol = detail::solve_domain(spec, cfg);
            const double m = volume(*sol.dom);
            const double lb = detail::matched_ball_lambda(2, m, cfg);
            r.eps = sol.pair.lambda / lb - 1.0;
            // defects from the exact polygonization of r(theta)
            std::vector<Vec2> verts(512);
            for (int q = 0; q < 512; ++q) {
                double th = -M_PI + 2.0 * M_PI * q / 512.0;
                double g = 1.0 + a * std::cos(cfg.wave_k * th);
                verts[q] = {g * std::cos(th), g * std::sin(th)};
            }
            try {
                ConvexPolygon poly(std::move(verts));
                auto cert = ball_sandwich(poly, chebyshev_inball(poly));
                r.inner = cert.eps_in;
                r.outer = cert.outer_defect;
                r.convex = true;
            } catch (const std::invalid_argument&) {
                r.status = "rejected_nonconvex";
            }
            if (r.eps < -detail::kRelNoiseFloor) r.status = "fail";
        } catch (const SolverFailure&) {
            r.status = "solver_failure";
        }
    });

    // fitted log-log slopes across the convex rows (reported, not asserted)
    std::vector<double> xs, yin, yout;
    for (const Row& r : rows)
        if (r.convex && r.eps > 0) {
            xs.push_back(r.eps);
            yin.push_back(r.inner);
            yout.push_back(r.outer);
        }
    const double slope_in = detail::loglog_slope(xs, yin);
    const double slope_out = detail::loglog_slope(xs, yout);

    // hard assertion: defects shrink toward zero with the amplitude
    bool monotone = true;
    for (int i = 0; i + 1 < n; ++i)
        if (rows[i].convex && rows[i + 1].convex && amps[i] < amps[i + 1] &&
            (rows[i].inner > rows[i + 1].inner + 1e-9 || rows[i].outer > rows[i + 1].outer + 1e-9))
            monotone = false;

    CsvWriter csv(out.csv_path, "stability", 1,
                  {"index", "amplitude", "wave_k", "eps", "inner_defect", "outer_defect", "convex",
                   "fit_slope_inner", "fit_slope_outer", "monotone", "status"});
    for (int i = 0; i < n; ++i) {
        const Row& r = rows[i];
        csv.row(i, amps[i], cfg.wave_k, r.eps, r.inner, r.outer, r.convex, slope_in, slope_out,
                monotone, r.status);
        if (r.status == "fail") out.hard_fail = true;
        if (r.status == "solver_failure") out.solver_fail = true;
        if (verbose)
            std::fprintf(stderr, "stability[%d] a=%g eps=%.4g in=%.4g out=%.4g %s\n", i, amps[i],
                         r.eps, r.inner, r.outer, r.status.c_str());
    }
    if (!monotone) out.hard_fail = true;
    out.rows = n;
    return out;
}

// ---------------------------------------------------------------------------

inline RunOutcome run_superlevel(const ExperimentConfig& cfg, const std::string& out_dir,
                                 bool verbose = false) {
    if (cfg.domains.empty()) throw ConfigError("superlevel: need at least one domain");
    RunOutcome out;
    out.csv_path = detail::csv_path(out_dir, "superlevel");

    struct DomRes {
        double eps = 0;
        std::vector<SuperlevelRow> rows;
        std::string status = "pass";
    };
    const int nd = int(cfg.domains.size());
    std::vector<DomRes> res(nd);
    detail::parallel_rows(nd, cfg.threads, [&](int i) {
        DomRes& r = res[i];
        try {
            auto sol = detail::solve_domain(cfg.domains[i], cfg);
            const double m = volume(*sol.dom);
            const double lb = detail::matched_ball_lambda(sol.dom->dim, m, cfg);
            r.eps = std::max(0.0, sol.pair.lambda / lb - 1.0);
            std::vector<double> deltas = cfg.deltas;
            if (deltas.empty()) {
                // no delta grid requested: scan downward below the Lemma-4.2
                // admissible ceiling min{T, 1/(2 sqrt(m))}
                const double top = std::min(sol.pair.u0.max_abs(), 0.5 / std::sqrt(m));
                for (double f : {0.5, 0.25, 0.1, 0.05, 0.02, 0.01}) deltas.push_back(top * f);
            }
            for (double d : deltas)
                r.rows.push_back(superlevel_check(sol.pair.u0, cfg.s, d, r.eps));
        } catch (const SolverFailure&) {
            r.status = "solver_failure";
        }
    });

    CsvWriter csv(out.csv_path, "superlevel", 1,
                  {"domain_index", "kind", "delta", "measure", "bound", "convexity_score", "empty",
                   "eps", "pass", "status"});
    for (int i = 0; i < nd; ++i) {
        DomRes& r = res[i];
        if (r.status == "solver_failure") {
            csv.row(i, detail::shape_label(cfg.domains[i]), std::nan(""), std::nan(""),
                    std::nan(""), std::nan(""), false, std::nan(""), false, r.status);
            out.solver_fail = true;
            out.rows += 1;
            continue;
        }
        for (const auto& sr : r.rows) {
            csv.row(i, detail::shape_label(cfg.domains[i]), sr.delta, sr.measure, sr.bound,
                    sr.convexity, sr.empty, r.eps, sr.pass, r.status);
            if (!sr.pass) out.hard_fail = true;
            out.rows += 1;
            if (verbose)
                std::fprintf(stderr, "superlevel[%d] delta=%g |O_d|=%.6g bound=%.6g %s\n", i,
                             sr.delta, sr.measure, sr.bound, sr.pass ? "pass" : "FAIL");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

inline RunOutcome run_level_profile(const ExperimentConfig& cfg, const std::string& out_dir,
                                    bool verbose = false) {
    if (cfg.domains.empty()) throw ConfigError("level-profile: need at least one domain");
    RunOutcome out;
    out.csv_path = detail::csv_path(out_dir, "level-profile");

    struct DomRes {
        LevelProfile prof;
        Step1Report step1;
        std::string status = "pass";
    };
    const int nd = int(cfg.domains.size());
    std::vector<DomRes> res(nd);
    detail::parallel_rows(nd, cfg.threads, [&](int i) {
        DomRes& r = res[i];
        try {
            auto sol = detail::solve_domain(cfg.domains[i], cfg);
            const double m = volume(*sol.dom);
            const double lb = detail::matched_ball_lambda(sol.dom->dim, m, cfg);
            const double eps = std::max(0.0, sol.pair.lambda / lb - 1.0);
            r.prof = level_profile(sol.pair.u0, cfg.t_levels);
            r.step1 = step1_functional(r.prof, lb, eps);
        } catch (const SolverFailure&) {
            r.status = "solver_failure";
        }
    });

    CsvWriter csv(out.csv_path, "level-profile", 1,
                  {"domain_index", "t", "measure", "perimeter", "psi_hat", "gamma_star", "empty",
                   "step1_value", "step1_reference", "step1_skipped", "status"});
    for (int i = 0; i < nd; ++i) {
        DomRes& r = res[i];
        if (r.status == "solver_failure") {
            csv.row(i, std::nan(""), std::nan(""), std::nan(""), std::nan(""), std::nan(""), false,
                    std::nan(""), std::nan(""), 0, r.status);
            out.solver_fail = true;
            out.rows += 1;
            continue;
        }
        // |Omega_t| monotone non-increasing is an invariant of the profile
        for (std::size_t k = 0; k + 1 < r.prof.rows.size(); ++k)
            if (r.prof.rows[k + 1].measure > r.prof.rows[k].measure + 1e-12) out.hard_fail = true;
        for (const auto& pr : r.prof.rows) {
            csv.row(i, pr.t, pr.measure, pr.perimeter, pr.psi_hat, pr.gamma_star, pr.empty,
                    r.step1.value, r.step1.reference, r.step1.skipped_rows, r.status);
            out.rows += 1;
        }
        if (verbose)
            std::fprintf(stderr, "level-profile[%d] T=%.6g step1=%.6g ref=%.6g\n", i, r.prof.T,
                         r.step1.value, r.step1.reference);
        if (cfg.plot_data) {
            CsvWriter plot(detail::csv_path(out_dir, "level-profile-psi-" + std::to_string(i)),
                           "plot-psi", 1, {"t", "psi_hat"});
            for (const auto& pr : r.prof.rows) plot.row(pr.t, pr.psi_hat);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

inline RunOutcome run_scaling(const ExperimentConfig& cfg, const std::string& out_dir,
                              bool verbose = false) {
    std::vector<double> ts = cfg.scale_factors;
    if (ts.empty()) ts = {1.0, 0.75, 0.5};
    for (double t : ts)
        if (!(t > 0.0 && t <= 1.0)) throw ConfigError("scaling: need factors in (0,1]");

    RunOutcome out;
    out.csv_path = detail::csv_path(out_dir, "scaling");
    const ShapeSpec base = cfg.domains.empty() ? ShapeSpec::disk({0, 0}, 1.0) : cfg.domains[0];

    double lambda_base;
    try {
        lambda_base = detail::solve_domain(base, cfg).pair.lambda;
    } catch (const SolverFailure&) {
        out.solver_fail = true;
        CsvWriter csv(out.csv_path, "scaling", 1,
                      {"t", "lambda_base", "lambda_scaled", "lower", "upper", "slack", "status"});
        return out;
    }

    const int n = int(ts.size());
    struct Row {
        double lam = std::nan(""), lo = 0, hi = 0;
        std::string status = "pass";
    };
    std::vector<Row> rows(n);
    detail::parallel_rows(n, cfg.threads, [&](int i) {
        Row& r = rows[i];
        const double t = ts[i];
        try {
            ShapeSpec scaled = base;
            if (base.kind == ShapeKind::Disk) {
                scaled.radius = t * base.radius;
            } else if (base.kind == ShapeKind::Ellipse) {
                scaled.ax = t * base.ax;
                scaled.by = t * base.by;
            } else {
                throw ConfigError("scaling: base domain must be a disk or ellipse");
            }
            r.lam = detail::solve_domain(scaled, cfg).pair.lambda;
            // 0 < t <= 1: t^{-2s} lambda(O) <= lambda(tO) <= t^{-2} lambda(O)
            r.lo = std::pow(t, -2.0 * cfg.s) * lambda_base;
            r.hi = std::pow(t, -2.0) * lambda_base;
            if (cfg.local_scale > 0.0 && cfg.nonlocal_scale == 0.0)
                r.lo = r.hi;  // pure local scales exactly by t^{-2}
            const bool ok =
                r.lam >= r.lo * (1.0 - cfg.slack) && r.lam <= r.hi * (1.0 + cfg.slack);
            if (!ok) r.status = "fail";
        } catch (const SolverFailure&) {
            r.status = "solver_failure";
        }
    });

    CsvWriter csv(out.csv_path, "scaling", 1,
                  {"t", "lambda_base", "lambda_scaled", "lower", "upper", "slack", "status"});
    for (int i = 0; i < n; ++i) {
        const Row& r = rows[i];
        csv.row(ts[i], lambda_base, r.lam, r.lo, r.hi, cfg.slack, r.status);
        if (r.status == "fail") out.hard_fail = true;
        if (r.status == "solver_failure") out.solver_fail = true;
        if (verbose)
            std::fprintf(stderr, "scaling t=%g lambda=%.8g in [%.8g, %.8g] %s\n", ts[i], r.lam,
                         r.lo, r.hi, r.status.c_str());
    }
    out.rows = n;
    return out;
}

// ---------------------------------------------------------------------------

inline RunOutcome run_counterexample(const ExperimentConfig& cfg, const std::string& out_dir,
                                     bool verbose = false) {
    std::vector<double> hull_deltas = cfg.deltas;
    if (hull_deltas.empty()) hull_deltas = {1e-2, 3.162e-3, 1e-3, 3.162e-4, 1e-4};
    const std::vector<double> bump_deltas = {1e-2, 1e-3};

    RunOutcome out;
    out.csv_path = detail::csv_path(out_dir, "counterexample");

    struct HullRow {
        double pt = 0, added = 0, eps = 0, outer = 0;
    };
    std::vector<HullRow> hull(hull_deltas.size());
    for (std::size_t i = 0; i < hull_deltas.size(); ++i) {
        auto hc = hull_counterexample(hull_deltas[i], cfg.arc_vertices);
        HullRow& r = hull[i];
        r.pt = hc.tangent_length;
        r.added = hc.added_area;
        r.eps = hc.added_area / M_PI;  // volume-normalized excess over B1
        const Ball outer = min_enclosing_ball(hc.polygon);
        const double a_omega = M_PI + hc.added_area;  // closed form, not shoelace
        r.outer = 1.0 - a_omega / (M_PI * outer.radius * outer.radius);
    }
    std::vector<double> xs, ys;
    for (const auto& r : hull) {
        xs.push_back(r.eps);
        ys.push_back(r.outer);
    }
    const double slope = detail::loglog_slope(xs, ys);

    struct BumpRow {
        double kmin = 0, kmax = 0, excess = 0, bound = 0;
        bool pass = false;
    };
    std::vector<BumpRow> bump(bump_deltas.size());
    for (std::size_t i = 0; i < bump_deltas.size(); ++i) {
        auto body = bump_counterexample(bump_deltas[i]);
        BumpRow& r = bump[i];
        r.kmin = 1e300;
        r.kmax = -1e300;
        for (int q = 0; q < 4096; ++q) {
            const double th = -M_PI + 2.0 * M_PI * q / 4096.0;
            const double k = curvature(body, th);
            r.kmin = std::min(r.kmin, k);
            r.kmax = std::max(r.kmax, k);
        }
        r.excess = body.excess_area();
        r.bound = 4.0 * std::pow(bump_deltas[i], 1.5);
        r.pass = r.kmin >= 0.25 && r.kmax <= 2.0 && r.excess <= r.bound && r.excess >= 0.0;
    }

    CsvWriter csv(out.csv_path, "counterexample", 1,
                  {"family", "delta", "tangent_length", "added_area", "eps", "outer_defect",
                   "defect_over_eps", "fit_slope", "kappa_min", "kappa_max", "excess_area",
                   "excess_bound", "pass"});
    for (std::size_t i = 0; i < hull_deltas.size(); ++i) {
        const auto& r = hull[i];
        csv.row("hull", hull_deltas[i], r.pt, r.added, r.eps, r.outer, r.outer / r.eps, slope,
                std::nan(""), std::nan(""), std::nan(""), std::nan(""), true);
        if (verbose)
            std::fprintf(stderr, "hull delta=%g eps=%.4g outer=%.4g ratio=%.4g\n", hull_deltas[i],
                         r.eps, r.outer, r.outer / r.eps);
    }
    for (std::size_t i = 0; i < bump_deltas.size(); ++i) {
        const auto& r = bump[i];
        csv.row("bump", bump_deltas[i], std::nan(""), std::nan(""), std::nan(""), std::nan(""),
                std::nan(""), std::nan(""), r.kmin, r.kmax, r.excess, r.bound, r.pass);
        if (!r.pass) out.hard_fail = true;
        if (verbose)
            std::fprintf(stderr, "bump delta=%g kappa=[%.4g, %.4g] excess=%.4g <= %.4g %s\n",
                         bump_deltas[i], r.kmin, r.kmax, r.excess, r.bound,
                         r.pass ? "pass" : "FAIL");
    }
    out.rows = int(hull_deltas.size() + bump_deltas.size());
    return out;
}

// ---------------------------------------------------------------------------

inline RunOutcome run_hopf(const ExperimentConfig& cfg, const std::string& out_dir,
                           bool verbose = false) {
    if (cfg.domains.empty()) throw ConfigError("hopf: need at least one domain");
    RunOutcome out;
    out.csv_path = detail::csv_path(out_dir, "hopf");
    const int nd = int(cfg.domains.size());

    struct Row {
        int valid = 0, negative = 0;
        bool degenerate = false;
        std::string status = "pass";
    };
    std::vector<Row> rows(nd);
    detail::parallel_rows(nd, cfg.threads, [&](int i) {
        Row& r = rows[i];
        try {
            auto sol = detail::solve_domain(cfg.domains[i], cfg);
            auto trace = normal_derivative_trace(sol.pair, *sol.dom, cfg.boundary_samples);
            r.degenerate = trace.degenerate;
            for (const auto& s : trace.samples) {
                if (!s.valid) continue;
                ++r.valid;
                if (s.d_nu < 0.0) ++r.negative;
            }
            if (r.valid == 0 || r.negative != r.valid || r.degenerate) r.status = "fail";
        } catch (const SolverFailure&) {
            r.status = "solver_failure";
        }
    });

    CsvWriter csv(out.csv_path, "hopf", 1,
                  {"domain_index", "kind", "samples", "valid", "negative", "frac_negative",
                   "degenerate", "status"});
    for (int i = 0; i < nd; ++i) {
        const Row& r = rows[i];
        csv.row(i, detail::shape_label(cfg.domains[i]), cfg.boundary_samples, r.valid, r.negative,
                r.valid ? double(r.negative) / r.valid : std::nan(""), r.degenerate, r.status);
        if (r.status == "fail") out.hard_fail = true;
        if (r.status == "solver_failure") out.solver_fail = true;
        if (verbose)
            std::fprintf(stderr, "hopf[%d] %s %d/%d negative %s\n", i,
                         detail::shape_label(cfg.domains[i]).c_str(), r.negative, r.valid,
                         r.status.c_str());
    }
    out.rows = nd;
    return out;
}

}  // namespace mixlap
