// Acceptance gate: one self-contained check per criterion, one line of
// output each, nonzero exit if anything fails. Tolerances are pinned in
// the checks themselves; nothing here is tunable from outside.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "mixlap/convexgeom.hpp"
#include "mixlap/eigensolve.hpp"
#include "mixlap/levelset.hpp"
#include "mixlap/rearrange.hpp"
#include "oracles.hpp"

using namespace mixlap;

namespace {

double now_s() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::string&)> check;
};

double solve_lambda(const ShapeSpec& spec, double h, double s, double a, double b,
                    double tol = 1e-8) {
    auto d = build_grid_domain(spec, h);
    MixedOperator op(d, s, a, b);
    return principal_eigenpair(op, tol, 400).lambda;
}

char detail_buf[512];

#define DETAIL(...) (std::snprintf(detail_buf, sizeof detail_buf, __VA_ARGS__), \
                     msg = detail_buf)

// 1. pure-local 1D oracle at h = 1/1024, within 1e-3 of pi^2, under 5 s
bool crit1(std::string& msg) {
    const double t0 = now_s();
    const double lam = solve_lambda(ShapeSpec::interval(0, 1), 1.0 / 1024, 0.25, 1.0, 0.0, 1e-10);
    const double dt = now_s() - t0;
    const double rel = std::abs(lam - M_PI * M_PI) / (M_PI * M_PI);
    DETAIL("lambda=%.8f rel_err=%.2e time=%.1fs", lam, rel, dt);
    return rel <= 1e-3 && dt <= 5.0;
}

// 2. pure-local disk oracle at h = 1/128, within 2e-2 of 5.7832, under 60 s
bool crit2(std::string& msg) {
    const double t0 = now_s();
    const double lam = solve_lambda(ShapeSpec::disk({0, 0}, 1.0), 1.0 / 128, 0.25, 1.0, 0.0);
    const double dt = now_s() - t0;
    const double ref = 5.7832;
    const double rel = std::abs(lam - ref) / ref;
    // cross-check the pinned constant against the Bessel-zero oracle
    const double bessel = oracles::disk_laplacian_lambda();
    DETAIL("lambda=%.6f rel_err=%.2e (bessel oracle %.6f) time=%.1fs", lam, rel, bessel, dt);
    return rel <= 2e-2 && dt <= 60.0 && std::abs(bessel - ref) / ref < 1e-4;
}

// 3. discrete form domination over 20 random domains, s in {0.1, 0.25, 0.4}
bool crit3(std::string& msg) {
    std::mt19937 rng(90210);
    std::uniform_real_distribution<double> U(0.5, 1.3);
    const double svals[3] = {0.1, 0.25, 0.4};
    double worst = 1e300;
    for (int i = 0; i < 20; ++i) {
        ShapeSpec spec = ShapeSpec::disk({0, 0}, 1.0);
        switch (i % 4) {
            case 0: spec = ShapeSpec::ellipse(U(rng), U(rng)); break;
            case 1: spec = ShapeSpec::rectangle(U(rng), U(rng)); break;
            case 2: spec = ShapeSpec::disk({0, 0}, U(rng)); break;
            case 3: {
                auto p = random_convex_polygon(rng, 12);
                spec = ShapeSpec::simple_polygon(p.vertices);
                break;
            }
        }
        const double s = svals[i % 3];
        auto d = build_grid_domain(spec, 1.0 / 16);
        MixedOperator mixed(d, s, 1.0, 1.0), local(d, s, 1.0, 0.0);
        const double lm = principal_eigenpair(mixed, 1e-8, 400).lambda;
        const double ll = principal_eigenpair(local, 1e-8, 400).lambda;
        worst = std::min(worst, lm - ll);
        if (lm < ll - 1e-8) {
            DETAIL("domain %d (s=%g): lambda_L=%.8f < lambda_Delta=%.8f", i, s, lm, ll);
            return false;
        }
    }
    DETAIL("20 domains, worst margin lambda_L - lambda_Delta = %.3e", worst);
    return true;
}

// 4. direct vs FFT nonlocal matvec, <= 1e-10 relative, grids {64,128,256}^2
bool crit4(std::string& msg) {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double worst = 0.0;
    for (int N : {64, 128, 256}) {
        const double h = 1.0 / N;
        // square whose collared bbox is about N cells per axis
        auto d = build_grid_domain(ShapeSpec::rectangle(1.0 / 1.2, 1.0 / 1.2), h);
        MixedOperator op(d, 0.25, 0.0, 1.0);
        for (int rep = 0; rep < 10; ++rep) {
            ScalarField u(d);
            for (std::size_t k = 0; k < d->cells(); ++k)
                if (d->mask[k]) u.values[k] = U(rng);
            auto a = op.apply_nonlocal(u);
            auto b = op.apply_nonlocal_fast(u);
            double diff = 0.0;
            for (std::size_t k = 0; k < d->cells(); ++k)
                diff = std::max(diff, std::abs(a.values[k] - b.values[k]));
            worst = std::max(worst, diff / a.max_abs());
        }
    }
    DETAIL("max relative path difference %.2e over 30 fields", worst);
    return worst <= 1e-10;
}

// 5. 1D fractional quadrature oracle, s = 0.25: <= 5e-2 at h = 1/256 and
// empirical order >= 1 from h = 1/128
bool crit5(std::string& msg) {
    const double s = 0.25;
    double errs[2] = {0, 0};
    int which = 0;
    for (double h : {1.0 / 128, 1.0 / 256}) {
        auto d = build_grid_domain(ShapeSpec::interval(-1, 1), h);
        MixedOperator op(d, s, 0.0, 1.0);
        ScalarField u(d);
        for (int i = 0; i < d->nx; ++i)
            if (d->mask[i]) u.values[i] = oracles::bump(d->origin.x + (i + 0.5) * h);
        auto Lu = op.apply_nonlocal(u);
        double max_rel = 0.0;
        for (int q = 0; q < 10; ++q) {
            const double x = -0.85 + 1.7 * q / 9.0;
            const int i = int(std::floor((x - d->origin.x) / h));
            const double xc = d->origin.x + (i + 0.5) * h;
            const double exact = oracles::fractional_1d(oracles::bump, xc, s);
            max_rel = std::max(max_rel, std::abs(Lu.values[i] - exact) / std::abs(exact));
        }
        errs[which++] = max_rel;
    }
    const double order = std::log2(errs[0] / errs[1]);
    DETAIL("rel_err(1/128)=%.2e rel_err(1/256)=%.2e order=%.2f", errs[0], errs[1], order);
    return errs[1] <= 5e-2 && order >= 1.0;
}

// 6. Faber-Krahn ellipse sweep at area pi, s = 0.25, h = 1/128
bool crit6(std::string& msg) {
    const double aspects[4] = {1.0, 1.2, 1.5, 2.0};
    double lam[4];
    for (int i = 0; i < 4; ++i)
        lam[i] = solve_lambda(ShapeSpec::ellipse(std::sqrt(aspects[i]), 1.0 / std::sqrt(aspects[i])),
                              1.0 / 128, 0.25, 1.0, 1.0);
    DETAIL("lambda = %.5f, %.5f, %.5f, %.5f", lam[0], lam[1], lam[2], lam[3]);
    for (int i = 0; i + 1 < 4; ++i)
        if (lam[i + 1] < lam[i]) return false;
    for (int i = 1; i < 4; ++i)
        if (lam[i] < lam[0] * (1.0 - 1e-3)) return false;
    return true;
}

// 7. 1D Faber-Krahn: one interval of length 2 beats the split into two of
// length 1, analytically for (1,0) and numerically for (1,1)
bool crit7(std::string& msg) {
    const double h = 1.0 / 512;
    const auto single = ShapeSpec::interval(0, 2);
    const auto split = ShapeSpec::interval_union({{0.0, 1.0}, {3.0, 4.0}});
    const double l1 = solve_lambda(single, h, 0.25, 1.0, 0.0);
    const double l2 = solve_lambda(split, h, 0.25, 1.0, 0.0);
    const double m1 = solve_lambda(single, h, 0.25, 1.0, 1.0);
    const double m2 = solve_lambda(split, h, 0.25, 1.0, 1.0);
    DETAIL("local: %.6f vs %.6f (pi^2/4=%.6f, pi^2=%.6f); mixed: %.6f vs %.6f", l1, l2,
           M_PI * M_PI / 4, M_PI * M_PI, m1, m2);
    const bool local_ok = std::abs(l1 - M_PI * M_PI / 4) / (M_PI * M_PI / 4) < 1e-2 &&
                          std::abs(l2 - M_PI * M_PI) / (M_PI * M_PI) < 1e-2 && l1 < l2;
    const bool mixed_ok = m2 - m1 > 1e-3 * m1;  // margin beyond the noise floor
    return local_ok && mixed_ok;
}

// 8. scaling sandwich for the disk at t = 1/2, s = 0.25, 1% slack
bool crit8(std::string& msg) {
    const double h = 1.0 / 64, t = 0.5, s = 0.25;
    const double lam = solve_lambda(ShapeSpec::disk({0, 0}, 1.0), h, s, 1.0, 1.0);
    const double lam_t = solve_lambda(ShapeSpec::disk({0, 0}, t), h, s, 1.0, 1.0);
    const double lo = std::pow(t, -2 * s) * lam, hi = std::pow(t, -2) * lam;
    DETAIL("lambda(tO)=%.5f, bounds [%.5f, %.5f]", lam_t, lo, hi);
    return lam_t >= lo * 0.99 && lam_t <= hi * 1.01;
}

// 9. integer-cell translation leaves lambda bit-identical
bool crit9(std::string& msg) {
    const double h = 1.0 / 64;
    const double a = solve_lambda(ShapeSpec::disk({0.0, 0.0}, 0.8), h, 0.25, 1.0, 1.0);
    const double b = solve_lambda(ShapeSpec::disk({7 * h, -3 * h}, 0.8), h, 0.25, 1.0, 1.0);
    DETAIL("lambda=%.17g shifted=%.17g", a, b);
    return a == b;
}

// 10. Bonnesen on 200 random polygons, equality gap -> 0 on refined disks
bool crit10(std::string& msg) {
    std::mt19937 rng(137);
    for (int rep = 0; rep < 200; ++rep) {
        auto p = random_convex_polygon(rng);
        auto d = bonnesen_deficit(p, chebyshev_inball(p));
        if (d.lhs < d.rhs - 1e-12) {
            DETAIL("polygon %d: lhs=%.15g < rhs=%.15g", rep, d.lhs, d.rhs);
            return false;
        }
    }
    double gaps[3];
    int gi = 0;
    for (int n : {16, 64, 256}) {
        std::vector<Vec2> v(n);
        for (int i = 0; i < n; ++i)
            v[i] = {std::cos(2 * M_PI * i / n), std::sin(2 * M_PI * i / n)};
        ConvexPolygon ngon(std::move(v));
        auto d = bonnesen_deficit(ngon, chebyshev_inball(ngon));
        gaps[gi++] = d.lhs - d.rhs;
    }
    DETAIL("200 polygons ok; n-gon gaps %.2e -> %.2e -> %.2e", gaps[0], gaps[1], gaps[2]);
    return gaps[0] > gaps[1] && gaps[1] > gaps[2] && gaps[2] < 1e-3;
}

// 11. hull counterexample: outer defect ~ eps^{2/3}, ratio diverges
bool crit11(std::string& msg) {
    const double deltas[5] = {1e-2, 3.162e-3, 1e-3, 3.162e-4, 1e-4};
    std::vector<double> eps, defect;
    for (double d : deltas) {
        auto hc = hull_counterexample(d);
        eps.push_back(hc.added_area / M_PI);
        const Ball outer = min_enclosing_ball(hc.polygon);
        defect.push_back(1.0 - (M_PI + hc.added_area) / (M_PI * outer.radius * outer.radius));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < 5; ++i) {
        const double lx = std::log(eps[i]), ly = std::log(defect[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double slope = (5 * sxy - sx * sy) / (5 * sxx - sx * sx);
    bool diverges = true;  // defect/eps grows as eps -> 0 (deltas descending)
    for (int i = 0; i + 1 < 5; ++i)
        if (defect[i + 1] / eps[i + 1] <= defect[i] / eps[i]) diverges = false;
    DETAIL("slope=%.4f, defect/eps: %.1f -> %.1f", slope, defect[0] / eps[0],
           defect[4] / eps[4]);
    return std::abs(slope - 2.0 / 3.0) <= 0.1 && diverges;
}

// 12. bump counterexample certificates at delta in {1e-2, 1e-3}
bool crit12(std::string& msg) {
    for (double delta : {1e-2, 1e-3}) {
        auto body = bump_counterexample(delta);
        double kmin = 1e300, kmax = -1e300;
        for (int q = 0; q < 4096; ++q) {
            const double k = curvature(body, -M_PI + 2 * M_PI * q / 4096.0);
            kmin = std::min(kmin, k);
            kmax = std::max(kmax, k);
        }
        const double excess = body.excess_area();
        if (!(kmin >= 0.25 && kmax <= 2.0 && excess >= 0.0 &&
              excess <= 4.0 * std::pow(delta, 1.5))) {
            DETAIL("delta=%g kappa=[%.4f,%.4f] excess=%.3e bound=%.3e", delta, kmin, kmax,
                   excess, 4.0 * std::pow(delta, 1.5));
            return false;
        }
        if (delta == 1e-2)
            DETAIL("kappa in [%.3f, %.3f], excess %.2e <= %.2e (delta=1e-2)", kmin, kmax, excess,
                   4.0 * std::pow(delta, 1.5));
    }
    return true;
}

// 13. superlevel suite on disk and ellipse(1.2), s = 0.25
bool crit13(std::string& msg) {
    const double h = 1.0 / 64, s = 0.25;
    for (int which = 0; which < 2; ++which) {
        ShapeSpec spec = which == 0
                             ? ShapeSpec::disk({0, 0}, 1.0)
                             : ShapeSpec::ellipse(std::sqrt(1.2), 1.0 / std::sqrt(1.2));
        auto d = build_grid_domain(spec, h);
        MixedOperator op(d, s, 1.0, 1.0);
        auto pair = principal_eigenpair(op, 1e-8, 400);
        const double m = volume(*d);
        const double lam_ball =
            solve_lambda(ShapeSpec::disk({0, 0}, std::sqrt(m / M_PI)), h, s, 1.0, 1.0);
        const double eps = std::max(0.0, pair.lambda / lam_ball - 1.0);
        const double top = std::min(pair.u0.max_abs(), 0.5 / std::sqrt(m));
        const double fracs[6] = {0.5, 0.25, 0.1, 0.05, 0.02, 0.01};
        for (int i = 0; i < 6; ++i) {
            auto row = superlevel_check(pair.u0, s, top * fracs[i], eps);
            if (!row.pass) {
                DETAIL("%s: Lemma bound fails at delta=%g (|O_d|=%.5f < %.5f)",
                       which ? "ellipse" : "disk", row.delta, row.measure, row.bound);
                return false;
            }
            if (i >= 3 && row.convexity < 1.0 - 5.0 * h) {
                DETAIL("%s: convexity %.4f < %.4f at delta=%g", which ? "ellipse" : "disk",
                       row.convexity, 1.0 - 5.0 * h, row.delta);
                return false;
            }
        }
    }
    DETAIL("bound holds on all 12 scanned deltas; convexity >= %.3f on the smallest three",
           1.0 - 5.0 * h);
    return true;
}

// 14. Hopf sign: all valid boundary samples negative on disk/ellipse/square
bool crit14(std::string& msg) {
    const double h = 1.0 / 64, s = 0.25;
    int total_valid = 0;
    for (auto spec : {ShapeSpec::disk({0, 0}, 1.0), ShapeSpec::ellipse(1.2, 0.8),
                      ShapeSpec::rectangle(1.6, 1.6)}) {
        auto d = build_grid_domain(spec, h);
        MixedOperator op(d, s, 1.0, 1.0);
        auto pair = principal_eigenpair(op, 1e-8, 400);
        auto trace = normal_derivative_trace(pair, *d, 256);
        int valid = 0, negative = 0;
        for (const auto& smp : trace.samples)
            if (smp.valid) {
                ++valid;
                if (smp.d_nu < 0.0) ++negative;
            }
        if (valid == 0 || negative != valid || trace.degenerate) {
            DETAIL("domain with %d/%d negative samples", negative, valid);
            return false;
        }
        total_valid += valid;
    }
    DETAIL("%d valid samples across 3 domains, all negative", total_valid);
    return true;
}

// 15. Polya-Szego reports ok at 2% slack on 5 domains, bit-level L2 match
bool crit15(std::string& msg) {
    const double h = 1.0 / 64, s = 0.25;
    const ShapeSpec specs[5] = {
        ShapeSpec::ellipse(std::sqrt(1.2), 1.0 / std::sqrt(1.2)),
        ShapeSpec::ellipse(std::sqrt(2.0), 1.0 / std::sqrt(2.0)),
        ShapeSpec::rectangle(1.8, 1.1),
        ShapeSpec::stadium(1.0, 0.55),
        ShapeSpec::interval_union({{0.0, 0.8}, {1.5, 2.3}}),
    };
    for (int i = 0; i < 5; ++i) {
        auto d = build_grid_domain(specs[i], h);
        MixedOperator op(d, s, 1.0, 1.0);
        auto pair = principal_eigenpair(op, 1e-8, 400);
        auto rep = polya_szego_report(op, pair.u0, 0.02);
        auto ast = schwarz_rearrange(pair.u0);
        const bool l2_match = l2_norm_sorted(pair.u0) == l2_norm_sorted(ast.values);
        if (rep.flagged || !rep.local_ok || !rep.nonlocal_ok || !l2_match) {
            DETAIL("domain %d: local %.6f -> %.6f (%s), nonlocal %.6f -> %.6f (%s), l2 %s", i,
                   rep.local_src, rep.local_ast, rep.local_ok ? "ok" : "FAIL", rep.nonlocal_src,
                   rep.nonlocal_ast, rep.nonlocal_ok ? "ok" : "FAIL",
                   l2_match ? "bit-identical" : "MISMATCH");
            return false;
        }
    }
    DETAIL("5 domains: both energies non-increasing at 2%% slack, L2 bit-identical");
    return true;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "pure-local 1D eigenvalue oracle", crit1},
        {2, "pure-local disk eigenvalue oracle", crit2},
        {3, "form domination over random domains", crit3},
        {4, "direct vs FFT matvec equivalence", crit4},
        {5, "1D fractional quadrature oracle + order", crit5},
        {6, "Faber-Krahn ellipse sweep", crit6},
        {7, "1D Faber-Krahn interval vs split", crit7},
        {8, "scaling sandwich at t = 1/2", crit8},
        {9, "translation invariance (bit-identical)", crit9},
        {10, "Bonnesen property suite", crit10},
        {11, "hull counterexample exponent 2/3", crit11},
        {12, "bump counterexample certificates", crit12},
        {13, "superlevel measure bound + convexity", crit13},
        {14, "Hopf boundary sign", crit14},
        {15, "Polya-Szego + exact equimeasurability", crit15},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        std::string msg;
        bool ok = false;
        const double t0 = now_s();
        try {
            ok = c.check(msg);
        } catch (const std::exception& e) {
            msg = std::string("exception: ") + e.what();
        }
        const double dt = now_s() - t0;
        std::printf("criterion %2d: %s  %-42s [%s] (%.1fs)\n", c.id, ok ? "PASS" : "FAIL", c.name,
                    msg.c_str(), dt);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (failures) std::printf("%d of 15 criteria FAILED\n", failures);
    else std::printf("all 15 criteria passed\n");
    return failures == 0 ? 0 : 1;
}
