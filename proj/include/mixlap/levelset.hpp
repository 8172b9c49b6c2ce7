#pragma once

// Level-set analytics of a principal eigenfunction: the distribution
// profile t -> (|Omega_t|, perimeter, psi_hat) and the symmetric-difference
// functional it feeds.
//
// psi(t) is taken as -d/dt |Omega_t| via central differences on a uniform
// t-grid (the coarea identification), which is robust on rasterized level
// sets; the boundary integral of 1/|grad u| is not evaluated.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mixlap/eigensolve.hpp"
#include "mixlap/grid.hpp"

namespace mixlap {

struct LevelProfileRow {
    double t = 0.0;
    double measure = 0.0;    // |Omega_t|
    double perimeter = 0.0;  // perimeter_estimate of the superlevel set
    double psi_hat = 0.0;    // -d|Omega_t|/dt, central differences
    double gamma_star = 0.0; // n |B1|^{1/n} |Omega_t|^{1-1/n}
    bool empty = false;
};

struct LevelProfile {
    double T = 0.0;  // sup u0
    std::vector<LevelProfileRow> rows;
};

/// n |B1|^{1/n} m^{1-1/n}: the boundary measure of the ball with volume m.
inline double ball_boundary_measure(int dim, double m) {
    const double b1 = dim == 1 ? 2.0 : M_PI;
    return double(dim) * std::pow(b1, 1.0 / dim) * std::pow(m, 1.0 - 1.0 / dim);
}

inline LevelProfile level_profile(const ScalarField& u0, int n_levels = 64) {
    if (n_levels < 4) throw std::invalid_argument("level_profile: need n_levels >= 4");
    LevelProfile prof;
    prof.T = u0.max_abs();
    if (prof.T <= 0.0) throw std::invalid_argument("level_profile: zero field");
    const int dim = u0.domain->dim;
    const double dt = prof.T / double(n_levels);

    std::vector<double> meas(n_levels);
    prof.rows.resize(n_levels);
    for (int k = 0; k < n_levels; ++k) {
        const double t = k * dt;  // t = 0 row recovers Omega itself
        auto lev = superlevel_set(u0, t);
        LevelProfileRow& r = prof.rows[k];
        r.t = t;
        r.empty = lev->interior_count() == 0;
        r.measure = volume(*lev);
        r.perimeter = r.empty ? 0.0 : perimeter_estimate(*lev);
        r.gamma_star = ball_boundary_measure(dim, r.measure);
        meas[k] = r.measure;
    }
    for (int k = 0; k < n_levels; ++k) {
        double d;
        if (k == 0)
            d = (meas[0] - meas[1]) / dt;
        else if (k == n_levels - 1)
            d = (meas[k - 1] - meas[k]) / dt;
        else
            d = (meas[k - 1] - meas[k + 1]) / (2.0 * dt);
        prof.rows[k].psi_hat = d;
    }
    return prof;
}

struct Step1Report {
    double value = 0.0;      // sum_t [P(t)^2 - P*(t)^2] dt / psi_hat(t)
    double reference = 0.0;  // lambda_L(B) * eps, the bound it is measured against
    int skipped_rows = 0;    // psi_hat below threshold or empty level set
};

/// The Step-I functional of the stability argument, discretized over the
/// profile grid. Rows with vanishing psi_hat are skipped and counted.
inline Step1Report step1_functional(const LevelProfile& prof, double lambda_ball, double eps) {
    Step1Report rep;
    rep.reference = lambda_ball * eps;
    if (prof.rows.size() < 2) return rep;
    const double dt = prof.rows[1].t - prof.rows[0].t;
    // psi values comparable to one grid cell per level are noise
    const double psi_floor = 1e-9;
    for (const auto& r : prof.rows) {
        if (r.empty || r.psi_hat <= psi_floor) {
            ++rep.skipped_rows;
            continue;
        }
        rep.value += (r.perimeter * r.perimeter - r.gamma_star * r.gamma_star) * dt / r.psi_hat;
    }
    return rep;
}

struct SuperlevelRow {
    double delta = 0.0;
    double measure = 0.0;
    double bound = 0.0;  // Lemma-4.2 style lower bound on |Omega_delta|
    double convexity = 0.0;
    bool empty = false;
    bool pass = false;
};

/// |Omega_delta| >= [1 - (2n/s) max{delta |Omega|^{1/2}, eps}] |Omega|.
/// eps is the measured eigenvalue excess over the matched ball (pure
/// discretization noise when Omega is itself a ball).
inline SuperlevelRow superlevel_check(const ScalarField& u0, double s, double delta, double eps) {
    const int n = u0.domain->dim;
    const double m = volume(*u0.domain);
    SuperlevelRow row;
    row.delta = delta;
    const double factor =
        1.0 - (2.0 * n / s) * std::max(delta * std::sqrt(m), eps);
    row.bound = std::max(0.0, factor) * m;
    auto lev = superlevel_set(u0, delta);
    row.empty = lev->interior_count() == 0;
    row.measure = volume(*lev);
    row.convexity = row.empty ? 0.0 : convexity_score(*lev);
    row.pass = row.measure >= row.bound;
    return row;
}

}  // namespace mixlap
