#pragma once

// Discrete decreasing Schwarz symmetrization onto a cell-count-preserving
// ball, and the two Polya-Szego energy comparisons. The continuous
// inequalities are not theorems for this discretization, so the report
// carries a slack parameter and an ok flag instead of asserting.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "mixlap/grid.hpp"
#include "mixlap/operator.hpp"

namespace mixlap {

struct RearrangedField {
    std::shared_ptr<GridDomain> ball_domain;
    ScalarField values;
    std::uint64_t value_multiset_checksum = 0;

    RearrangedField(std::shared_ptr<GridDomain> d, ScalarField v, std::uint64_t cs)
        : ball_domain(std::move(d)), values(std::move(v)), value_multiset_checksum(cs) {}
};

namespace detail {

inline std::uint64_t fnv1a_doubles(const std::vector<double>& sorted) {
    std::uint64_t hash = 1469598103934665603ull;
    for (double v : sorted) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(v));
        std::memcpy(&bits, &v, sizeof(bits));
        for (int b = 0; b < 8; ++b) {
            hash ^= (bits >> (8 * b)) & 0xff;
            hash *= 1099511628211ull;
        }
    }
    return hash;
}

/// Cells of the bbox ordered by distance of their center to the bbox
/// center, ties broken lexicographically (j, then i).
inline std::vector<std::size_t> cells_by_center_distance(const GridDomain& d) {
    const double cx = 0.5 * (d.nx - 1), cy = 0.5 * (d.ny - 1);
    std::vector<std::size_t> order(d.cells());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double dxa = double(a % d.nx) - cx, dya = double(a / d.nx) - cy;
        const double dxb = double(b % d.nx) - cx, dyb = double(b / d.nx) - cy;
        const double ra = dxa * dxa + dya * dya, rb = dxb * dxb + dyb * dyb;
        if (ra != rb) return ra < rb;
        return a < b;
    });
    return order;
}

}  // namespace detail

/// Sort the positive cell values descending and place them on the cells
/// nearest the center of a fresh square bbox, so equimeasurability is exact
/// at cell granularity.
inline RearrangedField schwarz_rearrange(const ScalarField& u) {
    const GridDomain& src = *u.domain;
    std::vector<double> positive;
    for (std::size_t k = 0; k < u.values.size(); ++k) {
        if (u.values[k] < 0.0) throw std::invalid_argument("schwarz_rearrange: negative values");
        if (src.mask[k] && u.values[k] > 0.0) positive.push_back(u.values[k]);
    }
    if (positive.empty()) throw std::invalid_argument("schwarz_rearrange: zero field");
    std::sort(positive.begin(), positive.end(), std::greater<>());

    // square bbox big enough for the equal-count ball plus a collar
    auto ball = std::make_shared<GridDomain>();
    ball->dim = src.dim;
    ball->h = src.h;
    ball->origin = {0.0, 0.0};
    const std::size_t n_cells = positive.size();
    if (src.dim == 1) {
        ball->nx = int(n_cells) + 4;
        ball->ny = 1;
    } else {
        const int rc = int(std::ceil(std::sqrt(double(n_cells) / M_PI))) + 2;
        ball->nx = ball->ny = 2 * rc + 3;
    }
    ball->mask.assign(ball->cells(), 0);
    ball->spec = ShapeSpec{};  // mask-defined; no analytic spec
    auto order = detail::cells_by_center_distance(*ball);

    ScalarField out(ball);
    for (std::size_t r = 0; r < positive.size(); ++r) {
        ball->mask[order[r]] = 1;
        out.values[order[r]] = positive[r];
    }
    // margin invariant must survive (support cell count <= source interior count)
    for (int j = 0; j < ball->ny; ++j)
        for (int i = 0; i < ball->nx; ++i)
            if (ball->mask[ball->index(i, j)] &&
                (i == 0 || i == ball->nx - 1 || (ball->dim == 2 && (j == 0 || j == ball->ny - 1))))
                throw std::logic_error("schwarz_rearrange: rearranged ball touches bbox edge");

    return RearrangedField(ball, std::move(out), detail::fnv1a_doubles(positive));
}

/// L2 norm computed over the sorted value multiset in a fixed order; the
/// same routine applied to a field and its rearrangement returns identical
/// bits.
inline double l2_norm_sorted(const ScalarField& u) {
    std::vector<double> vals;
    for (std::size_t k = 0; k < u.values.size(); ++k)
        if (u.domain->mask[k] && u.values[k] > 0.0) vals.push_back(u.values[k]);
    std::sort(vals.begin(), vals.end(), std::greater<>());
    double acc = 0.0;
    for (double v : vals) acc += v * v;
    return std::sqrt(acc * std::pow(u.domain->h, u.domain->dim));
}

struct PolyaSzegoReport {
    double local_src = 0.0, local_ast = 0.0;
    double nonlocal_src = 0.0, nonlocal_ast = 0.0;
    bool local_ok = false, nonlocal_ok = false;
    bool flagged = false;  // degenerate support, comparisons skipped
};

/// Energies of u and of its rearrangement (operator rebuilt on the ball
/// domain with the same s and h). ok flags use a multiplicative slack.
inline PolyaSzegoReport polya_szego_report(const MixedOperator& op_src, const ScalarField& u,
                                           double slack = 0.02) {
    PolyaSzegoReport rep;
    RearrangedField ast = schwarz_rearrange(u);
    if (ast.ball_domain->interior_count() <= 1) {
        rep.flagged = true;
        return rep;
    }
    EnergyForms src = energy_forms(op_src, u, u);
    MixedOperator op_ast(ast.ball_domain, op_src.s(), op_src.local_scale(),
                         op_src.nonlocal_scale());
    EnergyForms dst = energy_forms(op_ast, ast.values, ast.values);
    rep.local_src = src.local;
    rep.local_ast = dst.local;
    rep.nonlocal_src = src.nonlocal;
    rep.nonlocal_ast = dst.nonlocal;
    rep.local_ok = dst.local <= src.local * (1.0 + slack);
    rep.nonlocal_ok = dst.nonlocal <= src.nonlocal * (1.0 + slack);
    return rep;
}

}  // namespace mixlap
