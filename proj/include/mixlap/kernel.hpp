#pragma once

// Cell-integrated weights of the singular kernel |y|^(-n-2s), plus the
// analytic tail coefficient. The kernel carries no normalization constant
// C(n,s): energies must match the unnormalized Gagliardo form literally.
//
// The cell containing y = 0 is dropped; for smooth u the second difference
// is O(|y|^2) there, so the omitted contribution is O(h^(2-2s)). This is
// the dominant consistency error of the discretization (for s >= 1/2 it
// degrades to o(1) slower than first order; such runs are extrapolation).

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mixlap/grid.hpp"

namespace mixlap {

/// Translation-invariant weight table w_j ~ integral of |y|^(-n-2s) over
/// cell j, for all nonzero offsets within the bbox extent, plus the exact
/// closed-form tail beyond the half-width of the support box.
struct FractionalKernel {
    double s = 0.25;
    int dim = 2;
    double h = 0.0;
    int kx = 0, ky = 0;      // offsets range [-kx..kx] x [-ky..ky]
    std::vector<double> w;   // (2kx+1)*(2ky+1) row-major, center entry 0
    double tail_radius = 0.0;
    double tail_coeff = 0.0; // sigma_{n-1} * R^(-2s) / (2s)
    double weight_sum = 0.0; // sum of all w_j

    int wnx() const { return 2 * kx + 1; }
    int wny() const { return 2 * ky + 1; }
    double weight(int jx, int jy) const {
        return w[std::size_t(jy + ky) * wnx() + (jx + kx)];
    }
};

namespace detail {

// 8-point Gauss-Legendre nodes/weights on [-1/2, 1/2]
inline constexpr double kGauss8X[8] = {
    -0.4801449282487619, -0.3983332387068134, -0.2627662049581645, -0.0917173212478249,
    0.0917173212478249,  0.2627662049581645,  0.3983332387068134,  0.4801449282487619};
inline constexpr double kGauss8W[8] = {
    0.0506142681451881, 0.1111905172266872, 0.1568533229389436, 0.1813418916891810,
    0.1813418916891810, 0.1568533229389436, 0.1111905172266872, 0.0506142681451881};

}  // namespace detail

/// Build the weight table for the domain's bbox: 1D weights are exact via
/// the antiderivative; 2D weights use the midpoint rule except for the 8
/// cells adjacent to the origin, which get tensor-product Gauss quadrature.
inline FractionalKernel build_kernel(double s, const GridDomain& d) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("build_kernel: need s in (0,1)");
    FractionalKernel k;
    k.s = s;
    k.dim = d.dim;
    k.h = d.h;
    k.kx = d.nx - 1;
    k.ky = d.dim == 2 ? d.ny - 1 : 0;
    const double h = d.h;

    k.w.assign(std::size_t(k.wnx()) * k.wny(), 0.0);
    if (d.dim == 1) {
        // integral of y^(-1-2s) over [a,b]: (a^(-2s) - b^(-2s)) / (2s)
        for (int j = 1; j <= k.kx; ++j) {
            double a = (j - 0.5) * h, b = (j + 0.5) * h;
            double wj = (std::pow(a, -2.0 * s) - std::pow(b, -2.0 * s)) / (2.0 * s);
            k.w[std::size_t(k.kx + j)] = wj;
            k.w[std::size_t(k.kx - j)] = wj;
        }
        k.tail_radius = (k.kx + 0.5) * h;
        k.tail_coeff = 2.0 * std::pow(k.tail_radius, -2.0 * s) / (2.0 * s);
    } else {
        // Compute on the first quadrant and mirror, so reflections are
        // bit-identical even where quadrature node order would differ.
        const double p = -(2.0 + 2.0 * s);
        for (int jy = 0; jy <= k.ky; ++jy) {
            for (int jx = 0; jx <= k.kx; ++jx) {
                if (jx == 0 && jy == 0) continue;
                double wj;
                if (jx <= 1 && jy <= 1) {
                    // near-singular cells: tensor Gauss
                    double acc = 0.0;
                    for (int a = 0; a < 8; ++a)
                        for (int b = 0; b < 8; ++b) {
                            double x = (jx + detail::kGauss8X[a]) * h;
                            double y = (jy + detail::kGauss8X[b]) * h;
                            acc += detail::kGauss8W[a] * detail::kGauss8W[b] *
                                   std::pow(x * x + y * y, 0.5 * p);
                        }
                    wj = acc * h * h;
                } else {
                    double r2 = (double(jx) * jx + double(jy) * jy) * h * h;
                    wj = std::pow(r2, 0.5 * p) * h * h;
                }
                for (int sy : {-1, 1})
                    for (int sx : {-1, 1})
                        k.w[std::size_t(sy * jy + k.ky) * k.wnx() + (sx * jx + k.kx)] = wj;
            }
        }
        k.tail_radius = (std::min(k.kx, k.ky) + 0.5) * h;
        k.tail_coeff = 2.0 * M_PI * std::pow(k.tail_radius, -2.0 * s) / (2.0 * s);
    }
    double acc = 0.0;
    for (double v : k.w) acc += v;
    k.weight_sum = acc;
    return k;
}

}  // namespace mixlap
