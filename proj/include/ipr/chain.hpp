#pragma once

#include <cstddef>
#include <functional>

#include "ipr/pde.hpp"
#include "ipr/quadrature.hpp"

// Chains single-interval PDE solves across observation dates through the
// Gaussian convolution over the next inflation innovation, producing the
// time-0 price surface over (pi, r, z).

namespace ipr {

struct InflationGrid {
    double pi_min{}, pi_max{};
    int points{};

    double step() const { return (pi_max - pi_min) / (points - 1); }
    double value(int i) const { return pi_min + i * step(); }

    // Default span: pi_star +- (6 v + |beta| (r_hi + z_max)), wide enough to
    // keep the convolution lookups on-grid for typical reversion chains.
    static InflationGrid coverage(const ModelParams& mp, double z_max, int points = 201);
};

struct ValueSurface {
    InflationGrid grid;
    int H{}, J{};
    int obs_index{};  // observation index i this surface represents
    // geometry carried along for interpolation/export
    double r_lo{}, delta{}, z_max{};
    std::vector<double> values;  // [pi index][h-1][j]

    std::size_t slice_size() const { return static_cast<std::size_t>(H - 1) * (J + 1); }
    double& at(int ip, int h, int j) {
        return values[ip * slice_size() + static_cast<std::size_t>(h - 1) * (J + 1) + j];
    }
    double at(int ip, int h, int j) const {
        return values[ip * slice_size() + static_cast<std::size_t>(h - 1) * (J + 1) + j];
    }
    double* slice(int ip) { return values.data() + ip * slice_size(); }
    const double* slice(int ip) const { return values.data() + ip * slice_size(); }

    // Lattice slice at an arbitrary inflation value (linear interpolation
    // across the pi grid, linear extrapolation beyond its ends).
    Lattice slice_at(double pi) const;
};

// Piecewise-linear value of a pi-indexed slice, linearly extrapolated
// beyond the grid ends; `stride` is the element spacing of the slice.
double interp_pi(const InflationGrid& grid, const double* v, std::ptrdiff_t stride, double pi);

// Gaussian-convolution expectation over the next inflation innovation:
// E[f(gamma(pi,r,z) + eps)] with eps ~ N(0, v^2), by Gauss-Hermite
// quadrature on the callable f.
double convolve_inflation_shock(const std::function<double(double)>& f, double pi, double r,
                                double z, const ModelParams& mp, const GaussHermiteRule& rule);

// Surface form: applies the expectation at every (pi, h, j) node, reading f
// from the surface's pi slices by linear interpolation/extrapolation.
ValueSurface convolve_surface(const ValueSurface& phi, const Grid& grid, const ModelParams& mp,
                              const GaussHermiteRule& rule, int threads = 0);

struct ChainOptions {
    int quad_points{20};
    int threads{0};  // 0 = hardware concurrency
    std::function<void(int)> progress;  // called after each interval with its index
};

struct ChainStats {
    double terminal_growth_const{};  // max |Psi| / (1 + |pi| + z) of the terminal datum
    double final_growth_const{};     // same ratio on the returned surface
    SolveStats solve;
};

// Backward recursion over the M observation intervals: terminal datum is
// the convolved payoff, each interval is solved per inflation grid value,
// and between intervals the convolution maps the solved surface into the
// next terminal datum. Returns the time-0 surface.
ValueSurface chain(const PayoffFn& payoff, const InflationGrid& pig, const Grid& grid,
                   const ModelParams& mp, const ChainOptions& opt = {},
                   ChainStats* stats = nullptr);

// Single solve over the whole horizon M*theta without any convolution;
// valid exactly when payoff, lambda and p do not depend on pi.
Lattice solve_single_horizon(const PayoffFn& payoff, const Grid& grid, const ModelParams& mp,
                             double pi, SolveStats* stats = nullptr);

// Trilinear lookup: linear in pi and z, r snapped to the nearest delta
// multiple (the policy rate lives on that lattice exactly). Out-of-hull
// queries are clamped; *clamped reports that a clamp happened.
double price_at(const ValueSurface& surface, double pi, double r, double z,
                bool* clamped = nullptr);

}  // namespace ipr
