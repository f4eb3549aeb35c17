#pragma once

#include <limits>
#include <vector>

#include "ipr/chain.hpp"
#include "ipr/pde.hpp"

// Self-convergence analytics: relative l1/linf errors between a grid and its
// 2x refinement, and estimated orders along a refinement ladder.

namespace ipr {

struct ErrorRung {
    int N{}, J{};
    double e1{}, einf{};
    std::vector<double> e1_h, einf_h;  // per policy-rate row, index h-1
    bool degenerate{false};            // a zero denominator was hit
    double order1{std::numeric_limits<double>::quiet_NaN()};
    double orderinf{std::numeric_limits<double>::quiet_NaN()};
    bool has_order{false};
};

struct ErrorReport {
    std::vector<ErrorRung> rungs;
};

// coarse at (N, J) against fine at (2N, 2J): node z_j of the coarse grid is
// node z_{2j} of the fine grid. e1 = max_h sum_j |c - f| / sum_j |f|,
// einf = max_h max_j |c - f| / max_j |f|.
ErrorRung relative_errors(const Lattice& coarse, const Lattice& fine);
// Surface form: compares the slices at inflation value pi.
ErrorRung relative_errors(const ValueSurface& coarse, const ValueSurface& fine, double pi);

// Estimated order between a grid and its 2x refinement: log2(e_c / e_f).
double convergence_order(double e_coarse, double e_fine);
// General refinement ratio (N_fine / N_coarse); equals the log2 form when
// the ratio is 2. Returns NaN for nonpositive errors.
double convergence_order(double e_coarse, double e_fine, double refinement_ratio);

}  // namespace ipr
