#pragma once

#include <limits>
#include <vector>

#include "ipr/errors.hpp"
#include "ipr/model.hpp"

// Semi-implicit finite-difference solver for one observation interval of the
// valuation equation at a fixed inflation value: Crank-Nicolson in the local
// convection/diffusion/discount terms, fully explicit non-local jump sum,
// one-sided hyperbolic stencil on the z = 0 row, Neumann condition at z_max.

namespace ipr {

struct Grid {
    int H{};   // policy-rate level count; unknown rows at r_h = r_lo + h*delta, h = 1..H-1
    int J{};   // short-rate intervals; z_j = j*dz, j = 0..J
    int N{};   // time steps per observation interval
    double z_max{};

    double dz() const { return z_max / J; }
    int rows() const { return H - 1; }

    // H defaults to the integer part of (r_hi - r_lo)/delta.
    static Grid make(const ModelParams& mp, double z_max, int N, int J);
    static Grid make(const ModelParams& mp, double z_max, int N, int J, int H);
};

double rate_level(const Grid& grid, const ModelParams& mp, int h);  // r_h

// Discrete value surface psi[h][j] over (policy-rate row, short-rate node)
// for one time level and one inflation value.
struct Lattice {
    int H{}, J{};
    double pi{};
    std::vector<double> values;  // rows() x (J+1), row index h-1

    Lattice() = default;
    Lattice(int H_, int J_, double pi_ = 0.0)
        : H(H_), J(J_), pi(pi_), values(static_cast<std::size_t>(H_ - 1) * (J_ + 1), 0.0) {}

    double& at(int h, int j) { return values[static_cast<std::size_t>(h - 1) * (J + 1) + j]; }
    double at(int h, int j) const { return values[static_cast<std::size_t>(h - 1) * (J + 1) + j]; }
    double* row(int h) { return values.data() + static_cast<std::size_t>(h - 1) * (J + 1); }
    const double* row(int h) const {
        return values.data() + static_cast<std::size_t>(h - 1) * (J + 1);
    }
};

// Per-row time-step weights. For row h and z index j = 0..J-1:
//   conv  = k_sh (b(r_h) - z_j) dtau / (4 dz)
//   diff  = z_j sigma_bar_sq(|r_h - z_j|^2) dtau / (4 dz^2) for j >= 1,
//   diff0 = (3/4) k_sh b(r_h) dtau / dz on the j = 0 boundary row,
//   lower = conv - diff   (sub-diagonal entry),
//   upper = diff + conv   (negated super-diagonal entry),
//   diag  = 2 diff + disc + 1,
//   disc  = (dtau/2) * z_j / 100.
// The /100 in disc is the single percent->decimal conversion of the PDE
// discount term (z stays in percent everywhere else); it is what makes
// z_max = 7 mean "seven percent" in the discounting.
struct SchemeCoefficients {
    int H{}, J{};
    double dtau{}, dz{};
    std::vector<double> conv, diff, lower, upper, diag, disc;  // rows() x J, row h-1

    std::size_t idx(int h, int j) const { return static_cast<std::size_t>(h - 1) * J + j; }
    double conv_at(int h, int j) const { return conv[idx(h, j)]; }
    double diff_at(int h, int j) const { return diff[idx(h, j)]; }
    double lower_at(int h, int j) const { return lower[idx(h, j)]; }
    double upper_at(int h, int j) const { return upper[idx(h, j)]; }
    double diag_at(int h, int j) const { return diag[idx(h, j)]; }
    double disc_at(int h, int j) const { return disc[idx(h, j)]; }
};

SchemeCoefficients build_coefficients(const Grid& grid, const ModelParams& mp);
// Overload with an explicit interval length (dtau = interval_length / N);
// the default is one observation spacing theta.
SchemeCoefficients build_coefficients(const Grid& grid, const ModelParams& mp,
                                      double interval_length);

struct DominanceCheck {
    bool ok{true};
    double min_margin{std::numeric_limits<double>::infinity()};
    int h{-1}, j{-1};  // location of the smallest margin
};

// Row-wise strict diagonal dominance of the implicit systems:
// interior rows need diag - |lower| - |upper| > 0, the j = 0 row needs
// (1 + diff0) - 5|conv0| > 0. Checked, not assumed.
DominanceCheck check_dominance(const SchemeCoefficients& coeffs);

// Explicit jump weights dtau * lambda(pi, r_h) * p(pi, r_h, k), clamped to
// destination rows inside the unknown set: k in [-min(m,h-1), min(m,H-1-h)].
// Clamped-away terms are simply dropped (truncation of the non-local term).
struct JumpWeights {
    int H{}, m{};
    std::vector<double> w;      // rows() x (2m+1), index (h-1)*(2m+1) + k + m
    std::vector<double> total;  // per-row sum of the clamped weights

    double at(int h, int k) const { return w[static_cast<std::size_t>(h - 1) * (2 * m + 1) + k + m]; }
    int k_lo(int h) const { return -std::min(m, h - 1); }
    int k_hi(int h) const { return std::min(m, H - 1 - h); }
};

JumpWeights build_jump_weights(const Grid& grid, const ModelParams& mp, double pi, double dtau);

// One implicit system A_h x = q of size J: row 0 is (1 + diff0, -4 conv0,
// conv0, 0, ...), interior rows (lower, diag, -upper), last row
// (lower, diag - upper) with the Neumann condition absorbed. Solved by one
// Gaussian row operation that removes the (0,2) corner entry followed by a
// Thomas sweep; factored once, reused for every step and inflation value.
struct ImplicitSystem {
    int n{};  // = J
    int h{};  // row label, for error messages
    std::vector<double> sub, diag, sup;  // original entries (sub[0], sup[n-1] unused)
    double corner{};                     // original (0,2) entry

    // factorization
    double corner_mult{};                // corner / sup[1]
    double diag0_mod{}, sup0_mod{};      // row 0 after the corner elimination
    std::vector<double> cstar;           // Thomas upper factors
    std::vector<double> pivot;           // forward-elimination pivots

    void factor();  // throws NumericalError on a vanishing pivot
    // work must have room for n doubles.
    void solve(const double* rhs, double* x, double* work) const;
    double residual_inf(const double* x, const double* rhs) const;
};

// Throws NumericalError naming the offending (h, j) if the row fails the
// dominance bound; a finer grid (smaller dtau/dz ratio) restores it.
ImplicitSystem assemble_row_system(const SchemeCoefficients& coeffs, int h);

struct SolveStats {
    double max_residual_ratio{0.0};
    double min_dominance_margin{std::numeric_limits<double>::infinity()};
    long steps{0};
};

// Explicit stage K_h^n for all rows: Crank-Nicolson half of the local terms
// plus the fully explicit jump sum and the explicit discount half.
// Returns rows() x J values, row-major, j = 0..J-1.
std::vector<double> build_explicit_rhs(const Lattice& lattice, const SchemeCoefficients& coeffs,
                                       const Grid& grid, const ModelParams& mp, double pi);
std::vector<double> build_explicit_rhs(const Lattice& lattice, const SchemeCoefficients& coeffs,
                                       const JumpWeights& jumps);

// Assembles, factors and checks the systems once; solves whole intervals.
// Thread-safe for concurrent solve() calls (per-call scratch buffers).
class IntervalSolver {
public:
    IntervalSolver(const Grid& grid, const ModelParams& mp, double interval_length);

    const SchemeCoefficients& coefficients() const { return coeffs_; }
    const DominanceCheck& dominance() const { return dominance_; }

    // Applies `steps` scheme steps starting from `terminal` (use grid.N for
    // a full interval). The returned lattice keeps terminal.pi.
    Lattice solve(const Lattice& terminal, double pi, int steps, SolveStats* stats = nullptr) const;

private:
    Grid grid_;
    const ModelParams& mp_;
    SchemeCoefficients coeffs_;
    DominanceCheck dominance_;
    std::vector<ImplicitSystem> systems_;
};

// Single scheme step (spec operation; assembles internally).
Lattice step(const Lattice& lattice_n, const SchemeCoefficients& coeffs, const Grid& grid,
             const ModelParams& mp, double pi, SolveStats* stats = nullptr);

// Full observation interval [0, theta]: N steps backward from the terminal
// datum. N = 0 returns the terminal unchanged.
Lattice solve_interval(const Lattice& terminal, const Grid& grid, const ModelParams& mp,
                       double pi, SolveStats* stats = nullptr);

}  // namespace ipr
