#pragma once

#include <vector>

namespace ipr {

// Gauss-Hermite rule for integrals against exp(-x^2) on the real line:
// integral f(x) exp(-x^2) dx ~= sum_i w[i] * f(x[i]).
struct GaussHermiteRule {
    std::vector<double> x;  // nodes, ascending
    std::vector<double> w;  // positive weights, sum = sqrt(pi)

    int size() const { return static_cast<int>(x.size()); }

    // Builds the K-point rule by Newton iteration on the orthonormal
    // Hermite recurrence. Throws std::invalid_argument for K < 2.
    static GaussHermiteRule make(int K);
};

}  // namespace ipr
