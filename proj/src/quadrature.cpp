#include "ipr/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace ipr {

namespace {

// Evaluates the orthonormal Hermite polynomial of degree n and its value at
// degree n-1 (needed for the weight formula) at x.
void hermite_pair(int n, double x, double& hn, double& hn1) {
    double p_prev = 0.0;
    double p = std::pow(std::acos(-1.0), -0.25);  // degree 0
    for (int j = 0; j < n; ++j) {
        const double p_next = x * std::sqrt(2.0 / (j + 1)) * p - std::sqrt(double(j) / (j + 1)) * p_prev;
        p_prev = p;
        p = p_next;
    }
    hn = p;
    hn1 = p_prev;
}

}  // namespace

GaussHermiteRule GaussHermiteRule::make(int K) {
    if (K < 2) throw std::invalid_argument("GaussHermiteRule: need at least 2 points");
    GaussHermiteRule rule;
    rule.x.assign(K, 0.0);
    rule.w.assign(K, 0.0);

    const int half = (K + 1) / 2;
    double z = 0.0, z_prev1 = 0.0, z_prev2 = 0.0;
    for (int i = 0; i < half; ++i) {
        // Seed values for the i-th largest root (standard initial guesses).
        if (i == 0) {
            z = std::sqrt(2.0 * K + 1.0) - 1.85575 * std::pow(2.0 * K + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(double(K), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * z_prev2;
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * z_prev2;
        } else {
            z = 2.0 * z - z_prev2;
        }
        double hn = 0.0, hn1 = 0.0;
        for (int it = 0; it < 100; ++it) {
            hermite_pair(K, z, hn, hn1);
            const double deriv = std::sqrt(2.0 * K) * hn1;
            const double step = hn / deriv;
            z -= step;
            if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z))) break;
        }
        hermite_pair(K, z, hn, hn1);
        const double deriv = std::sqrt(2.0 * K) * hn1;
        const double weight = 2.0 / (deriv * deriv);
        rule.x[K - 1 - i] = z;
        rule.w[K - 1 - i] = weight;
        rule.x[i] = -z;
        rule.w[i] = weight;
        z_prev2 = z_prev1;
        z_prev1 = z;
    }
    if (K % 2 == 1) rule.x[K / 2] = 0.0;  // middle root is exactly zero
    return rule;
}

}  // namespace ipr
