#include "ipr/cir.hpp"

#include <cmath>

namespace ipr {

double cir_bond_price(double kappa, double theta, double sigma, double z0, double tau) {
    if (tau == 0.0) return 1.0;
    // The affine prefactor is pow(base, 2*kappa*theta/sigma^2); once that
    // exponent exceeds ~1e7 the formula amplifies roundoff past the price
    // difference from the deterministic limit, so switch branches there.
    const double s2 = sigma * sigma;
    if (s2 == 0.0 || 2.0 * kappa * std::abs(theta) > 1e7 * s2) {
        // Degenerate diffusion: discount along the deterministic mean path
        // z(s) = theta + (z0 - theta) e^{-kappa s}.
        const double integral = theta * tau + (z0 - theta) * (1.0 - std::exp(-kappa * tau)) / kappa;
        return std::exp(-integral);
    }
    const double g = std::sqrt(kappa * kappa + 2.0 * sigma * sigma);
    const double e = std::expm1(g * tau);  // e^{g tau} - 1
    const double denom = (g + kappa) * e + 2.0 * g;
    const double B = 2.0 * e / denom;
    const double A = std::pow(2.0 * g * std::exp(0.5 * (g + kappa) * tau) / denom,
                              2.0 * kappa * theta / (sigma * sigma));
    return A * std::exp(-B * z0);
}

}  // namespace ipr
