#pragma once

namespace ipr {

// Closed-form zero-coupon bond price of the square-root short-rate model
//   dz = kappa*(theta - z) dt + sigma*sqrt(z) dW,   price = E[exp(-int z)],
// in natural (decimal) units: P(z0, tau) = A(tau) * exp(-B(tau) z0).
// Used only as an independent oracle against the PDE and the simulator.
// For sigma ~ 0 the deterministic limit exp(-int of the mean path) is used.
double cir_bond_price(double kappa, double theta, double sigma, double z0, double tau);

}  // namespace ipr
