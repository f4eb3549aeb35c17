#include "ipr/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace ipr {

ErrorRung relative_errors(const Lattice& coarse, const Lattice& fine) {
    if (fine.H != coarse.H || fine.J != 2 * coarse.J)
        throw ConfigError("relative_errors: fine lattice must be the exact 2x refinement");
    ErrorRung rung;
    rung.J = coarse.J;
    rung.e1_h.assign(coarse.H - 1, 0.0);
    rung.einf_h.assign(coarse.H - 1, 0.0);
    for (int h = 1; h <= coarse.H - 1; ++h) {
        double num1 = 0.0, den1 = 0.0, numinf = 0.0, deninf = 0.0;
        for (int j = 0; j <= coarse.J; ++j) {
            const double c = coarse.at(h, j);
            const double f = fine.at(h, 2 * j);
            num1 += std::abs(c - f);
            den1 += std::abs(f);
            numinf = std::max(numinf, std::abs(c - f));
            deninf = std::max(deninf, std::abs(f));
        }
        if (den1 == 0.0 || deninf == 0.0) {
            rung.degenerate = true;
            continue;
        }
        rung.e1_h[h - 1] = num1 / den1;
        rung.einf_h[h - 1] = numinf / deninf;
    }
    rung.e1 = *std::max_element(rung.e1_h.begin(), rung.e1_h.end());
    rung.einf = *std::max_element(rung.einf_h.begin(), rung.einf_h.end());
    return rung;
}

ErrorRung relative_errors(const ValueSurface& coarse, const ValueSurface& fine, double pi) {
    return relative_errors(coarse.slice_at(pi), fine.slice_at(pi));
}

double convergence_order(double e_coarse, double e_fine) {
    return convergence_order(e_coarse, e_fine, 2.0);
}

double convergence_order(double e_coarse, double e_fine, double refinement_ratio) {
    if (!(e_coarse > 0.0) || !(e_fine > 0.0) || !(refinement_ratio > 1.0))
        return std::numeric_limits<double>::quiet_NaN();
    return std::log(e_coarse / e_fine) / std::log(refinement_ratio);
}

}  // namespace ipr
