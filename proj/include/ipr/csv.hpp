#pragma once

#include <string>

#include "ipr/analysis.hpp"
#include "ipr/chain.hpp"
#include "ipr/simulate.hpp"

// Deterministic CSV emission: fixed column order, shortest round-trippable
// number formatting, no timestamps, so identical runs are byte-identical.

namespace ipr {

std::string format_double(double x);  // %.17g

void write_surface_csv(const std::string& path, const ValueSurface& surface);
// Columns: h, r_h, j, z_j, value.
void write_lattice_csv(const std::string& path, const Lattice& lattice, double r_lo, double delta,
                       double z_max);
// Columns: rung, e1, order1, einf, orderinf (orders empty on the last rung).
void write_errors_csv(const std::string& path, const ErrorReport& report);
// Columns: r_h, e1_h, einf_h for one rung.
void write_profile_csv(const std::string& path, const ErrorRung& rung, double r_lo, double delta);
// Single row: price, std_error, n_paths, dt, seed.
void write_mc_csv(const std::string& path, const McEstimate& estimate);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace ipr
