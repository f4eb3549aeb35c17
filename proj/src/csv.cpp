#include "ipr/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace ipr {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: no platform line munging
    if (!out) throw ConfigError("cannot open output file '" + path + "'");
    return out;
}

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_surface_csv(const std::string& path, const ValueSurface& s) {
    std::ofstream out = open_out(path);
    out << "pi,r,z,value\n";
    const double dz = s.z_max / s.J;
    for (int ip = 0; ip < s.grid.points; ++ip) {
        const std::string pi = format_double(s.grid.value(ip));
        for (int h = 1; h <= s.H - 1; ++h) {
            const std::string r = format_double(s.r_lo + h * s.delta);
            for (int j = 0; j <= s.J; ++j) {
                out << pi << ',' << r << ',' << format_double(j * dz) << ','
                    << format_double(s.at(ip, h, j)) << '\n';
            }
        }
    }
}

void write_lattice_csv(const std::string& path, const Lattice& lattice, double r_lo, double delta,
                       double z_max) {
    std::ofstream out = open_out(path);
    out << "h,r_h,j,z_j,value\n";
    const double dz = z_max / lattice.J;
    for (int h = 1; h <= lattice.H - 1; ++h) {
        for (int j = 0; j <= lattice.J; ++j) {
            out << h << ',' << format_double(r_lo + h * delta) << ',' << j << ','
                << format_double(j * dz) << ',' << format_double(lattice.at(h, j)) << '\n';
        }
    }
}

void write_errors_csv(const std::string& path, const ErrorReport& report) {
    std::ofstream out = open_out(path);
    out << "rung,e1,order1,einf,orderinf\n";
    for (const ErrorRung& r : report.rungs) {
        out << r.N << 'x' << r.J << ',' << format_double(r.e1) << ',';
        if (r.has_order && std::isfinite(r.order1)) out << format_double(r.order1);
        out << ',' << format_double(r.einf) << ',';
        if (r.has_order && std::isfinite(r.orderinf)) out << format_double(r.orderinf);
        out << '\n';
    }
}

void write_profile_csv(const std::string& path, const ErrorRung& rung, double r_lo, double delta) {
    std::ofstream out = open_out(path);
    out << "r_h,e1_h,einf_h\n";
    for (std::size_t i = 0; i < rung.e1_h.size(); ++i) {
        out << format_double(r_lo + (i + 1) * delta) << ',' << format_double(rung.e1_h[i]) << ','
            << format_double(rung.einf_h[i]) << '\n';
    }
}

void write_mc_csv(const std::string& path, const McEstimate& e) {
    std::ofstream out = open_out(path);
    out << "price,std_error,n_paths,dt,seed\n";
    out << format_double(e.price) << ',' << format_double(e.std_error) << ',' << e.n_paths << ','
        << format_double(e.dt) << ',' << e.seed << '\n';
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out = open_out(path);
    out << content;
}

}  // namespace ipr
