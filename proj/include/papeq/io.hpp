#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "papeq/errors.hpp"
#include "papeq/mild.hpp"
#include "papeq/pap.hpp"
#include "papeq/spectral.hpp"

namespace papeq {

// All floating-point output uses 12 significant digits so regression diffs
// stay meaningful and identical runs produce byte-identical files.
inline std::string format_g(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path.string());
    out << content;
}

// Solution samples: t, per-mode re/im, alpha-norm.
inline std::string solution_csv(const SpectralOperator& op, const TimeGridFunction& u,
                                double alpha) {
    const AlphaSpaceSpec spec(alpha, AlphaFlavor::FractionalPower);
    std::string out = "t";
    for (std::size_t m = 0; m < op.size(); ++m) {
        out += ",re_" + std::to_string(op.modes()[m].index);
        out += ",im_" + std::to_string(op.modes()[m].index);
    }
    out += ",alpha_norm\n";
    for (std::size_t k = 0; k < u.points(); ++k) {
        out += format_g(u.node(k));
        for (std::size_t m = 0; m < op.size(); ++m) {
            out += "," + format_g(u.sample(k)[m].real());
            out += "," + format_g(u.sample(k)[m].imag());
        }
        out += "," + format_g(alpha_norm(op, u.sample(k), spec)) + "\n";
    }
    return out;
}

inline std::string means_csv(const std::vector<std::pair<double, double>>& trace) {
    std::string out = "r,mean\n";
    for (const auto& [r, m] : trace) out += format_g(r) + "," + format_g(m) + "\n";
    return out;
}

// Key-value report of a solve.
inline std::string report_kv(const SolveReport& rep) {
    std::string out;
    out += "theta = " + format_g(rep.theta) + "\n";
    out += "iterations = " + std::to_string(rep.iterations) + "\n";
    out += "contraction_ratios =";
    for (double r : rep.contraction_ratios) out += " " + format_g(r);
    out += "\n";
    out += "final_residual = " + format_g(rep.final_residual) + "\n";
    out += "L_gamma = " + format_g(rep.L_gamma) + "\n";
    out += "L_delta = " + format_g(rep.L_delta) + "\n";
    out += "window = " + format_g(rep.window) + "\n";
    out += "grid_spacing = " + format_g(rep.spacing) + "\n";
    out += "grid_points = " + std::to_string(rep.grid_points) + "\n";
    out += "stable_quadrature_nodes = " + std::to_string(rep.stable_nodes) + "\n";
    out += "unstable_quadrature_nodes = " + std::to_string(rep.unstable_nodes) + "\n";
    return out;
}

// Physical snapshots (t, x, u(t,x)) at a thinned set of times.
inline std::string physical_csv(const std::vector<double>& times,
                                const std::vector<double>& grid,
                                const std::vector<std::vector<double>>& values) {
    std::string out = "t,x,u\n";
    for (std::size_t i = 0; i < times.size(); ++i)
        for (std::size_t j = 0; j < grid.size(); ++j)
            out += format_g(times[i]) + "," + format_g(grid[j]) + "," +
                   format_g(values[i][j]) + "\n";
    return out;
}

} // namespace papeq
