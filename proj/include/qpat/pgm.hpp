#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "qpat/errors.hpp"
#include "qpat/grid.hpp"

namespace qpat {

/// ASCII P2 image, 255 gray levels, [lo, hi] mapped linearly and clamped. Top image row is j = N.
inline std::string to_pgm(const ScalarField& f, double lo, double hi) {
    if (!(hi > lo)) throw ContractError("write_pgm: require hi > lo");
    const Grid2D& g = f.grid();
    const int side = g.nodes_per_side();
    std::string out = "P2\n" + std::to_string(side) + " " + std::to_string(side) + "\n255\n";
    for (int j = g.cells(); j >= 0; --j) {
        for (int i = 0; i <= g.cells(); ++i) {
            const double t = std::clamp((f(i, j) - lo) / (hi - lo), 0.0, 1.0);
            if (i > 0) out += ' ';
            out += std::to_string(static_cast<int>(std::lround(255.0 * t)));
        }
        out += '\n';
    }
    return out;
}

inline void write_pgm(const ScalarField& f, const std::filesystem::path& path, double lo, double hi) {
    const std::string text = to_pgm(f, lo, hi);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ExitCode::missing_input, "cannot open " + path.string() + " for writing");
    os << text;
}

}  // namespace qpat
