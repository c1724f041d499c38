#pragma once

// "qgrid v1" ASCII field files:
//   line 1:      qgrid 1 <N> <a> <b>
//   lines 2..:   N+1 rows (j = 0..N), each with N+1 values (i = 0..N), %.17g

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qpat/errors.hpp"
#include "qpat/grid.hpp"

namespace qpat {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string to_qgrid(const ScalarField& f) {
    const Grid2D& g = f.grid();
    std::string out;
    out.reserve(g.node_count() * 24 + 64);
    out += "qgrid 1 " + std::to_string(g.cells()) + " " + format_double(g.a()) + " " + format_double(g.b()) + "\n";
    for (int j = 0; j <= g.cells(); ++j) {
        for (int i = 0; i <= g.cells(); ++i) {
            if (i > 0) out += ' ';
            out += format_double(f(i, j));
        }
        out += '\n';
    }
    return out;
}

inline ScalarField from_qgrid(const std::string& text, const std::string& origin = "<memory>") {
    std::istringstream in(text);
    std::string magic;
    int version = 0;
    int n = 0;
    std::string a_str, b_str;
    if (!(in >> magic >> version >> n >> a_str >> b_str) || magic != "qgrid" || version != 1) {
        throw ConfigError(origin + ": not a qgrid v1 file");
    }
    const double a = std::strtod(a_str.c_str(), nullptr);
    const double b = std::strtod(b_str.c_str(), nullptr);
    if (n < 2 || !(b > a)) throw ConfigError(origin + ": invalid qgrid header");
    Grid2D grid(a, b, n);
    ScalarField f(grid);
    std::string tok;
    for (std::size_t k = 0; k < grid.node_count(); ++k) {
        if (!(in >> tok)) throw ConfigError(origin + ": truncated qgrid data");
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0') throw ConfigError(origin + ": bad value '" + tok + "'");
        f[k] = v;
    }
    if (in >> tok) throw ConfigError(origin + ": trailing data in qgrid file");
    return f;
}

inline void write_qgrid(const ScalarField& f, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ExitCode::missing_input, "cannot open " + path.string() + " for writing");
    os << to_qgrid(f);
}

inline ScalarField read_qgrid(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw MissingInputError("missing input file " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    return from_qgrid(ss.str(), path.string());
}

}  // namespace qpat
