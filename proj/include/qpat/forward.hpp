#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qpat/errors.hpp"
#include "qpat/grid.hpp"

namespace qpat {

/// -div(D grad u) + sigma_a u = f in Omega, u = dirichlet on the boundary.
/// Only the boundary nodes of `dirichlet` are read.
struct EllipticProblem {
    ScalarField D;
    ScalarField sigma_a;
    ScalarField f;
    ScalarField dirichlet;

    const Grid2D& grid() const noexcept { return D.grid(); }

    void validate() const {
        require_conformable(D, sigma_a, "EllipticProblem");
        require_conformable(D, f, "EllipticProblem");
        require_conformable(D, dirichlet, "EllipticProblem");
        for (std::size_t k = 0; k < D.size(); ++k) {
            if (!(D[k] > 0.0) || !std::isfinite(D[k]))
                throw ContractError("EllipticProblem: D must be positive and finite (node " + std::to_string(k) + ")");
            if (!(sigma_a[k] >= 0.0) || !std::isfinite(sigma_a[k]))
                throw ContractError("EllipticProblem: sigma_a must be nonnegative and finite (node " +
                                    std::to_string(k) + ")");
        }
        if (!f.all_finite() || !dirichlet.all_finite()) throw ContractError("EllipticProblem: non-finite data");
    }
};

/// Boundary-data field from a function g(x, y); interior nodes are zero.
template <typename G>
ScalarField boundary_field(const Grid2D& grid, G&& g) {
    ScalarField out(grid);
    for (int j = 0; j <= grid.cells(); ++j)
        for (int i = 0; i <= grid.cells(); ++i)
            if (grid.on_boundary(i, j)) out(i, j) = g(grid.x(i), grid.y(j));
    return out;
}

enum class Axis { x, y };
enum class Side { minus, plus };

/// Arithmetic mean of D across the half-edge from (i,j) toward its neighbor.
inline double edge_coefficient(const ScalarField& D, int i, int j, Axis axis, Side side) {
    const int di = axis == Axis::x ? (side == Side::plus ? 1 : -1) : 0;
    const int dj = axis == Axis::y ? (side == Side::plus ? 1 : -1) : 0;
    const Grid2D& g = D.grid();
    if (!g.contains(i, j) || !g.contains(i + di, j + dj)) {
        throw ContractError("edge_coefficient: neighbor of (" + std::to_string(i) + "," + std::to_string(j) +
                            ") out of range");
    }
    return 0.5 * (D(i + di, j + dj) + D(i, j));
}

/// Five-point symmetric system over the (N-1)^2 interior nodes.
/// Off-diagonal couplings to boundary nodes are stored as 0 (moved to rhs).
struct SparseSystem {
    int m = 0;  // unknowns per side, N - 1
    std::vector<double> diag, west, east, south, north, rhs;

    std::size_t dimension() const noexcept { return static_cast<std::size_t>(m) * static_cast<std::size_t>(m); }
    std::size_t unknown(int i, int j) const noexcept {
        return static_cast<std::size_t>(j - 1) * static_cast<std::size_t>(m) + static_cast<std::size_t>(i - 1);
    }

    /// y = A x. Fixed per-row summation order.
    void apply(const std::vector<double>& x, std::vector<double>& y) const {
        const std::size_t mm = static_cast<std::size_t>(m);
        for (std::size_t r = 0; r < mm; ++r) {
            for (std::size_t c = 0; c < mm; ++c) {
                const std::size_t k = r * mm + c;
                double s = diag[k] * x[k];
                if (c > 0) s += west[k] * x[k - 1];
                if (c + 1 < mm) s += east[k] * x[k + 1];
                if (r > 0) s += south[k] * x[k - mm];
                if (r + 1 < mm) s += north[k] * x[k + mm];
                y[k] = s;
            }
        }
    }
};

inline SparseSystem assemble(const EllipticProblem& p) {
    p.validate();
    const Grid2D& g = p.grid();
    const int n = g.cells();
    const double inv_h2 = 1.0 / (g.h() * g.h());
    SparseSystem s;
    s.m = n - 1;
    const std::size_t dim = s.dimension();
    s.diag.assign(dim, 0.0);
    s.west.assign(dim, 0.0);
    s.east.assign(dim, 0.0);
    s.south.assign(dim, 0.0);
    s.north.assign(dim, 0.0);
    s.rhs.assign(dim, 0.0);

    for (int j = 1; j < n; ++j) {
        for (int i = 1; i < n; ++i) {
            const std::size_t k = s.unknown(i, j);
            const double de = 0.5 * (p.D(i + 1, j) + p.D(i, j));
            const double dw = 0.5 * (p.D(i - 1, j) + p.D(i, j));
            const double dn = 0.5 * (p.D(i, j + 1) + p.D(i, j));
            const double ds = 0.5 * (p.D(i, j - 1) + p.D(i, j));
            s.diag[k] = (de + dw + dn + ds) * inv_h2 + p.sigma_a(i, j);
            double b = p.f(i, j);
            if (i + 1 < n) s.east[k] = -de * inv_h2; else b += de * inv_h2 * p.dirichlet(i + 1, j);
            if (i - 1 > 0) s.west[k] = -dw * inv_h2; else b += dw * inv_h2 * p.dirichlet(i - 1, j);
            if (j + 1 < n) s.north[k] = -dn * inv_h2; else b += dn * inv_h2 * p.dirichlet(i, j + 1);
            if (j - 1 > 0) s.south[k] = -ds * inv_h2; else b += ds * inv_h2 * p.dirichlet(i, j - 1);
            s.rhs[k] = b;
        }
    }
    return s;
}

struct SolveStats {
    int iterations = 0;
    double relative_residual = 0.0;
};

inline constexpr double kDefaultSolverTol = 1e-10;

/// Jacobi-preconditioned conjugate gradients on an assembled system.
/// Throws NumericalError if the relative residual does not reach tol within 20 (N-1)^2 iterations.
inline std::vector<double> pcg_solve(const SparseSystem& s, double tol, SolveStats* stats = nullptr,
                                     const std::vector<double>* initial = nullptr) {
    if (!(tol > 0.0)) throw ContractError("solve: tol must be positive");
    const std::size_t dim = s.dimension();
    std::vector<double> x(dim, 0.0);
    if (initial && initial->size() == dim) x = *initial;

    double bnorm = 0.0;
    for (double v : s.rhs) bnorm += v * v;
    bnorm = std::sqrt(bnorm);
    if (bnorm == 0.0) {
        if (stats) *stats = {};
        return std::vector<double>(dim, 0.0);
    }

    std::vector<double> r(dim), z(dim), p(dim), ap(dim);
    s.apply(x, ap);
    for (std::size_t k = 0; k < dim; ++k) r[k] = s.rhs[k] - ap[k];
    for (std::size_t k = 0; k < dim; ++k) z[k] = r[k] / s.diag[k];
    p = z;
    double rz = 0.0;
    for (std::size_t k = 0; k < dim; ++k) rz += r[k] * z[k];

    const long cap = 20L * static_cast<long>(dim);
    double rnorm = 0.0;
    for (double v : r) rnorm += v * v;
    rnorm = std::sqrt(rnorm);
    long it = 0;
    while (rnorm > tol * bnorm) {
        if (it >= cap) {
            throw NumericalError("solve: PCG did not converge in " + std::to_string(cap) +
                                     " iterations (relative residual " + std::to_string(rnorm / bnorm) + ")",
                                 rnorm / bnorm);
        }
        s.apply(p, ap);
        double pap = 0.0;
        for (std::size_t k = 0; k < dim; ++k) pap += p[k] * ap[k];
        if (!(pap > 0.0)) throw NumericalError("solve: operator not positive definite", rnorm / bnorm);
        const double alpha = rz / pap;
        rnorm = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
            rnorm += r[k] * r[k];
        }
        rnorm = std::sqrt(rnorm);
        double rz_new = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            z[k] = r[k] / s.diag[k];
            rz_new += r[k] * z[k];
        }
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t k = 0; k < dim; ++k) p[k] = z[k] + beta * p[k];
        ++it;
    }
    if (stats) *stats = {static_cast<int>(it), rnorm / bnorm};
    return x;
}

/// Scatters interior unknowns into a full field whose boundary nodes carry the Dirichlet data.
inline ScalarField to_field(const SparseSystem& s, const std::vector<double>& x, const ScalarField& dirichlet) {
    const Grid2D& g = dirichlet.grid();
    ScalarField u(g);
    for (int j = 0; j <= g.cells(); ++j)
        for (int i = 0; i <= g.cells(); ++i)
            u(i, j) = g.on_boundary(i, j) ? dirichlet(i, j) : x[s.unknown(i, j)];
    return u;
}

inline ScalarField solve(const EllipticProblem& p, double tol = kDefaultSolverTol, SolveStats* stats = nullptr) {
    const SparseSystem s = assemble(p);
    return to_field(s, pcg_solve(s, tol, stats), p.dirichlet);
}

}  // namespace qpat
