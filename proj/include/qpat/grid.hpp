#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qpat/errors.hpp"

namespace qpat {

/// Uniform square grid on (a,b)^2 with N cells per direction and (N+1)^2 nodes.
class Grid2D {
public:
    Grid2D(double a, double b, int n) : a_(a), b_(b), n_(n) {
        if (!(b > a)) throw ContractError("Grid2D: require b > a");
        if (n < 2) throw ContractError("Grid2D: require N >= 2");
    }

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    int cells() const noexcept { return n_; }
    int nodes_per_side() const noexcept { return n_ + 1; }
    std::size_t node_count() const noexcept {
        return static_cast<std::size_t>(n_ + 1) * static_cast<std::size_t>(n_ + 1);
    }
    double h() const noexcept { return (b_ - a_) / n_; }

    /// Row-major storage: j outer, i inner.
    std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(n_ + 1) + static_cast<std::size_t>(i);
    }

    bool contains(int i, int j) const noexcept { return i >= 0 && j >= 0 && i <= n_ && j <= n_; }
    bool on_boundary(int i, int j) const noexcept { return i == 0 || j == 0 || i == n_ || j == n_; }

    double x(int i) const noexcept { return a_ + i * h(); }
    double y(int j) const noexcept { return a_ + j * h(); }

    friend bool operator==(const Grid2D&, const Grid2D&) = default;

private:
    double a_;
    double b_;
    int n_;
};

inline std::pair<double, double> node_coords(const Grid2D& g, int i, int j) {
    if (!g.contains(i, j)) {
        throw ContractError("node_coords: index (" + std::to_string(i) + "," + std::to_string(j) +
                            ") outside 0.." + std::to_string(g.cells()));
    }
    return {g.x(i), g.y(j)};
}

/// Composite-trapezoid weight of node (i,j): 1 interior, 1/2 edge, 1/4 corner.
inline double trapezoid_weight(const Grid2D& g, int i, int j) noexcept {
    const int n = g.cells();
    const double wx = (i == 0 || i == n) ? 0.5 : 1.0;
    const double wy = (j == 0 || j == n) ? 0.5 : 1.0;
    return wx * wy;
}

/// Node-valued scalar function on a Grid2D.
class ScalarField {
public:
    explicit ScalarField(const Grid2D& g, double value = 0.0) : grid_(g), values_(g.node_count(), value) {}

    ScalarField(const Grid2D& g, std::vector<double> values) : grid_(g), values_(std::move(values)) {
        if (values_.size() != g.node_count()) {
            throw ContractError("ScalarField: expected " + std::to_string(g.node_count()) + " values, got " +
                                std::to_string(values_.size()));
        }
    }

    /// Samples f(x, y) at every node.
    template <typename F>
    static ScalarField sample(const Grid2D& g, F&& f) {
        ScalarField out(g);
        for (int j = 0; j <= g.cells(); ++j)
            for (int i = 0; i <= g.cells(); ++i) out(i, j) = f(g.x(i), g.y(j));
        return out;
    }

    const Grid2D& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }

    double& operator()(int i, int j) noexcept { return values_[grid_.index(i, j)]; }
    double operator()(int i, int j) const noexcept { return values_[grid_.index(i, j)]; }
    double& operator[](std::size_t k) noexcept { return values_[k]; }
    double operator[](std::size_t k) const noexcept { return values_[k]; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    bool all_finite() const noexcept {
        for (double v : values_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double s) noexcept {
        for (double& v : values_) v *= s;
        return *this;
    }

    friend bool operator==(const ScalarField&, const ScalarField&) = default;

private:
    Grid2D grid_;
    std::vector<double> values_;
};

inline void require_conformable(const ScalarField& f, const ScalarField& g, const char* where) {
    if (!(f.grid() == g.grid())) {
        throw ConformabilityError(std::string(where) + ": grids differ (N=" + std::to_string(f.grid().cells()) +
                                  " vs N=" + std::to_string(g.grid().cells()) + ")");
    }
}

inline ScalarField& ScalarField::operator+=(const ScalarField& o) {
    require_conformable(*this, o, "operator+=");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
    return *this;
}

inline ScalarField& ScalarField::operator-=(const ScalarField& o) {
    require_conformable(*this, o, "operator-=");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
    return *this;
}

inline ScalarField operator+(ScalarField f, const ScalarField& g) { return f += g; }
inline ScalarField operator-(ScalarField f, const ScalarField& g) { return f -= g; }
inline ScalarField operator*(double s, ScalarField f) { return f *= s; }

/// Trapezoid approximation of the integral of f over the domain.
inline double integrate(const ScalarField& f) noexcept {
    const Grid2D& g = f.grid();
    double sum = 0.0;
    for (int j = 0; j <= g.cells(); ++j)
        for (int i = 0; i <= g.cells(); ++i) sum += trapezoid_weight(g, i, j) * f(i, j);
    return g.h() * g.h() * sum;
}

/// Trapezoid-weighted L2(Omega) norm.
inline double l2_norm_weighted(const ScalarField& f) noexcept {
    const Grid2D& g = f.grid();
    double sum = 0.0;
    for (int j = 0; j <= g.cells(); ++j)
        for (int i = 0; i <= g.cells(); ++i) sum += trapezoid_weight(g, i, j) * f(i, j) * f(i, j);
    return std::sqrt(g.h() * g.h() * sum);
}

/// Trapezoid-weighted L1(Omega) norm.
inline double l1_norm_weighted(const ScalarField& f) noexcept {
    const Grid2D& g = f.grid();
    double sum = 0.0;
    for (int j = 0; j <= g.cells(); ++j)
        for (int i = 0; i <= g.cells(); ++i) sum += trapezoid_weight(g, i, j) * std::abs(f(i, j));
    return g.h() * g.h() * sum;
}

/// Plain Euclidean norm over all nodes.
inline double l2_norm_vector(const ScalarField& f) noexcept {
    double sum = 0.0;
    for (double v : f.values()) sum += v * v;
    return std::sqrt(sum);
}

struct Gradient {
    ScalarField dx;
    ScalarField dy;
};

/// Second-order nodal gradient: central in the interior, one-sided three-point at the boundary.
inline Gradient nodal_gradient(const ScalarField& f) {
    const Grid2D& g = f.grid();
    const int n = g.cells();
    const double inv2h = 1.0 / (2.0 * g.h());
    Gradient out{ScalarField(g), ScalarField(g)};
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            double dx;
            if (i == 0)
                dx = (-3.0 * f(0, j) + 4.0 * f(1, j) - f(2, j)) * inv2h;
            else if (i == n)
                dx = (3.0 * f(n, j) - 4.0 * f(n - 1, j) + f(n - 2, j)) * inv2h;
            else
                dx = (f(i + 1, j) - f(i - 1, j)) * inv2h;

            double dy;
            if (j == 0)
                dy = (-3.0 * f(i, 0) + 4.0 * f(i, 1) - f(i, 2)) * inv2h;
            else if (j == n)
                dy = (3.0 * f(i, n) - 4.0 * f(i, n - 1) + f(i, n - 2)) * inv2h;
            else
                dy = (f(i, j + 1) - f(i, j - 1)) * inv2h;

            out.dx(i, j) = dx;
            out.dy(i, j) = dy;
        }
    }
    return out;
}

/// Discrete H1 norm: sqrt(|f|^2 + |df/dx|^2 + |df/dy|^2) with weighted L2 norms and nodal gradients.
inline double h1_norm(const ScalarField& f) {
    const Gradient g = nodal_gradient(f);
    const double a = l2_norm_weighted(f), b = l2_norm_weighted(g.dx), c = l2_norm_weighted(g.dy);
    return std::sqrt(a * a + b * b + c * c);
}

/// Injection onto a nested coarse grid: coarse (i,j) takes fine (r*i, r*j).
inline ScalarField restrict_to(const ScalarField& fine, const Grid2D& coarse) {
    const Grid2D& fg = fine.grid();
    if (fg.a() != coarse.a() || fg.b() != coarse.b() || fg.cells() % coarse.cells() != 0) {
        throw ConformabilityError("restrict: fine grid N=" + std::to_string(fg.cells()) +
                                  " is not nested over coarse grid N=" + std::to_string(coarse.cells()));
    }
    const int r = fg.cells() / coarse.cells();
    ScalarField out(coarse);
    for (int j = 0; j <= coarse.cells(); ++j)
        for (int i = 0; i <= coarse.cells(); ++i) out(i, j) = fine(r * i, r * j);
    return out;
}

}  // namespace qpat
