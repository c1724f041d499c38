#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qpat/errors.hpp"
#include "qpat/grid.hpp"

namespace qpat {

/// Closed ellipse ((x',y') rotated by phi_deg about the center, semi-axes ax along x', ay along y').
struct Ellipse {
    double cx = 0.0, cy = 0.0;
    double ax = 1.0, ay = 1.0;
    double phi_deg = 0.0;

    bool contains(double x, double y) const noexcept {
        const double phi = phi_deg * std::numbers::pi / 180.0;
        const double c = std::cos(phi), s = std::sin(phi);
        const double dx = x - cx, dy = y - cy;
        const double xr = c * dx + s * dy;
        const double yr = -s * dx + c * dy;
        return (xr * xr) / (ax * ax) + (yr * yr) / (ay * ay) <= 1.0;
    }
};

enum class ShapeKind { disk, ellipse, annulus };

inline const char* to_string(ShapeKind k) noexcept {
    switch (k) {
        case ShapeKind::disk: return "disk";
        case ShapeKind::ellipse: return "ellipse";
        case ShapeKind::annulus: return "annulus";
    }
    return "unknown";
}

/// A region with constant (sigma, D). Annulus = outer minus inner; disks use outer.ax as radius.
struct Shape {
    ShapeKind kind = ShapeKind::disk;
    Ellipse outer;
    Ellipse inner;  // annulus only
    double sigma = 0.0;
    double D = 0.0;
    std::string label;

    bool contains(double x, double y) const noexcept {
        switch (kind) {
            case ShapeKind::disk: {
                const double dx = x - outer.cx, dy = y - outer.cy;
                return dx * dx + dy * dy <= outer.ax * outer.ax;
            }
            case ShapeKind::ellipse: return outer.contains(x, y);
            case ShapeKind::annulus: return outer.contains(x, y) && !inner.contains(x, y);
        }
        return false;
    }

    static Shape disk(double cx, double cy, double r, double sigma, double D, std::string label) {
        return {ShapeKind::disk, {cx, cy, r, r, 0.0}, {}, sigma, D, std::move(label)};
    }
    static Shape ellipse(Ellipse e, double sigma, double D, std::string label) {
        return {ShapeKind::ellipse, e, {}, sigma, D, std::move(label)};
    }
    static Shape annulus(Ellipse outer, Ellipse inner, double sigma, double D, std::string label) {
        return {ShapeKind::annulus, outer, inner, sigma, D, std::move(label)};
    }
};

struct PhantomSpec {
    int case_id = 0;  // 0 for custom
    std::vector<Shape> shapes;  // later shapes overwrite earlier ones
    double D_background = 0.02;
    double sigma_background = 0.0;
    double sigma_b = 0.16;
};

struct Phantom {
    ScalarField D;
    ScalarField sigma;
    double sigma_b;
};

inline Phantom build_phantom(const PhantomSpec& spec, const Grid2D& grid) {
    ScalarField D(grid, spec.D_background);
    ScalarField sigma(grid, spec.sigma_background);
    for (const Shape& s : spec.shapes) {
        for (int j = 0; j <= grid.cells(); ++j) {
            for (int i = 0; i <= grid.cells(); ++i) {
                if (s.contains(grid.x(i), grid.y(j))) {
                    D(i, j) = s.D;
                    sigma(i, j) = s.sigma;
                }
            }
        }
    }
    return {std::move(D), std::move(sigma), spec.sigma_b};
}

namespace phantoms {

inline PhantomSpec disk() {
    PhantomSpec p;
    p.case_id = 1;
    p.sigma_b = 0.16;
    p.D_background = 0.02;
    p.shapes = {Shape::disk(0.25, 0.25, 0.25, 1.0, 0.003, "disk")};
    return p;
}

/// Heart and lungs: two lung ellipses with sigma = 1 and a heart disk with sigma = 0.5.
inline PhantomSpec heart_lung(double D_left_lung, double D_right_lung, double D_heart) {
    PhantomSpec p;
    p.sigma_b = 0.03;
    p.D_background = 0.1;
    p.shapes = {
        Shape::ellipse({-0.35, 0.05, 0.18, 0.35, 0.0}, 1.0, D_left_lung, "left lung"),
        Shape::ellipse({0.35, 0.05, 0.18, 0.35, 0.0}, 1.0, D_right_lung, "right lung"),
        Shape::disk(0.0, -0.15, 0.18, 0.5, D_heart, "heart"),
    };
    return p;
}

/// Shepp-Logan geometry (standard ellipse table) with per-region (sigma, D).
inline PhantomSpec shepp_logan() {
    PhantomSpec p;
    p.sigma_b = 0.5;
    p.D_background = 0.006;
    const Ellipse skull{0.0, 0.0, 0.69, 0.92, 0.0};
    const Ellipse brain{0.0, -0.0184, 0.6624, 0.874, 0.0};
    p.shapes = {
        Shape::annulus(skull, brain, 1.0, 0.002, "skull"),
        Shape::ellipse({0.22, 0.0, 0.11, 0.31, -18.0}, -0.3, 0.02, "right ventricle"),
        Shape::ellipse({-0.22, 0.0, 0.16, 0.41, 18.0}, -0.3, 0.02, "left ventricle"),
        Shape::ellipse({0.0, 0.35, 0.21, 0.25, 0.0}, 0.5, 0.003, "upper blob"),
        Shape::disk(0.0, 0.1, 0.046, 0.5, 0.003, "upper small disk"),
        Shape::disk(0.0, -0.1, 0.046, 0.5, 0.003, "lower small disk"),
        Shape::ellipse({-0.08, -0.605, 0.046, 0.023, 0.0}, 0.5, 0.003, "bottom left"),
        Shape::ellipse({0.0, -0.606, 0.023, 0.023, 0.0}, 0.5, 0.003, "bottom center"),
        Shape::ellipse({0.06, -0.605, 0.023, 0.046, 0.0}, 0.5, 0.003, "bottom right"),
    };
    return p;
}

}  // namespace phantoms

/// Built-in test cases 1..5.
inline PhantomSpec phantom_for_case(int case_id) {
    PhantomSpec p;
    switch (case_id) {
        case 1: p = phantoms::disk(); break;
        case 2: p = phantoms::heart_lung(0.003, 0.003, 0.006); break;
        case 3: p = phantoms::heart_lung(0.003, 0.0006, 0.009); break;
        case 4: p = phantoms::shepp_logan(); break;
        case 5:
            p = phantoms::shepp_logan();
            p.shapes.push_back(Shape::disk(0.45, 0.45, 0.08, 1.5, 0.001, "tumor (high contrast)"));
            p.shapes.push_back(Shape::disk(-0.45, -0.45, 0.08, 0.2, 0.004, "tumor (low contrast)"));
            break;
        default: throw ConfigError("unknown case " + std::to_string(case_id) + " (expected 1..5)");
    }
    p.case_id = case_id;
    return p;
}

}  // namespace qpat
