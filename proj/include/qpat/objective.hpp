#pragma once

#include <array>
#include <cmath>
#include <utility>

#include "qpat/adjoint.hpp"
#include "qpat/forward.hpp"
#include "qpat/model.hpp"

namespace qpat {

/// Individual contributions to J; `total` is their sum.
struct ObjectiveTerms {
    double data = 0.0;      // (alpha/2) sum_i ||H_i - G_i||^2
    double l2 = 0.0;        // (xi1/2) ||sigma||^2
    double kubelka = 0.0;   // (xi2/2) ||D - Dbar(sigma)||^2
    double l1 = 0.0;        // gamma ||sigma||_1
    double total = 0.0;
};

inline ObjectiveTerms evaluate_J_terms(const ScalarField& D, const ScalarField& sigma, const ScalarField& u1,
                                       const ScalarField& u2, const ScalarField& G1, const ScalarField& G2,
                                       const RegularizationWeights& w, const PhysicalConstants& k) {
    require_conformable(D, sigma, "evaluate_J");
    require_conformable(D, u1, "evaluate_J");
    require_conformable(D, u2, "evaluate_J");
    require_conformable(D, G1, "evaluate_J");
    require_conformable(D, G2, "evaluate_J");
    const Grid2D& g = D.grid();
    const ScalarField dbar = kubelka_target(sigma, k);
    double data = 0.0, l2 = 0.0, km = 0.0, l1 = 0.0;
    for (int j = 0; j <= g.cells(); ++j) {
        for (int i = 0; i <= g.cells(); ++i) {
            const double wt = trapezoid_weight(g, i, j);
            const double sa = sigma(i, j) + k.sigma_b;
            const double r1 = k.Gamma * sa * u1(i, j) - G1(i, j);
            const double r2 = k.Gamma * sa * u2(i, j) - G2(i, j);
            const double dd = D(i, j) - dbar(i, j);
            data += wt * (r1 * r1 + r2 * r2);
            l2 += wt * sigma(i, j) * sigma(i, j);
            km += wt * dd * dd;
            l1 += wt * std::abs(sigma(i, j));
        }
    }
    const double area = g.h() * g.h();
    ObjectiveTerms t;
    t.data = 0.5 * w.alpha * area * data;
    t.l2 = 0.5 * w.xi1 * area * l2;
    t.kubelka = 0.5 * w.xi2 * area * km;
    t.l1 = w.gamma * area * l1;
    t.total = t.data + t.l2 + t.kubelka + t.l1;
    return t;
}

inline double evaluate_J(const ScalarField& D, const ScalarField& sigma, const ScalarField& u1, const ScalarField& u2,
                         const ScalarField& G1, const ScalarField& G2, const RegularizationWeights& w,
                         const PhysicalConstants& k) {
    return evaluate_J_terms(D, sigma, u1, u2, G1, G2, w, k).total;
}

/// Everything needed to evaluate the reduced functional (D, sigma) -> J(D, sigma, u1(D,sigma), u2(D,sigma)).
struct ReducedProblem {
    PhysicalConstants constants;
    RegularizationWeights weights;
    std::array<ScalarField, 2> illumination;  // boundary data g1, g2 (boundary nodes used)
    std::array<ScalarField, 2> data;          // G1, G2
    double solver_tol = kDefaultSolverTol;

    const Grid2D& grid() const noexcept { return data[0].grid(); }

    std::array<ScalarField, 2> states(const ScalarField& D, const ScalarField& sigma) const {
        const ScalarField sa = sigma_a_of(sigma, constants.sigma_b);
        const ScalarField zero(D.grid());
        return {solve(EllipticProblem{D, sa, zero, illumination[0]}, solver_tol),
                solve(EllipticProblem{D, sa, zero, illumination[1]}, solver_tol)};
    }

    std::array<ScalarField, 2> adjoints(const ScalarField& D, const ScalarField& sigma,
                                        const std::array<ScalarField, 2>& u) const {
        return {solve_adjoint(make_adjoint_problem(D, sigma, u[0], data[0], weights.alpha, constants, 1), solver_tol),
                solve_adjoint(make_adjoint_problem(D, sigma, u[1], data[1], weights.alpha, constants, 2), solver_tol)};
    }

    double J(const ScalarField& D, const ScalarField& sigma, const std::array<ScalarField, 2>& u) const {
        return evaluate_J(D, sigma, u[0], u[1], data[0], data[1], weights, constants);
    }

    double reduced_J(const ScalarField& D, const ScalarField& sigma) const { return J(D, sigma, states(D, sigma)); }
};

/// Gradient of the discrete reduced functional with respect to nodal D and sigma, assembled from the states
/// and adjoints. Valid where the L1 term is differentiable (sigma != 0 or gamma = 0).
struct ReducedGradient {
    ScalarField dD;
    ScalarField dsigma;
};

inline ReducedGradient reduced_gradient(const ReducedProblem& rp, const ScalarField& D, const ScalarField& sigma,
                                        const std::array<ScalarField, 2>& u, const std::array<ScalarField, 2>& q) {
    const Grid2D& g = D.grid();
    const int n = g.cells();
    const PhysicalConstants& k = rp.constants;
    const RegularizationWeights& w = rp.weights;
    const double area = g.h() * g.h();
    ReducedGradient out{ScalarField(g), ScalarField(g)};

    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            const double wt = trapezoid_weight(g, i, j) * area;
            const double s = sigma(i, j);
            const double sa = s + k.sigma_b;
            const double dbar = kubelka_value(s, k);
            double ds = w.xi1 * s + w.xi2 * (D(i, j) - dbar) * 3.0 * k.c * dbar * dbar;
            if (s != 0.0) ds += w.gamma * (s > 0.0 ? 1.0 : -1.0);
            double coupling = 0.0;
            for (int m = 0; m < 2; ++m) {
                ds += w.alpha * k.Gamma * u[m](i, j) * (k.Gamma * sa * u[m](i, j) - rp.data[m](i, j));
                coupling += q[m](i, j) * u[m](i, j);
            }
            out.dsigma(i, j) = wt * ds + area * coupling;
            out.dD(i, j) = wt * w.xi2 * (D(i, j) - dbar);
        }
    }

    // Diffusion enters through the half-edge means; each edge contributes (dq)(du) split evenly to its endpoints.
    auto edge = [&](int i0, int j0, int i1, int j1) {
        double c = 0.0;
        for (int m = 0; m < 2; ++m) c += (q[m](i0, j0) - q[m](i1, j1)) * (u[m](i0, j0) - u[m](i1, j1));
        out.dD(i0, j0) += 0.5 * c;
        out.dD(i1, j1) += 0.5 * c;
    };
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i < n; ++i) edge(i, j, i + 1, j);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= n; ++i) edge(i, j, i, j + 1);
    return out;
}

struct DirectionalCheck {
    double finite_difference = 0.0;
    double adjoint = 0.0;

    double relative_mismatch() const noexcept {
        const double scale = std::max(std::abs(finite_difference), std::abs(adjoint));
        return scale == 0.0 ? 0.0 : std::abs(finite_difference - adjoint) / scale;
    }
};

/// Central finite difference of the reduced functional along (dD, dsigma) against the adjoint prediction.
/// Requires gamma = 0 so that J is smooth.
inline DirectionalCheck directional_check(const ReducedProblem& rp, const ScalarField& D, const ScalarField& sigma,
                                          const ScalarField& dD, const ScalarField& dsigma, double eps) {
    if (rp.weights.gamma != 0.0) throw ContractError("directional_check: requires gamma = 0");
    if (!(eps > 0.0)) throw ContractError("directional_check: eps must be positive");
    require_conformable(D, dD, "directional_check");
    require_conformable(D, dsigma, "directional_check");

    DirectionalCheck out;
    if (l2_norm_vector(dD) == 0.0 && l2_norm_vector(dsigma) == 0.0) return out;

    auto shifted = [](const ScalarField& f, const ScalarField& d, double t) {
        ScalarField r = f;
        for (std::size_t n = 0; n < r.size(); ++n) r[n] += t * d[n];
        return r;
    };
    const double jp = rp.reduced_J(shifted(D, dD, eps), shifted(sigma, dsigma, eps));
    const double jm = rp.reduced_J(shifted(D, dD, -eps), shifted(sigma, dsigma, -eps));
    out.finite_difference = (jp - jm) / (2.0 * eps);

    const auto u = rp.states(D, sigma);
    const auto q = rp.adjoints(D, sigma, u);
    const ReducedGradient grad = reduced_gradient(rp, D, sigma, u, q);
    double pred = 0.0;
    for (std::size_t n = 0; n < D.size(); ++n) pred += grad.dD[n] * dD[n] + grad.dsigma[n] * dsigma[n];
    out.adjoint = pred;
    return out;
}

}  // namespace qpat
