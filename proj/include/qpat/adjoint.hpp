#pragma once

#include "qpat/forward.hpp"
#include "qpat/model.hpp"

namespace qpat {

/// Right-hand side of the adjoint equation for one illumination:
/// -alpha Gamma (sigma + sigma_b) (Gamma (sigma + sigma_b) u - G).
inline ScalarField adjoint_rhs(const ScalarField& sigma, const ScalarField& u, const ScalarField& Gdelta, double alpha,
                               double Gamma, double sigma_b) {
    require_conformable(sigma, u, "adjoint_rhs");
    require_conformable(sigma, Gdelta, "adjoint_rhs");
    ScalarField out(sigma.grid());
    for (std::size_t n = 0; n < out.size(); ++n) {
        const double sa = sigma[n] + sigma_b;
        out[n] = -alpha * Gamma * sa * (Gamma * sa * u[n] - Gdelta[n]);
    }
    return out;
}

struct AdjointProblem {
    EllipticProblem base;  // same D, sigma_a as the forward problem; homogeneous Dirichlet data
    int illumination = 1;
};

inline AdjointProblem make_adjoint_problem(const ScalarField& D, const ScalarField& sigma, const ScalarField& u,
                                           const ScalarField& Gdelta, double alpha, const PhysicalConstants& k,
                                           int illumination) {
    if (illumination != 1 && illumination != 2) throw ContractError("adjoint: illumination index must be 1 or 2");
    return AdjointProblem{
        EllipticProblem{D, sigma_a_of(sigma, k.sigma_b), adjoint_rhs(sigma, u, Gdelta, alpha, k.Gamma, k.sigma_b),
                        ScalarField(D.grid())},
        illumination};
}

/// Solves for q; boundary values are assigned zero, never solved for.
inline ScalarField solve_adjoint(const AdjointProblem& p, double tol = kDefaultSolverTol, SolveStats* stats = nullptr) {
    ScalarField q = solve(p.base, tol, stats);
    const Grid2D& g = q.grid();
    for (int j = 0; j <= g.cells(); ++j)
        for (int i = 0; i <= g.cells(); ++i)
            if (g.on_boundary(i, j)) q(i, j) = 0.0;
    return q;
}

}  // namespace qpat
