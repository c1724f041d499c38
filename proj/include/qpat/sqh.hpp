#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "qpat/grid.hpp"
#include "qpat/objective.hpp"
#include "qpat/pointwise.hpp"
#include "qpat/qgrid_io.hpp"

namespace qpat {

struct SqhConfig {
    double eps0 = 10.0;
    double kappa = 1e-6;
    double lambda = 2.0;
    double zeta = 0.8;
    double rho = 1e-4;
    int max_outer = 500;        // cap on accepted iterations
    int max_eps_rescue = 60;    // cap on consecutive rejections
    double eps_max = 1e15;
    double solver_tol = kDefaultSolverTol;
    SearchGrid search;
    unsigned threads = 0;

    void validate() const {
        if (!(eps0 > 0.0)) throw ConfigError("sqh.eps0 must be positive");
        if (!(kappa > 0.0)) throw ConfigError("sqh.kappa must be positive");
        if (!(lambda > 1.0)) throw ConfigError("sqh.lambda must exceed 1");
        if (!(zeta > 0.0 && zeta < 1.0)) throw ConfigError("sqh.zeta must lie in (0,1)");
        if (!(rho > 0.0)) throw ConfigError("sqh.rho must be positive");
        if (max_outer < 1 || max_eps_rescue < 1) throw ConfigError("sqh iteration caps must be positive");
        if (!(solver_tol > 0.0)) throw ConfigError("sqh.solver_tol must be positive");
        search.validate();
    }
};

struct HistoryRow {
    int iter;       // outer index k at which the sweep was attempted
    double J;       // functional value of the candidate
    double tau;     // ||D - D^k||^2 + ||sigma - sigma^k||^2
    double eps;     // proximal weight used for the sweep
    bool accepted;
};

struct SqhState {
    int k = 0;
    ScalarField D;
    ScalarField sigma;
    std::array<ScalarField, 2> u;
    std::array<ScalarField, 2> q;
    std::array<Gradient, 2> grad_u;
    std::array<Gradient, 2> grad_q;
    double J = 0.0;
    double eps = 0.0;
    int consecutive_rejections = 0;
    std::vector<HistoryRow> history;
};

enum class Termination { converged, max_iterations, eps_overflow };

inline const char* to_string(Termination t) noexcept {
    switch (t) {
        case Termination::converged: return "converged";
        case Termination::max_iterations: return "max_iterations";
        case Termination::eps_overflow: return "eps_overflow";
    }
    return "unknown";
}

struct ReconstructionResult {
    ScalarField D_star;
    ScalarField sigma_star;
    ScalarField sigma_a_star;
    double J0 = 0.0;
    double J_final = 0.0;
    int accepted_steps = 0;
    int max_consecutive_rejections = 0;
    std::vector<HistoryRow> history;
    Termination termination = Termination::max_iterations;
};

namespace detail {

inline void refresh_adjoints(SqhState& s, const ReducedProblem& rp) {
    s.q = rp.adjoints(s.D, s.sigma, s.u);
    for (int i = 0; i < 2; ++i) {
        s.grad_u[i] = nodal_gradient(s.u[i]);
        s.grad_q[i] = nodal_gradient(s.q[i]);
    }
}

inline double weighted_distance_sq(const ScalarField& a, const ScalarField& b) {
    return std::pow(l2_norm_weighted(a - b), 2);
}

}  // namespace detail

inline SqhState initialize(const ReducedProblem& rp, const SqhConfig& cfg, const ScalarField& D0,
                           const ScalarField& sigma0) {
    cfg.validate();
    require_conformable(D0, sigma0, "initialize");
    require_conformable(D0, rp.data[0], "initialize");
    if (!in_box(cfg.search.box, D0, sigma0)) throw ConfigError("initial guess violates the admissible box");

    const Gradient empty{ScalarField(D0.grid()), ScalarField(D0.grid())};
    SqhState s{0, D0, sigma0, rp.states(D0, sigma0), {ScalarField(D0.grid()), ScalarField(D0.grid())},
               {empty, empty}, {empty, empty}, 0.0, cfg.eps0, 0, {}};
    s.J = rp.J(s.D, s.sigma, s.u);
    detail::refresh_adjoints(s, rp);
    return s;
}

struct StepOutcome {
    bool accepted = false;
    double tau = 0.0;
};

/// One sweep, then re-solve, the sufficient-decrease test and the epsilon update.
inline StepOutcome sqh_step(SqhState& s, const ReducedProblem& rp, const SqhConfig& cfg) {
    SweepInputs in;
    for (int i = 0; i < 2; ++i) {
        in.u[i] = &s.u[i];
        in.q[i] = &s.q[i];
        in.grad_u[i] = &s.grad_u[i];
        in.grad_q[i] = &s.grad_q[i];
        in.G[i] = &rp.data[i];
    }
    in.Dk = &s.D;
    in.sigmak = &s.sigma;

    auto [D, sigma] = minimize_field(in, s.eps, cfg.search, rp.weights, rp.constants, cfg.threads);
    const double tau = detail::weighted_distance_sq(D, s.D) + detail::weighted_distance_sq(sigma, s.sigma);

    // Unchanged controls give the same states and J; skip the solves.
    const bool unchanged = (D == s.D) && (sigma == s.sigma);
    std::array<ScalarField, 2> u = unchanged ? s.u : rp.states(D, sigma);
    const double J = unchanged ? s.J : rp.J(D, sigma, u);

    StepOutcome out{false, tau};
    const double used_eps = s.eps;
    if (J - s.J > -cfg.rho * tau) {
        s.eps *= cfg.lambda;
        ++s.consecutive_rejections;
    } else {
        out.accepted = true;
        s.eps *= cfg.zeta;
        s.consecutive_rejections = 0;
        s.D = std::move(D);
        s.sigma = std::move(sigma);
        s.u = std::move(u);
        s.J = J;
        if (!unchanged) detail::refresh_adjoints(s, rp);
    }
    s.history.push_back({s.k, J, tau, used_eps, out.accepted});
    if (out.accepted) ++s.k;
    return out;
}

inline ReconstructionResult run(const ReducedProblem& rp, const SqhConfig& cfg, const ScalarField& D0,
                                const ScalarField& sigma0) {
    SqhState s = initialize(rp, cfg, D0, sigma0);
    const double J0 = s.J;
    Termination termination = Termination::max_iterations;
    int worst_rescue = 0;
    while (s.k < cfg.max_outer) {
        const StepOutcome step = sqh_step(s, rp, cfg);
        worst_rescue = std::max(worst_rescue, s.consecutive_rejections);
        if (step.accepted && step.tau < cfg.kappa) {
            termination = Termination::converged;
            break;
        }
        if (s.consecutive_rejections > cfg.max_eps_rescue || s.eps > cfg.eps_max) {
            termination = Termination::eps_overflow;
            break;
        }
    }
    ScalarField sigma_a = sigma_a_of(s.sigma, rp.constants.sigma_b);
    return ReconstructionResult{std::move(s.D), std::move(s.sigma), std::move(sigma_a), J0, s.J, s.k, worst_rescue,
                                std::move(s.history), termination};
}

inline std::string history_csv(const std::vector<HistoryRow>& rows) {
    std::string out = "iter,J,tau,eps,accepted\n";
    for (const HistoryRow& r : rows) {
        out += std::to_string(r.iter) + "," + format_double(r.J) + "," + format_double(r.tau) + "," +
               format_double(r.eps) + "," + (r.accepted ? "1" : "0") + "\n";
    }
    return out;
}

/// True when J strictly decreases across accepted steps that moved the iterate (tau > 0).
inline bool accepted_J_strictly_decreasing(double J0, const std::vector<HistoryRow>& rows) {
    double prev = J0;
    for (const HistoryRow& r : rows) {
        if (!r.accepted || r.tau == 0.0) continue;
        if (!(r.J < prev)) return false;
        prev = r.J;
    }
    return true;
}

}  // namespace qpat
