#pragma once

#include <array>

#include "qpat/config.hpp"
#include "qpat/metrics.hpp"
#include "qpat/phantom.hpp"
#include "qpat/sqh.hpp"
#include "qpat/synth.hpp"

namespace qpat {

/// Exact phantom on the coarse grid plus noisy interior data for both illuminations.
struct SyntheticCase {
    Phantom exact;
    std::array<ScalarField, 2> data;
};

inline SyntheticCase synthesize(const RunConfig& cfg) {
    const PhantomSpec& spec = cfg.phantom;
    const Grid2D coarse = cfg.coarse_grid();
    const Phantom fine = build_phantom(spec, cfg.fine_grid());
    const NoiseSpec noise{cfg.noise.eta, cfg.noise.seed, true};
    const PhysicalConstants& k = cfg.problem.constants;
    return {build_phantom(spec, coarse),
            {generate(fine, default_illumination(1), coarse, noise, k, cfg.sqh.solver_tol),
             generate(fine, default_illumination(2), coarse, noise, k, cfg.sqh.solver_tol)}};
}

inline ReducedProblem reduced_problem(const RunConfig& cfg, std::array<ScalarField, 2> data) {
    const Grid2D coarse = cfg.coarse_grid();
    for (const ScalarField& G : data) {
        if (G.grid() != coarse) {
            throw ConformabilityError("data grid N=" + std::to_string(G.grid().cells()) +
                                      " does not match configured N_coarse=" + std::to_string(coarse.cells()));
        }
    }
    return ReducedProblem{cfg.problem.constants,
                          cfg.weights,
                          {boundary_field(coarse, default_illumination(1).g),
                           boundary_field(coarse, default_illumination(2).g)},
                          std::move(data),
                          cfg.sqh.solver_tol};
}

inline ReconstructionResult reconstruct(const RunConfig& cfg, const ReducedProblem& rp) {
    const Grid2D coarse = cfg.coarse_grid();
    return run(rp, cfg.sqh, ScalarField(coarse, cfg.init.D0), ScalarField(coarse, cfg.init.sigma0));
}

inline MeritReport evaluate(const RunConfig& cfg, const ReconstructionResult& r, const Phantom& exact) {
    return report(cfg.case_id, cfg.noise.eta, r.D_star, r.sigma_a_star, exact.D, sigma_a_of(exact.sigma, exact.sigma_b));
}

}  // namespace qpat
