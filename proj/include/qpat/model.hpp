#pragma once

#include <cmath>
#include <string>

#include "qpat/errors.hpp"
#include "qpat/grid.hpp"

namespace qpat {

/// Weights of the reconstruction functional.
struct RegularizationWeights {
    double alpha = 1.0;  // data fit
    double xi1 = 0.01;   // L2 on sigma
    double xi2 = 20.0;   // Kubelka-Munk prior on D
    double gamma = 0.01; // L1 sparsity on sigma

    void validate() const {
        for (double w : {alpha, xi1, xi2, gamma})
            if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("weights must be nonnegative and finite");
    }
};

struct PhysicalConstants {
    double Gamma = 1.0;          // Grueneisen coefficient
    double sigma_b = 0.16;       // background absorption
    double c = 100.0 / 3.0;      // Kubelka-Munk proportionality sigma_s ~ c sigma_a
    double sigma_eps = 1e-3;     // lower floor on sigma + sigma_b

    void validate() const {
        if (!(Gamma > 0.0)) throw ConfigError("Gamma must be positive");
        if (!(sigma_b >= 0.0)) throw ConfigError("sigma_b must be nonnegative");
        if (!(c > 0.0)) throw ConfigError("c must be positive");
        if (!(sigma_eps > 0.0)) throw ConfigError("sigma_eps must be positive");
    }
};

/// Box constraints [D_l, D_r] x [sigma_l, sigma_r] applied nodewise.
struct AdmissibleBox {
    double D_l = 1e-4;
    double D_r = 0.2;
    double sigma_l = -0.16 + 1e-3;
    double sigma_r = 2.0;

    /// Defaults for a given background: sigma_l = -sigma_b + sigma_eps.
    static AdmissibleBox defaults_for(const PhysicalConstants& k) {
        AdmissibleBox box;
        box.sigma_l = -k.sigma_b + k.sigma_eps;
        return box;
    }

    void validate(const PhysicalConstants& k) const {
        if (!(D_l > 0.0) || !(D_l <= D_r)) throw ConfigError("box: require 0 < D_l <= D_r");
        if (!(sigma_l <= sigma_r)) throw ConfigError("box: require sigma_l <= sigma_r");
        // small slack: sigma_l is usually computed as -sigma_b + sigma_eps
        if (sigma_l + k.sigma_b < k.sigma_eps * (1.0 - 1e-9))
            throw ConfigError("box: sigma_l + sigma_b must be >= sigma_eps");
    }

    bool contains(double D, double sigma) const noexcept {
        return D >= D_l && D <= D_r && sigma >= sigma_l && sigma <= sigma_r;
    }
};

inline bool in_box(const AdmissibleBox& box, const ScalarField& D, const ScalarField& sigma) {
    for (std::size_t k = 0; k < D.size(); ++k)
        if (!box.contains(D[k], sigma[k])) return false;
    return true;
}

/// sigma_a = sigma + sigma_b
inline ScalarField sigma_a_of(const ScalarField& sigma, double sigma_b) {
    ScalarField out = sigma;
    for (double& v : out.values()) v += sigma_b;
    return out;
}

/// Initial pressure Gamma (sigma + sigma_b) u.
inline ScalarField optical_energy(const ScalarField& sigma, const ScalarField& u, const PhysicalConstants& k) {
    require_conformable(sigma, u, "optical_energy");
    ScalarField out(sigma.grid());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = k.Gamma * (sigma[n] + k.sigma_b) * u[n];
    return out;
}

/// Kubelka-Munk target 1 / (3c (sigma + sigma_b)) at one node; no floor check.
inline double kubelka_value(double sigma, const PhysicalConstants& k) noexcept {
    return 1.0 / (3.0 * k.c * (sigma + k.sigma_b));
}

inline ScalarField kubelka_target(const ScalarField& sigma, const PhysicalConstants& k) {
    ScalarField out(sigma.grid());
    const double floor = k.sigma_eps * (1.0 - 1e-9);
    for (std::size_t n = 0; n < out.size(); ++n) {
        if (!(sigma[n] + k.sigma_b >= floor)) {
            throw NumericalError("kubelka_target: sigma + sigma_b = " + std::to_string(sigma[n] + k.sigma_b) +
                                 " below sigma_eps at node " + std::to_string(n));
        }
        out[n] = kubelka_value(sigma[n], k);
    }
    return out;
}

}  // namespace qpat
