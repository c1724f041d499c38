#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <thread>
#include <utility>
#include <vector>

#include "qpat/grid.hpp"
#include "qpat/model.hpp"

namespace qpat {

/// State, adjoint and data values frozen at one node during a sweep.
struct NodeContext {
    std::array<double, 2> u{};
    std::array<double, 2> q{};
    std::array<std::array<double, 2>, 2> grad_u{};
    std::array<std::array<double, 2>, 2> grad_q{};
    std::array<double, 2> G{};
    double Dk = 0.0;
    double sigmak = 0.0;
};

/// Hamiltonian-Pontryagin integrand at one node with D = w, sigma = z.
inline double hamiltonian(const NodeContext& node, double w, double z, const RegularizationWeights& wt,
                          const PhysicalConstants& k) noexcept {
    const double sa = z + k.sigma_b;
    double fit = 0.0;
    double coupling = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double r = k.Gamma * sa * node.u[i] - node.G[i];
        fit += r * r;
        coupling += w * (node.grad_u[i][0] * node.grad_q[i][0] + node.grad_u[i][1] * node.grad_q[i][1]);
        coupling += sa * node.u[i] * node.q[i];
    }
    const double dd = w - kubelka_value(z, k);
    return 0.5 * wt.alpha * fit + 0.5 * wt.xi1 * z * z + 0.5 * wt.xi2 * dd * dd + wt.gamma * std::abs(z) + coupling;
}

/// H plus the proximal term eps ((w - Dk)^2 + (z - sigmak)^2).
inline double augmented_hamiltonian(const NodeContext& node, double w, double z, double eps,
                                    const RegularizationWeights& wt, const PhysicalConstants& k) noexcept {
    const double dw = w - node.Dk;
    const double dz = z - node.sigmak;
    return hamiltonian(node, w, z, wt, k) + eps * (dw * dw + dz * dz);
}

enum class SearchStrategy {
    structured,  // exact on the candidate set: H_eps is a convex quadratic in w for each fixed z
    exhaustive,  // evaluates every candidate pair
};

/// Uniform candidate values on the admissible box, endpoints included.
/// The previous iterate (Dk, sigmak) is always an extra candidate.
struct SearchGrid {
    AdmissibleBox box;
    int nD = 201;
    int nSigma = 201;
    SearchStrategy strategy = SearchStrategy::structured;

    void validate() const {
        if (nD < 2 || nSigma < 2) throw ConfigError("search grid needs at least 2 candidates per axis");
    }

    double d_value(int a) const noexcept {
        if (a == nD - 1) return box.D_r;
        return box.D_l + a * ((box.D_r - box.D_l) / (nD - 1));
    }
    double sigma_value(int b) const noexcept {
        if (b == nSigma - 1) return box.sigma_r;
        return box.sigma_l + b * ((box.sigma_r - box.sigma_l) / (nSigma - 1));
    }
};

struct Candidate {
    double w;
    double z;
    double value;
};

namespace detail {

/// Strict ordering used everywhere: smaller value, then smaller z, then smaller w.
inline bool better(const Candidate& a, const Candidate& b) noexcept {
    if (a.value != b.value) return a.value < b.value;
    if (a.z != b.z) return a.z < b.z;
    return a.w < b.w;
}

}  // namespace detail

inline Candidate minimize_node_candidate(const NodeContext& node, double eps, const SearchGrid& sg,
                                         const RegularizationWeights& wt, const PhysicalConstants& k) {
    Candidate best{node.Dk, node.sigmak, augmented_hamiltonian(node, node.Dk, node.sigmak, eps, wt, k)};
    auto consider = [&](double w, double z) {
        const Candidate c{w, z, augmented_hamiltonian(node, w, z, eps, wt, k)};
        if (detail::better(c, best)) best = c;
    };

    if (sg.strategy == SearchStrategy::exhaustive) {
        for (int b = 0; b < sg.nSigma; ++b)
            for (int a = 0; a < sg.nD; ++a) consider(sg.d_value(a), sg.sigma_value(b));
        return best;
    }

    // For fixed z, H_eps(w) = (xi2/2 + eps) w^2 + (S - xi2 Dbar(z) - 2 eps Dk) w + const, so the grid minimizer
    // sits next to the unconstrained minimizer; a small window around it plus the endpoints covers rounding.
    double slope = 0.0;
    for (int i = 0; i < 2; ++i)
        slope += node.grad_u[i][0] * node.grad_q[i][0] + node.grad_u[i][1] * node.grad_q[i][1];
    const double curvature = wt.xi2 + 2.0 * eps;
    const double step = (sg.box.D_r - sg.box.D_l) / (sg.nD - 1);
    const int last = sg.nD - 1;

    for (int b = 0; b < sg.nSigma; ++b) {
        const double z = sg.sigma_value(b);
        consider(sg.d_value(0), z);
        consider(sg.d_value(last), z);
        if (curvature > 0.0) {
            const double wstar = (wt.xi2 * kubelka_value(z, k) - slope + 2.0 * eps * node.Dk) / curvature;
            const double pos = (wstar - sg.box.D_l) / step;
            if (pos > 0.0 && pos < last) {
                const int base = static_cast<int>(std::floor(pos));
                for (int a = std::max(1, base - 1); a <= std::min(last - 1, base + 2); ++a) consider(sg.d_value(a), z);
            }
        }
    }
    return best;
}

inline std::pair<double, double> minimize_node(const NodeContext& node, double eps, const SearchGrid& sg,
                                               const RegularizationWeights& wt, const PhysicalConstants& k) {
    const Candidate c = minimize_node_candidate(node, eps, sg, wt, k);
    return {c.w, c.z};
}

/// Frozen fields for a sweep: states, adjoints, their gradients, data, and the previous controls.
struct SweepInputs {
    std::array<const ScalarField*, 2> u{};
    std::array<const ScalarField*, 2> q{};
    std::array<const Gradient*, 2> grad_u{};
    std::array<const Gradient*, 2> grad_q{};
    std::array<const ScalarField*, 2> G{};
    const ScalarField* Dk = nullptr;
    const ScalarField* sigmak = nullptr;

    NodeContext node(std::size_t n) const {
        NodeContext c;
        for (int i = 0; i < 2; ++i) {
            c.u[i] = (*u[i])[n];
            c.q[i] = (*q[i])[n];
            c.grad_u[i] = {grad_u[i]->dx[n], grad_u[i]->dy[n]};
            c.grad_q[i] = {grad_q[i]->dx[n], grad_q[i]->dy[n]};
            c.G[i] = (*G[i])[n];
        }
        c.Dk = (*Dk)[n];
        c.sigmak = (*sigmak)[n];
        return c;
    }
};

/// Applies minimize_node at every node, boundary included. `threads` = 0 picks the hardware count.
/// Each node is written by exactly one worker, so the result does not depend on the schedule.
inline std::pair<ScalarField, ScalarField> minimize_field(const SweepInputs& in, double eps, const SearchGrid& sg,
                                                          const RegularizationWeights& wt,
                                                          const PhysicalConstants& k, unsigned threads = 0) {
    const Grid2D& g = in.Dk->grid();
    ScalarField D(g), sigma(g);
    const std::size_t total = g.node_count();

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t n = begin; n < end; ++n) {
            const Candidate c = minimize_node_candidate(in.node(n), eps, sg, wt, k);
            D[n] = c.w;
            sigma[n] = c.z;
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    if (threads == 1) {
        work(0, total);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (total + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t b = t * chunk;
            const std::size_t e = std::min(total, b + chunk);
            if (b < e) pool.emplace_back(work, b, e);
        }
    }
    return {std::move(D), std::move(sigma)};
}

}  // namespace qpat
