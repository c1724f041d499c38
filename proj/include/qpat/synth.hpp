#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>

#include "qpat/forward.hpp"
#include "qpat/grid.hpp"
#include "qpat/model.hpp"
#include "qpat/phantom.hpp"

namespace qpat {

namespace rng {

inline constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based 64-bit draw: a pure function of (seed, counter).
inline constexpr std::uint64_t draw(std::uint64_t seed, std::uint64_t counter) noexcept {
    return splitmix64(splitmix64(seed) ^ (counter * 0xD1B54A32D192ED03ULL));
}

/// Uniform in (0, 1].
inline double unit(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

/// The index-th standard normal of the stream keyed by seed (Box-Muller on consecutive counter pairs).
inline double normal_at(std::uint64_t seed, std::uint64_t index) noexcept {
    const std::uint64_t pair = index / 2;
    const double u1 = unit(draw(seed, 2 * pair));
    const double u2 = unit(draw(seed, 2 * pair + 1));
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    return (index % 2 == 0) ? r * std::cos(t) : r * std::sin(t);
}

}  // namespace rng

/// Reproducible i.i.d. N(0,1) sequence.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : seed_(seed) {}
    double next() noexcept { return rng::normal_at(seed_, index_++); }
    double at(std::uint64_t index) const noexcept { return rng::normal_at(seed_, index); }

private:
    std::uint64_t seed_;
    std::uint64_t index_ = 0;
};

inline NormalStream standard_normal_stream(std::uint64_t seed) { return NormalStream(seed); }

using BoundaryFunction = std::function<double(double, double)>;

struct Illumination {
    int index = 1;  // 1 or 2; also selects the noise substream
    BoundaryFunction g;
};

/// g1 = e^x, g2 = e^y
inline Illumination default_illumination(int index) {
    if (index == 1) return {1, [](double x, double) { return std::exp(x); }};
    if (index == 2) return {2, [](double, double y) { return std::exp(y); }};
    throw ContractError("illumination index must be 1 or 2");
}

struct NoiseSpec {
    double level = 0.0;  // relative standard deviation eta
    std::uint64_t seed = 0;
    bool before_restriction = true;
};

/// Interior data on the coarse grid: restrict((1 + eta Z) * Gamma (sigma + sigma_b) u_fine).
/// `phantom` must be sampled on the fine grid. With before_restriction = false the noise is applied
/// to the restricted data instead.
inline ScalarField generate(const Phantom& phantom, const Illumination& illum, const Grid2D& coarse,
                            const NoiseSpec& noise, const PhysicalConstants& k, double solver_tol = kDefaultSolverTol) {
    const Grid2D& fine = phantom.D.grid();
    if (fine.a() != coarse.a() || fine.b() != coarse.b() || fine.cells() % coarse.cells() != 0) {
        throw ConformabilityError("generate: fine grid N=" + std::to_string(fine.cells()) +
                                  " is not nested over coarse grid N=" + std::to_string(coarse.cells()));
    }
    if (!(noise.level >= 0.0)) throw ConfigError("noise level must be nonnegative");

    const ScalarField sa = sigma_a_of(phantom.sigma, phantom.sigma_b);
    const ScalarField u = solve(EllipticProblem{phantom.D, sa, ScalarField(fine), boundary_field(fine, illum.g)},
                                solver_tol);
    PhysicalConstants kk = k;
    kk.sigma_b = phantom.sigma_b;
    ScalarField H = optical_energy(phantom.sigma, u, kk);

    auto perturb = [&](ScalarField& f) {
        if (noise.level == 0.0) return;
        const std::uint64_t offset = static_cast<std::uint64_t>(illum.index - 1) * f.size();
        for (std::size_t n = 0; n < f.size(); ++n) f[n] *= 1.0 + noise.level * rng::normal_at(noise.seed, offset + n);
    };

    if (noise.before_restriction) {
        perturb(H);
        return restrict_to(H, coarse);
    }
    ScalarField G = restrict_to(H, coarse);
    perturb(G);
    return G;
}

}  // namespace qpat
