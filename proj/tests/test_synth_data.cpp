#include <cmath>

#include <gtest/gtest.h>

#include "qpat/phantom.hpp"
#include "qpat/synth.hpp"

using namespace qpat;

namespace {

PhysicalConstants constants_for(const Phantom& p) {
    PhysicalConstants k;
    k.sigma_b = p.sigma_b;
    return k;
}

}  // namespace

TEST(Rng, GoldenValues) {
    const double golden[5] = {-1.4452060910853441, 0.2229967985988191, 0.90199220836982363, -1.8229684396871699,
                              -0.43856267630777085};
    for (int i = 0; i < 5; ++i) EXPECT_EQ(rng::normal_at(42, static_cast<std::uint64_t>(i)), golden[i]) << i;
}

TEST(Rng, StreamMatchesRandomAccess) {
    NormalStream s = standard_normal_stream(7);
    for (std::uint64_t i = 0; i < 100; ++i) EXPECT_EQ(s.next(), rng::normal_at(7, i));
    EXPECT_EQ(s.at(5), rng::normal_at(7, 5));
}

TEST(Rng, DistinctSeedsGiveDistinctStreams) {
    int same = 0;
    for (std::uint64_t i = 0; i < 1000; ++i) same += rng::normal_at(1, i) == rng::normal_at(2, i);
    EXPECT_EQ(same, 0);
}

TEST(Rng, MomentsOfAMillionDraws) {
    const std::uint64_t n = 1'000'000;
    double sum = 0.0, sq = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        const double z = rng::normal_at(2024, i);
        sum += z;
        sq += z * z;
    }
    const double mean = sum / n, var = sq / n - mean * mean;
    // 5 standard errors
    EXPECT_LT(std::abs(mean), 5.0 / std::sqrt(static_cast<double>(n)));
    EXPECT_LT(std::abs(var - 1.0), 5.0 * std::sqrt(2.0 / n));
}

TEST(Rng, UnitIsInHalfOpenInterval) {
    EXPECT_EQ(rng::unit(0), 0x1.0p-53);
    EXPECT_EQ(rng::unit(~0ULL), 1.0);
}

TEST(Illumination, DefaultsAndBadIndex) {
    EXPECT_DOUBLE_EQ(default_illumination(1).g(1.0, -1.0), std::exp(1.0));
    EXPECT_DOUBLE_EQ(default_illumination(2).g(1.0, -1.0), std::exp(-1.0));
    EXPECT_THROW(default_illumination(3), ContractError);
}

TEST(Generate, NoiselessIsSeedIndependentAndEqualsCleanEnergy) {
    const Grid2D fine(-1.0, 1.0, 40), coarse(-1.0, 1.0, 20);
    const Phantom p = build_phantom(phantom_for_case(1), fine);
    const PhysicalConstants k = constants_for(p);
    const ScalarField a = generate(p, default_illumination(1), coarse, {0.0, 1, true}, k);
    const ScalarField b = generate(p, default_illumination(1), coarse, {0.0, 999, true}, k);
    EXPECT_EQ(a, b);

    const ScalarField u = solve(EllipticProblem{p.D, sigma_a_of(p.sigma, p.sigma_b), ScalarField(fine),
                                                boundary_field(fine, default_illumination(1).g)});
    EXPECT_EQ(a, restrict_to(optical_energy(p.sigma, u, k), coarse));
}

TEST(Generate, NoisyIsDeterministicPerSeed) {
    const Grid2D fine(-1.0, 1.0, 40), coarse(-1.0, 1.0, 20);
    const Phantom p = build_phantom(phantom_for_case(2), fine);
    const PhysicalConstants k = constants_for(p);
    const NoiseSpec n{0.05, 42, true};
    EXPECT_EQ(generate(p, default_illumination(2), coarse, n, k), generate(p, default_illumination(2), coarse, n, k));
    EXPECT_NE(generate(p, default_illumination(2), coarse, n, k),
              generate(p, default_illumination(2), coarse, {0.05, 43, true}, k));
    // separate substreams per illumination: the relative perturbations differ
    const ScalarField n1 = generate(p, default_illumination(1), coarse, n, k), c1 = generate(p, default_illumination(1), coarse, {}, k);
    const ScalarField n2 = generate(p, default_illumination(2), coarse, n, k), c2 = generate(p, default_illumination(2), coarse, {}, k);
    int same = 0;
    for (std::size_t i = 0; i < n1.size(); ++i) same += n1[i] / c1[i] == n2[i] / c2[i];
    EXPECT_LT(same, 5);
}

TEST(Generate, NoiseIsMultiplicativeOnTheFineGridBeforeRestriction) {
    const Grid2D fine(-1.0, 1.0, 40), coarse(-1.0, 1.0, 20);
    const Phantom p = build_phantom(phantom_for_case(1), fine);
    const PhysicalConstants k = constants_for(p);
    const ScalarField clean = generate(p, default_illumination(1), fine, {}, k);
    const ScalarField noisy = generate(p, default_illumination(1), coarse, {0.1, 5, true}, k);
    for (int j = 0; j <= 20; ++j) {
        for (int i = 0; i <= 20; ++i) {
            const std::size_t fine_index = static_cast<std::size_t>(2 * j) * 41 + static_cast<std::size_t>(2 * i);
            EXPECT_DOUBLE_EQ(noisy(i, j), clean(2 * i, 2 * j) * (1.0 + 0.1 * rng::normal_at(5, fine_index)));
        }
    }
    const ScalarField after = generate(p, default_illumination(1), coarse, {0.1, 5, false}, k);
    EXPECT_DOUBLE_EQ(after(3, 4), clean(6, 8) * (1.0 + 0.1 * rng::normal_at(5, 4 * 21 + 3)));
}

TEST(Generate, MeanNoiseRatioIsNearOneOnTheFineGrid) {
    const Grid2D fine(-1.0, 1.0, 400);
    const Phantom p = build_phantom(phantom_for_case(1), fine);
    const PhysicalConstants k = constants_for(p);
    const ScalarField clean = generate(p, default_illumination(1), fine, {}, k);
    const ScalarField noisy = generate(p, default_illumination(1), fine, {0.05, 11, true}, k);
    double sum = 0.0;
    for (std::size_t n = 0; n < clean.size(); ++n) sum += noisy[n] / clean[n];
    const double mean = sum / static_cast<double>(clean.size());
    EXPECT_GE(mean, 0.99);
    EXPECT_LE(mean, 1.01);
}

TEST(Generate, RejectsNonNestedGridsAndNegativeNoise) {
    const Phantom p = build_phantom(phantom_for_case(1), Grid2D(-1.0, 1.0, 30));
    const PhysicalConstants k = constants_for(p);
    EXPECT_THROW(generate(p, default_illumination(1), Grid2D(-1.0, 1.0, 20), {}, k), ConformabilityError);
    EXPECT_THROW(generate(p, default_illumination(1), Grid2D(-1.0, 1.0, 15), {-0.1, 0, true}, k), ConfigError);
}
