#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "qpat/config.hpp"

using namespace qpat;

TEST(Config, DefaultsForTheDiskCase) {
    const RunConfig c = resolve_config(json{{"case_id", 1}});
    EXPECT_EQ(c.problem.N_coarse, 100);
    EXPECT_EQ(c.problem.N_fine, 400);
    EXPECT_EQ(c.problem.constants.sigma_b, 0.16);
    EXPECT_DOUBLE_EQ(c.problem.constants.c, 100.0 / 3.0);
    EXPECT_EQ(c.weights.alpha, 1.0);
    EXPECT_EQ(c.weights.xi1, 0.01);
    EXPECT_EQ(c.weights.xi2, 20.0);
    EXPECT_EQ(c.weights.gamma, 0.01);
    EXPECT_EQ(c.sqh.eps0, 10.0);
    EXPECT_EQ(c.sqh.kappa, 1e-6);
    EXPECT_EQ(c.sqh.search.nD, 201);
    EXPECT_EQ(c.sqh.search.strategy, SearchStrategy::structured);
    EXPECT_DOUBLE_EQ(c.box.sigma_l, -0.16 + 1e-3);
    EXPECT_EQ(c.init.D0, 0.02);
    EXPECT_EQ(c.init.sigma0, 0.0);
    EXPECT_EQ(c.phantom.shapes.size(), 1u);
    EXPECT_EQ(c.coarse_grid(), Grid2D(-1.0, 1.0, 100));
}

TEST(Config, BackgroundAbsorptionFollowsTheCase) {
    const RunConfig c = resolve_config(json{{"case_id", 4}});
    EXPECT_EQ(c.problem.constants.sigma_b, 0.5);
    EXPECT_DOUBLE_EQ(c.box.sigma_l, -0.5 + 1e-3);
    EXPECT_EQ(c.phantom.sigma_b, 0.5);
    const RunConfig d = resolve_config(json{{"case_id", 1}, {"problem", {{"sigma_b", 0.3}}}});
    EXPECT_DOUBLE_EQ(d.box.sigma_l, -0.3 + 1e-3);
}

TEST(Config, NoisyHeartLungRaisesSigmaWeights) {
    const RunConfig noisy = resolve_config(json{{"case_id", 2}, {"noise", {{"eta", 0.05}}}});
    EXPECT_EQ(noisy.weights.xi1, 0.1);
    EXPECT_EQ(noisy.weights.gamma, 0.1);
    const RunConfig clean = resolve_config(json{{"case_id", 2}});
    EXPECT_EQ(clean.weights.xi1, 0.01);
    const RunConfig other = resolve_config(json{{"case_id", 1}, {"noise", {{"eta", 0.05}}}});
    EXPECT_EQ(other.weights.gamma, 0.01);
    const RunConfig pinned = resolve_config(json{{"case_id", 3}, {"noise", {{"eta", 0.1}}}, {"weights", {{"xi1", 0.5}}}});
    EXPECT_EQ(pinned.weights.xi1, 0.5);
    EXPECT_EQ(pinned.weights.gamma, 0.1);
}

TEST(Config, UnknownKeysAreRejected) {
    EXPECT_THROW(resolve_config(json{{"cse_id", 1}}), ConfigError);
    EXPECT_THROW(resolve_config(json{{"sqh", {{"kapa", 1.0}}}}), ConfigError);
    EXPECT_THROW(resolve_config(json{{"sqh", 3}}), ConfigError);
}

TEST(Config, WrongTypesAndBadValues) {
    EXPECT_THROW(resolve_config(json{{"case_id", "one"}}), ConfigError);
    EXPECT_THROW(resolve_config(json{{"sqh", {{"kappa", "small"}}}}), ConfigError);
    EXPECT_THROW(resolve_config(json{{"case_id", 9}}), ConfigError);
    EXPECT_THROW(resolve_config(json{{"sqh", {{"search", "random"}}}}), ConfigError);
    EXPECT_THROW(resolve_config(json{{"problem", {{"N_coarse", 30}, {"N_fine", 100}}}}), ConfigError);
    EXPECT_THROW(resolve_config(json{{"init", {{"D0", 1.0}}}}), ConfigError);
    EXPECT_THROW(resolve_config(json{{"sqh", {{"zeta", 1.5}}}}), ConfigError);
    EXPECT_THROW(resolve_config(json{{"noise", {{"eta", -0.1}}}}), ConfigError);
    EXPECT_THROW(resolve_config(json::array()), ConfigError);
}

TEST(Config, OverridesUseDottedPaths) {
    json patch = json::object();
    apply_override(patch, "sqh.kappa=1e6");
    apply_override(patch, "problem.N_coarse=20");
    apply_override(patch, "problem.N_fine=40");
    apply_override(patch, "sqh.search=exhaustive");
    apply_override(patch, "case_id=2");
    const RunConfig c = resolve_config(patch);
    EXPECT_EQ(c.sqh.kappa, 1e6);
    EXPECT_EQ(c.problem.N_coarse, 20);
    EXPECT_EQ(c.sqh.search.strategy, SearchStrategy::exhaustive);
    EXPECT_EQ(c.case_id, 2);
    EXPECT_THROW(apply_override(patch, "novalue"), ConfigError);
    EXPECT_THROW(apply_override(patch, "sqh..kappa=1"), ConfigError);
}

TEST(Config, CustomPhantomGeometry) {
    const json shapes = json::array({json{{"kind", "disk"}, {"cx", 0.0}, {"cy", 0.0}, {"r", 0.3}, {"sigma", 0.4},
                                          {"D", 0.01}, {"label", "blob"}}});
    const RunConfig c = resolve_config(json{{"case_id", 1}, {"phantom", {{"shapes", shapes}}}});
    ASSERT_EQ(c.phantom.shapes.size(), 1u);
    EXPECT_EQ(c.phantom.shapes[0].outer.ax, 0.3);
    EXPECT_EQ(c.phantom.shapes[0].sigma, 0.4);
    EXPECT_THROW(resolve_config(json{{"phantom", {{"shapes", json::array({json{{"kind", "star"}}})}}}}), ConfigError);
}

TEST(Config, SnapshotRoundTrips) {
    for (int id = 1; id <= 5; ++id) {
        const RunConfig c = resolve_config(json{{"case_id", id}, {"noise", {{"eta", 0.05}, {"seed", 17}}}});
        const json snap = to_json(c);
        EXPECT_EQ(to_json(resolve_config(snap)), snap) << id;
        EXPECT_EQ(snap.dump(), to_json(c).dump());
    }
}

TEST(Config, FileLoading) {
    const auto dir = std::filesystem::temp_directory_path() / "qpat_config_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream(dir / "ok.json") << R"({"case_id": 5, "sqh": {"max_outer": 7}})";
        std::ofstream(dir / "bad.json") << "[1, 2";
    }
    const RunConfig c = resolve_config(load_json_file(dir / "ok.json"));
    EXPECT_EQ(c.case_id, 5);
    EXPECT_EQ(c.sqh.max_outer, 7);
    EXPECT_THROW(load_json_file(dir / "bad.json"), ConfigError);
    EXPECT_THROW(load_json_file(dir / "absent.json"), MissingInputError);
    std::filesystem::remove_all(dir);
}
