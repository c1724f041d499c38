#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <sys/wait.h>

#include "qpat/qgrid_io.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kSmall = " --override problem.N_coarse=20 --override problem.N_fine=40"
                           " --override sqh.nD=41 --override sqh.nSigma=41 --override sqh.threads=1";

struct Outcome {
    int code;
    std::string output;
};

Outcome cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string(QPAT_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream is(log);
    std::stringstream ss;
    ss << is.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() /
              ("qpat_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    Outcome run(const std::string& args) { return cli(args, dir / "log.txt"); }

    fs::path dir;
};

}  // namespace

TEST_F(Cli, GenerateWritesDataAndSidecar) {
    const Outcome o = run("generate --case 1 --out " + (dir / "g").string() + kSmall);
    ASSERT_EQ(o.code, 0) << o.output;
    for (const char* f : {"D_exact.qgrid", "sigma_exact.qgrid", "G1.qgrid", "G2.qgrid", "generate.json",
                          "D_exact.pgm", "sigma_a_exact.pgm"})
        EXPECT_TRUE(fs::exists(dir / "g" / f)) << f;
    EXPECT_EQ(qpat::read_qgrid(dir / "g" / "G1.qgrid").grid().cells(), 20);
    const std::string sidecar = slurp(dir / "g" / "generate.json");
    for (const char* key : {"\"case\": 1", "\"fineN\": 40", "\"coarseN\": 20", "\"eta\"", "\"seed\"", "\"sigma_b\"", "\"shapes\""})
        EXPECT_NE(sidecar.find(key), std::string::npos) << key;
}

TEST_F(Cli, UnknownCaseIsAConfigError) {
    EXPECT_EQ(run("generate --case 9 --out " + dir.string()).code, 2);
    EXPECT_EQ(run("generate --override nonsense.key=1 --out " + dir.string()).code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
}

TEST_F(Cli, MissingDataIsAMissingInputError) {
    const Outcome o = run("reconstruct --case 1 --data " + (dir / "nowhere").string() + " --out " +
                          (dir / "r").string() + kSmall);
    EXPECT_EQ(o.code, 3) << o.output;
    EXPECT_EQ(run("generate --config " + (dir / "absent.json").string()).code, 3);
}

TEST_F(Cli, GridMismatchIsAConformabilityError) {
    ASSERT_EQ(run("generate --case 1 --out " + (dir / "g").string() + kSmall).code, 0);
    // data on N=20 but reconstruction configured for N=40
    const Outcome o = run("reconstruct --case 1 --data " + (dir / "g").string() + " --out " + (dir / "r").string() +
                          " --override problem.N_coarse=40 --override problem.N_fine=80");
    EXPECT_EQ(o.code, 4) << o.output;
    EXPECT_NE(o.output.find("20"), std::string::npos) << o.output;
    EXPECT_NE(o.output.find("40"), std::string::npos) << o.output;

    const fs::path g = dir / "g";
    {
        std::ofstream(dir / "small.qgrid") << "qgrid 1 2 -1 1\n1 1 1\n1 1 1\n1 1 1\n";
    }
    const Outcome m = run("metrics --D-exact " + (g / "D_exact.qgrid").string() + " --sigma-a-exact " +
                          (g / "sigma_exact.qgrid").string() + " --D-rec " + (dir / "small.qgrid").string() +
                          " --sigma-a-rec " + (g / "sigma_exact.qgrid").string());
    EXPECT_EQ(m.code, 4) << m.output;
}

TEST_F(Cli, ReconstructWritesOutputsAndHonorsOverrides) {
    ASSERT_EQ(run("generate --case 1 --out " + dir.string() + kSmall).code, 0);
    const Outcome o = run("reconstruct --out " + dir.string() + kSmall + " --override sqh.kappa=1e6");
    ASSERT_EQ(o.code, 0) << o.output;
    for (const char* f : {"D_rec.qgrid", "sigma_a_rec.qgrid", "history.csv", "config.json", "summary.json",
                          "metrics.csv", "D_rec.pgm", "sigma_a_rec.pgm"})
        EXPECT_TRUE(fs::exists(dir / f)) << f;
    const std::string summary = slurp(dir / "summary.json");
    EXPECT_NE(summary.find("\"accepted_steps\": 1"), std::string::npos) << summary;
    EXPECT_NE(summary.find("converged"), std::string::npos) << summary;
    EXPECT_EQ(slurp(dir / "history.csv").rfind("iter,J,tau,eps,accepted\n", 0), 0u);

    const Outcome m = run("metrics --dir " + dir.string());
    EXPECT_EQ(m.code, 0) << m.output;
    EXPECT_NE(m.output.find("RMSE%"), std::string::npos) << m.output;
}

TEST_F(Cli, RunsAreByteIdentical) {
    for (const char* sub : {"a", "b"}) {
        const std::string out = (dir / sub).string();
        ASSERT_EQ(run("generate --case 2 --noise 0.05 --seed 42 --out " + out + kSmall).code, 0);
        ASSERT_EQ(run("reconstruct --out " + out + kSmall + " --override sqh.max_outer=5").code, 0);
    }
    for (const char* f : {"G1.qgrid", "G2.qgrid", "D_rec.qgrid", "sigma_a_rec.qgrid", "history.csv", "config.json",
                          "metrics.csv", "summary.json"})
        EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
}

TEST_F(Cli, ConfigFileAndFlagsLayer) {
    {
        std::ofstream(dir / "run.json") << R"({"case_id": 5, "noise": {"eta": 0.02, "seed": 3}})";
    }
    ASSERT_EQ(run("generate --config " + (dir / "run.json").string() + " --seed 8 --out " + dir.string() + kSmall)
                  .code,
              0);
    const std::string sidecar = slurp(dir / "generate.json");
    EXPECT_NE(sidecar.find("\"case_id\": 5"), std::string::npos) << sidecar;
    EXPECT_NE(sidecar.find("\"seed\": 8"), std::string::npos) << sidecar;
}

TEST_F(Cli, SelftestPasses) {
    const Outcome o = run("selftest");
    EXPECT_EQ(o.code, 0) << o.output;
    EXPECT_EQ(o.output.find("FAIL"), std::string::npos) << o.output;
}
