#include <algorithm>
#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "qpat/metrics.hpp"
#include "qpat/pgm.hpp"
#include "qpat/synth.hpp"

using namespace qpat;

namespace {

const Grid2D g4(-1.0, 1.0, 3);  // 16 nodes

ScalarField random_positive(std::uint64_t seed) {
    ScalarField f(g4);
    for (std::size_t n = 0; n < f.size(); ++n) f[n] = 0.1 + rng::unit(rng::draw(seed, n));
    return f;
}

}  // namespace

TEST(RmsePct, Examples) {
    const ScalarField ex(g4, 1.0);
    EXPECT_EQ(rmse_pct(ex, ex), 0.0);
    ScalarField half = ex;
    for (std::size_t n = 0; n < 8; ++n) half[n] = 0.0;
    EXPECT_NEAR(rmse_pct(half, ex), 100.0 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(rmse_pct(half, ex), 70.7107, 1e-4);
}

TEST(RmsePct, ScaleInvariant) {
    const ScalarField a = random_positive(1), b = random_positive(2);
    EXPECT_NEAR(rmse_pct(2.0 * a, 2.0 * b), rmse_pct(a, b), 1e-12);
    EXPECT_NEAR(rmse_pct(1e-3 * a, 1e-3 * b), rmse_pct(a, b), 1e-12);
}

TEST(RmsePct, ZeroExactFieldIsAnError) {
    EXPECT_THROW(rmse_pct(ScalarField(g4, 1.0), ScalarField(g4)), ContractError);
    EXPECT_THROW(rmse_pct(ScalarField(g4), ScalarField(Grid2D(-1.0, 1.0, 4))), ConformabilityError);
}

TEST(Psnr, Examples) {
    ScalarField ex(g4, 0.5);
    ex[3] = 1.0;
    ScalarField rec = ex;
    rec[7] += 1.0;
    EXPECT_NEAR(psnr(rec, ex), 0.0, 1e-12);
    rec = ex;
    rec[7] -= 0.1;
    EXPECT_NEAR(psnr(rec, ex), 20.0, 1e-12);
}

TEST(Psnr, ExactMatchIsInfinite) {
    const ScalarField a = random_positive(3);
    EXPECT_EQ(psnr(a, a), std::numeric_limits<double>::infinity());
    EXPECT_EQ(psnr_std(a, a), std::numeric_limits<double>::infinity());
}

TEST(Psnr, NonPositivePeakIsAnError) {
    EXPECT_THROW(psnr(ScalarField(g4, 1.0), ScalarField(g4, -1.0)), ContractError);
    EXPECT_THROW(psnr(ScalarField(g4, 1.0), ScalarField(g4)), ContractError);
    EXPECT_THROW(psnr_std(ScalarField(g4, 1.0), ScalarField(g4)), ContractError);
}

TEST(Psnr, ShrinkingTheErrorIncreasesPsnr) {
    const ScalarField ex = random_positive(4), noise = random_positive(5);
    double prev = -std::numeric_limits<double>::infinity();
    for (double s : {1.0, 0.5, 0.1, 0.01}) {
        const double v = psnr(ex + s * noise, ex);
        EXPECT_GT(v, prev);
        prev = v;
    }
}

TEST(Psnr, NotScaleInvariant) {
    const ScalarField a = random_positive(6), b = random_positive(7);
    // peak scales by 2, squared error by 4: PSNR drops by 10 log10 2
    EXPECT_NEAR(psnr(2.0 * a, 2.0 * b), psnr(a, b) - 10.0 * std::log10(2.0), 1e-12);
}

TEST(PsnrStd, TextbookDefinition) {
    ScalarField ex(g4, 0.5);
    ex[0] = 2.0;
    ScalarField rec = ex;
    rec[5] += 0.4;  // mse = 0.16 / 16 = 0.01
    EXPECT_NEAR(psnr_std(rec, ex), 10.0 * std::log10(4.0 / 0.01), 1e-12);
}

TEST(Report, FieldsAndCsv) {
    const ScalarField D = random_positive(8), Dr = random_positive(9), s = random_positive(10),
                      sr = random_positive(11);
    const MeritReport r = report(2, 0.05, Dr, sr, D, s);
    EXPECT_EQ(r.case_id, 2);
    EXPECT_EQ(r.noise, 0.05);
    EXPECT_EQ(r.rmse_pct_D, rmse_pct(Dr, D));
    EXPECT_EQ(r.rmse_pct_sigma_a, rmse_pct(sr, s));
    EXPECT_EQ(r.psnr_D, psnr(Dr, D));
    EXPECT_EQ(r.psnr_sigma_a, psnr(sr, s));
    EXPECT_EQ(metrics_csv_header(),
              "case,noise,rmse_pct_D,rmse_pct_sigma_a,psnr_D,psnr_sigma_a,psnr_std_D,psnr_std_sigma_a\n");
    const std::string row = metrics_csv_row(r);
    EXPECT_EQ(row, metrics_csv_row(report(2, 0.05, Dr, sr, D, s)));
    EXPECT_EQ(row.rfind("2,0.050000000000000003,", 0), 0u);
    EXPECT_EQ(std::count(row.begin(), row.end(), ','), 7);
}

TEST(Report, TableColumnOrder) {
    MeritReport r;
    r.case_id = 1;
    r.rmse_pct_D = 0.08;
    r.rmse_pct_sigma_a = 1.41;
    r.psnr_D = 94.33;
    r.psnr_sigma_a = 50.29;
    const std::string t = metrics_table({r});
    EXPECT_NE(t.find("   1     0.0       0.08       1.41     94.33     50.29"), std::string::npos) << t;
}

TEST(Report, PermutationInvariantUnderCommonRelabeling) {
    const ScalarField D = random_positive(12), Dr = random_positive(13);
    ScalarField Dp(g4), Drp(g4);
    for (std::size_t n = 0; n < D.size(); ++n) {
        Dp[n] = D[D.size() - 1 - n];
        Drp[n] = Dr[D.size() - 1 - n];
    }
    EXPECT_NEAR(rmse_pct(Drp, Dp), rmse_pct(Dr, D), 1e-12);
    EXPECT_NEAR(psnr(Drp, Dp), psnr(Dr, D), 1e-12);
}

TEST(Pgm, HeaderAndClamping) {
    ScalarField f(Grid2D(-1.0, 1.0, 2), 0.0);
    f(0, 2) = 1.0;
    f(2, 0) = 5.0;
    f(1, 1) = -3.0;
    f(2, 2) = 0.5;
    EXPECT_EQ(to_pgm(f, 0.0, 1.0), "P2\n3 3\n255\n255 0 128\n0 0 0\n0 0 255\n");
    EXPECT_THROW(to_pgm(f, 1.0, 1.0), ContractError);
}
