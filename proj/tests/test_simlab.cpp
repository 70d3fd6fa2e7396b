#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <numeric>
#include <vector>

#include "georel/simlab.hpp"

using namespace georel;
using namespace georel::simlab;

TEST(Metrics, MeanMsePre) {
    const std::vector<double> xs{0.2, 0.2, 0.2};
    EXPECT_DOUBLE_EQ(mse(xs, 0.2), 0.0);
    EXPECT_DOUBLE_EQ(mean(xs), 0.2);
    EXPECT_DOUBLE_EQ(pre_of(0.3, 0.3), 100.0);
    EXPECT_DOUBLE_EQ(pre_of(0.2, 0.1), 50.0);
}

TEST(Metrics, KahanSumIsCompensated) {
    KahanSum k;
    k.add(1.0);
    for (int i = 0; i < 1000000; ++i) k.add(1e-16);
    k.add(-1.0);
    EXPECT_NEAR(k.value(), 1e-10, 1e-20);
}

TEST(Metrics, SummaryDecomposition) {
    const std::vector<double> xs{0.1, 0.4, 0.35, 0.9, 0.05};
    const double truth = 0.3;
    const auto s = summarize(xs, truth);
    EXPECT_EQ(s.count, 5u);
    EXPECT_NEAR(s.mse, s.variance + s.bias * s.bias, 1e-15);
    EXPECT_NEAR(s.bias, s.mean - truth, 1e-15);

    const std::vector<double> one{0.7};
    const auto single = summarize(one, 0.5);
    EXPECT_DOUBLE_EQ(single.mean, 0.7);
    EXPECT_NEAR(single.mse, 0.04, 1e-15);

    const std::vector<double> with_nan{0.1, std::nan(""), 0.3};
    EXPECT_EQ(summarize(with_nan, 0.2).count, 2u);
}

TEST(Metrics, HistogramConservesMass) {
    std::vector<double> xs;
    for (int i = 0; i < 1000; ++i) xs.push_back(std::fmod(i * 0.618033988749895, 1.0));
    for (std::size_t bins : {1u, 7u, 20u}) {
        const auto h = histogram(xs, bins);
        ASSERT_EQ(h.counts.size(), bins);
        ASSERT_EQ(h.edges.size(), bins + 1);
        EXPECT_EQ(std::accumulate(h.counts.begin(), h.counts.end(), std::uint64_t{0}), xs.size());
    }
}

TEST(Metrics, SkewnessOfSymmetricAndSkewedData) {
    const std::vector<double> sym{1, 2, 3, 4, 5};
    EXPECT_NEAR(skewness(sym), 0.0, 1e-15);
    const std::vector<double> right{0, 0, 0, 0, 10};
    EXPECT_GT(skewness(right), 1.0);
}

TEST(ParallelFor, EveryIndexOnce) {
    std::vector<std::atomic<int>> hits(10007);
    parallel_for(hits.size(), 8, [&](std::uint64_t i) { hits[i].fetch_add(1); });
    for (const auto& h : hits) ASSERT_EQ(h.load(), 1);
}

namespace {

std::vector<ReliabilityScenario> small_grid() {
    std::vector<ReliabilityScenario> out;
    for (std::int64_t t : {20, 25, 30}) out.push_back({GeoParams(15, 0.8), 20, 25, t, SystemSpec(2, 8)});
    return out;
}

}  // namespace

TEST(ReliabilityStudy, ThreadCountDoesNotChangeResults) {
    const auto grid = small_grid();
    const auto a = run_reliability_study(grid, {3000, 42, 1});
    const auto b = run_reliability_study(grid, {3000, 42, 8});
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (const auto& [key, s] : a[i].component.per_estimator) {
            EXPECT_EQ(s.mean, b[i].component.per_estimator.at(key).mean);
            EXPECT_EQ(s.mse, b[i].component.per_estimator.at(key).mse);
        }
        for (const auto& [key, e] : a[i].system.efficiencies) EXPECT_EQ(e, b[i].system.efficiencies.at(key));
    }
}

TEST(ReliabilityStudy, TrueValuesAndMleMean) {
    const std::vector<ReliabilityScenario> grid{{GeoParams(15, 0.8), 20, 25, 25, SystemSpec(2, 8)}};
    const auto rows = run_reliability_study(grid, {10000, 42, 0});
    EXPECT_NEAR(rows[0].component.true_value, 0.10737, 1e-5);
    EXPECT_NEAR(rows[0].system.true_value, 0.20909, 1e-5);
    EXPECT_NEAR(rows[0].component.per_estimator.at("mle").mean, 0.10622, 0.01);
    EXPECT_TRUE(rows[0].component.efficiencies.contains(kCompleteVsCensored));
    EXPECT_TRUE(rows[0].component.efficiencies.contains(kUeVsMle));
    EXPECT_TRUE(rows[0].component.efficiencies.contains(kUeVsNaive));
}

TEST(ReliabilityStudy, SingleReplication) {
    const auto grid = small_grid();
    const auto rows = run_reliability_study(grid, {1, 9, 1});
    for (const auto& row : rows) {
        const auto& ue = row.component.per_estimator.at("ue");
        EXPECT_NEAR(ue.mse, (ue.mean - row.component.true_value) * (ue.mean - row.component.true_value), 1e-15);
    }
}

TEST(ReliabilityStudy, SystemUeAbsentWhenUndefined) {
    const std::vector<ReliabilityScenario> grid{{GeoParams(15, 0.8), 5, 25, 25, SystemSpec(2, 8)}};
    const auto rows = run_reliability_study(grid, {50, 1, 1});
    EXPECT_FALSE(rows[0].system.per_estimator.contains("ue"));
    EXPECT_TRUE(rows[0].component.per_estimator.contains("ue"));
}

TEST(CiStudy, SingleReplicationCoverageIsBinary) {
    const std::vector<CiScenario> grid{{GeoParams(15, 0.8), 20, 25}};
    const auto rows = run_ci_study(grid, {1, 3, 1});
    for (double c : {rows[0].ue.coverage, rows[0].mle.coverage}) EXPECT_TRUE(c == 0.0 || c == 1.0);
}

TEST(CiStudy, UeMeanNearTruthAtFigureConfig) {
    const std::vector<CiScenario> grid{{GeoParams(15, 0.96), 20, 25}};
    const auto rows = run_ci_study(grid, {10000, 42, 0});
    const double se = std::sqrt(rows[0].ue.variance / 10000);
    EXPECT_NEAR(rows[0].ue.mean, 0.664832, 3 * se);
    EXPECT_LE(rows[0].ue.lcl, rows[0].ue.ucl);
    EXPECT_GE(rows[0].ue.lcl, 0.0);
    EXPECT_LE(rows[0].ue.ucl, 1.0);
}

// Leave-one-out over both samples, written out by hand for a mean-difference statistic.
TEST(Jackknife, MatchesHandComputation) {
    const std::vector<std::int64_t> x{1, 4, 2}, y{3, 3, 8, 5};
    auto stat = [](CompleteSample a, CompleteSample b) {
        return std::accumulate(a.begin(), a.end(), 0.0) / a.size() - std::accumulate(b.begin(), b.end(), 0.0) / b.size();
    };
    auto loo = [&](const std::vector<std::int64_t>& s, std::size_t skip) {
        std::vector<std::int64_t> out;
        for (std::size_t i = 0; i < s.size(); ++i)
            if (i != skip) out.push_back(s[i]);
        return out;
    };
    auto piece = [](const std::vector<double>& v) {
        const double m = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
        double ss = 0.0;
        for (double e : v) ss += (e - m) * (e - m);
        return (v.size() - 1.0) / v.size() * ss;
    };
    std::vector<double> tx, ty;
    for (std::size_t i = 0; i < x.size(); ++i) tx.push_back(stat(loo(x, i), y));
    for (std::size_t j = 0; j < y.size(); ++j) ty.push_back(stat(x, loo(y, j)));
    EXPECT_NEAR(jackknife_variance(x, y, stat), piece(tx) + piece(ty), 1e-12);
}

TEST(ZeroCovariance, RejectsBadCoefficients) {
    ZeroCovConfig config;
    config.columns = {{GeoParams(15, 0.8), 25}};
    config.coefficients = {{1, 0, 0, 0, 0, 0, 0, 0, 0, 0}};
    EXPECT_THROW(run_zero_covariance_study(config, {5, 1, 1}), std::invalid_argument);
    config.coefficients = {{1, -1}};
    EXPECT_THROW(run_zero_covariance_study(config, {5, 1, 1}), std::invalid_argument);
    config.coefficients = {{+1, -1, +1, -1, +1, -1, +1, -1, +1, -1}};
    EXPECT_NO_THROW(run_zero_covariance_study(config, {5, 1, 1}));
}

TEST(ZeroCovariance, AllZeroVectorGivesZeroCovariance) {
    ZeroCovConfig config;
    config.columns = {{GeoParams(15, 0.8), 20}, {GeoParams(15, 0.8), 25}};
    config.coefficients = {std::vector<std::int64_t>(10, 0)};
    const auto table = run_zero_covariance_study(config, {20, 1, 2});
    for (const auto& cell : table.cells[0]) {
        EXPECT_EQ(cell.mean_covariance, 0.0);
        EXPECT_FALSE(cell.flagged);
    }
    ASSERT_EQ(table.reliability.size(), 2u);
    EXPECT_NEAR(table.reliability[1], 0.10737, 1e-5);
}

TEST(CensoringEfficiency, LargeCensoringApproachesHundred) {
    CensoringEfficiencyConfig config{{GeoParams(10, 0.7), GeoParams(5, 0.8)}, 10, 10, {200}, {200}};
    const auto table = run_censoring_efficiency_study(config, {1000, 42, 0});
    EXPECT_NEAR(table.cells[0][0].efficiency, 100.0, 15.0);
    EXPECT_NEAR(table.true_value, stress_strength(config.model), 1e-15);
}

TEST(CensoringEfficiency, SingleReplicationIsRatioOfSquaredErrors) {
    CensoringEfficiencyConfig config{{GeoParams(10, 0.7), GeoParams(5, 0.8)}, 10, 10, {15}, {20}};
    const auto table = run_censoring_efficiency_study(config, {1, 5, 1});
    const auto& cell = table.cells[0][0];
    if (cell.excluded == 0) EXPECT_NEAR(cell.efficiency, 100 * cell.mse_censored / cell.mse_complete, 1e-9);
}

TEST(StressMse, TrueValues) {
    StressMseConfig config;
    config.theta1 = config.theta2 = 0.5;
    config.r1_grid = {5, 20};
    config.r2_grid = {5};
    const auto table = run_stress_mse_study(config, {10, 1, 1});
    EXPECT_NEAR(table.cells[0][1].true_value, 2.03450e-5, 1e-10);
    EXPECT_NEAR(table.cells[0][0].true_value, 1 / 1.5, 1e-15);
}

TEST(PairedDraws, UeNeverMoreVariableThanNaive) {
    const auto draws = reliability_paired_draws(GeoParams(15, 0.8), 20, 25, {4000, 42, 0});
    const auto ue = summarize(draws.ue, 0.0), naive = summarize(draws.naive, 0.0);
    EXPECT_LT(ue.variance, naive.variance);
}
