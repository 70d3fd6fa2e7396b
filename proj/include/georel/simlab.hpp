#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "georel/estimators.hpp"
#include "georel/geomdist.hpp"

namespace georel::simlab {

/// Effort and reproducibility knobs shared by every study.
struct RunControl {
    std::uint64_t reps = 10000;
    std::uint64_t seed = 42;
    /// Worker threads; 0 picks hardware concurrency. Never affects results.
    unsigned threads = 0;
};

// ---------------------------------------------------------------------------
// Metrics

/// Compensated (Neumaier) running sum.
class KahanSum {
public:
    void add(double v) noexcept;
    double value() const noexcept { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

double mean(std::span<const double> values);
double mse(std::span<const double> values, double truth);

/// 100 * mse(baseline) / mse(target): below 100 means the target is worse.
double pre_of(double mse_target, double mse_baseline);

struct Histogram {
    std::vector<double> edges;  // bins + 1 edges
    std::vector<std::uint64_t> counts;
};

/// Equal-width bins over [max(0, min), min(1, max)] of the data.
Histogram histogram(std::span<const double> values, std::size_t bins);

/// Sample skewness g1 = m3 / m2^(3/2).
double skewness(std::span<const double> values);

struct EstimatorSummary {
    double mean = 0.0;
    double mse = 0.0;
    double variance = 0.0;  // population variance over replications
    double bias = 0.0;
    std::uint64_t count = 0;
};

/// Summarise per-replication estimates; NaN entries are skipped.
EstimatorSummary summarize(std::span<const double> estimates, double truth);

struct MetricRow {
    double true_value = 0.0;
    std::map<std::string, EstimatorSummary> per_estimator;
    std::map<std::string, double> efficiencies;
};

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index
/// runs exactly once; callers write results into slot i.
void parallel_for(std::uint64_t count, unsigned threads, const std::function<void(std::uint64_t)>& body);

/// Worker count from GEOREL_THREADS (unset or 0 = auto).
unsigned threads_from_env();

// ---------------------------------------------------------------------------
// R(t) and R_s(t) study: Tables 1-6

struct ReliabilityScenario {
    GeoParams model;
    std::int64_t n;
    std::int64_t c;
    std::int64_t t;
    SystemSpec spec;
};

struct ReliabilityRow {
    ReliabilityScenario scenario;
    MetricRow component;  // keys: mle, mle-censored, ue, naive
    MetricRow system;     // keys: mle, mle-censored, ue (ue absent unless 2 <= m < n)
    std::uint64_t censored_excluded = 0;
};

/// Efficiency labels used in MetricRow::efficiencies.
inline constexpr const char* kCompleteVsCensored = "complete-vs-censored";
inline constexpr const char* kUeVsMle = "ue-vs-mle";
inline constexpr const char* kUeVsNaive = "ue-vs-naive";

/// Every replication draws one complete sample and censors that same sample
/// at c. Replication i of every scenario uses the same stream, so rows share
/// common random numbers.
std::vector<ReliabilityRow> run_reliability_study(std::span<const ReliabilityScenario> scenarios,
                                                  const RunControl& control);

// ---------------------------------------------------------------------------
// Confidence intervals: Table 9 (R(t)) and Table 19 (R)

struct CoverageRow {
    double true_value = 0.0;
    double mean = 0.0;
    double variance = 0.0;
    double mse = 0.0;
    double lcl = 0.0;  // average of per-replication bounds, clipped to [0, 1]
    double ucl = 0.0;
    double coverage = 0.0;  // evaluated on unclipped intervals
};

struct CiScenario {
    GeoParams model;
    std::int64_t n;
    std::int64_t t;
};

struct CiRow {
    CiScenario scenario;
    CoverageRow ue;
    CoverageRow mle;
};

/// Wald intervals R_hat +- 1.96 sqrt(R_hat (1 - R_hat) / (2n)).
std::vector<CiRow> run_ci_study(std::span<const CiScenario> scenarios, const RunControl& control);

struct StressCiScenario {
    StressStrengthParams model;
    std::int64_t n1;
    std::int64_t n2;
};

struct StressCiRow {
    StressCiScenario scenario;
    CoverageRow ue;
    CoverageRow mle;
};

/// Wald intervals with two-sample leave-one-out jackknife variance.
std::vector<StressCiRow> run_stress_ci_study(std::span<const StressCiScenario> scenarios,
                                             const RunControl& control);

/// Two-sample jackknife variance of an estimator of R.
double jackknife_variance(CompleteSample x, CompleteSample y,
                          const std::function<double(CompleteSample, CompleteSample)>& estimator);

// ---------------------------------------------------------------------------
// Zero-covariance diagnostic: Tables 7-8

struct ZeroCovColumn {
    GeoParams model;
    std::int64_t t;
};

struct ZeroCovConfig {
    std::int64_t n = 10;
    std::vector<ZeroCovColumn> columns;
    std::vector<std::vector<std::int64_t>> coefficients;
    std::uint64_t batch_size = 100;
};

struct ZeroCovCell {
    double mean_covariance = 0.0;  // average over batches of cov(1000 U0, 1000 R_U)
    double correlation = 0.0;      // pooled over every draw
    double z = 0.0;                // Fisher z statistic for zero correlation
    double p_value = 1.0;
    bool flagged = false;          // |z| > 1.96
};

struct ZeroCovTable {
    std::vector<double> reliability;           // per column
    std::vector<std::vector<ZeroCovCell>> cells;  // [coefficient set][column]
    bool any_flagged = false;
};

/// Throws std::invalid_argument if a coefficient vector has the wrong
/// length or does not sum to 0. control.reps is the number of batches.
ZeroCovTable run_zero_covariance_study(const ZeroCovConfig& config, const RunControl& control);

// ---------------------------------------------------------------------------
// Stress-strength MLE under censoring: Tables 10-13

struct CensoringEfficiencyConfig {
    StressStrengthParams model;
    std::int64_t n1 = 10;
    std::int64_t n2 = 10;
    std::vector<std::int64_t> c1_grid;
    std::vector<std::int64_t> c2_grid;
};

struct CensoringCell {
    std::int64_t c1 = 0;
    std::int64_t c2 = 0;
    double efficiency = 0.0;  // 100 * MSE(censored MLE) / MSE(complete MLE)
    double mse_complete = 0.0;
    double mse_censored = 0.0;
    std::uint64_t excluded = 0;
};

struct CensoringEfficiencyTable {
    double true_value = 0.0;
    std::vector<std::vector<CensoringCell>> cells;  // [c1 index][c2 index]
};

CensoringEfficiencyTable run_censoring_efficiency_study(const CensoringEfficiencyConfig& config,
                                                        const RunControl& control);

// ---------------------------------------------------------------------------
// Stress-strength MLE vs UE: Tables 14-18

struct StressMseConfig {
    double theta1 = 0.5;
    double theta2 = 0.5;
    std::int64_t n1 = 10;
    std::int64_t n2 = 10;
    std::vector<std::int64_t> r1_grid;
    std::vector<std::int64_t> r2_grid;
    UeVariant variant = UeVariant::exact_rb;
};

struct StressMseCell {
    std::int64_t r1 = 0;
    std::int64_t r2 = 0;
    double true_value = 0.0;
    double mean_mle = 0.0;
    double mean_ue = 0.0;
    double mse_mle = 0.0;
    double mse_ue = 0.0;
};

struct StressMseTable {
    std::vector<std::vector<StressMseCell>> cells;  // [r2 index][r1 index]
};

StressMseTable run_stress_mse_study(const StressMseConfig& config, const RunControl& control);

// ---------------------------------------------------------------------------
// Replication-level helpers shared by the CLI and the acceptance suite

/// ue_reliability over reps seeded samples of size n (Figure 1 data).
std::vector<double> ue_reliability_draws(const GeoParams& model, std::int64_t n, std::int64_t t,
                                         const RunControl& control);

struct PairedDraws {
    std::vector<double> ue;
    std::vector<double> naive;
};

/// UE and naive indicator estimates of R(t) on the same samples.
PairedDraws reliability_paired_draws(const GeoParams& model, std::int64_t n, std::int64_t t,
                                     const RunControl& control);

/// exact-rb UE and naive (<=) estimates of R on the same sample pairs.
PairedDraws stress_paired_draws(const StressStrengthParams& model, std::int64_t n1, std::int64_t n2,
                                const RunControl& control);

}  // namespace georel::simlab
