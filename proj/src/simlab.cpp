#include "georel/simlab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include "georel/error.hpp"

namespace georel::simlab {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kZ975 = 1.959963984540054;

void check_control(const RunControl& control) {
    if (control.reps < 1) throw std::invalid_argument("reps must be >= 1");
}

std::vector<std::int64_t> draw_sample(const GeoParams& model, std::int64_t n, Stream stream) {
    return sample(model, static_cast<std::size_t>(n), stream);
}

}  // namespace

void KahanSum::add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
        compensation_ += (sum_ - t) + v;
    else
        compensation_ += (v - t) + sum_;
    sum_ = t;
}

double mean(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("mean: empty input");
    KahanSum acc;
    for (double v : values) acc.add(v);
    return acc.value() / static_cast<double>(values.size());
}

double mse(std::span<const double> values, double truth) {
    if (values.empty()) throw std::invalid_argument("mse: empty input");
    KahanSum acc;
    for (double v : values) acc.add((v - truth) * (v - truth));
    return acc.value() / static_cast<double>(values.size());
}

double pre_of(double mse_target, double mse_baseline) {
    if (mse_target == 0.0)
        return mse_baseline == 0.0 ? 100.0 : std::numeric_limits<double>::infinity();
    return 100.0 * mse_baseline / mse_target;
}

Histogram histogram(std::span<const double> values, std::size_t bins) {
    if (values.empty()) throw std::invalid_argument("histogram: empty input");
    if (bins == 0) throw std::invalid_argument("histogram: bins must be >= 1");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = std::max(0.0, *lo_it);
    const double hi = std::min(1.0, *hi_it);
    const double width = hi > lo ? (hi - lo) / static_cast<double>(bins) : 0.0;

    Histogram out;
    out.edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) out.edges[i] = lo + width * static_cast<double>(i);
    out.edges.back() = std::max(hi, lo);
    out.counts.assign(bins, 0);
    for (double v : values) {
        std::size_t bin = 0;
        if (width > 0.0) {
            const double pos = (v - lo) / width;
            bin = pos <= 0.0 ? 0 : std::min(bins - 1, static_cast<std::size_t>(pos));
        }
        ++out.counts[bin];
    }
    return out;
}

double skewness(std::span<const double> values) {
    const double mu = mean(values);
    KahanSum m2, m3;
    for (double v : values) {
        const double d = v - mu;
        m2.add(d * d);
        m3.add(d * d * d);
    }
    const double n = static_cast<double>(values.size());
    const double var = m2.value() / n;
    if (var == 0.0) return 0.0;
    return (m3.value() / n) / std::pow(var, 1.5);
}

EstimatorSummary summarize(std::span<const double> estimates, double truth) {
    EstimatorSummary out;
    KahanSum sum;
    for (double v : estimates) {
        if (std::isnan(v)) continue;
        sum.add(v);
        ++out.count;
    }
    if (out.count == 0) {
        out.mean = out.mse = out.variance = out.bias = kNaN;
        return out;
    }
    const double n = static_cast<double>(out.count);
    out.mean = sum.value() / n;
    KahanSum var, sq;
    for (double v : estimates) {
        if (std::isnan(v)) continue;
        var.add((v - out.mean) * (v - out.mean));
        sq.add((v - truth) * (v - truth));
    }
    out.variance = var.value() / n;
    out.mse = sq.value() / n;
    out.bias = out.mean - truth;
    return out;
}

void parallel_for(std::uint64_t count, unsigned threads, const std::function<void(std::uint64_t)>& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const std::uint64_t workers = std::min<std::uint64_t>(threads, count);
    if (workers <= 1) {
        for (std::uint64_t i = 0; i < count; ++i) body(i);
        return;
    }
    constexpr std::uint64_t kChunk = 64;
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        try {
            while (!failed.load(std::memory_order_relaxed)) {
                const std::uint64_t begin = next.fetch_add(kChunk);
                if (begin >= count) break;
                const std::uint64_t end = std::min(count, begin + kChunk);
                for (std::uint64_t i = begin; i < end; ++i) body(i);
            }
        } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

unsigned threads_from_env() {
    const char* raw = std::getenv("GEOREL_THREADS");
    if (raw == nullptr || *raw == '\0') return 0;
    char* end = nullptr;
    const long value = std::strtol(raw, &end, 10);
    if (*end != '\0' || value < 0) throw std::invalid_argument("GEOREL_THREADS must be a nonnegative integer");
    return static_cast<unsigned>(value);
}

// ---------------------------------------------------------------------------

std::vector<ReliabilityRow> run_reliability_study(std::span<const ReliabilityScenario> scenarios,
                                                  const RunControl& control) {
    check_control(control);
    const auto reps = control.reps;
    std::vector<ReliabilityRow> rows;
    rows.reserve(scenarios.size());

    for (const auto& sc : scenarios) {
        if (sc.n < 1) throw std::invalid_argument("reliability study: n must be >= 1");
        const bool system_ue = sc.spec.m() >= 2 && sc.spec.m() < sc.n;
        std::vector<double> mle(reps), cens(reps), ue(reps), naive(reps);
        std::vector<double> s_mle(reps), s_cens(reps), s_ue(reps, kNaN);

        parallel_for(reps, control.threads, [&](std::uint64_t i) {
            const auto x = draw_sample(sc.model, sc.n, Stream(control.seed, i, StreamRole::sample));
            const auto stats = suff_stats(x);
            mle[i] = mle_reliability(stats, sc.t);
            s_mle[i] = mle_system_reliability(stats, sc.t, sc.spec);
            ue[i] = ue_reliability(stats, sc.t);
            if (system_ue) s_ue[i] = ue_system_reliability(stats, sc.t, sc.spec);
            naive[i] = naive_unbiased_reliability(x, sc.t);
            const auto censored = CensoredSample::from_complete(x, sc.c);
            if (censored.p() == 0) {
                cens[i] = s_cens[i] = kNaN;
            } else {
                const auto cstats = censored_stats(censored);
                cens[i] = mle_reliability_censored(cstats, sc.t);
                s_cens[i] = mle_system_reliability_censored(cstats, sc.t, sc.spec);
            }
        });

        ReliabilityRow row{sc, {}, {}, 0};
        row.censored_excluded = static_cast<std::uint64_t>(std::count_if(
            cens.begin(), cens.end(), [](double v) { return std::isnan(v); }));

        const double truth = reliability(sc.model, sc.t);
        auto& comp = row.component;
        comp.true_value = truth;
        comp.per_estimator["mle"] = summarize(mle, truth);
        comp.per_estimator["mle-censored"] = summarize(cens, truth);
        comp.per_estimator["ue"] = summarize(ue, truth);
        comp.per_estimator["naive"] = summarize(naive, truth);
        comp.efficiencies[kCompleteVsCensored] =
            pre_of(comp.per_estimator["mle"].mse, comp.per_estimator["mle-censored"].mse);
        comp.efficiencies[kUeVsMle] = pre_of(comp.per_estimator["ue"].mse, comp.per_estimator["mle"].mse);
        comp.efficiencies[kUeVsNaive] = pre_of(comp.per_estimator["ue"].mse, comp.per_estimator["naive"].mse);

        const double s_truth = system_reliability(truth, sc.spec);
        auto& sys = row.system;
        sys.true_value = s_truth;
        sys.per_estimator["mle"] = summarize(s_mle, s_truth);
        sys.per_estimator["mle-censored"] = summarize(s_cens, s_truth);
        sys.efficiencies[kCompleteVsCensored] =
            pre_of(sys.per_estimator["mle"].mse, sys.per_estimator["mle-censored"].mse);
        if (system_ue) {
            sys.per_estimator["ue"] = summarize(s_ue, s_truth);
            sys.efficiencies[kUeVsMle] = pre_of(sys.per_estimator["ue"].mse, sys.per_estimator["mle"].mse);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------

namespace {

struct IntervalDraw {
    double estimate;
    double lcl;
    double ucl;
};

IntervalDraw wald(double estimate, double variance) {
    const double half = kZ975 * std::sqrt(std::max(variance, 0.0));
    return {estimate, estimate - half, estimate + half};
}

CoverageRow aggregate_coverage(std::span<const IntervalDraw> draws, double truth) {
    std::vector<double> estimates(draws.size());
    std::transform(draws.begin(), draws.end(), estimates.begin(), [](const auto& d) { return d.estimate; });
    const auto summary = summarize(estimates, truth);
    CoverageRow row;
    row.true_value = truth;
    row.mean = summary.mean;
    row.variance = summary.variance;
    row.mse = summary.mse;
    KahanSum lcl, ucl;
    std::uint64_t covered = 0;
    for (const auto& d : draws) {
        lcl.add(std::clamp(d.lcl, 0.0, 1.0));
        ucl.add(std::clamp(d.ucl, 0.0, 1.0));
        covered += (d.lcl <= truth && truth <= d.ucl) ? 1 : 0;
    }
    const double n = static_cast<double>(draws.size());
    row.lcl = lcl.value() / n;
    row.ucl = ucl.value() / n;
    row.coverage = static_cast<double>(covered) / n;
    return row;
}

}  // namespace

std::vector<CiRow> run_ci_study(std::span<const CiScenario> scenarios, const RunControl& control) {
    check_control(control);
    std::vector<CiRow> rows;
    for (const auto& sc : scenarios) {
        if (sc.n < 1) throw std::invalid_argument("ci study: n must be >= 1");
        std::vector<IntervalDraw> ue(control.reps), mle(control.reps);
        const double two_n = 2.0 * static_cast<double>(sc.n);
        parallel_for(control.reps, control.threads, [&](std::uint64_t i) {
            const auto x = draw_sample(sc.model, sc.n, Stream(control.seed, i, StreamRole::sample));
            const auto stats = suff_stats(x);
            const double u = ue_reliability(stats, sc.t);
            const double m = mle_reliability(stats, sc.t);
            ue[i] = wald(u, u * (1.0 - u) / two_n);
            mle[i] = wald(m, m * (1.0 - m) / two_n);
        });
        const double truth = reliability(sc.model, sc.t);
        rows.push_back({sc, aggregate_coverage(ue, truth), aggregate_coverage(mle, truth)});
    }
    return rows;
}

double jackknife_variance(CompleteSample x, CompleteSample y,
                          const std::function<double(CompleteSample, CompleteSample)>& estimator) {
    if (x.size() < 2 || y.size() < 2) throw std::invalid_argument("jackknife_variance: need n1, n2 >= 2");
    auto one_side = [&](CompleteSample held, bool left) {
        std::vector<std::int64_t> reduced(held.size() - 1);
        std::vector<double> values(held.size());
        for (std::size_t i = 0; i < held.size(); ++i) {
            std::copy(held.begin(), held.begin() + static_cast<std::ptrdiff_t>(i), reduced.begin());
            std::copy(held.begin() + static_cast<std::ptrdiff_t>(i) + 1, held.end(),
                      reduced.begin() + static_cast<std::ptrdiff_t>(i));
            values[i] = left ? estimator(reduced, y) : estimator(x, reduced);
        }
        const double mu = mean(values);
        KahanSum acc;
        for (double v : values) acc.add((v - mu) * (v - mu));
        const double n = static_cast<double>(held.size());
        return (n - 1.0) / n * acc.value();
    };
    return one_side(x, true) + one_side(y, false);
}

std::vector<StressCiRow> run_stress_ci_study(std::span<const StressCiScenario> scenarios,
                                             const RunControl& control) {
    check_control(control);
    auto ue_fn = [](CompleteSample a, CompleteSample b) { return ue_stress_strength(suff_stats(a), suff_stats(b)); };
    auto mle_fn = [](CompleteSample a, CompleteSample b) {
        return mle_stress_strength(suff_stats(a), suff_stats(b));
    };
    std::vector<StressCiRow> rows;
    for (const auto& sc : scenarios) {
        std::vector<IntervalDraw> ue(control.reps), mle(control.reps);
        parallel_for(control.reps, control.threads, [&](std::uint64_t i) {
            const auto x = draw_sample(sc.model.stress, sc.n1, Stream(control.seed, i, StreamRole::stress));
            const auto y = draw_sample(sc.model.strength, sc.n2, Stream(control.seed, i, StreamRole::strength));
            ue[i] = wald(ue_fn(x, y), jackknife_variance(x, y, ue_fn));
            mle[i] = wald(mle_fn(x, y), jackknife_variance(x, y, mle_fn));
        });
        const double truth = stress_strength(sc.model);
        rows.push_back({sc, aggregate_coverage(ue, truth), aggregate_coverage(mle, truth)});
    }
    return rows;
}

// ---------------------------------------------------------------------------

namespace {

// Running first and second moments of a pair, mergeable in a fixed order.
struct PairMoments {
    double count = 0.0;
    double mean_u = 0.0;
    double mean_r = 0.0;
    double m2_u = 0.0;
    double m2_r = 0.0;
    double c_ur = 0.0;

    void add(double u, double r) {
        count += 1.0;
        const double du = u - mean_u;
        mean_u += du / count;
        const double dr = r - mean_r;
        mean_r += dr / count;
        m2_u += du * (u - mean_u);
        m2_r += dr * (r - mean_r);
        c_ur += du * (r - mean_r);
    }

    void merge(const PairMoments& o) {
        if (o.count == 0.0) return;
        const double total = count + o.count;
        const double du = o.mean_u - mean_u;
        const double dr = o.mean_r - mean_r;
        const double w = count * o.count / total;
        m2_u += o.m2_u + du * du * w;
        m2_r += o.m2_r + dr * dr * w;
        c_ur += o.c_ur + du * dr * w;
        mean_u += du * o.count / total;
        mean_r += dr * o.count / total;
        count = total;
    }

    double covariance() const { return count > 1.0 ? c_ur / (count - 1.0) : 0.0; }
};

}  // namespace

ZeroCovTable run_zero_covariance_study(const ZeroCovConfig& config, const RunControl& control) {
    check_control(control);
    if (config.n < 2) throw std::invalid_argument("zero-covariance study: n must be >= 2");
    if (config.batch_size < 2) throw std::invalid_argument("zero-covariance study: batch_size must be >= 2");
    for (const auto& c : config.coefficients) {
        if (static_cast<std::int64_t>(c.size()) != config.n)
            throw std::invalid_argument("zero-covariance study: coefficient vector length must equal n");
        if (std::accumulate(c.begin(), c.end(), std::int64_t{0}) != 0)
            throw std::invalid_argument("zero-covariance study: coefficients must sum to 0");
    }

    const std::size_t sets = config.coefficients.size();
    const std::size_t cols = config.columns.size();
    const std::uint64_t batches = control.reps;
    // moments[batch][set * cols + col]
    std::vector<std::vector<PairMoments>> moments(batches, std::vector<PairMoments>(sets * cols));

    parallel_for(batches, control.threads, [&](std::uint64_t b) {
        auto& local = moments[b];
        for (std::uint64_t j = 0; j < config.batch_size; ++j) {
            const std::uint64_t rep = b * config.batch_size + j;
            for (std::size_t col = 0; col < cols; ++col) {
                const auto& column = config.columns[col];
                const auto x = draw_sample(column.model, config.n, Stream(control.seed, rep, StreamRole::sample));
                const double r = 1000.0 * ue_reliability(suff_stats(x), column.t);
                for (std::size_t s = 0; s < sets; ++s) {
                    std::int64_t u0 = 0;
                    for (std::size_t k = 0; k < x.size(); ++k) u0 += config.coefficients[s][k] * x[k];
                    local[s * cols + col].add(1000.0 * static_cast<double>(u0), r);
                }
            }
        }
    });

    ZeroCovTable out;
    for (const auto& column : config.columns) out.reliability.push_back(reliability(column.model, column.t));
    out.cells.assign(sets, std::vector<ZeroCovCell>(cols));
    for (std::size_t s = 0; s < sets; ++s) {
        for (std::size_t col = 0; col < cols; ++col) {
            const std::size_t k = s * cols + col;
            KahanSum cov;
            PairMoments pooled;
            for (std::uint64_t b = 0; b < batches; ++b) {
                cov.add(moments[b][k].covariance());
                pooled.merge(moments[b][k]);
            }
            auto& cell = out.cells[s][col];
            cell.mean_covariance = cov.value() / static_cast<double>(batches);
            const double denom = std::sqrt(pooled.m2_u * pooled.m2_r);
            cell.correlation = denom > 0.0 ? pooled.c_ur / denom : 0.0;
            const double n_eff = pooled.count - 3.0;
            cell.z = n_eff > 0.0 ? std::atanh(std::clamp(cell.correlation, -0.999999999999, 0.999999999999)) *
                                       std::sqrt(n_eff)
                                 : 0.0;
            cell.p_value = std::erfc(std::abs(cell.z) / std::sqrt(2.0));
            cell.flagged = std::abs(cell.z) > kZ975;
            out.any_flagged = out.any_flagged || cell.flagged;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

CensoringEfficiencyTable run_censoring_efficiency_study(const CensoringEfficiencyConfig& config,
                                                        const RunControl& control) {
    check_control(control);
    if (config.c1_grid.empty() || config.c2_grid.empty())
        throw std::invalid_argument("censoring study: empty censoring grid");
    const std::size_t rows = config.c1_grid.size();
    const std::size_t cols = config.c2_grid.size();
    const auto reps = control.reps;
    std::vector<double> complete(reps);
    std::vector<std::vector<double>> censored(rows * cols, std::vector<double>(reps));

    parallel_for(reps, control.threads, [&](std::uint64_t i) {
        const auto x = draw_sample(config.model.stress, config.n1, Stream(control.seed, i, StreamRole::stress));
        const auto y = draw_sample(config.model.strength, config.n2, Stream(control.seed, i, StreamRole::strength));
        complete[i] = mle_stress_strength(suff_stats(x), suff_stats(y));
        for (std::size_t a = 0; a < rows; ++a) {
            const auto cx = CensoredSample::from_complete(x, config.c1_grid[a]);
            for (std::size_t b = 0; b < cols; ++b) {
                const auto cy = CensoredSample::from_complete(y, config.c2_grid[b]);
                censored[a * cols + b][i] = (cx.p() == 0 || cy.p() == 0)
                                                ? kNaN
                                                : mle_stress_strength_censored(censored_stats(cx), censored_stats(cy));
            }
        }
    });

    CensoringEfficiencyTable out;
    out.true_value = stress_strength(config.model);
    out.cells.assign(rows, std::vector<CensoringCell>(cols));
    for (std::size_t a = 0; a < rows; ++a) {
        for (std::size_t b = 0; b < cols; ++b) {
            const auto& cens = censored[a * cols + b];
            // Compare on the replications where the censored MLE exists.
            std::vector<double> kept_complete, kept_censored;
            for (std::uint64_t i = 0; i < reps; ++i) {
                if (std::isnan(cens[i])) continue;
                kept_complete.push_back(complete[i]);
                kept_censored.push_back(cens[i]);
            }
            auto& cell = out.cells[a][b];
            cell.c1 = config.c1_grid[a];
            cell.c2 = config.c2_grid[b];
            cell.excluded = reps - kept_censored.size();
            if (kept_censored.empty()) {
                cell.mse_complete = cell.mse_censored = cell.efficiency = kNaN;
                continue;
            }
            cell.mse_complete = mse(kept_complete, out.true_value);
            cell.mse_censored = mse(kept_censored, out.true_value);
            cell.efficiency = pre_of(cell.mse_complete, cell.mse_censored);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

StressMseTable run_stress_mse_study(const StressMseConfig& config, const RunControl& control) {
    check_control(control);
    StressMseTable out;
    out.cells.assign(config.r2_grid.size(), std::vector<StressMseCell>(config.r1_grid.size()));
    for (std::size_t a = 0; a < config.r2_grid.size(); ++a) {
        for (std::size_t b = 0; b < config.r1_grid.size(); ++b) {
            const StressStrengthParams model{GeoParams(config.r1_grid[b], config.theta1),
                                             GeoParams(config.r2_grid[a], config.theta2)};
            std::vector<double> mle(control.reps), ue(control.reps);
            parallel_for(control.reps, control.threads, [&](std::uint64_t i) {
                const auto x = draw_sample(model.stress, config.n1, Stream(control.seed, i, StreamRole::stress));
                const auto y = draw_sample(model.strength, config.n2, Stream(control.seed, i, StreamRole::strength));
                const auto sx = suff_stats(x);
                const auto sy = suff_stats(y);
                mle[i] = mle_stress_strength(sx, sy);
                ue[i] = ue_stress_strength(sx, sy, config.variant);
            });
            auto& cell = out.cells[a][b];
            cell.r1 = model.stress.r();
            cell.r2 = model.strength.r();
            cell.true_value = stress_strength(model);
            const auto m = summarize(mle, cell.true_value);
            const auto u = summarize(ue, cell.true_value);
            cell.mean_mle = m.mean;
            cell.mean_ue = u.mean;
            cell.mse_mle = m.mse;
            cell.mse_ue = u.mse;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

std::vector<double> ue_reliability_draws(const GeoParams& model, std::int64_t n, std::int64_t t,
                                         const RunControl& control) {
    check_control(control);
    std::vector<double> out(control.reps);
    parallel_for(control.reps, control.threads, [&](std::uint64_t i) {
        out[i] = ue_reliability(suff_stats(draw_sample(model, n, Stream(control.seed, i, StreamRole::sample))), t);
    });
    return out;
}

PairedDraws reliability_paired_draws(const GeoParams& model, std::int64_t n, std::int64_t t,
                                     const RunControl& control) {
    check_control(control);
    PairedDraws out{std::vector<double>(control.reps), std::vector<double>(control.reps)};
    parallel_for(control.reps, control.threads, [&](std::uint64_t i) {
        const auto x = draw_sample(model, n, Stream(control.seed, i, StreamRole::sample));
        out.ue[i] = ue_reliability(suff_stats(x), t);
        out.naive[i] = naive_unbiased_reliability(x, t);
    });
    return out;
}

PairedDraws stress_paired_draws(const StressStrengthParams& model, std::int64_t n1, std::int64_t n2,
                                const RunControl& control) {
    check_control(control);
    PairedDraws out{std::vector<double>(control.reps), std::vector<double>(control.reps)};
    parallel_for(control.reps, control.threads, [&](std::uint64_t i) {
        const auto x = draw_sample(model.stress, n1, Stream(control.seed, i, StreamRole::stress));
        const auto y = draw_sample(model.strength, n2, Stream(control.seed, i, StreamRole::strength));
        out.ue[i] = ue_stress_strength(suff_stats(x), suff_stats(y));
        out.naive[i] = naive_unbiased_stress_strength(x, y);
    });
    return out;
}

}  // namespace georel::simlab
