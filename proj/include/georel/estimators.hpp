#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "georel/combinat.hpp"
#include "georel/geomdist.hpp"

namespace georel {

/// Complete samples are plain integer sequences; support against a declared
/// r is checked by whoever declares r.
using CompleteSample = std::span<const std::int64_t>;

/// Type-I censored sample: n units on test, failures observed up to cycle c.
class CensoredSample {
public:
    CensoredSample(std::int64_t c, std::vector<std::int64_t> observed, std::int64_t n);

    /// Censor a complete sample at c, keeping every value <= c.
    static CensoredSample from_complete(CompleteSample sample, std::int64_t c);

    std::int64_t c() const noexcept { return c_; }
    std::int64_t n() const noexcept { return n_; }
    std::int64_t p() const noexcept { return static_cast<std::int64_t>(observed_.size()); }
    const std::vector<std::int64_t>& observed() const noexcept { return observed_; }

private:
    std::int64_t c_;
    std::vector<std::int64_t> observed_;
    std::int64_t n_;
};

struct CensoredStats {
    std::int64_t xmin;
    std::int64_t p;
    /// sum_i (X(i) - xmin) + (n - p)((c + 1) - xmin)
    std::int64_t s_star;
};

enum class Method { mle, mle_censored, ue, naive, as_published, exact_rb };
enum class Target { reliability, system_reliability, stress_strength };

std::string_view to_string(Method method) noexcept;
std::string_view to_string(Target target) noexcept;
Method parse_method(std::string_view text);
Target parse_target(std::string_view text);

struct EstimateRecord {
    Method method;
    Target target;
    double value;
    std::optional<double> variance;
    std::optional<std::pair<double, double>> interval;
};

SuffStats suff_stats(CompleteSample sample);

/// Throws DomainError when no failure was observed.
CensoredStats censored_stats(const CensoredSample& sample);

struct MleParams {
    std::int64_t r;
    double theta;
};

MleParams mle_params(const SuffStats& stats) noexcept;

double mle_reliability(const SuffStats& stats, std::int64_t t) noexcept;
double mle_system_reliability(const SuffStats& stats, std::int64_t t, const SystemSpec& spec);
double mle_reliability_censored(const CensoredStats& cstats, std::int64_t t) noexcept;
double mle_system_reliability_censored(const CensoredStats& cstats, std::int64_t t, const SystemSpec& spec);

/// Rao-Blackwellised indicator I(X1 >= t).
double ue_reliability(const SuffStats& stats, std::int64_t t, const ExactnessPolicy& policy = {});

/// Binomial tail at ue_reliability; defined for 2 <= m < n, DomainError otherwise.
double ue_system_reliability(const SuffStats& stats, std::int64_t t, const SystemSpec& spec,
                             const ExactnessPolicy& policy = {});

double naive_unbiased_reliability(CompleteSample sample, std::int64_t t);

double mle_stress_strength(const SuffStats& x, const SuffStats& y) noexcept;
double mle_stress_strength_censored(const CensoredStats& x, const CensoredStats& y) noexcept;

enum class UeVariant { as_published, exact_rb };
UeVariant parse_ue_variant(std::string_view text);

/// exact_rb: E[I(X1 <= Y1) | X(1), S1, Y(1), S2], computed exactly.
/// as_published: the printed three-case display, including its leading
/// 1/n1 terms. It is not guaranteed to stay inside [0, 1].
double ue_stress_strength(const SuffStats& x, const SuffStats& y, UeVariant variant = UeVariant::exact_rb);

enum class Comparison { less_equal, less };

/// (1 / n1 n2) sum_i sum_j I(x_i <= y_j), or with < in strict mode.
double naive_unbiased_stress_strength(CompleteSample x, CompleteSample y,
                                      Comparison comparison = Comparison::less_equal);

}  // namespace georel
