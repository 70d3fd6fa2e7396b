#include "georel/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "georel/error.hpp"

namespace georel {

CensoredSample::CensoredSample(std::int64_t c, std::vector<std::int64_t> observed, std::int64_t n)
    : c_(c), observed_(std::move(observed)), n_(n) {
    if (static_cast<std::int64_t>(observed_.size()) > n_)
        throw std::invalid_argument("CensoredSample: more failures than units on test");
    for (auto x : observed_) {
        if (x > c_) throw std::invalid_argument("CensoredSample: failure " + std::to_string(x) + " beyond c");
        if (x < 0) throw std::invalid_argument("CensoredSample: negative failure time");
    }
}

CensoredSample CensoredSample::from_complete(CompleteSample sample, std::int64_t c) {
    std::vector<std::int64_t> kept;
    std::copy_if(sample.begin(), sample.end(), std::back_inserter(kept), [c](auto x) { return x <= c; });
    return CensoredSample(c, std::move(kept), static_cast<std::int64_t>(sample.size()));
}

std::string_view to_string(Method method) noexcept {
    switch (method) {
        case Method::mle: return "mle";
        case Method::mle_censored: return "mle-censored";
        case Method::ue: return "ue";
        case Method::naive: return "naive";
        case Method::as_published: return "as-published";
        case Method::exact_rb: return "exact-rb";
    }
    return "?";
}

std::string_view to_string(Target target) noexcept {
    switch (target) {
        case Target::reliability: return "rt";
        case Target::system_reliability: return "rs";
        case Target::stress_strength: return "r";
    }
    return "?";
}

Method parse_method(std::string_view text) {
    for (auto m : {Method::mle, Method::mle_censored, Method::ue, Method::naive, Method::as_published,
                   Method::exact_rb})
        if (text == to_string(m)) return m;
    throw std::invalid_argument("unknown method '" + std::string(text) + "'");
}

Target parse_target(std::string_view text) {
    for (auto t : {Target::reliability, Target::system_reliability, Target::stress_strength})
        if (text == to_string(t)) return t;
    throw std::invalid_argument("unknown target '" + std::string(text) + "'");
}

UeVariant parse_ue_variant(std::string_view text) {
    if (text == "exact-rb") return UeVariant::exact_rb;
    if (text == "as-published") return UeVariant::as_published;
    throw std::invalid_argument("unknown stress-strength UE variant '" + std::string(text) + "'");
}

SuffStats suff_stats(CompleteSample sample) {
    if (sample.empty()) throw std::invalid_argument("suff_stats: empty sample");
    const std::int64_t xmin = *std::min_element(sample.begin(), sample.end());
    std::int64_t s = 0;
    for (auto x : sample) s += x - xmin;
    return SuffStats(xmin, s, static_cast<std::int64_t>(sample.size()));
}

CensoredStats censored_stats(const CensoredSample& sample) {
    const auto& obs = sample.observed();
    if (obs.empty()) throw DomainError("no failures observed (p = 0): MLE of r undefined");
    const std::int64_t xmin = *std::min_element(obs.begin(), obs.end());
    std::int64_t s = 0;
    for (auto x : obs) s += x - xmin;
    s += (sample.n() - sample.p()) * ((sample.c() + 1) - xmin);
    return CensoredStats{xmin, sample.p(), s};
}

MleParams mle_params(const SuffStats& stats) noexcept {
    return {stats.xmin(), static_cast<double>(stats.s()) / static_cast<double>(stats.n() + stats.s())};
}

double mle_reliability(const SuffStats& stats, std::int64_t t) noexcept {
    if (t <= stats.xmin()) return 1.0;
    return power_survival(mle_params(stats).theta, t - stats.xmin());
}

double mle_system_reliability(const SuffStats& stats, std::int64_t t, const SystemSpec& spec) {
    if (t <= stats.xmin()) return 1.0;
    return system_reliability(mle_reliability(stats, t), spec);
}

double mle_reliability_censored(const CensoredStats& cstats, std::int64_t t) noexcept {
    if (t <= cstats.xmin) return 1.0;
    const double theta = static_cast<double>(cstats.s_star) / static_cast<double>(cstats.p + cstats.s_star);
    return power_survival(theta, t - cstats.xmin);
}

double mle_system_reliability_censored(const CensoredStats& cstats, std::int64_t t, const SystemSpec& spec) {
    if (t <= cstats.xmin) return 1.0;
    return system_reliability(mle_reliability_censored(cstats, t), spec);
}

double ue_reliability(const SuffStats& stats, std::int64_t t, const ExactnessPolicy& policy) {
    // n = 1 and n = 2 fall out of the same conditional law: a point mass at
    // xmin, or half at xmin and half at xmin + S.
    return conditional_survival(stats, t, policy);
}

double ue_system_reliability(const SuffStats& stats, std::int64_t t, const SystemSpec& spec,
                             const ExactnessPolicy& policy) {
    if (spec.m() < 2 || spec.m() >= stats.n())
        throw DomainError("ue_system_reliability: requires 2 <= m < n (m=" + std::to_string(spec.m()) +
                          ", n=" + std::to_string(stats.n()) + ")");
    if (t <= stats.xmin()) return 1.0;
    if (t > stats.xmin() + stats.s()) return 0.0;
    return system_reliability(ue_reliability(stats, t, policy), spec);
}

double naive_unbiased_reliability(CompleteSample sample, std::int64_t t) {
    if (sample.empty()) throw std::invalid_argument("naive_unbiased_reliability: empty sample");
    const auto hits = std::count_if(sample.begin(), sample.end(), [t](auto x) { return x >= t; });
    return static_cast<double>(hits) / static_cast<double>(sample.size());
}

namespace {

double plug_in_stress_strength(double n1, double s1, double n2, double s2, std::int64_t delta) noexcept {
    const double rho = (n1 * n2 + n1 * s2) / (n1 * n2 + n1 * s2 + n2 * s1);
    return stress_strength_branches(rho, s1 / (n1 + s1), s2 / (n2 + s2), delta);
}

}  // namespace

double mle_stress_strength(const SuffStats& x, const SuffStats& y) noexcept {
    return plug_in_stress_strength(static_cast<double>(x.n()), static_cast<double>(x.s()),
                                   static_cast<double>(y.n()), static_cast<double>(y.s()), x.xmin() - y.xmin());
}

double mle_stress_strength_censored(const CensoredStats& x, const CensoredStats& y) noexcept {
    return plug_in_stress_strength(static_cast<double>(x.p), static_cast<double>(x.s_star),
                                   static_cast<double>(y.p), static_cast<double>(y.s_star), x.xmin - y.xmin);
}

namespace {

double exact_rb_stress_strength(const SuffStats& x, const SuffStats& y) {
    // sum_x f(x | X) P(Y1 >= x | Y) over the common denominator
    // |A_X| * |A_Y|, so the estimate is one exact rational.
    BigInt total = 0;
    for (std::int64_t d = 0; d <= x.s(); ++d) {
        const BigInt g = conditional_survival_numerator(y, x.xmin() + d);
        if (g == 0) break;  // survival is nonincreasing in x
        total += conditional_pmf_numerator(x, x.xmin() + d) * g;
    }
    Rational out(total, tuple_count(x.n(), x.s()) * tuple_count(y.n(), y.s()));
    out.canonicalize();
    return out.get_d();
}

double as_published_stress_strength(const SuffStats& x, const SuffStats& y) {
    const std::int64_t xm = x.xmin();
    const std::int64_t ym = y.xmin();
    const std::int64_t w1 = xm + x.s();
    const std::int64_t w2 = ym + y.s();
    const double inv_n1 = 1.0 / static_cast<double>(x.n());
    auto f1 = [&](std::int64_t v) { return conditional_pmf(x, v); };
    auto f2 = [&](std::int64_t v) { return conditional_pmf(y, v); };
    auto double_sum = [&](std::int64_t from) {
        double total = 0.0;
        for (std::int64_t a = from; a <= std::min(w1, w2); ++a) {
            const double fa = f1(a);
            if (fa == 0.0) continue;
            for (std::int64_t b = a; b <= w2; ++b) total += fa * f2(b);
        }
        return total;
    };

    if (xm < ym) {
        double single = 0.0;
        for (std::int64_t a = xm + 1; a <= ym; ++a) single += f1(a);
        return inv_n1 + single + double_sum(ym);
    }
    if (xm == ym) return inv_n1 + double_sum(xm);
    double lead = 0.0;
    for (std::int64_t b = xm; b <= w2; ++b) lead += f2(b);
    return inv_n1 * lead + double_sum(xm + 1);
}

}  // namespace

double ue_stress_strength(const SuffStats& x, const SuffStats& y, UeVariant variant) {
    return variant == UeVariant::exact_rb ? exact_rb_stress_strength(x, y) : as_published_stress_strength(x, y);
}

double naive_unbiased_stress_strength(CompleteSample x, CompleteSample y, Comparison comparison) {
    if (x.empty() || y.empty()) throw std::invalid_argument("naive_unbiased_stress_strength: empty sample");
    std::int64_t hits = 0;
    for (auto a : x)
        for (auto b : y) hits += comparison == Comparison::less_equal ? (a <= b) : (a < b);
    return static_cast<double>(hits) / (static_cast<double>(x.size()) * static_cast<double>(y.size()));
}

}  // namespace georel
