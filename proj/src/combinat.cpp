#include "georel/combinat.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace georel {
namespace {

constexpr double kEnumerationLimit = 1e7;

// Zero for a < 0 as well: the ball-in-cell counts below hit C(-1, k).
BigInt count_binom(std::int64_t a, std::int64_t b) {
    if (a < 0 || b < 0 || b > a) return 0;
    BigInt out;
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(a), static_cast<unsigned long>(b));
    return out;
}

double log_binom(std::int64_t a, std::int64_t b) {
    if (a < 0 || b < 0 || b > a) return -std::numeric_limits<double>::infinity();
    return std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0);
}

// log(exp(big) - exp(small)) with small <= big.
double log_difference(double big, double small) {
    if (small == -std::numeric_limits<double>::infinity()) return big;
    return big + std::log(-std::expm1(small - big));
}

// Size of the conditioning set, as log.
double log_tuple_count(std::int64_t n, std::int64_t s) {
    return log_difference(log_binom(s + n - 1, n - 1), log_binom(s - 1, n - 1));
}

bool use_lgamma(const SuffStats& stats, const ExactnessPolicy& policy) {
    return stats.n() + stats.s() > policy.lgamma_threshold;
}

double to_double(const Rational& q) { return q.get_d(); }

}  // namespace

SuffStats::SuffStats(std::int64_t xmin, std::int64_t s, std::int64_t n) : xmin_(xmin), s_(s), n_(n) {
    if (n < 1) throw std::invalid_argument("SuffStats: n must be >= 1, got " + std::to_string(n));
    if (s < 0) throw std::invalid_argument("SuffStats: s must be >= 0, got " + std::to_string(s));
    if (n == 1 && s != 0) throw std::invalid_argument("SuffStats: n = 1 forces s = 0");
}

BigInt binom(std::int64_t a, std::int64_t b) {
    if (a < 0) throw std::invalid_argument("binom: a must be >= 0");
    return count_binom(a, b);
}

BigInt tuple_count(std::int64_t n, std::int64_t s) {
    return count_binom(s + n - 1, n - 1) - count_binom(s - 1, n - 1);
}

Rational conditional_pmf_exact(const SuffStats& stats, std::int64_t x) {
    const std::int64_t n = stats.n();
    const std::int64_t s = stats.s();
    const std::int64_t d = x - stats.xmin();
    if (d < 0 || d > s) return 0;

    if (n == 1) return d == 0 ? 1 : 0;
    if (n == 2) {
        if (s == 0) return 1;
        return (d == 0 || d == s) ? Rational(1, 2) : Rational(0);
    }

    Rational out;
    if (s < n) {
        out = Rational(count_binom(s - d + n - 2, s - d), count_binom(s + n - 1, s));
    } else {
        const BigInt denom = count_binom(s + n - 1, s) - count_binom(s - 1, n - 1);
        BigInt num;
        if (d == 0)
            num = count_binom(s + n - 2, s);
        else if (d <= s - (n - 1))
            num = count_binom(s - d + n - 2, s - d) - count_binom(s - d - 1, n - 2);
        else
            num = count_binom(s - d + n - 2, s - d);
        out = Rational(num, denom);
    }
    out.canonicalize();
    return out;
}

double conditional_pmf(const SuffStats& stats, std::int64_t x, const ExactnessPolicy& policy) {
    if (!use_lgamma(stats, policy)) return to_double(conditional_pmf_exact(stats, x));

    const std::int64_t n = stats.n();
    const std::int64_t s = stats.s();
    const std::int64_t d = x - stats.xmin();
    if (d < 0 || d > s) return 0.0;
    // n + s is large here, so n >= 3 or s is large with n = 2.
    if (n <= 2) return to_double(conditional_pmf_exact(stats, x));
    const double log_num = d == 0 ? log_binom(s + n - 2, n - 2)
                                  : log_difference(log_binom(s - d + n - 2, n - 2),
                                                   log_binom(s - d - 1, n - 2));
    return std::exp(log_num - log_tuple_count(n, s));
}

BigInt conditional_pmf_numerator(const SuffStats& stats, std::int64_t x) {
    const std::int64_t n = stats.n();
    const std::int64_t s = stats.s();
    const std::int64_t d = x - stats.xmin();
    if (d < 0 || d > s) return 0;
    if (n == 1) return 1;
    // Remaining n - 1 deviations sum to s - d; when d > 0 one of them must be zero.
    if (d == 0) return count_binom(s + n - 2, n - 2);
    return count_binom(s - d + n - 2, n - 2) - count_binom(s - d - 1, n - 2);
}

BigInt conditional_survival_numerator(const SuffStats& stats, std::int64_t t) {
    const std::int64_t n = stats.n();
    const std::int64_t s = stats.s();
    if (t <= stats.xmin()) return tuple_count(n, s);
    const std::int64_t d0 = t - stats.xmin();
    if (d0 > s) return 0;
    // Summing the pmf numerators over d >= d0 telescopes (hockey-stick identity).
    return count_binom(s - d0 + n - 1, n - 1) - count_binom(s - d0, n - 1);
}

Rational conditional_survival_exact(const SuffStats& stats, std::int64_t t) {
    Rational out(conditional_survival_numerator(stats, t), tuple_count(stats.n(), stats.s()));
    out.canonicalize();
    return out;
}

double conditional_survival(const SuffStats& stats, std::int64_t t, const ExactnessPolicy& policy) {
    if (t <= stats.xmin()) return 1.0;
    const std::int64_t d0 = t - stats.xmin();
    if (d0 > stats.s()) return 0.0;
    if (!use_lgamma(stats, policy)) return to_double(conditional_survival_exact(stats, t));

    const std::int64_t n = stats.n();
    const std::int64_t s = stats.s();
    const double log_num = log_difference(log_binom(s - d0 + n - 1, n - 1), log_binom(s - d0, n - 1));
    return std::exp(log_num - log_tuple_count(n, s));
}

double conditional_survival_product_form(const SuffStats& stats, std::int64_t t) {
    const std::int64_t n = stats.n();
    const std::int64_t s = stats.s();
    if (n < 3 || s >= n || t <= stats.xmin() || t > stats.xmin() + s)
        throw std::domain_error("conditional_survival_product_form: needs n >= 3, S < n, xmin < t <= xmin + S");

    // Evaluated in deviation coordinates (minimum shifted to zero).
    const double lead = static_cast<double>(n - 1) / static_cast<double>(s + n - 1);
    double total = 0.0;
    for (std::int64_t d = t - stats.xmin(); d <= s; ++d) {
        double term = lead;
        for (std::int64_t j = 1; j <= n - 2; ++j)
            term *= static_cast<double>(s + n - d - 1 - j) / static_cast<double>(s + n - 1 - j);
        total += term;
    }
    return total;
}

std::map<std::int64_t, Rational> brute_conditional(std::int64_t n, std::int64_t xmin, std::int64_t s) {
    if (n < 1 || s < 0) throw std::invalid_argument("brute_conditional: need n >= 1, s >= 0");
    if (n == 1 && s != 0) throw std::invalid_argument("brute_conditional: n = 1 forces s = 0");
    if (std::lgamma(s + n + 0.0) - std::lgamma(n + 0.0) - std::lgamma(s + 1.0) > std::log(kEnumerationLimit))
        throw std::length_error("brute_conditional: enumeration exceeds 1e7 compositions");

    // Walk every tuple of deviations in [0, s]^n that sums to s and hits zero.
    std::map<std::int64_t, std::int64_t> counts;
    std::int64_t total = 0;
    std::vector<std::int64_t> dev(static_cast<std::size_t>(n), 0);
    std::function<void(std::size_t, std::int64_t)> walk = [&](std::size_t pos, std::int64_t remaining) {
        if (pos + 1 == dev.size()) {
            dev[pos] = remaining;
            bool has_zero = false;
            for (auto v : dev) has_zero = has_zero || v == 0;
            if (has_zero) {
                ++counts[xmin + dev[0]];
                ++total;
            }
            return;
        }
        for (std::int64_t v = 0; v <= remaining; ++v) {
            dev[pos] = v;
            walk(pos + 1, remaining - v);
        }
    };
    walk(0, s);

    std::map<std::int64_t, Rational> out;
    for (const auto& [x, c] : counts) {
        Rational q(BigInt(static_cast<long>(c)), BigInt(static_cast<long>(total)));
        q.canonicalize();
        out.emplace(x, q);
    }
    return out;
}

JointEnumeration enumerate_joint(std::int64_t n, const GeoParams& params, std::int64_t cap) {
    if (n < 1) throw std::invalid_argument("enumerate_joint: n must be >= 1");
    if (cap < params.r()) throw std::invalid_argument("enumerate_joint: cap below support");
    const std::int64_t width = cap - params.r() + 1;
    if (static_cast<double>(n) * std::log(static_cast<double>(width)) > std::log(kEnumerationLimit) + 1e-12)
        throw std::length_error("enumerate_joint: enumeration exceeds 1e7 tuples");

    std::vector<double> mass_at(static_cast<std::size_t>(width));
    for (std::int64_t i = 0; i < width; ++i) mass_at[static_cast<std::size_t>(i)] = pmf(params, params.r() + i);

    JointEnumeration out;
    out.cap = cap;
    std::vector<std::int64_t> idx(static_cast<std::size_t>(n), 0);
    while (true) {
        double p = 1.0;
        std::int64_t lo = idx[0];
        std::int64_t sum = 0;
        for (auto i : idx) {
            p *= mass_at[static_cast<std::size_t>(i)];
            lo = std::min(lo, i);
            sum += i;
        }
        const std::int64_t xmin = params.r() + lo;
        const JointEnumeration::Key key{xmin, sum - n * lo};
        out.mass[key] += p;
        out.first_coordinate[key][params.r() + idx[0]] += p;

        std::size_t pos = 0;
        while (pos < idx.size() && ++idx[pos] == width) idx[pos++] = 0;
        if (pos == idx.size()) break;
    }
    // P(some coordinate > cap) = 1 - (1 - theta^width)^n
    const double inside = std::log1p(-power_survival(params.theta(), width));
    out.tail_mass = -std::expm1(static_cast<double>(n) * inside);
    return out;
}

CompletenessDiagnostic completeness_diagnostic(std::int64_t n, const GeoParams& params, std::int64_t cap) {
    if (cap < params.r() + 1 + n)
        throw std::invalid_argument("completeness_diagnostic: cap must reach r + 1 + n");
    const auto joint = enumerate_joint(n, params, cap);
    CompletenessDiagnostic out;
    if (auto it = joint.mass.find({params.r() + 2, 0}); it != joint.mass.end()) out.p_plus = it->second;
    if (auto it = joint.mass.find({params.r() + 1, n}); it != joint.mass.end()) out.p_minus = it->second;
    out.expectation = out.p_plus - out.p_minus;
    out.minus_tuples = tuple_count(n, n);
    const double scale = std::max(out.p_plus, out.p_minus);
    out.expectation_is_zero = std::abs(out.expectation) <= 1e-12 * scale;
    return out;
}

}  // namespace georel
