#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include <gmpxx.h>

#include "georel/geomdist.hpp"

namespace georel {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Sufficient summary of a complete sample: minimum, sum of deviations
/// from the minimum, and sample size.
class SuffStats {
public:
    SuffStats(std::int64_t xmin, std::int64_t s, std::int64_t n);

    std::int64_t xmin() const noexcept { return xmin_; }
    std::int64_t s() const noexcept { return s_; }
    std::int64_t n() const noexcept { return n_; }

    friend bool operator==(const SuffStats&, const SuffStats&) = default;

private:
    std::int64_t xmin_;
    std::int64_t s_;
    std::int64_t n_;
};

/// C(a, b) exactly; 0 when b < 0 or b > a. Requires a >= 0.
BigInt binom(std::int64_t a, std::int64_t b);

/// Above this n + s the floating paths switch from exact big-integer ratios
/// to log-gamma evaluation (relative accuracy target 1e-10).
struct ExactnessPolicy {
    std::int64_t lgamma_threshold = 5000;
};

/// Integer numerators of the conditional pmf and survival over the common
/// denominator tuple_count(n, s).
BigInt conditional_pmf_numerator(const SuffStats& stats, std::int64_t x);
BigInt conditional_survival_numerator(const SuffStats& stats, std::int64_t t);

/// P(X1 = x | X(1), S), exactly.
Rational conditional_pmf_exact(const SuffStats& stats, std::int64_t x);
double conditional_pmf(const SuffStats& stats, std::int64_t x, const ExactnessPolicy& policy = {});

/// P(X1 >= t | X(1), S), exactly.
Rational conditional_survival_exact(const SuffStats& stats, std::int64_t t);
double conditional_survival(const SuffStats& stats, std::int64_t t, const ExactnessPolicy& policy = {});

/// Product-form evaluation of the survival sum for n >= 3, S < n and
/// xmin < t <= xmin + s. Throws std::domain_error outside that domain.
double conditional_survival_product_form(const SuffStats& stats, std::int64_t t);

/// Enumeration oracle: distribution of the first coordinate over all
/// n-tuples with minimum xmin and deviation sum s, each tuple equally likely.
std::map<std::int64_t, Rational> brute_conditional(std::int64_t n, std::int64_t xmin, std::int64_t s);

/// Number of n-tuples of nonnegative deviations summing to s with at least
/// one zero, i.e. the size of the conditioning set for (X(1), S).
BigInt tuple_count(std::int64_t n, std::int64_t s);

struct JointEnumeration {
    using Key = std::pair<std::int64_t, std::int64_t>;  // (xmin, s)
    std::map<Key, double> mass;
    /// P(X(1) = xmin, S = s, X1 = x) keyed by (xmin, s) then x.
    std::map<Key, std::map<std::int64_t, double>> first_coordinate;
    /// Probability of tuples with some coordinate above the cap.
    double tail_mass = 0.0;
    std::int64_t cap = 0;
};

/// Exact joint law of (X(1), S) over all n-tuples in {r, ..., cap}^n.
/// Guarded to at most 1e7 tuples.
JointEnumeration enumerate_joint(std::int64_t n, const GeoParams& params, std::int64_t cap);

/// E[g(X(1), S)] for g = +1 at (r+2, 0), -1 at (r+1, n), 0 elsewhere.
struct CompletenessDiagnostic {
    double p_plus = 0.0;   // P(X(1) = r+2, S = 0)
    double p_minus = 0.0;  // P(X(1) = r+1, S = n)
    double expectation = 0.0;
    /// Tuples in the S = n event; each has probability (1-theta)^n theta^(2n).
    BigInt minus_tuples;
    bool expectation_is_zero = false;
};

CompletenessDiagnostic completeness_diagnostic(std::int64_t n, const GeoParams& params, std::int64_t cap);

}  // namespace georel
