#pragma once

#include <cstdint>
#include <vector>

#include "georel/rng.hpp"

namespace georel {

/// Geo(r, theta): P(X = x) = (1 - theta) theta^(x - r) for x = r, r+1, ...
///
/// r is the minimum warranty life in cycles and theta the per-cycle
/// survival probability, 0 < theta < 1.
class GeoParams {
public:
    GeoParams(std::int64_t r, double theta);

    std::int64_t r() const noexcept { return r_; }
    double theta() const noexcept { return theta_; }

    friend bool operator==(const GeoParams&, const GeoParams&) = default;

private:
    std::int64_t r_;
    double theta_;
};

/// k-out-of-m system: works iff at least k of m identical components work.
class SystemSpec {
public:
    SystemSpec(int k, int m);

    int k() const noexcept { return k_; }
    int m() const noexcept { return m_; }

    friend bool operator==(const SystemSpec&, const SystemSpec&) = default;

private:
    int k_;
    int m_;
};

/// Stress X ~ Geo(r1, theta1), strength Y ~ Geo(r2, theta2), independent.
struct StressStrengthParams {
    GeoParams stress;
    GeoParams strength;

    std::int64_t delta() const noexcept { return stress.r() - strength.r(); }
    double rho() const noexcept;
};

/// theta^k for k >= 0, flushed to zero once the result falls below the
/// smallest normal double.
double power_survival(double theta, std::int64_t k) noexcept;

double pmf(const GeoParams& params, std::int64_t x) noexcept;

/// R(t) = P(X >= t); equal to 1 for every t <= r.
double reliability(const GeoParams& params, std::int64_t t) noexcept;

/// Binomial tail sum_{i=k}^{m} C(m,i) p^i (1-p)^(m-i).
double system_reliability(double component_reliability, const SystemSpec& spec);

/// Branch formula shared by the true stress-strength reliability and its
/// plug-in estimators: rho theta2^delta for delta > 0,
/// 1 - (1 - rho) theta1^(-delta) for delta < 0, rho at delta = 0.
double stress_strength_branches(double rho, double theta1, double theta2, std::int64_t delta) noexcept;

/// R = P(X <= Y).
double stress_strength(const StressStrengthParams& params) noexcept;

double population_mean(const GeoParams& params) noexcept;

/// One inverse-transform draw: r + floor(ln u / ln theta).
std::int64_t draw(const GeoParams& params, Stream& stream) noexcept;

std::vector<std::int64_t> sample(const GeoParams& params, std::size_t n, Stream& stream);

}  // namespace georel
