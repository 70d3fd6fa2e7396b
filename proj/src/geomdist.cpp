#include "georel/geomdist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace georel {

GeoParams::GeoParams(std::int64_t r, double theta) : r_(r), theta_(theta) {
    if (r < 0) throw std::invalid_argument("GeoParams: r must be >= 0, got " + std::to_string(r));
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("GeoParams: theta must lie in (0, 1), got " + std::to_string(theta));
}

SystemSpec::SystemSpec(int k, int m) : k_(k), m_(m) {
    if (k < 1 || k > m)
        throw std::invalid_argument("SystemSpec: need 1 <= k <= m, got k=" + std::to_string(k) +
                                    " m=" + std::to_string(m));
}

double StressStrengthParams::rho() const noexcept {
    return (1.0 - stress.theta()) / (1.0 - stress.theta() * strength.theta());
}

double power_survival(double theta, std::int64_t k) noexcept {
    if (k <= 0) return 1.0;
    if (theta <= 0.0) return 0.0;
    const double log_value = static_cast<double>(k) * std::log(theta);
    if (log_value < std::log(std::numeric_limits<double>::min())) return 0.0;
    return std::pow(theta, static_cast<double>(k));
}

double pmf(const GeoParams& params, std::int64_t x) noexcept {
    if (x < params.r()) return 0.0;
    return (1.0 - params.theta()) * power_survival(params.theta(), x - params.r());
}

double reliability(const GeoParams& params, std::int64_t t) noexcept {
    return power_survival(params.theta(), t - params.r());
}

double system_reliability(double p, const SystemSpec& spec) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("system_reliability: component reliability outside [0, 1]");
    const int m = spec.m();
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    // C(m, i) p^i q^(m-i) evaluated in log space so large m cannot overflow.
    const double log_p = std::log(p);
    const double log_q = std::log1p(-p);
    double total = 0.0;
    for (int i = spec.k(); i <= m; ++i) {
        const double log_coef = std::lgamma(m + 1.0) - std::lgamma(i + 1.0) - std::lgamma(m - i + 1.0);
        total += std::exp(log_coef + i * log_p + (m - i) * log_q);
    }
    return std::min(total, 1.0);
}

double stress_strength_branches(double rho, double theta1, double theta2, std::int64_t delta) noexcept {
    if (delta > 0) return rho * power_survival(theta2, delta);
    if (delta < 0) return 1.0 - (1.0 - rho) * power_survival(theta1, -delta);
    return rho;
}

double stress_strength(const StressStrengthParams& params) noexcept {
    return stress_strength_branches(params.rho(), params.stress.theta(), params.strength.theta(),
                                    params.delta());
}

double population_mean(const GeoParams& params) noexcept {
    return static_cast<double>(params.r()) + params.theta() / (1.0 - params.theta());
}

std::int64_t draw(const GeoParams& params, Stream& stream) noexcept {
    const double u = stream.uniform_open();
    return params.r() + static_cast<std::int64_t>(std::floor(std::log(u) / std::log(params.theta())));
}

std::vector<std::int64_t> sample(const GeoParams& params, std::size_t n, Stream& stream) {
    if (n == 0) throw std::invalid_argument("sample: n must be >= 1");
    std::vector<std::int64_t> out(n);
    for (auto& x : out) x = draw(params, stream);
    return out;
}

}  // namespace georel
