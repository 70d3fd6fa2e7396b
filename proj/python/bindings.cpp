#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "georel/combinat.hpp"
#include "georel/error.hpp"
#include "georel/estimators.hpp"
#include "georel/geomdist.hpp"
#include "georel/relcli.hpp"
#include "georel/simlab.hpp"

namespace py = pybind11;
using namespace georel;

namespace {

using Sample = std::vector<std::int64_t>;

py::int_ to_pyint(const BigInt& v) { return py::int_(py::str(v.get_str())); }

py::tuple fraction(const Rational& q) { return py::make_tuple(to_pyint(q.get_num()), to_pyint(q.get_den())); }

StressStrengthParams stress_params(std::int64_t r1, double theta1, std::int64_t r2, double theta2) {
    return {GeoParams(r1, theta1), GeoParams(r2, theta2)};
}

simlab::RunControl control(std::uint64_t reps, std::uint64_t seed, unsigned threads) {
    return {reps, seed, threads};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Geometric-lifetime reliability: closed forms, exact estimators, simulation tables";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    // closed forms
    m.def("pmf", [](std::int64_t r, double theta, std::int64_t x) { return pmf(GeoParams(r, theta), x); },
          py::arg("r"), py::arg("theta"), py::arg("x"));
    m.def("reliability", [](std::int64_t r, double theta, std::int64_t t) { return reliability(GeoParams(r, theta), t); },
          py::arg("r"), py::arg("theta"), py::arg("t"));
    m.def("system_reliability", [](double rt, int k, int m_) { return system_reliability(rt, SystemSpec(k, m_)); },
          py::arg("component_reliability"), py::arg("k"), py::arg("m"));
    m.def("stress_strength",
          [](std::int64_t r1, double theta1, std::int64_t r2, double theta2) {
              return stress_strength(stress_params(r1, theta1, r2, theta2));
          },
          py::arg("r1"), py::arg("theta1"), py::arg("r2"), py::arg("theta2"));

    // sufficient statistics and the conditional law
    m.def("suff_stats",
          [](const Sample& x) {
              const auto st = suff_stats(x);
              return std::make_tuple(st.xmin(), st.s(), st.n());
          },
          py::arg("sample"), "(xmin, S, n) of a complete sample");
    m.def("conditional_pmf",
          [](std::int64_t xmin, std::int64_t s, std::int64_t n, std::int64_t x) {
              return fraction(conditional_pmf_exact(SuffStats(xmin, s, n), x));
          },
          py::arg("xmin"), py::arg("s"), py::arg("n"), py::arg("x"), "exact (numerator, denominator)");
    m.def("conditional_survival",
          [](std::int64_t xmin, std::int64_t s, std::int64_t n, std::int64_t t) {
              return fraction(conditional_survival_exact(SuffStats(xmin, s, n), t));
          },
          py::arg("xmin"), py::arg("s"), py::arg("n"), py::arg("t"), "exact (numerator, denominator)");

    // estimators
    m.def("mle_reliability", [](const Sample& x, std::int64_t t) { return mle_reliability(suff_stats(x), t); },
          py::arg("sample"), py::arg("t"));
    m.def("ue_reliability", [](const Sample& x, std::int64_t t) { return ue_reliability(suff_stats(x), t); },
          py::arg("sample"), py::arg("t"));
    m.def("naive_reliability", [](const Sample& x, std::int64_t t) { return naive_unbiased_reliability(x, t); },
          py::arg("sample"), py::arg("t"));
    m.def("mle_system_reliability",
          [](const Sample& x, std::int64_t t, int k, int m_) {
              return mle_system_reliability(suff_stats(x), t, SystemSpec(k, m_));
          },
          py::arg("sample"), py::arg("t"), py::arg("k"), py::arg("m"));
    m.def("ue_system_reliability",
          [](const Sample& x, std::int64_t t, int k, int m_) {
              return ue_system_reliability(suff_stats(x), t, SystemSpec(k, m_));
          },
          py::arg("sample"), py::arg("t"), py::arg("k"), py::arg("m"));
    m.def("mle_reliability_censored",
          [](const Sample& observed, std::int64_t c, std::int64_t n, std::int64_t t) {
              return mle_reliability_censored(censored_stats(CensoredSample(c, observed, n)), t);
          },
          py::arg("observed"), py::arg("c"), py::arg("n"), py::arg("t"));
    m.def("mle_stress_strength",
          [](const Sample& x, const Sample& y) { return mle_stress_strength(suff_stats(x), suff_stats(y)); },
          py::arg("stress"), py::arg("strength"));
    m.def("ue_stress_strength",
          [](const Sample& x, const Sample& y, const std::string& variant) {
              return ue_stress_strength(suff_stats(x), suff_stats(y), parse_ue_variant(variant));
          },
          py::arg("stress"), py::arg("strength"), py::arg("variant") = "exact-rb");

    // simulation
    m.def("ue_reliability_draws",
          [](std::int64_t r, double theta, std::int64_t n, std::int64_t t, std::uint64_t reps, std::uint64_t seed,
             unsigned threads) {
              py::gil_scoped_release release;
              return simlab::ue_reliability_draws(GeoParams(r, theta), n, t, control(reps, seed, threads));
          },
          py::arg("r"), py::arg("theta"), py::arg("n"), py::arg("t"), py::arg("reps") = 10000, py::arg("seed") = 42,
          py::arg("threads") = 0);
    m.def("table",
          [](int id, std::optional<std::uint64_t> reps, std::uint64_t seed, unsigned threads) {
              cli::TableOptions options;
              options.reps = reps;
              options.seed = seed;
              options.threads = threads;
              py::gil_scoped_release release;
              return cli::make_table(id, options).render();
          },
          py::arg("id"), py::arg("reps") = py::none(), py::arg("seed") = 42, py::arg("threads") = 0,
          "CSV text of table id (1..19)");
    m.def("validate_study_spec",
          [](const std::string& spec) { return cli::validate_study_spec(nlohmann::json::parse(spec)); },
          py::arg("spec_json"));
    m.def("run_study_spec",
          [](const std::string& spec, unsigned threads) {
              const auto json = nlohmann::json::parse(spec);
              py::gil_scoped_release release;
              const auto result = cli::run_study_spec(json, threads);
              return std::make_tuple(result.csv.render(), result.manifest.dump(2));
          },
          py::arg("spec_json"), py::arg("threads") = 0, "(csv text, manifest json text)");

    m.attr("__version__") = cli::version_string();
}
