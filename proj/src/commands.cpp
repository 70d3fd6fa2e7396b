#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "georel/error.hpp"
#include "georel/relcli.hpp"

namespace georel::cli {
namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw UsageError("cannot open " + path + " for writing");
    file << text;
    if (!file) throw UsageError("failed writing " + path);
}

// ---------------------------------------------------------------------------
// estimate

struct EstimateArgs {
    std::string input;
    std::string strength;
    std::string target = "rt";
    std::vector<std::string> methods;
    std::optional<std::int64_t> t;
    std::optional<std::int64_t> c;
    int k = 0;
    int m = 0;
    bool as_json = false;
};

struct LoadedSample {
    std::vector<std::int64_t> complete;  // empty for censored files
    std::optional<CensoredSample> censored;
};

LoadedSample load_sample(const std::string& path, std::optional<std::int64_t> c) {
    const SampleFile file = read_sample_file(path);
    LoadedSample out;
    if (file.censored()) {
        if (c && *c != *file.c) throw UsageError(path + ": --c disagrees with the file header c=" + std::to_string(*file.c));
        out.censored.emplace(*file.c, file.values, *file.n);
    } else {
        out.complete = file.values;
        if (c) out.censored = CensoredSample::from_complete(out.complete, *c);
    }
    return out;
}

std::vector<Method> default_methods(Target target, bool complete, bool censored) {
    std::vector<Method> out;
    if (complete) {
        out.push_back(Method::mle);
        if (target == Target::stress_strength) {
            out.push_back(Method::exact_rb);
            out.push_back(Method::as_published);
        } else {
            out.push_back(Method::ue);
        }
        if (target != Target::system_reliability) out.push_back(Method::naive);
    }
    if (censored) out.push_back(Method::mle_censored);
    return out;
}

double estimate_one(Method method, Target target, const EstimateArgs& args, const LoadedSample& x,
                    const LoadedSample* y) {
    const bool needs_complete = method != Method::mle_censored;
    if (needs_complete && x.complete.empty())
        throw UsageError(std::string(to_string(method)) + " needs a complete sample");
    if (needs_complete && y != nullptr && y->complete.empty())
        throw UsageError(std::string(to_string(method)) + " needs a complete strength sample");
    if (!needs_complete && (!x.censored || (y != nullptr && !y->censored)))
        throw UsageError("mle-censored needs a censored sample or --c");

    if (target == Target::stress_strength) {
        switch (method) {
            case Method::mle: return mle_stress_strength(suff_stats(x.complete), suff_stats(y->complete));
            case Method::mle_censored:
                return mle_stress_strength_censored(censored_stats(*x.censored), censored_stats(*y->censored));
            case Method::ue:
            case Method::exact_rb:
                return ue_stress_strength(suff_stats(x.complete), suff_stats(y->complete), UeVariant::exact_rb);
            case Method::as_published:
                return ue_stress_strength(suff_stats(x.complete), suff_stats(y->complete), UeVariant::as_published);
            case Method::naive: return naive_unbiased_stress_strength(x.complete, y->complete);
        }
    }

    const std::int64_t t = *args.t;
    if (target == Target::reliability) {
        switch (method) {
            case Method::mle: return mle_reliability(suff_stats(x.complete), t);
            case Method::mle_censored: return mle_reliability_censored(censored_stats(*x.censored), t);
            case Method::ue: return ue_reliability(suff_stats(x.complete), t);
            case Method::naive: return naive_unbiased_reliability(x.complete, t);
            default: break;
        }
    } else {
        const SystemSpec spec(args.k, args.m);
        switch (method) {
            case Method::mle: return mle_system_reliability(suff_stats(x.complete), t, spec);
            case Method::mle_censored: return mle_system_reliability_censored(censored_stats(*x.censored), t, spec);
            case Method::ue: return ue_system_reliability(suff_stats(x.complete), t, spec);
            default: break;
        }
    }
    throw UsageError("method " + std::string(to_string(method)) + " does not apply to target " +
                     std::string(to_string(target)));
}

int cmd_estimate(const EstimateArgs& args, std::ostream& out) {
    const Target target = parse_target(args.target);
    if (target != Target::stress_strength && !args.t) throw UsageError("--t is required for target " + args.target);
    if (target == Target::system_reliability && (args.k == 0 || args.m == 0))
        throw UsageError("--k and --m are required for target rs");
    if (target == Target::stress_strength && args.strength.empty())
        throw UsageError("--strength is required for target r");

    const LoadedSample x = load_sample(args.input, args.c);
    std::optional<LoadedSample> y;
    if (!args.strength.empty()) y = load_sample(args.strength, args.c);

    std::vector<Method> methods;
    for (const auto& m : args.methods) methods.push_back(parse_method(m));
    if (methods.empty()) {
        const bool complete = !x.complete.empty() && (!y || !y->complete.empty());
        const bool censored = x.censored && (!y || y->censored);
        methods = default_methods(target, complete, censored);
    }

    std::vector<EstimateRecord> records;
    for (auto m : methods)
        records.push_back({m, target, estimate_one(m, target, args, x, y ? &*y : nullptr), {}, {}});

    if (args.as_json) {
        json list = json::array();
        for (const auto& r : records)
            list.push_back({{"method", to_string(r.method)}, {"target", to_string(r.target)}, {"value", r.value}});
        out << list.dump(2) << '\n';
    } else {
        CsvDocument doc;
        doc.header = {"method", "target", "value"};
        for (const auto& r : records)
            doc.rows.push_back({std::string(to_string(r.method)), std::string(to_string(r.target)),
                                format_number(r.value)});
        out << doc.render();
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// hist

struct HistArgs {
    std::int64_t n = 20;
    std::int64_t r = 15;
    std::int64_t t = 25;
    double theta = 0.96;
    std::uint64_t reps = 10000;
    std::size_t bins = 20;
    std::uint64_t seed = 42;
    std::string output;
};

int cmd_hist(const HistArgs& args, std::ostream& out) {
    if (args.bins == 0) throw UsageError("--bins must be >= 1");
    if (args.reps == 0) throw UsageError("--reps must be >= 1");
    const GeoParams model(args.r, args.theta);
    const simlab::RunControl control{args.reps, args.seed, simlab::threads_from_env()};
    const auto draws = simlab::ue_reliability_draws(model, args.n, args.t, control);
    const auto hist = simlab::histogram(draws, args.bins);

    CsvDocument doc;
    doc.metadata = {
        "georel hist: UE of R(t) over seeded replications",
        "n=" + std::to_string(args.n) + " r=" + std::to_string(args.r) + " t=" + std::to_string(args.t) +
            " theta=" + format_number(args.theta) + " bins=" + std::to_string(args.bins),
        "reps=" + std::to_string(args.reps) + " seed=" + std::to_string(args.seed),
        "R(t)=" + format_number(reliability(model, args.t)) + " mean=" + format_number(simlab::mean(draws)) +
            " skewness=" + format_number(simlab::skewness(draws)),
    };
    doc.header = {"lower", "upper", "count"};
    for (std::size_t i = 0; i < hist.counts.size(); ++i)
        doc.rows.push_back({format_number(hist.edges[i]), format_number(hist.edges[i + 1]),
                            std::to_string(hist.counts[i])});
    write_output(args.output, doc.render(), out);
    return kOk;
}

// ---------------------------------------------------------------------------

int cmd_table(int id, const TableOptions& options, const std::string& output, std::ostream& out) {
    if (!is_table_id(id)) throw UsageError("unknown table id " + std::to_string(id) + " (expected 1..19)");
    write_output(output, make_table(id, options).render(), out);
    return kOk;
}

int cmd_simulate(const std::string& path, const std::string& output, const std::string& manifest_path,
                 std::ostream& out, std::ostream& err) {
    std::ifstream file(path);
    if (!file) throw UsageError("cannot open " + path);
    json spec;
    try {
        spec = json::parse(file);
    } catch (const json::parse_error& e) {
        throw UsageError(path + ": invalid JSON: " + e.what());
    }
    if (const auto errors = validate_study_spec(spec); !errors.empty()) {
        err << "error: " << path << ": " << errors.size() << " schema violation(s)\n";
        for (const auto& e : errors) err << "  " << e << '\n';
        return kInputError;
    }
    const auto result = run_study_spec(spec, simlab::threads_from_env());
    const std::string csv_path = !output.empty() ? output : spec.value("output", std::string());
    write_output(csv_path, result.csv.render(), out);

    std::string mpath = manifest_path;
    if (mpath.empty() && !csv_path.empty() && csv_path != "-") mpath = csv_path + ".manifest.json";
    if (mpath.empty())
        err << result.manifest.dump(2) << '\n';
    else
        write_output(mpath, result.manifest.dump(2) + "\n", out);
    return kOk;
}

}  // namespace


int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Estimators of reliability for the two-parameter geometric distribution", "georel"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version_string());

    EstimateArgs est;
    auto* estimate = app.add_subcommand("estimate", "Estimate R(t), R_s(t) or R from a sample file");
    estimate->add_option("input", est.input, "Sample file (stress sample for --target r)")->required();
    estimate->add_option("--target", est.target, "rt | rs | r")->capture_default_str();
    estimate->add_option("--method", est.methods,
                         "mle | mle-censored | ue | naive | exact-rb | as-published (repeatable; default: all that apply)");
    estimate->add_option("--t", est.t, "Mission time");
    estimate->add_option("--k", est.k, "Components required (rs)");
    estimate->add_option("--m", est.m, "Components in the system (rs)");
    estimate->add_option("--c", est.c, "Censor complete samples at cycle c");
    estimate->add_option("--strength", est.strength, "Strength sample file (target r)");
    estimate->add_flag("--json", est.as_json, "JSON output instead of CSV");

    int table_id = 0;
    std::optional<std::uint64_t> table_reps;
    TableOptions table_opts;
    std::string table_out;
    auto* table = app.add_subcommand("table", "Regenerate one of the published tables as CSV");
    table->add_option("--id", table_id, "Table id 1..19")->required();
    table->add_option("--reps", table_reps, "Replications (batches for Tables 7-8)")->check(CLI::PositiveNumber);
    table->add_option("--seed", table_opts.seed)->capture_default_str();
    table->add_option("--batch-size", table_opts.batch_size, "Draws per batch, Tables 7-8")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    table->add_option("--output,-o", table_out, "Output file (default stdout)");

    HistArgs hist_args;
    auto* hist = app.add_subcommand("hist", "Histogram of the UE of R(t)");
    hist->add_option("--n", hist_args.n)->check(CLI::Range(std::int64_t{2}, std::int64_t{1} << 40))->capture_default_str();
    hist->add_option("--r", hist_args.r)->check(CLI::NonNegativeNumber)->capture_default_str();
    hist->add_option("--t", hist_args.t)->capture_default_str();
    hist->add_option("--theta", hist_args.theta)->capture_default_str();
    hist->add_option("--reps", hist_args.reps)->capture_default_str();
    hist->add_option("--bins", hist_args.bins)->capture_default_str();
    hist->add_option("--seed", hist_args.seed)->capture_default_str();
    hist->add_option("--output,-o", hist_args.output, "Output file (default stdout)");

    std::string spec_path;
    std::string sim_out;
    std::string sim_manifest;
    auto* simulate = app.add_subcommand("simulate", "Run a study described by a JSON spec file");
    simulate->add_option("spec", spec_path, "Study spec (JSON)")->required();
    simulate->add_option("--output,-o", sim_out, "CSV output (overrides the spec's output)");
    simulate->add_option("--manifest", sim_manifest, "Run manifest path (default <output>.manifest.json)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << version_string() << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    try {
        if (*estimate) return cmd_estimate(est, out);
        if (*table) {
            table_opts.reps = table_reps;
            table_opts.threads = simlab::threads_from_env();
            return cmd_table(table_id, table_opts, table_out, out);
        }
        if (*hist) return cmd_hist(hist_args, out);
        return cmd_simulate(spec_path, sim_out, sim_manifest, out, err);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kDomainError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
}

}  // namespace georel::cli
