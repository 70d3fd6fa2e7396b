#include <array>
#include <sstream>
#include <stdexcept>

#include "georel/relcli.hpp"

namespace georel::cli {
namespace {

using simlab::RunControl;

std::string fmt(double v) { return format_number(v); }
std::string fmt(std::int64_t v) { return std::to_string(v); }

RunControl control_for(int id, const TableOptions& options) {
    return RunControl{options.reps.value_or(default_reps(id)), options.seed, options.threads};
}

void stamp(CsvDocument& doc, int id, std::string_view title, std::string_view config, const RunControl& control) {
    std::vector<std::string> head{
        "georel table " + std::to_string(id) + ": " + std::string(title),
        "config: " + std::string(config),
        "reps=" + std::to_string(control.reps) + " seed=" + std::to_string(control.seed),
    };
    doc.metadata.insert(doc.metadata.begin(), head.begin(), head.end());
}

// ---------------------------------------------------------------------------
// Tables 1-6

struct ReliabilityBase {
    std::int64_t n = 20;
    std::int64_t r = 15;
    std::int64_t c = 25;
    double theta = 0.8;
    std::int64_t t = 25;
    int k = 2;
    int m = 8;

    simlab::ReliabilityScenario scenario() const {
        return {GeoParams(r, theta), n, c, t, SystemSpec(k, m)};
    }
};

CsvDocument reliability_table(int id, const TableOptions& options) {
    ReliabilityBase base;
    std::vector<simlab::ReliabilityScenario> scenarios;
    std::string grid;
    std::string config;
    switch (id) {
        case 1:
            grid = "t";
            config = "n=20 r=15 c=25 theta=0.8 k=2 m=8";
            for (std::int64_t t : {16, 17, 18, 19, 20, 25, 30, 31, 35, 40, 45}) {
                auto b = base;
                b.t = t;
                scenarios.push_back(b.scenario());
            }
            break;
        case 2:
            grid = "k";
            config = "n=20 r=15 c=25 theta=0.8 t=25 m=8";
            for (int k : {1, 3, 6, 8}) {
                auto b = base;
                b.k = k;
                scenarios.push_back(b.scenario());
            }
            break;
        case 3:
            grid = "c";
            config = "n=20 r=15 theta=0.8 t=25 k=2 m=8";
            for (std::int64_t c : {20, 25, 30, 35, 40, 45}) {
                auto b = base;
                b.c = c;
                scenarios.push_back(b.scenario());
            }
            break;
        case 4:
            grid = "n";
            config = "r=15 c=25 theta=0.8 t=25 k=2 m=8";
            for (std::int64_t n : {10, 15, 20, 25, 50, 100, 200}) {
                auto b = base;
                b.n = n;
                scenarios.push_back(b.scenario());
            }
            break;
        case 5:
            grid = "r";
            config = "n=20 c=25 theta=0.8 t=25 k=2 m=8";
            for (std::int64_t r : {0, 5, 10, 15, 20}) {
                auto b = base;
                b.r = r;
                scenarios.push_back(b.scenario());
            }
            break;
        case 6:
            grid = "theta";
            config = "n=20 r=15 c=25 t=25 k=2 m=8";
            for (double th : {0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.93, 0.96, 0.99}) {
                auto b = base;
                b.theta = th;
                scenarios.push_back(b.scenario());
            }
            break;
        default: throw std::out_of_range("not a reliability table");
    }
    const auto control = control_for(id, options);
    auto doc = render_reliability_rows(simlab::run_reliability_study(scenarios, control), grid);
    stamp(doc, id, "Calculations relating to R(t) and R_s(t)", config, control);
    return doc;
}

// ---------------------------------------------------------------------------
// Tables 7-8

const std::vector<std::vector<std::int64_t>>& published_coefficients() {
    static const std::vector<std::vector<std::int64_t>> sets{
        {+1, -1, +1, -1, +1, -1, +1, -1, +1, -1},
        {+1, +1, +1, +1, +1, -1, -1, -1, -1, -1},
        {+1, +1, 0, 0, 0, 0, 0, 0, -1, -1},
        {+1, 0, 0, 0, 0, 0, 0, 0, 0, -1},
    };
    return sets;
}

CsvDocument zero_covariance_table(int id, const TableOptions& options) {
    simlab::ZeroCovConfig config;
    config.n = 10;
    config.coefficients = published_coefficients();
    config.batch_size = options.batch_size;
    std::string column_name;
    std::string text;
    if (id == 7) {
        column_name = "t";
        text = "n=10 r=15 theta=0.8";
        for (std::int64_t t : {20, 25, 30, 35, 40}) config.columns.push_back({GeoParams(15, 0.8), t});
    } else {
        column_name = "theta";
        text = "n=10 r=15 t=25";
        for (double th : {0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.93, 0.96, 0.99})
            config.columns.push_back({GeoParams(15, th), 25});
    }
    const auto control = control_for(id, options);
    auto doc = render_zero_covariance(simlab::run_zero_covariance_study(config, control), config, column_name);
    stamp(doc, id, "Unbiased Estimator (covariance with unbiased estimators of zero)",
          text + " batches=" + std::to_string(control.reps) + " batch_size=" + std::to_string(config.batch_size),
          control);
    return doc;
}

// ---------------------------------------------------------------------------

CsvDocument ci_table(const TableOptions& options) {
    std::vector<simlab::CiScenario> scenarios;
    for (double th : {0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.93, 0.96, 0.99}) scenarios.push_back({GeoParams(15, th), 20, 25});
    const auto control = control_for(9, options);
    auto doc = render_ci_rows(simlab::run_ci_study(scenarios, control));
    stamp(doc, 9, "Calculation of Confidence Interval and CP of R(t)", "n=20 r=15 t=25", control);
    return doc;
}

CsvDocument censoring_table(int id, const TableOptions& options) {
    simlab::CensoringEfficiencyConfig config{StressStrengthParams{GeoParams(10, 0.7), GeoParams(5, 0.8)}, 10, 10,
                                             {}, {}};
    std::string text;
    switch (id) {
        case 10:
            text = "r1=10 r2=5 theta1=0.7 theta2=0.8 n1=n2=10";
            config.c1_grid = {10, 15, 20, 25};
            config.c2_grid = {15, 20, 25, 30};
            break;
        case 11:
            config.model = {GeoParams(5, 0.8), GeoParams(10, 0.7)};
            text = "r1=5 r2=10 theta1=0.8 theta2=0.7 n1=n2=10";
            config.c1_grid = {10, 15, 20, 25};
            config.c2_grid = {15, 20, 25, 30};
            break;
        case 12:
            text = "r1=10 r2=5 theta1=0.7 theta2=0.8 n1=n2=10";
            config.c1_grid = {15, 20, 25, 30};
            config.c2_grid = {10, 15, 20, 25};
            break;
        case 13:
            config.model = {GeoParams(10, 0.8), GeoParams(5, 0.7)};
            text = "r1=10 r2=5 theta1=0.8 theta2=0.7 n1=n2=10";
            config.c1_grid = {15, 20, 25, 30};
            config.c2_grid = {10, 15, 20, 25};
            break;
        default: throw std::out_of_range("not a censoring table");
    }
    const auto control = control_for(id, options);
    auto doc = render_censoring_efficiency(simlab::run_censoring_efficiency_study(config, control));
    stamp(doc, id, "Efficiency of the complete-sample MLE of R with respect to the censored MLE", text, control);
    return doc;
}

CsvDocument stress_mse_table(int id, const TableOptions& options) {
    static constexpr std::array<std::pair<double, double>, 5> kThetas{
        {{0.1, 0.1}, {0.5, 0.5}, {0.8, 0.2}, {0.9, 0.9}, {0.2, 0.8}}};
    const auto [th1, th2] = kThetas[static_cast<std::size_t>(id - 14)];
    simlab::StressMseConfig config;
    config.theta1 = th1;
    config.theta2 = th2;
    config.r1_grid = {5, 10, 15, 20};
    config.r2_grid = {5, 10, 15, 20};
    const auto control = control_for(id, options);
    auto doc = render_stress_mse(simlab::run_stress_mse_study(config, control));
    stamp(doc, id, "MSEs of estimators of R",
          "theta1=" + fmt(th1) + " theta2=" + fmt(th2) + " n1=n2=10 ue=exact-rb", control);
    return doc;
}

CsvDocument stress_ci_table(const TableOptions& options) {
    std::vector<simlab::StressCiScenario> scenarios;
    for (auto [r1, r2] : std::array<std::pair<int, int>, 7>{{{20, 5}, {15, 5}, {10, 5}, {5, 5}, {5, 10}, {5, 15}, {5, 20}}})
        scenarios.push_back({StressStrengthParams{GeoParams(r1, 0.9), GeoParams(r2, 0.9)}, 10, 10});
    const auto control = control_for(19, options);
    auto doc = render_stress_ci_rows(simlab::run_stress_ci_study(scenarios, control));
    stamp(doc, 19, "Calculation of Confidence Interval and CP of R", "n1=n2=10 theta1=theta2=0.9", control);
    return doc;
}

}  // namespace

bool is_table_id(int id) noexcept { return id >= 1 && id <= 19; }

std::uint64_t default_reps(int id) {
    if (!is_table_id(id)) throw std::out_of_range("unknown table id " + std::to_string(id));
    if (id == 7 || id == 8) return 1000;  // batches
    if (id >= 10 && id <= 18) return 1000;
    return 10000;
}

CsvDocument make_table(int id, const TableOptions& options) {
    if (!is_table_id(id)) throw std::out_of_range("unknown table id " + std::to_string(id));
    if (id <= 6) return reliability_table(id, options);
    if (id <= 8) return zero_covariance_table(id, options);
    if (id == 9) return ci_table(options);
    if (id <= 13) return censoring_table(id, options);
    if (id <= 18) return stress_mse_table(id, options);
    return stress_ci_table(options);
}

// ---------------------------------------------------------------------------
// Renderers

CsvDocument render_reliability_rows(const std::vector<simlab::ReliabilityRow>& rows, std::string_view grid_name) {
    CsvDocument doc;
    doc.metadata = {
        "col1=R(t) col2=mean MLE complete col3=mean MLE censored col5=mean UE",
        "col4=100*MSE(censored MLE)/MSE(complete MLE) [relative efficiency of complete to censored MLE]",
        "col6=100*MSE(MLE)/MSE(UE) [relative efficiency of UE to MLE; <100 means UE is worse]",
        "col7..col12 repeat col1..col6 for the k-out-of-m system reliability R_s(t)",
        "censored replications with no observed failure are excluded from col3/col4/col9/col10",
    };
    std::ostringstream excl;
    excl << "excluded_censored:";
    doc.header = {std::string(grid_name)};
    for (int i = 1; i <= 12; ++i) doc.header.push_back("col" + std::to_string(i));

    auto mean_or_nan = [](const simlab::MetricRow& m, const char* key) {
        const auto it = m.per_estimator.find(key);
        return it == m.per_estimator.end() ? std::nan("") : it->second.mean;
    };
    auto eff_or_nan = [](const simlab::MetricRow& m, const char* key) {
        const auto it = m.efficiencies.find(key);
        return it == m.efficiencies.end() ? std::nan("") : it->second;
    };

    for (const auto& row : rows) {
        const auto& sc = row.scenario;
        std::string grid;
        if (grid_name == "t") grid = fmt(sc.t);
        else if (grid_name == "k") grid = std::to_string(sc.spec.k());
        else if (grid_name == "m") grid = std::to_string(sc.spec.m());
        else if (grid_name == "c") grid = fmt(sc.c);
        else if (grid_name == "n") grid = fmt(sc.n);
        else if (grid_name == "r") grid = fmt(sc.model.r());
        else grid = fmt(sc.model.theta());
        excl << ' ' << grid_name << '=' << grid << ':' << row.censored_excluded;

        const auto& c = row.component;
        const auto& s = row.system;
        doc.rows.push_back({grid,
                            fmt(c.true_value),
                            fmt(mean_or_nan(c, "mle")),
                            fmt(mean_or_nan(c, "mle-censored")),
                            fmt(eff_or_nan(c, simlab::kCompleteVsCensored)),
                            fmt(mean_or_nan(c, "ue")),
                            fmt(eff_or_nan(c, simlab::kUeVsMle)),
                            fmt(s.true_value),
                            fmt(mean_or_nan(s, "mle")),
                            fmt(mean_or_nan(s, "mle-censored")),
                            fmt(eff_or_nan(s, simlab::kCompleteVsCensored)),
                            fmt(mean_or_nan(s, "ue")),
                            fmt(eff_or_nan(s, simlab::kUeVsMle))});
    }
    doc.metadata.push_back(excl.str());
    return doc;
}

namespace {

std::vector<std::string> coverage_fields(const simlab::CoverageRow& row, bool variance) {
    return {fmt(row.mean), fmt(variance ? row.variance : row.mse), fmt(row.lcl), fmt(row.ucl), fmt(row.coverage)};
}

const std::vector<std::string> kCoverageMetadata{
    "interval: estimate +- 1.96*sqrt(v); lcl/ucl are averages of per-replication bounds clipped to [0,1]",
    "cp is evaluated on the unclipped intervals",
};

}  // namespace

CsvDocument render_ci_rows(const std::vector<simlab::CiRow>& rows) {
    CsvDocument doc;
    doc.metadata = kCoverageMetadata;
    doc.metadata.push_back("v = R_hat*(1-R_hat)/(2n)");
    doc.header = {"theta",  "reliability", "ue_mean", "ue_variance", "ue_lcl",  "ue_ucl",
                  "ue_cp", "mle_mean",    "mle_mse", "mle_lcl",     "mle_ucl", "mle_cp"};
    for (const auto& row : rows) {
        std::vector<std::string> fields{fmt(row.scenario.model.theta()), fmt(row.ue.true_value)};
        for (auto& f : coverage_fields(row.ue, true)) fields.push_back(std::move(f));
        for (auto& f : coverage_fields(row.mle, false)) fields.push_back(std::move(f));
        doc.rows.push_back(std::move(fields));
    }
    return doc;
}

CsvDocument render_stress_ci_rows(const std::vector<simlab::StressCiRow>& rows) {
    CsvDocument doc;
    doc.metadata = kCoverageMetadata;
    doc.metadata.push_back("v = two-sample leave-one-out jackknife variance; ue = exact-rb");
    doc.header = {"r1",      "r2",      "reliability", "ue_mean", "ue_variance", "ue_lcl", "ue_ucl",
                  "ue_cp", "mle_mean", "mle_mse",     "mle_lcl", "mle_ucl",     "mle_cp"};
    for (const auto& row : rows) {
        std::vector<std::string> fields{fmt(row.scenario.model.stress.r()), fmt(row.scenario.model.strength.r()),
                                        fmt(row.ue.true_value)};
        for (auto& f : coverage_fields(row.ue, true)) fields.push_back(std::move(f));
        for (auto& f : coverage_fields(row.mle, false)) fields.push_back(std::move(f));
        doc.rows.push_back(std::move(fields));
    }
    return doc;
}

CsvDocument render_zero_covariance(const simlab::ZeroCovTable& table, const simlab::ZeroCovConfig& config,
                                   std::string_view column_name) {
    CsvDocument doc;
    doc.metadata.push_back("cells: average over batches of cov(1000*U0, 1000*UE of R(t)), U0 = sum c_i X_i, sum c_i = 0");
    doc.header = {"combination"};
    for (const auto& col : config.columns)
        doc.header.push_back(std::string(column_name) + "=" +
                             (column_name == "t" ? fmt(col.t) : fmt(col.model.theta())));

    for (std::size_t s = 0; s < config.coefficients.size(); ++s) {
        std::string label;
        for (auto c : config.coefficients[s]) label += c > 0 ? "+" + std::to_string(c) : c < 0 ? std::to_string(c) : " 0";
        std::vector<std::string> fields{label};
        std::ostringstream corr;
        corr << "correlation " << label << ":";
        for (const auto& cell : table.cells[s]) {
            fields.push_back(fmt(cell.mean_covariance));
            corr << " r=" << fmt(cell.correlation) << " z=" << fmt(cell.z) << (cell.flagged ? " (flagged)" : "");
        }
        doc.rows.push_back(std::move(fields));
        doc.metadata.push_back(corr.str());
    }
    std::vector<std::string> rel{"Reliability"};
    for (double r : table.reliability) rel.push_back(fmt(r));
    doc.rows.push_back(std::move(rel));
    doc.metadata.push_back(std::string("nonzero_correlation_flag=") + (table.any_flagged ? "true" : "false") +
                           " (any |z| > 1.96 for zero pooled correlation)");
    return doc;
}

CsvDocument render_censoring_efficiency(const simlab::CensoringEfficiencyTable& table) {
    CsvDocument doc;
    doc.metadata = {
        "R=" + fmt(table.true_value),
        "cells: 100*MSE(censored MLE)/MSE(complete MLE) over replications where both samples have a failure",
    };
    doc.header = {"c1"};
    for (const auto& cell : table.cells.front()) doc.header.push_back("c2=" + fmt(cell.c2));
    std::ostringstream excl;
    excl << "excluded:";
    for (const auto& row : table.cells) {
        std::vector<std::string> fields{fmt(row.front().c1)};
        for (const auto& cell : row) {
            fields.push_back(fmt(cell.efficiency));
            excl << " (" << cell.c1 << ',' << cell.c2 << "):" << cell.excluded;
        }
        doc.rows.push_back(std::move(fields));
    }
    doc.metadata.push_back(excl.str());
    return doc;
}

CsvDocument render_stress_mse(const simlab::StressMseTable& table) {
    CsvDocument doc;
    doc.metadata = {"per r2 block: true R, mean MLE, mean UE, MSE(MLE), MSE(UE)"};
    doc.header = {"r2", "quantity"};
    for (const auto& cell : table.cells.front()) doc.header.push_back("r1=" + fmt(cell.r1));
    static constexpr std::array<const char*, 5> kRows{"true", "mean_mle", "mean_ue", "mse_mle", "mse_ue"};
    for (const auto& row : table.cells) {
        for (std::size_t q = 0; q < kRows.size(); ++q) {
            std::vector<std::string> fields{fmt(row.front().r2), kRows[q]};
            for (const auto& cell : row) {
                const double v = q == 0 ? cell.true_value
                               : q == 1 ? cell.mean_mle
                               : q == 2 ? cell.mean_ue
                               : q == 3 ? cell.mse_mle
                                        : cell.mse_ue;
                fields.push_back(fmt(v));
            }
            doc.rows.push_back(std::move(fields));
        }
    }
    return doc;
}

}  // namespace georel::cli
