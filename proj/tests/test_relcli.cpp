#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "georel/error.hpp"
#include "georel/relcli.hpp"

using namespace georel;
using namespace georel::cli;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "georel");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() / ("georel-test-" + std::to_string(std::random_device{}()));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }

    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path_ / name) << text;
        return (path_ / name).string();
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// sample files

TEST(SampleText, CompleteWithComments) {
    const auto s = parse_sample_text("# lifetimes\n3 5   # two units\n\n 7\n");
    EXPECT_FALSE(s.censored());
    EXPECT_EQ(s.values, (std::vector<std::int64_t>{3, 5, 7}));
}

TEST(SampleText, CensoredHeader) {
    const auto s = parse_sample_text("c=5 n=3\n2 4\n");
    ASSERT_TRUE(s.censored());
    EXPECT_EQ(*s.c, 5);
    EXPECT_EQ(*s.n, 3);
    EXPECT_EQ(s.values, (std::vector<std::int64_t>{2, 4}));
    EXPECT_TRUE(parse_sample_text("c=5 n=3\n").values.empty());
}

TEST(SampleText, ErrorsCarryPosition) {
    try {
        parse_sample_text("3 5\n4 x7\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2);
        EXPECT_EQ(e.column(), 3);
    }
    EXPECT_THROW(parse_sample_text(""), ParseError);
    EXPECT_THROW(parse_sample_text("# only a comment\n"), ParseError);
    EXPECT_THROW(parse_sample_text("3 -1"), ParseError);
    EXPECT_THROW(parse_sample_text("c=5 n=2\n1 2 3\n"), ParseError);
    EXPECT_THROW(parse_sample_text("c=5 n=3\n6\n"), ParseError);
    EXPECT_THROW(parse_sample_text("c=5 q=3\n1\n"), ParseError);
}

// ---------------------------------------------------------------------------
// CSV

TEST(Csv, NumbersRoundTripExactly) {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 100000; ++i) {
        const double x = unit(gen) * std::pow(10.0, static_cast<int>(gen() % 40) - 30);
        const auto text = format_number(x);
        ASSERT_EQ(parse_number(text), x) << text;
        ASSERT_LE(text.size(), 24u);
    }
    EXPECT_TRUE(std::isnan(parse_number(format_number(std::nan("")))));
    EXPECT_EQ(format_number(0.5), "0.5");
    EXPECT_THROW(parse_number("1,5"), std::invalid_argument);
}

TEST(Csv, DocumentRoundTrip) {
    CsvDocument doc;
    doc.metadata = {"config: a=1", "second line"};
    doc.header = {"x", "y"};
    doc.rows = {{"1", "0.25"}, {"2", "1e-300"}};
    const auto again = CsvDocument::parse(doc.render());
    EXPECT_EQ(again.metadata, doc.metadata);
    EXPECT_EQ(again.header, doc.header);
    EXPECT_EQ(again.rows, doc.rows);
    EXPECT_EQ(again.render(), doc.render());
}

TEST(Csv, RenderedReliabilityRowsReparseToSameValues) {
    const std::vector<simlab::ReliabilityScenario> grid{{GeoParams(15, 0.8), 20, 25, 25, SystemSpec(2, 8)}};
    const auto rows = simlab::run_reliability_study(grid, {500, 1, 1});
    const auto doc = CsvDocument::parse(render_reliability_rows(rows, "t").render());
    ASSERT_EQ(doc.rows.size(), 1u);
    const auto& r = doc.rows[0];
    const auto& c = rows[0].component;
    EXPECT_EQ(parse_number(r[1]), c.true_value);
    EXPECT_EQ(parse_number(r[2]), c.per_estimator.at("mle").mean);
    EXPECT_EQ(parse_number(r[3]), c.per_estimator.at("mle-censored").mean);
    EXPECT_EQ(parse_number(r[4]), c.efficiencies.at(simlab::kCompleteVsCensored));
    EXPECT_EQ(parse_number(r[5]), c.per_estimator.at("ue").mean);
    EXPECT_EQ(parse_number(r[6]), c.efficiencies.at(simlab::kUeVsMle));
    EXPECT_EQ(parse_number(r[12]), rows[0].system.efficiencies.at(simlab::kUeVsMle));
}

// ---------------------------------------------------------------------------
// estimate

TEST(CliEstimate, Examples) {
    TempDir dir;
    const auto f = dir.write("s.txt", "3 5\n");
    auto r = invoke({"estimate", f, "--target", "rt", "--t", "4", "--method", "mle"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto doc = CsvDocument::parse(r.out);
    ASSERT_EQ(doc.rows.size(), 1u);
    EXPECT_EQ(parse_number(doc.rows[0][2]), 0.5);

    r = invoke({"estimate", f, "--target", "rt", "--t", "3", "--method", "ue"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(parse_number(CsvDocument::parse(r.out).rows[0][2]), 1.0);

    r = invoke({"estimate", f, "--t", "4", "--json"});
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.size(), 3u);  // mle, ue, naive
}

TEST(CliEstimate, StressStrengthAndCensoring) {
    TempDir dir;
    const auto x = dir.write("x.txt", "0 1 1\n");
    const auto y = dir.write("y.txt", "2 2\n");
    auto r = invoke({"estimate", x, "--target", "r", "--strength", y, "--method", "exact-rb"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(parse_number(CsvDocument::parse(r.out).rows[0][2]), 1.0);

    const auto c = dir.write("c.txt", "c=5 n=3\n2 4\n");
    r = invoke({"estimate", c, "--t", "4"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = CsvDocument::parse(r.out);
    ASSERT_EQ(doc.rows.size(), 1u);
    EXPECT_EQ(doc.rows[0][0], "mle-censored");
    EXPECT_EQ(parse_number(doc.rows[0][2]), 0.5625);
}

TEST(CliEstimate, ExitCodes) {
    TempDir dir;
    const auto empty = dir.write("e.txt", "");
    auto r = invoke({"estimate", empty, "--t", "3"});
    EXPECT_EQ(r.code, 2);

    const auto bad = dir.write("b.txt", "3 5\n4 x\n");
    r = invoke({"estimate", bad, "--t", "3"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("line 2, column 3"), std::string::npos) << r.err;

    const auto none = dir.write("n.txt", "c=2 n=3\n");
    r = invoke({"estimate", none, "--t", "3"});
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("no failures observed"), std::string::npos);

    const auto two = dir.write("t.txt", "3 5\n");
    r = invoke({"estimate", two, "--target", "rs", "--t", "4", "--k", "2", "--m", "8", "--method", "ue"});
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("2 <= m < n"), std::string::npos);

    EXPECT_EQ(invoke({"estimate", two, "--target", "rt"}).code, 2);          // missing --t
    EXPECT_EQ(invoke({"estimate", two, "--t", "3", "--method", "x"}).code, 2);
    EXPECT_EQ(invoke({"estimate", dir.file("missing.txt"), "--t", "3"}).code, 2);
    EXPECT_EQ(invoke({"frobnicate"}).code, 2);
    EXPECT_EQ(invoke({}).code, 2);
}

// ---------------------------------------------------------------------------
// table

TEST(CliTable, Table1Layout) {
    const auto r = invoke({"table", "--id", "1", "--reps", "200", "--seed", "42"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = CsvDocument::parse(r.out);
    ASSERT_EQ(doc.rows.size(), 11u);
    EXPECT_EQ(doc.header.size(), 13u);
    EXPECT_EQ(doc.rows.front()[0], "16");
    EXPECT_EQ(doc.rows.back()[0], "45");
    bool has_seed = false, has_direction = false;
    for (const auto& m : doc.metadata) {
        has_seed |= m.find("seed=42") != std::string::npos;
        has_direction |= m.find("col6=100*MSE(MLE)/MSE(UE)") != std::string::npos;
    }
    EXPECT_TRUE(has_seed);
    EXPECT_TRUE(has_direction);
}

TEST(CliTable, Table15Structure) {
    const auto r = invoke({"table", "--id", "15", "--reps", "50"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = CsvDocument::parse(r.out);
    ASSERT_EQ(doc.rows.size(), 20u);  // 4 r2 blocks x 5 quantities
    EXPECT_EQ(doc.header.size(), 6u);  // r2, quantity, 4 r1 columns
    EXPECT_EQ(doc.rows[0][1], "true");
    EXPECT_EQ(parse_number(doc.rows[0][3]), stress_strength({GeoParams(10, 0.5), GeoParams(5, 0.5)}));
}

TEST(CliTable, EveryTableRunsAtSmallScale) {
    for (int id = 1; id <= 19; ++id) {
        const auto r = invoke({"table", "--id", std::to_string(id), "--reps", "20", "--batch-size", "20"});
        ASSERT_EQ(r.code, 0) << id << ": " << r.err;
        EXPECT_FALSE(CsvDocument::parse(r.out).rows.empty()) << id;
    }
}

TEST(CliTable, SeedDeterminesBytes) {
    const auto a = invoke({"table", "--id", "9", "--reps", "300", "--seed", "5"});
    const auto b = invoke({"table", "--id", "9", "--reps", "300", "--seed", "5"});
    const auto c = invoke({"table", "--id", "9", "--reps", "300", "--seed", "6"});
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out, c.out);
}

TEST(CliTable, UnknownId) {
    EXPECT_EQ(invoke({"table", "--id", "99"}).code, 2);
    EXPECT_EQ(invoke({"table", "--id", "0"}).code, 2);
    EXPECT_EQ(invoke({"table", "--id", "3", "--reps", "0"}).code, 2);
}

// ---------------------------------------------------------------------------
// hist

TEST(CliHist, CountsConserveReps) {
    auto r = invoke({"hist", "--reps", "2000"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto doc = CsvDocument::parse(r.out);
    std::uint64_t total = 0;
    for (const auto& row : doc.rows) total += std::stoull(row[2]);
    EXPECT_EQ(total, 2000u);

    r = invoke({"hist", "--reps", "500", "--bins", "1"});
    ASSERT_EQ(r.code, 0);
    doc = CsvDocument::parse(r.out);
    ASSERT_EQ(doc.rows.size(), 1u);
    EXPECT_EQ(doc.rows[0][2], "500");
}

TEST(CliHist, InvalidFlags) {
    EXPECT_EQ(invoke({"hist", "--bins", "0"}).code, 2);
    EXPECT_EQ(invoke({"hist", "--theta", "1.5"}).code, 2);
    EXPECT_EQ(invoke({"hist", "--n", "abc"}).code, 2);
}

// ---------------------------------------------------------------------------
// simulate

TEST(CliSimulate, Table4SpecAndManifest) {
    TempDir dir;
    const auto spec = dir.write("t4.json", R"({
        "study": "reliability",
        "params": {"n": 20, "r": 15, "c": 25, "theta": 0.8, "t": 25, "k": 2, "m": 8},
        "vary": {"n": [10, 15, 20, 25, 50, 100, 200]},
        "reps": 200, "seed": 3})");
    const auto out = dir.file("t4.csv");
    auto r = invoke({"simulate", spec, "-o", out});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = CsvDocument::parse(slurp(out));
    ASSERT_EQ(doc.rows.size(), 7u);
    EXPECT_EQ(doc.header[0], "n");
    EXPECT_EQ(doc.rows.back()[0], "200");

    const auto manifest = nlohmann::json::parse(slurp(out + ".manifest.json"));
    EXPECT_EQ(manifest.at("seed"), 3);
    EXPECT_TRUE(manifest.contains("version"));
    EXPECT_TRUE(manifest.contains("wall_time_seconds"));
    EXPECT_EQ(manifest.at("config").at("study"), "reliability");

    const auto again = dir.file("t4b.csv");
    ASSERT_EQ(invoke({"simulate", spec, "-o", again}).code, 0);
    EXPECT_EQ(slurp(out), slurp(again));
}

TEST(CliSimulate, SchemaViolationsListedExhaustively) {
    TempDir dir;
    const auto spec = dir.write("bad.json", R"({"study": "reliability", "reps": 0,
        "params": {"n": 20, "theta": 1.5, "bogus": 1}, "extra": true})");
    const auto r = invoke({"simulate", spec});
    EXPECT_EQ(r.code, 2);
    for (const char* needle : {"reps must be", "theta must lie", "params.bogus", "\"extra\"", "params.r is required",
                               "params.t is required"})
        EXPECT_NE(r.err.find(needle), std::string::npos) << needle << "\n" << r.err;

    EXPECT_EQ(invoke({"simulate", dir.write("notjson.json", "{")}).code, 2);
}

TEST(StudySpec, ValidationCases) {
    using nlohmann::json;
    EXPECT_TRUE(validate_study_spec(json{{"study", "table"}, {"id", 3}}).empty());
    EXPECT_FALSE(validate_study_spec(json{{"study", "table"}, {"id", 30}}).empty());
    EXPECT_FALSE(validate_study_spec(json::array()).empty());
    const json zc = json::parse(R"({"study": "zero-covariance", "reps": 5,
        "params": {"n": 4, "r": 1, "theta": 0.5, "coefficients": [[1, 1, -1, 0]]}, "vary": {"t": [2, 3]}})");
    const auto errors = validate_study_spec(zc);
    ASSERT_EQ(errors.size(), 1u);
    EXPECT_NE(errors[0].find("sum to 0"), std::string::npos);
}

TEST(StudySpec, EveryStudyKindRuns) {
    using nlohmann::json;
    const char* specs[] = {
        R"({"study": "ci", "reps": 50, "params": {"n": 20, "r": 15, "theta": 0.8, "t": 25}, "vary": {"theta": [0.8, 0.9]}})",
        R"({"study": "stress-ci", "reps": 20, "params": {"n1": 10, "n2": 10, "r1": 5, "r2": 5, "theta1": 0.9, "theta2": 0.9}})",
        R"({"study": "zero-covariance", "reps": 5, "params": {"n": 4, "r": 1, "theta": 0.5, "coefficients": [[1, 1, -1, -1]]}, "vary": {"t": [2, 3]}})",
        R"({"study": "censoring-efficiency", "reps": 20, "params": {"n1": 10, "n2": 10, "r1": 10, "r2": 5, "theta1": 0.7, "theta2": 0.8, "c1": [15], "c2": [20, 25]}})",
        R"({"study": "stress-mse", "reps": 20, "params": {"n1": 5, "n2": 5, "theta1": 0.5, "theta2": 0.5, "r1": [5], "r2": [5, 10], "variant": "as-published"}})",
        R"({"study": "table", "id": 2, "reps": 20})",
    };
    for (const char* text : specs) {
        const auto spec = json::parse(text);
        ASSERT_TRUE(validate_study_spec(spec).empty()) << text;
        const auto result = run_study_spec(spec, 1);
        EXPECT_FALSE(result.csv.rows.empty()) << text;
        EXPECT_EQ(result.manifest.at("config"), spec);
    }
}
