#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "georel/simlab.hpp"

namespace georel::cli {

/// Exit codes shared by every command.
enum ExitCode : int { kOk = 0, kInputError = 2, kDomainError = 3 };

// ---------------------------------------------------------------------------
// Sample files
//
// Whitespace separated integers, '#' starts a comment. A censored file starts
// with a header line "c=<int> n=<int>" and lists the observed failures.

struct SampleFile {
    std::optional<std::int64_t> c;
    std::optional<std::int64_t> n;
    std::vector<std::int64_t> values;

    bool censored() const noexcept { return c.has_value(); }
};

/// Throws ParseError (1-based line/column) on malformed input or an empty sample.
SampleFile parse_sample_text(std::string_view text);
SampleFile read_sample_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// CSV: '.' decimal point, ',' separator, '#' metadata lines, one header row.

/// Shortest text that parses back to the same double, at most 17 significant digits.
std::string format_number(double value);
double parse_number(std::string_view text);

struct CsvDocument {
    std::vector<std::string> metadata;  // without the leading "# "
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string render() const;
    static CsvDocument parse(std::string_view text);
};

// ---------------------------------------------------------------------------
// Tables

struct TableOptions {
    std::optional<std::uint64_t> reps;  // default: the published replication count
    std::uint64_t seed = 42;
    unsigned threads = 0;
    std::uint64_t batch_size = 100;  // Tables 7-8 only
};

bool is_table_id(int id) noexcept;
std::uint64_t default_reps(int id);

/// Regenerates table `id` (1..19). Throws std::out_of_range for other ids.
CsvDocument make_table(int id, const TableOptions& options);

// Renderers shared by `table` and `simulate`.
CsvDocument render_reliability_rows(const std::vector<simlab::ReliabilityRow>& rows, std::string_view grid_name);
CsvDocument render_ci_rows(const std::vector<simlab::CiRow>& rows);
CsvDocument render_stress_ci_rows(const std::vector<simlab::StressCiRow>& rows);
CsvDocument render_zero_covariance(const simlab::ZeroCovTable& table, const simlab::ZeroCovConfig& config,
                                   std::string_view column_name);
CsvDocument render_censoring_efficiency(const simlab::CensoringEfficiencyTable& table);
CsvDocument render_stress_mse(const simlab::StressMseTable& table);

// ---------------------------------------------------------------------------
// Study spec files (JSON), schema in docs/study-spec.schema.json

/// Every schema violation, in document order; empty when valid.
std::vector<std::string> validate_study_spec(const nlohmann::json& spec);

struct StudyResult {
    CsvDocument csv;
    nlohmann::json manifest;
};

/// Runs a validated spec. Throws std::invalid_argument listing violations otherwise.
StudyResult run_study_spec(const nlohmann::json& spec, unsigned threads);

std::string version_string();

// ---------------------------------------------------------------------------

/// Full command-line entry point: estimate | table | hist | simulate.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace georel::cli
