#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dea/dataset.hpp"
#include "dea/dea.hpp"
#include "dea/scale.hpp"

namespace dea {

inline constexpr std::string_view kReportSchemaVersion = "1";

// Distribution of efficiency scores over fixed buckets. The intervals are
// lower-exclusive and upper-inclusive — (0,0.5], (0.5,0.6], (0.6,0.7],
// (0.7,0.8], (0.8,0.9], (0.9,1.0) — plus a dedicated bucket for scores
// within 1e-6 of exactly 1.
struct FrequencyTable {
  static constexpr std::array<double, 7> kBinEdges = {0.0, 0.5, 0.6, 0.7,
                                                      0.8, 0.9, 1.0};
  std::string group;
  std::array<std::size_t, 6> interval_counts{};
  std::size_t efficient_count = 0;
  double mean = 0.0;
  double std_dev = 0.0;
  double min = 0.0;
  std::size_t scored_count = 0;  // always the sum of all buckets
};

// Bucket the scores; scores must lie in (0, 1 + 1e-6].
[[nodiscard]] FrequencyTable frequency_table(const std::vector<double>& scores,
                                             std::string_view group);

// Per-variable mean/max/min over one group's optimal-class members
// (constant returns to scale). Empty variables when the class is empty.
struct BenchmarkProfile {
  std::string group;
  std::size_t member_count = 0;
  std::vector<VariableStats> variables;
};

[[nodiscard]] BenchmarkProfile benchmark_profile(
    const std::vector<EfficiencyRecord>& records,
    const std::vector<ScaleRecord>& scale, const Dataset& dataset,
    std::string_view group);

// Member count and mean of the single input per scale class, plus the
// group's mean scale efficiency.
struct RtsSalaryRow {
  std::string group;
  double mean_se = 0.0;
  std::array<std::size_t, 3> counts{};     // super-optimal, optimal, sub-optimal
  std::array<double, 3> mean_inputs{};     // 0 when the class is empty
};

struct RtsSalaryTable {
  std::vector<RtsSalaryRow> rows;  // one per group, plus a final "all" row
};

// One evaluated DMU as reported: the efficiency record plus its scale
// record when one is defined (both models computed and not degenerate).
struct DmuReportRow {
  EfficiencyRecord efficiency;
  std::optional<ScaleRecord> scale;
};

// Everything derived from one evaluation run. The derived tables that need
// CRS lambdas (frequency, RTS/salary, benchmark, reallocation) are present
// only when the CRS model was computed; the salary-style tables additionally
// require a single-input dataset.
struct AnalysisReport {
  std::string scenario;  // "per-group" or "merged"
  std::vector<std::string> input_names;   // copied from the dataset so the
  std::vector<std::string> output_names;  // report is self-contained
  std::vector<DmuReportRow> rows;
  std::vector<FrequencyTable> frequency_tables;        // one per group
  std::optional<RtsSalaryTable> rts_salary_table;      // single input only
  std::vector<SlackSummary> slack_summaries;           // single input only
  std::vector<BenchmarkProfile> benchmark_profiles;    // one per group
  ReallocationPlan reallocation;
};

struct ExpansionMetadata {
  std::uint64_t seed = 0;
  std::size_t virtual_count_per_group = 0;
  std::string id_prefix;
  std::string prng;  // pinned algorithm identifier
};

struct ReportMetadata {
  std::string input_digest;  // "fnv1a64:" + 16 hex digits of the input bytes
  std::string models;        // "ccr", "bcc", or "both"
  std::string scenario;      // "per-group", "merged", or "both"
  SolverTolerances solver;
  double efficient_tol = 1e-6;
  double peer_tol = 1e-6;
  double rts_tol = 1e-6;
  std::optional<ExpansionMetadata> expansion;  // when Monte Carlo ran inline
  std::optional<std::string> timestamp;        // opt-in; breaks byte-stability
};

// Per-DMU score drift between scenarios (merged minus per-group); emitted
// when both scenarios run in one invocation.
struct ScenarioDelta {
  std::string dmu_id;
  std::string group;
  std::optional<double> delta_crs;
  std::optional<double> delta_vrs;
};

struct ReportDocument {
  std::string schema_version = std::string(kReportSchemaVersion);
  ReportMetadata metadata;
  std::vector<AnalysisReport> reports;
  std::vector<ScenarioDelta> deltas;
};

struct ReportOptions {
  double rts_tol = 1e-6;
  double slack_tol = 1e-6;
};

// Assemble every derivable table from the records of one evaluation run.
[[nodiscard]] AnalysisReport build_analysis_report(
    const Dataset& dataset, const std::vector<EfficiencyRecord>& records,
    std::string_view scenario, const ReportOptions& options = {});

enum class ReportFormat { Json, Csv, Markdown };

[[nodiscard]] ReportFormat parse_report_format(std::string_view text);

// JSON carries full precision and is byte-stable under render -> parse ->
// render. CSV and Markdown round scores, scale efficiency and peer-weight
// sums to two decimals (half-up); they are presentation formats and cannot
// be parsed back.
[[nodiscard]] std::string render(const ReportDocument& document,
                                 ReportFormat format);

[[nodiscard]] ReportDocument parse_json_report(std::string_view bytes);

// Table-1-style summary statistics as a standalone document.
[[nodiscard]] std::string render_summary(const std::vector<GroupStats>& stats,
                                         std::string_view input_digest,
                                         ReportFormat format);

// Half-up rounding to two decimals, the display convention for scores.
[[nodiscard]] double round2(double value);

// Fixed-point two-decimal formatting of round2(value).
[[nodiscard]] std::string format2(double value);

}  // namespace dea
