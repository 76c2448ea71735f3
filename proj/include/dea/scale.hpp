#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dea/dataset.hpp"
#include "dea/dea.hpp"

namespace dea {

enum class RtsStatus { Increasing, Constant, Decreasing };

// Fixed image of RtsStatus: units on the increasing branch are below their
// most productive scale (super-optimal resource targets), constant ones sit
// on it, decreasing ones are past it.
enum class ScaleClass { SuperOptimal, Optimal, SubOptimal };

[[nodiscard]] std::string to_string(RtsStatus status);
[[nodiscard]] std::string to_string(ScaleClass scale_class);

// Accepts the long names ("increasing") and the usual table abbreviations
// ("incr", "incr."). Throws ValidationError on anything else.
[[nodiscard]] RtsStatus parse_rts_status(std::string_view text);

struct ScaleRecord {
  std::string dmu_id;
  double se = 0.0;  // theta_crs / theta_vrs, in (0, 1]
  RtsStatus rts = RtsStatus::Constant;
  ScaleClass scale_class = ScaleClass::Optimal;
};

// Single-input excess summary over the DMUs of one group that carry a
// positive input slack.
struct SlackSummary {
  std::string group;
  double mean_slack = 0.0;
  double mean_input_use = 0.0;
  double excess_input_pct = 0.0;  // 100 * mean_slack / mean_input_use
  std::size_t member_count = 0;   // DMUs with slack above tolerance
};

// Ratio of aggregate to technical efficiency; exactly 1 at the most
// productive scale size. Clamps at most 1e-7 of float excess above 1.
[[nodiscard]] double scale_efficiency(double theta_crs, double theta_vrs);

// Banker-rule classification from the CCR optimum's peer-weight total:
// above 1 + tol decreasing, below 1 - tol increasing, else constant.
// Use the default tight tolerance for freshly computed values and a loose
// 0.005 for data rounded to two decimals.
[[nodiscard]] RtsStatus classify_rts(double sum_lambda, double tol = 1e-6);

[[nodiscard]] ScaleClass scale_class_for(RtsStatus status);

// Scale record per evaluated DMU. Requires records carrying both scores;
// degenerate DMUs (theta_crs pinned at 0) are skipped because their scale
// efficiency is undefined.
[[nodiscard]] std::vector<ScaleRecord> scale_records(
    const std::vector<EfficiencyRecord>& records, double rts_tol = 1e-6);

// Mean slack, mean input use and the excess percentage for one group,
// averaged over its positive-slack DMUs. Only defined for single-input
// datasets; multi-input callers get an UnsupportedError pointing them to
// the per-input slack vectors on the records.
[[nodiscard]] SlackSummary excess_input_summary(
    const std::vector<EfficiencyRecord>& records, const Dataset& dataset,
    std::string_view group, double slack_tol = 1e-6);

// Advisory resource-transfer pairing: sources are the sub-optimal
// (decreasing-RTS) DMUs, sinks the super-optimal (increasing-RTS) ones.
struct ReallocationPlan {
  std::vector<std::string> from;
  std::vector<std::string> to;
};

[[nodiscard]] ReallocationPlan reallocation_candidates(
    const std::vector<ScaleRecord>& records);

}  // namespace dea
