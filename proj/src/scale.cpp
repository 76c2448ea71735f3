#include "dea/scale.hpp"

#include <cmath>
#include <string>
#include <unordered_map>

#include "dea/errors.hpp"

namespace dea {

std::string to_string(RtsStatus status) {
  switch (status) {
    case RtsStatus::Increasing:
      return "increasing";
    case RtsStatus::Constant:
      return "constant";
    case RtsStatus::Decreasing:
      return "decreasing";
  }
  return "unknown";
}

std::string to_string(ScaleClass scale_class) {
  switch (scale_class) {
    case ScaleClass::SuperOptimal:
      return "super-optimal";
    case ScaleClass::Optimal:
      return "optimal";
    case ScaleClass::SubOptimal:
      return "sub-optimal";
  }
  return "unknown";
}

RtsStatus parse_rts_status(std::string_view text) {
  while (!text.empty() && text.back() == '.') text.remove_suffix(1);
  if (text == "increasing" || text == "incr") return RtsStatus::Increasing;
  if (text == "constant" || text == "const") return RtsStatus::Constant;
  if (text == "decreasing" || text == "decr") return RtsStatus::Decreasing;
  throw ValidationError("unrecognized returns-to-scale status '" +
                        std::string(text) + "'");
}

double scale_efficiency(double theta_crs, double theta_vrs) {
  if (!(theta_crs > 0.0))
    throw ValidationError("scale efficiency needs a positive CRS score, got " +
                          std::to_string(theta_crs));
  if (!(theta_vrs > 0.0))
    throw ValidationError("scale efficiency needs a positive VRS score, got " +
                          std::to_string(theta_vrs));
  if (theta_crs > theta_vrs + 1e-7)
    throw InternalError("CRS score " + std::to_string(theta_crs) +
                        " exceeds VRS score " + std::to_string(theta_vrs) +
                        " beyond tolerance; scores are inconsistent");
  const double ratio = theta_crs / theta_vrs;
  if (ratio > 1.0) return 1.0;  // only float dust can land here
  return ratio;
}

RtsStatus classify_rts(double sum_lambda, double tol) {
  if (sum_lambda < 0.0)
    throw ValidationError("sum of peer weights cannot be negative, got " +
                          std::to_string(sum_lambda));
  if (sum_lambda > 1.0 + tol) return RtsStatus::Decreasing;
  if (sum_lambda < 1.0 - tol) return RtsStatus::Increasing;
  return RtsStatus::Constant;
}

ScaleClass scale_class_for(RtsStatus status) {
  switch (status) {
    case RtsStatus::Increasing:
      return ScaleClass::SuperOptimal;
    case RtsStatus::Constant:
      return ScaleClass::Optimal;
    case RtsStatus::Decreasing:
      return ScaleClass::SubOptimal;
  }
  return ScaleClass::Optimal;
}

std::vector<ScaleRecord> scale_records(
    const std::vector<EfficiencyRecord>& records, double rts_tol) {
  std::vector<ScaleRecord> out;
  out.reserve(records.size());
  for (const auto& rec : records) {
    if (!rec.theta_crs || !rec.theta_vrs)
      throw ValidationError(
          "scale analysis needs both CRS and VRS scores; rerun with both "
          "models enabled (DMU '" +
          rec.dmu_id + "' is missing one)");
    if (rec.degenerate) continue;  // theta_crs = 0: SE undefined
    ScaleRecord sr;
    sr.dmu_id = rec.dmu_id;
    sr.se = scale_efficiency(*rec.theta_crs, *rec.theta_vrs);
    sr.rts = classify_rts(rec.sum_lambda_crs.value(), rts_tol);
    sr.scale_class = scale_class_for(sr.rts);
    out.push_back(std::move(sr));
  }
  return out;
}

SlackSummary excess_input_summary(const std::vector<EfficiencyRecord>& records,
                                  const Dataset& dataset,
                                  std::string_view group, double slack_tol) {
  if (dataset.n_inputs() != 1)
    throw UnsupportedError(
        "the excess-input summary is defined for single-input datasets; with " +
        std::to_string(dataset.n_inputs()) +
        " inputs, read the per-input slack vectors on the records instead");

  std::unordered_map<std::string, const Dmu*> by_id;
  for (const auto& dmu : dataset.dmus) by_id.emplace(dmu.id, &dmu);

  SlackSummary summary;
  summary.group = std::string(group);
  double slack_total = 0.0;
  double input_total = 0.0;
  for (const auto& rec : records) {
    if (rec.group != group) continue;
    const auto found = by_id.find(rec.dmu_id);
    if (found == by_id.end())
      throw ValidationError("record for DMU '" + rec.dmu_id +
                            "' has no matching dataset row");
    if (rec.input_slacks.empty() || rec.input_slacks[0] <= slack_tol) continue;
    slack_total += rec.input_slacks[0];
    input_total += found->second->inputs[0];
    ++summary.member_count;
  }
  if (summary.member_count > 0) {
    const double count = static_cast<double>(summary.member_count);
    summary.mean_slack = slack_total / count;
    summary.mean_input_use = input_total / count;
    summary.excess_input_pct =
        100.0 * summary.mean_slack / summary.mean_input_use;
  }
  return summary;
}

ReallocationPlan reallocation_candidates(
    const std::vector<ScaleRecord>& records) {
  ReallocationPlan plan;
  for (const auto& rec : records) {
    if (rec.scale_class == ScaleClass::SubOptimal)
      plan.from.push_back(rec.dmu_id);
    else if (rec.scale_class == ScaleClass::SuperOptimal)
      plan.to.push_back(rec.dmu_id);
  }
  return plan;
}

}  // namespace dea
