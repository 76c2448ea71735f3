#include "dea/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "dea/errors.hpp"

namespace dea {

namespace {

using ojson = nlohmann::ordered_json;

std::string shortest(double value) {
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

}  // namespace

double round2(double value) {
  return static_cast<double>(std::llround(value * 100.0)) / 100.0;
}

std::string format2(double value) {
  const long long cents = std::llround(value * 100.0);
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%lld.%02lld",
                cents / 100, std::llabs(cents % 100));
  // Keep the sign for values in (-1, 0), where cents/100 truncates to 0.
  if (cents < 0 && cents > -100) return std::string("-") + buffer;
  return buffer;
}

FrequencyTable frequency_table(const std::vector<double>& scores,
                               std::string_view group) {
  FrequencyTable table;
  table.group = std::string(group);
  table.scored_count = scores.size();
  if (scores.empty()) return table;

  double sum = 0.0;
  table.min = std::numeric_limits<double>::infinity();
  for (const double s : scores) {
    if (!(s > 0.0) || s > 1.0 + 1e-6)
      throw ValidationError("efficiency score " + shortest(s) +
                            " is outside (0, 1]");
    if (std::abs(s - 1.0) <= 1e-6) {
      ++table.efficient_count;
    } else if (s <= 0.5) {
      ++table.interval_counts[0];
    } else if (s <= 0.6) {
      ++table.interval_counts[1];
    } else if (s <= 0.7) {
      ++table.interval_counts[2];
    } else if (s <= 0.8) {
      ++table.interval_counts[3];
    } else if (s <= 0.9) {
      ++table.interval_counts[4];
    } else {
      ++table.interval_counts[5];
    }
    sum += s;
    table.min = std::min(table.min, s);
  }
  table.mean = sum / static_cast<double>(scores.size());
  if (scores.size() > 1) {
    double sq = 0.0;
    for (const double s : scores) sq += (s - table.mean) * (s - table.mean);
    table.std_dev = std::sqrt(sq / static_cast<double>(scores.size() - 1));
  }
  return table;
}

BenchmarkProfile benchmark_profile(const std::vector<EfficiencyRecord>& records,
                                   const std::vector<ScaleRecord>& scale,
                                   const Dataset& dataset,
                                   std::string_view group) {
  std::unordered_map<std::string, const ScaleRecord*> scale_by_id;
  for (const auto& rec : scale) scale_by_id.emplace(rec.dmu_id, &rec);
  std::unordered_map<std::string, const Dmu*> dmu_by_id;
  for (const auto& dmu : dataset.dmus) dmu_by_id.emplace(dmu.id, &dmu);

  std::vector<const Dmu*> members;
  for (const auto& rec : records) {
    if (rec.group != group) continue;
    const auto s = scale_by_id.find(rec.dmu_id);
    if (s == scale_by_id.end() ||
        s->second->scale_class != ScaleClass::Optimal)
      continue;
    const auto d = dmu_by_id.find(rec.dmu_id);
    if (d == dmu_by_id.end())
      throw ValidationError("record for DMU '" + rec.dmu_id +
                            "' has no matching dataset row");
    members.push_back(d->second);
  }

  BenchmarkProfile profile;
  profile.group = std::string(group);
  profile.member_count = members.size();
  if (members.empty()) return profile;

  const std::size_t n = dataset.n_inputs();
  const std::size_t total_vars = n + dataset.m_outputs();
  for (std::size_t v = 0; v < total_vars; ++v) {
    VariableStats vs;
    vs.variable =
        v < n ? dataset.input_names[v] : dataset.output_names[v - n];
    double sum = 0.0;
    vs.min = std::numeric_limits<double>::infinity();
    vs.max = -std::numeric_limits<double>::infinity();
    for (const Dmu* dmu : members) {
      const double value =
          v < n ? dmu->inputs[v] : dmu->outputs[v - n];
      sum += value;
      vs.min = std::min(vs.min, value);
      vs.max = std::max(vs.max, value);
    }
    vs.mean = sum / static_cast<double>(members.size());
    vs.std_dev = 0.0;  // not part of this profile
    profile.variables.push_back(std::move(vs));
  }
  return profile;
}

namespace {

std::size_t class_index(ScaleClass c) {
  switch (c) {
    case ScaleClass::SuperOptimal:
      return 0;
    case ScaleClass::Optimal:
      return 1;
    case ScaleClass::SubOptimal:
      return 2;
  }
  return 1;
}

RtsSalaryRow rts_salary_row(
    const std::vector<const EfficiencyRecord*>& records,
    const std::unordered_map<std::string, const ScaleRecord*>& scale_by_id,
    const std::unordered_map<std::string, const Dmu*>& dmu_by_id,
    std::string_view label) {
  RtsSalaryRow row;
  row.group = std::string(label);
  std::array<double, 3> input_totals{};
  double se_total = 0.0;
  std::size_t se_count = 0;
  for (const auto* rec : records) {
    const auto s = scale_by_id.find(rec->dmu_id);
    if (s == scale_by_id.end()) continue;  // degenerate DMU: no scale record
    const std::size_t c = class_index(s->second->scale_class);
    ++row.counts[c];
    input_totals[c] += dmu_by_id.at(rec->dmu_id)->inputs[0];
    se_total += s->second->se;
    ++se_count;
  }
  for (std::size_t c = 0; c < 3; ++c)
    if (row.counts[c] > 0)
      row.mean_inputs[c] = input_totals[c] / static_cast<double>(row.counts[c]);
  if (se_count > 0) row.mean_se = se_total / static_cast<double>(se_count);
  return row;
}

}  // namespace

AnalysisReport build_analysis_report(const Dataset& dataset,
                                     const std::vector<EfficiencyRecord>& records,
                                     std::string_view scenario,
                                     const ReportOptions& options) {
  dataset.validate();
  AnalysisReport report;
  report.scenario = std::string(scenario);
  report.input_names = dataset.input_names;
  report.output_names = dataset.output_names;

  const bool crs_present = std::all_of(
      records.begin(), records.end(),
      [](const EfficiencyRecord& r) { return r.theta_crs.has_value(); });
  const bool both_models =
      crs_present && std::all_of(records.begin(), records.end(),
                                 [](const EfficiencyRecord& r) {
                                   return r.theta_vrs.has_value();
                                 });

  std::vector<ScaleRecord> scales;
  if (both_models) scales = scale_records(records, options.rts_tol);
  std::unordered_map<std::string, const ScaleRecord*> scale_by_id;
  for (const auto& rec : scales) scale_by_id.emplace(rec.dmu_id, &rec);
  std::unordered_map<std::string, const Dmu*> dmu_by_id;
  for (const auto& dmu : dataset.dmus) dmu_by_id.emplace(dmu.id, &dmu);

  for (const auto& rec : records) {
    DmuReportRow row;
    row.efficiency = rec;
    const auto s = scale_by_id.find(rec.dmu_id);
    if (s != scale_by_id.end()) row.scale = *s->second;
    report.rows.push_back(std::move(row));
  }

  const auto groups = dataset.groups();

  if (crs_present) {
    for (const auto& label : groups) {
      std::vector<double> scores;
      for (const auto& rec : records)
        if (rec.group == label && !rec.degenerate)
          scores.push_back(*rec.theta_crs);
      report.frequency_tables.push_back(frequency_table(scores, label));
    }
  }

  if (both_models && dataset.n_inputs() == 1) {
    RtsSalaryTable table;
    std::vector<const EfficiencyRecord*> everyone;
    for (const auto& label : groups) {
      std::vector<const EfficiencyRecord*> members;
      for (const auto& rec : records)
        if (rec.group == label) members.push_back(&rec);
      table.rows.push_back(
          rts_salary_row(members, scale_by_id, dmu_by_id, label));
    }
    for (const auto& rec : records) everyone.push_back(&rec);
    table.rows.push_back(rts_salary_row(everyone, scale_by_id, dmu_by_id, "all"));
    report.rts_salary_table = std::move(table);
  }

  if (dataset.n_inputs() == 1) {
    for (const auto& label : groups)
      report.slack_summaries.push_back(
          excess_input_summary(records, dataset, label, options.slack_tol));
  }

  if (both_models) {
    for (const auto& label : groups)
      report.benchmark_profiles.push_back(
          benchmark_profile(records, scales, dataset, label));
    report.reallocation = reallocation_candidates(scales);
  }
  return report;
}

// --- JSON --------------------------------------------------------------

namespace {

ojson variable_stats_json(const VariableStats& vs, bool with_std) {
  ojson j;
  j["variable"] = vs.variable;
  j["mean"] = vs.mean;
  if (with_std) j["std_dev"] = vs.std_dev;
  j["min"] = vs.min;
  j["max"] = vs.max;
  return j;
}

VariableStats variable_stats_from_json(const ojson& j) {
  VariableStats vs;
  vs.variable = j.at("variable").get<std::string>();
  vs.mean = j.at("mean").get<double>();
  if (j.contains("std_dev")) vs.std_dev = j.at("std_dev").get<double>();
  vs.min = j.at("min").get<double>();
  vs.max = j.at("max").get<double>();
  return vs;
}

ojson optional_double_json(const std::optional<double>& value) {
  if (value) return *value;
  return nullptr;
}

std::optional<double> optional_double_from_json(const ojson& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

ojson row_json(const DmuReportRow& row) {
  const EfficiencyRecord& e = row.efficiency;
  ojson j;
  j["dmu_id"] = e.dmu_id;
  j["group"] = e.group;
  j["theta_crs"] = optional_double_json(e.theta_crs);
  j["theta_vrs"] = optional_double_json(e.theta_vrs);
  if (row.scale) {
    j["se"] = row.scale->se;
    j["rts"] = to_string(row.scale->rts);
    j["scale_class"] = to_string(row.scale->scale_class);
  } else {
    j["se"] = nullptr;
    j["rts"] = nullptr;
    j["scale_class"] = nullptr;
  }
  j["sum_lambda_crs"] = optional_double_json(e.sum_lambda_crs);
  if (e.sum_lambda_range)
    j["sum_lambda_range"] =
        ojson::array({e.sum_lambda_range->first, e.sum_lambda_range->second});
  else
    j["sum_lambda_range"] = nullptr;
  j["input_slacks"] = e.input_slacks;
  j["output_slacks"] = e.output_slacks;
  ojson peers = ojson::array();
  for (const auto& peer : e.peers) {
    ojson p;
    p["dmu_id"] = peer.dmu_id;
    p["weight"] = peer.weight;
    peers.push_back(std::move(p));
  }
  j["peers"] = std::move(peers);
  j["lambdas_crs"] = e.lambdas_crs.empty() ? ojson(nullptr) : ojson(e.lambdas_crs);
  j["lambdas_vrs"] = e.lambdas_vrs.empty() ? ojson(nullptr) : ojson(e.lambdas_vrs);
  j["degenerate"] = e.degenerate;
  return j;
}

DmuReportRow row_from_json(const ojson& j) {
  DmuReportRow row;
  EfficiencyRecord& e = row.efficiency;
  e.dmu_id = j.at("dmu_id").get<std::string>();
  e.group = j.at("group").get<std::string>();
  e.theta_crs = optional_double_from_json(j.at("theta_crs"));
  e.theta_vrs = optional_double_from_json(j.at("theta_vrs"));
  if (!j.at("se").is_null()) {
    ScaleRecord s;
    s.dmu_id = e.dmu_id;
    s.se = j.at("se").get<double>();
    s.rts = parse_rts_status(j.at("rts").get<std::string>());
    s.scale_class = scale_class_for(s.rts);
    row.scale = std::move(s);
  }
  e.sum_lambda_crs = optional_double_from_json(j.at("sum_lambda_crs"));
  if (!j.at("sum_lambda_range").is_null())
    e.sum_lambda_range = std::make_pair(
        j.at("sum_lambda_range").at(0).get<double>(),
        j.at("sum_lambda_range").at(1).get<double>());
  e.input_slacks = j.at("input_slacks").get<std::vector<double>>();
  e.output_slacks = j.at("output_slacks").get<std::vector<double>>();
  for (const auto& p : j.at("peers"))
    e.peers.push_back(PeerWeight{p.at("dmu_id").get<std::string>(),
                                 p.at("weight").get<double>()});
  if (!j.at("lambdas_crs").is_null())
    e.lambdas_crs = j.at("lambdas_crs").get<std::vector<double>>();
  if (!j.at("lambdas_vrs").is_null())
    e.lambdas_vrs = j.at("lambdas_vrs").get<std::vector<double>>();
  e.degenerate = j.at("degenerate").get<bool>();
  return row;
}

ojson frequency_json(const FrequencyTable& t) {
  ojson j;
  j["group"] = t.group;
  j["bin_edges"] = FrequencyTable::kBinEdges;
  j["interval_counts"] = t.interval_counts;
  j["efficient_count"] = t.efficient_count;
  j["mean"] = t.mean;
  j["std_dev"] = t.std_dev;
  j["min"] = t.min;
  j["scored_count"] = t.scored_count;
  return j;
}

FrequencyTable frequency_from_json(const ojson& j) {
  FrequencyTable t;
  t.group = j.at("group").get<std::string>();
  const auto counts = j.at("interval_counts").get<std::vector<std::size_t>>();
  if (counts.size() != t.interval_counts.size())
    throw ValidationError("frequency table must carry 6 interval counts");
  std::copy(counts.begin(), counts.end(), t.interval_counts.begin());
  t.efficient_count = j.at("efficient_count").get<std::size_t>();
  t.mean = j.at("mean").get<double>();
  t.std_dev = j.at("std_dev").get<double>();
  t.min = j.at("min").get<double>();
  t.scored_count = j.at("scored_count").get<std::size_t>();
  return t;
}

ojson report_json(const AnalysisReport& r) {
  ojson j;
  j["scenario"] = r.scenario;
  j["input_names"] = r.input_names;
  j["output_names"] = r.output_names;
  ojson rows = ojson::array();
  for (const auto& row : r.rows) rows.push_back(row_json(row));
  j["records"] = std::move(rows);
  ojson freq = ojson::array();
  for (const auto& t : r.frequency_tables) freq.push_back(frequency_json(t));
  j["frequency_tables"] = std::move(freq);
  if (r.rts_salary_table) {
    ojson rows_json = ojson::array();
    for (const auto& row : r.rts_salary_table->rows) {
      ojson rj;
      rj["group"] = row.group;
      rj["mean_se"] = row.mean_se;
      rj["counts"] = row.counts;
      rj["mean_inputs"] = row.mean_inputs;
      rows_json.push_back(std::move(rj));
    }
    j["rts_salary_table"] = ojson{{"rows", std::move(rows_json)}};
  } else {
    j["rts_salary_table"] = nullptr;
  }
  ojson slack = ojson::array();
  for (const auto& s : r.slack_summaries) {
    ojson sj;
    sj["group"] = s.group;
    sj["mean_slack"] = s.mean_slack;
    sj["mean_input_use"] = s.mean_input_use;
    sj["excess_input_pct"] = s.excess_input_pct;
    sj["member_count"] = s.member_count;
    slack.push_back(std::move(sj));
  }
  j["slack_summaries"] = std::move(slack);
  ojson profiles = ojson::array();
  for (const auto& p : r.benchmark_profiles) {
    ojson pj;
    pj["group"] = p.group;
    pj["member_count"] = p.member_count;
    ojson vars = ojson::array();
    for (const auto& vs : p.variables)
      vars.push_back(variable_stats_json(vs, /*with_std=*/false));
    pj["variables"] = std::move(vars);
    profiles.push_back(std::move(pj));
  }
  j["benchmark_profiles"] = std::move(profiles);
  j["reallocation"] =
      ojson{{"from", r.reallocation.from}, {"to", r.reallocation.to}};
  return j;
}

AnalysisReport report_from_json(const ojson& j) {
  AnalysisReport r;
  r.scenario = j.at("scenario").get<std::string>();
  r.input_names = j.at("input_names").get<std::vector<std::string>>();
  r.output_names = j.at("output_names").get<std::vector<std::string>>();
  for (const auto& row : j.at("records")) r.rows.push_back(row_from_json(row));
  for (const auto& t : j.at("frequency_tables"))
    r.frequency_tables.push_back(frequency_from_json(t));
  if (!j.at("rts_salary_table").is_null()) {
    RtsSalaryTable table;
    for (const auto& rj : j.at("rts_salary_table").at("rows")) {
      RtsSalaryRow row;
      row.group = rj.at("group").get<std::string>();
      row.mean_se = rj.at("mean_se").get<double>();
      const auto counts = rj.at("counts").get<std::vector<std::size_t>>();
      const auto means = rj.at("mean_inputs").get<std::vector<double>>();
      if (counts.size() != 3 || means.size() != 3)
        throw ValidationError("RTS salary row must carry 3 classes");
      std::copy(counts.begin(), counts.end(), row.counts.begin());
      std::copy(means.begin(), means.end(), row.mean_inputs.begin());
      table.rows.push_back(std::move(row));
    }
    r.rts_salary_table = std::move(table);
  }
  for (const auto& sj : j.at("slack_summaries")) {
    SlackSummary s;
    s.group = sj.at("group").get<std::string>();
    s.mean_slack = sj.at("mean_slack").get<double>();
    s.mean_input_use = sj.at("mean_input_use").get<double>();
    s.excess_input_pct = sj.at("excess_input_pct").get<double>();
    s.member_count = sj.at("member_count").get<std::size_t>();
    r.slack_summaries.push_back(std::move(s));
  }
  for (const auto& pj : j.at("benchmark_profiles")) {
    BenchmarkProfile p;
    p.group = pj.at("group").get<std::string>();
    p.member_count = pj.at("member_count").get<std::size_t>();
    for (const auto& vj : pj.at("variables"))
      p.variables.push_back(variable_stats_from_json(vj));
    r.benchmark_profiles.push_back(std::move(p));
  }
  r.reallocation.from =
      j.at("reallocation").at("from").get<std::vector<std::string>>();
  r.reallocation.to =
      j.at("reallocation").at("to").get<std::vector<std::string>>();
  return r;
}

ojson metadata_json(const ReportMetadata& m) {
  ojson j;
  j["input_digest"] = m.input_digest;
  j["models"] = m.models;
  j["scenario"] = m.scenario;
  ojson tol;
  tol["feasibility"] = m.solver.feasibility;
  tol["optimality"] = m.solver.optimality;
  tol["pivot"] = m.solver.pivot;
  tol["phase1_infeasibility"] = m.solver.phase1_infeasibility;
  tol["bland_stall"] = m.solver.bland_stall;
  tol["max_iterations"] = m.solver.max_iterations;
  tol["efficient"] = m.efficient_tol;
  tol["peer"] = m.peer_tol;
  tol["rts"] = m.rts_tol;
  j["tolerances"] = std::move(tol);
  if (m.expansion) {
    ojson e;
    e["seed"] = m.expansion->seed;
    e["virtual_count_per_group"] = m.expansion->virtual_count_per_group;
    e["id_prefix"] = m.expansion->id_prefix;
    e["prng"] = m.expansion->prng;
    j["expansion"] = std::move(e);
  } else {
    j["expansion"] = nullptr;
  }
  j["timestamp"] = m.timestamp ? ojson(*m.timestamp) : ojson(nullptr);
  return j;
}

ReportMetadata metadata_from_json(const ojson& j) {
  ReportMetadata m;
  m.input_digest = j.at("input_digest").get<std::string>();
  m.models = j.at("models").get<std::string>();
  m.scenario = j.at("scenario").get<std::string>();
  const auto& tol = j.at("tolerances");
  m.solver.feasibility = tol.at("feasibility").get<double>();
  m.solver.optimality = tol.at("optimality").get<double>();
  m.solver.pivot = tol.at("pivot").get<double>();
  m.solver.phase1_infeasibility = tol.at("phase1_infeasibility").get<double>();
  m.solver.bland_stall = tol.at("bland_stall").get<int>();
  m.solver.max_iterations = tol.at("max_iterations").get<std::size_t>();
  m.efficient_tol = tol.at("efficient").get<double>();
  m.peer_tol = tol.at("peer").get<double>();
  m.rts_tol = tol.at("rts").get<double>();
  if (!j.at("expansion").is_null()) {
    ExpansionMetadata e;
    const auto& ej = j.at("expansion");
    e.seed = ej.at("seed").get<std::uint64_t>();
    e.virtual_count_per_group =
        ej.at("virtual_count_per_group").get<std::size_t>();
    e.id_prefix = ej.at("id_prefix").get<std::string>();
    e.prng = ej.at("prng").get<std::string>();
    m.expansion = std::move(e);
  }
  if (!j.at("timestamp").is_null())
    m.timestamp = j.at("timestamp").get<std::string>();
  return m;
}

ojson document_json(const ReportDocument& doc) {
  ojson j;
  j["schema_version"] = doc.schema_version;
  j["metadata"] = metadata_json(doc.metadata);
  ojson reports = ojson::array();
  for (const auto& r : doc.reports) reports.push_back(report_json(r));
  j["reports"] = std::move(reports);
  ojson deltas = ojson::array();
  for (const auto& d : doc.deltas) {
    ojson dj;
    dj["dmu_id"] = d.dmu_id;
    dj["group"] = d.group;
    dj["delta_crs"] = optional_double_json(d.delta_crs);
    dj["delta_vrs"] = optional_double_json(d.delta_vrs);
    deltas.push_back(std::move(dj));
  }
  j["deltas"] = std::move(deltas);
  return j;
}

}  // namespace

ReportDocument parse_json_report(std::string_view bytes) {
  ojson j;
  try {
    j = ojson::parse(bytes);
  } catch (const std::exception& e) {
    throw ValidationError(std::string("report JSON is malformed: ") + e.what());
  }
  try {
    ReportDocument doc;
    doc.schema_version = j.at("schema_version").get<std::string>();
    if (doc.schema_version != kReportSchemaVersion)
      throw ValidationError("unsupported report schema version '" +
                            doc.schema_version + "'");
    doc.metadata = metadata_from_json(j.at("metadata"));
    for (const auto& r : j.at("reports"))
      doc.reports.push_back(report_from_json(r));
    for (const auto& dj : j.at("deltas")) {
      ScenarioDelta d;
      d.dmu_id = dj.at("dmu_id").get<std::string>();
      d.group = dj.at("group").get<std::string>();
      d.delta_crs = optional_double_from_json(dj.at("delta_crs"));
      d.delta_vrs = optional_double_from_json(dj.at("delta_vrs"));
      doc.deltas.push_back(std::move(d));
    }
    return doc;
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    throw ValidationError(std::string("report JSON has unexpected shape: ") +
                          e.what());
  }
}

// --- CSV ---------------------------------------------------------------

namespace {

std::string optional2(const std::optional<double>& value) {
  return value ? format2(*value) : std::string("");
}

void render_csv_report(const AnalysisReport& r, std::string& out) {
  out += "#section records scenario=" + r.scenario + "\n";
  out += "dmu_id,group,theta_crs,theta_vrs,se,rts,scale_class,sum_lambda_crs";
  for (const auto& name : r.input_names) out += ",input_slack:" + name;
  for (const auto& name : r.output_names) out += ",output_slack:" + name;
  out += ",peers\n";
  for (const auto& row : r.rows) {
    const EfficiencyRecord& e = row.efficiency;
    out += e.dmu_id + "," + e.group + "," + optional2(e.theta_crs) + "," +
           optional2(e.theta_vrs) + ",";
    if (row.scale) {
      out += format2(row.scale->se);
      out += ",";
      out += to_string(row.scale->rts);
      out += ",";
      out += to_string(row.scale->scale_class);
    } else {
      out += ",,";
    }
    out += "," + optional2(e.sum_lambda_crs);
    for (const double s : e.input_slacks) out += "," + format2(s);
    for (const double s : e.output_slacks) out += "," + format2(s);
    out += ",";
    for (std::size_t i = 0; i < e.peers.size(); ++i) {
      if (i > 0) out += ";";
      out += e.peers[i].dmu_id + ":" + format2(e.peers[i].weight);
    }
    out += "\n";
  }

  out += "#section frequency scenario=" + r.scenario + "\n";
  out += "group,le_0.5,0.5_0.6,0.6_0.7,0.7_0.8,0.8_0.9,0.9_1.0,efficient,"
         "mean,std_dev,min,scored\n";
  for (const auto& t : r.frequency_tables) {
    out += t.group;
    for (const auto count : t.interval_counts)
      out += "," + std::to_string(count);
    out += "," + std::to_string(t.efficient_count);
    out += "," + format2(t.mean) + "," + format2(t.std_dev) + "," +
           format2(t.min) + "," + std::to_string(t.scored_count) + "\n";
  }

  if (r.rts_salary_table) {
    out += "#section rts_salary scenario=" + r.scenario + "\n";
    out += "group,mean_se,super_optimal_count,super_optimal_mean_input,"
           "optimal_count,optimal_mean_input,sub_optimal_count,"
           "sub_optimal_mean_input\n";
    for (const auto& row : r.rts_salary_table->rows) {
      out += row.group + "," + format2(row.mean_se);
      for (std::size_t c = 0; c < 3; ++c)
        out += "," + std::to_string(row.counts[c]) + "," +
               format2(row.mean_inputs[c]);
      out += "\n";
    }
  }

  if (!r.slack_summaries.empty()) {
    out += "#section slack_summary scenario=" + r.scenario + "\n";
    out += "group,mean_slack,mean_input_use,excess_input_pct,member_count\n";
    for (const auto& s : r.slack_summaries)
      out += s.group + "," + format2(s.mean_slack) + "," +
             format2(s.mean_input_use) + "," + format2(s.excess_input_pct) +
             "," + std::to_string(s.member_count) + "\n";
  }

  if (!r.benchmark_profiles.empty()) {
    out += "#section benchmark scenario=" + r.scenario + "\n";
    out += "group,member_count,variable,mean,max,min\n";
    for (const auto& p : r.benchmark_profiles) {
      if (p.variables.empty()) {
        out += p.group + "," + std::to_string(p.member_count) + ",,,,\n";
        continue;
      }
      for (const auto& vs : p.variables)
        out += p.group + "," + std::to_string(p.member_count) + "," +
               vs.variable + "," + format2(vs.mean) + "," + format2(vs.max) +
               "," + format2(vs.min) + "\n";
    }
  }

  out += "#section reallocation scenario=" + r.scenario + "\n";
  out += "direction,dmu_id\n";
  for (const auto& id : r.reallocation.from) out += "from," + id + "\n";
  for (const auto& id : r.reallocation.to) out += "to," + id + "\n";
}

std::string render_csv_document(const ReportDocument& doc) {
  std::string out;
  out += "#section report\n";
  out += "schema_version," + doc.schema_version + "\n";
  out += "#section metadata\n";
  out += "key,value\n";
  out += "input_digest," + doc.metadata.input_digest + "\n";
  out += "models," + doc.metadata.models + "\n";
  out += "scenario," + doc.metadata.scenario + "\n";
  out += "tolerance.feasibility," + shortest(doc.metadata.solver.feasibility) + "\n";
  out += "tolerance.optimality," + shortest(doc.metadata.solver.optimality) + "\n";
  out += "tolerance.pivot," + shortest(doc.metadata.solver.pivot) + "\n";
  out += "tolerance.phase1_infeasibility," +
         shortest(doc.metadata.solver.phase1_infeasibility) + "\n";
  out += "tolerance.bland_stall," +
         std::to_string(doc.metadata.solver.bland_stall) + "\n";
  out += "tolerance.max_iterations," +
         std::to_string(doc.metadata.solver.max_iterations) + "\n";
  out += "tolerance.efficient," + shortest(doc.metadata.efficient_tol) + "\n";
  out += "tolerance.peer," + shortest(doc.metadata.peer_tol) + "\n";
  out += "tolerance.rts," + shortest(doc.metadata.rts_tol) + "\n";
  if (doc.metadata.expansion) {
    out += "expansion.seed," + std::to_string(doc.metadata.expansion->seed) + "\n";
    out += "expansion.virtual_count_per_group," +
           std::to_string(doc.metadata.expansion->virtual_count_per_group) + "\n";
    out += "expansion.id_prefix," + doc.metadata.expansion->id_prefix + "\n";
    out += "expansion.prng," + doc.metadata.expansion->prng + "\n";
  }
  if (doc.metadata.timestamp)
    out += "timestamp," + *doc.metadata.timestamp + "\n";
  for (const auto& r : doc.reports) render_csv_report(r, out);
  if (!doc.deltas.empty()) {
    out += "#section deltas\n";
    out += "dmu_id,group,delta_crs,delta_vrs\n";
    for (const auto& d : doc.deltas)
      out += d.dmu_id + "," + d.group + "," + optional2(d.delta_crs) + "," +
             optional2(d.delta_vrs) + "\n";
  }
  return out;
}

// --- Markdown ----------------------------------------------------------

std::string md_optional2(const std::optional<double>& value) {
  return value ? format2(*value) : std::string("-");
}

void render_md_report(const AnalysisReport& r, std::string& out) {
  out += "## Scenario: " + r.scenario + "\n\n";

  out += "### Efficiency records\n\n";
  out += "| dmu_id | group | theta_crs | theta_vrs | se | rts | scale_class |"
         " sum_lambda_crs | peers |\n";
  out += "|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& row : r.rows) {
    const EfficiencyRecord& e = row.efficiency;
    out += "| " + e.dmu_id + " | " + e.group + " | " +
           md_optional2(e.theta_crs) + " | " + md_optional2(e.theta_vrs) +
           " | ";
    if (row.scale) {
      out += format2(row.scale->se);
      out += " | ";
      out += to_string(row.scale->rts);
      out += " | ";
      out += to_string(row.scale->scale_class);
    } else {
      out += "- | - | -";
    }
    out += " | " + md_optional2(e.sum_lambda_crs) + " | ";
    for (std::size_t i = 0; i < e.peers.size(); ++i) {
      if (i > 0) out += "; ";
      out += e.peers[i].dmu_id + ":" + format2(e.peers[i].weight);
    }
    out += " |\n";
  }
  out += "\n";

  if (!r.frequency_tables.empty()) {
    out += "### Frequency distribution of efficiency scores\n\n";
    out += "| Efficiency scores |";
    for (const auto& t : r.frequency_tables) out += " " + t.group + " |";
    out += "\n|---|";
    for (std::size_t i = 0; i < r.frequency_tables.size(); ++i) out += "---|";
    out += "\n";
    static constexpr const char* kRowLabels[6] = {
        "<= 0.5", "0.5-0.6", "0.6-0.7", "0.7-0.8", "0.8-0.9", "0.9-1.0"};
    for (std::size_t b = 0; b < 6; ++b) {
      out += std::string("| ") + kRowLabels[b] + " |";
      for (const auto& t : r.frequency_tables)
        out += " " + std::to_string(t.interval_counts[b]) + " |";
      out += "\n";
    }
    out += "| 1.0 |";
    for (const auto& t : r.frequency_tables)
      out += " " + std::to_string(t.efficient_count) + " |";
    out += "\n| Mean |";
    for (const auto& t : r.frequency_tables) out += " " + format2(t.mean) + " |";
    out += "\n| STD |";
    for (const auto& t : r.frequency_tables)
      out += " " + format2(t.std_dev) + " |";
    out += "\n| Min |";
    for (const auto& t : r.frequency_tables) out += " " + format2(t.min) + " |";
    out += "\n\n";
  }

  if (r.rts_salary_table) {
    out += "### Input means by returns-to-scale class\n\n";
    out += "| group | mean SE | super-optimal # | super-optimal mean |"
           " optimal # | optimal mean | sub-optimal # | sub-optimal mean |\n";
    out += "|---|---|---|---|---|---|---|---|\n";
    for (const auto& row : r.rts_salary_table->rows) {
      out += "| " + row.group + " | " + format2(row.mean_se) + " |";
      for (std::size_t c = 0; c < 3; ++c)
        out += " " + std::to_string(row.counts[c]) + " | " +
               format2(row.mean_inputs[c]) + " |";
      out += "\n";
    }
    out += "\n";
  }

  if (!r.slack_summaries.empty()) {
    out += "### Input slacks and excess input\n\n";
    out += "| group | mean slack | mean input use | excess input (%) |"
           " members |\n";
    out += "|---|---|---|---|---|\n";
    for (const auto& s : r.slack_summaries)
      out += "| " + s.group + " | " + format2(s.mean_slack) + " | " +
             format2(s.mean_input_use) + " | " + format2(s.excess_input_pct) +
             " | " + std::to_string(s.member_count) + " |\n";
    out += "\n";
  }

  if (!r.benchmark_profiles.empty()) {
    out += "### Optimal-class benchmark profiles\n\n";
    for (const auto& p : r.benchmark_profiles) {
      out += "#### " + p.group + " (members: " +
             std::to_string(p.member_count) + ")\n\n";
      if (p.variables.empty()) {
        out += "No optimal-class members.\n\n";
        continue;
      }
      out += "| statistic |";
      for (const auto& vs : p.variables) out += " " + vs.variable + " |";
      out += "\n|---|";
      for (std::size_t i = 0; i < p.variables.size(); ++i) out += "---|";
      out += "\n| Mean |";
      for (const auto& vs : p.variables) out += " " + format2(vs.mean) + " |";
      out += "\n| Max |";
      for (const auto& vs : p.variables) out += " " + format2(vs.max) + " |";
      out += "\n| Min |";
      for (const auto& vs : p.variables) out += " " + format2(vs.min) + " |";
      out += "\n\n";
    }
  }

  if (!r.reallocation.from.empty() || !r.reallocation.to.empty()) {
    out += "### Resource reallocation candidates\n\n";
    out += "Transfer from (sub-optimal): ";
    for (std::size_t i = 0; i < r.reallocation.from.size(); ++i) {
      if (i > 0) out += ", ";
      out += r.reallocation.from[i];
    }
    out += "\n\nTransfer to (super-optimal): ";
    for (std::size_t i = 0; i < r.reallocation.to.size(); ++i) {
      if (i > 0) out += ", ";
      out += r.reallocation.to[i];
    }
    out += "\n\n";
  }
}

std::string render_md_document(const ReportDocument& doc) {
  std::string out = "# Frontier analysis report\n\n";
  out += "- schema version: " + doc.schema_version + "\n";
  out += "- input digest: " + doc.metadata.input_digest + "\n";
  out += "- models: " + doc.metadata.models + "\n";
  out += "- scenario: " + doc.metadata.scenario + "\n";
  if (doc.metadata.expansion)
    out += "- expansion: seed " + std::to_string(doc.metadata.expansion->seed) +
           ", " + std::to_string(doc.metadata.expansion->virtual_count_per_group) +
           " virtual DMUs per group, prng " + doc.metadata.expansion->prng +
           "\n";
  if (doc.metadata.timestamp)
    out += "- timestamp: " + *doc.metadata.timestamp + "\n";
  out += "\n";
  for (const auto& r : doc.reports) render_md_report(r, out);
  if (!doc.deltas.empty()) {
    out += "## Scenario deltas (merged minus per-group)\n\n";
    out += "| dmu_id | group | delta_crs | delta_vrs |\n|---|---|---|---|\n";
    for (const auto& d : doc.deltas)
      out += "| " + d.dmu_id + " | " + d.group + " | " +
             md_optional2(d.delta_crs) + " | " + md_optional2(d.delta_vrs) +
             " |\n";
    out += "\n";
  }
  return out;
}

}  // namespace

ReportFormat parse_report_format(std::string_view text) {
  if (text == "json") return ReportFormat::Json;
  if (text == "csv") return ReportFormat::Csv;
  if (text == "markdown" || text == "md") return ReportFormat::Markdown;
  throw ValidationError("unknown report format '" + std::string(text) +
                        "' (expected json, csv, or markdown)");
}

std::string render(const ReportDocument& document, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json:
      return document_json(document).dump(2) + "\n";
    case ReportFormat::Csv:
      return render_csv_document(document);
    case ReportFormat::Markdown:
      return render_md_document(document);
  }
  throw InternalError("unhandled report format");
}

std::string render_summary(const std::vector<GroupStats>& stats,
                           std::string_view input_digest, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json: {
      ojson j;
      j["schema_version"] = kReportSchemaVersion;
      j["metadata"] = ojson{{"input_digest", std::string(input_digest)}};
      ojson groups = ojson::array();
      for (const auto& g : stats) {
        ojson gj;
        gj["group"] = g.group;
        gj["count"] = g.count;
        gj["degenerate_std"] = g.degenerate_std;
        ojson vars = ojson::array();
        for (const auto& vs : g.variables)
          vars.push_back(variable_stats_json(vs, /*with_std=*/true));
        gj["variables"] = std::move(vars);
        groups.push_back(std::move(gj));
      }
      j["groups"] = std::move(groups);
      return j.dump(2) + "\n";
    }
    case ReportFormat::Csv: {
      std::string out = "#section summary\n";
      out += "group,count,variable,mean,std_dev,min,max\n";
      for (const auto& g : stats)
        for (const auto& vs : g.variables)
          out += g.group + "," + std::to_string(g.count) + "," + vs.variable +
                 "," + format2(vs.mean) + "," + format2(vs.std_dev) + "," +
                 format2(vs.min) + "," + format2(vs.max) + "\n";
      return out;
    }
    case ReportFormat::Markdown: {
      std::string out = "# Summary statistics\n\n";
      for (const auto& g : stats) {
        out += "## " + g.group + " (count: " + std::to_string(g.count) + ")\n\n";
        out += "| statistic |";
        for (const auto& vs : g.variables) out += " " + vs.variable + " |";
        out += "\n|---|";
        for (std::size_t i = 0; i < g.variables.size(); ++i) out += "---|";
        out += "\n| Mean |";
        for (const auto& vs : g.variables) out += " " + format2(vs.mean) + " |";
        out += "\n| STD |";
        for (const auto& vs : g.variables)
          out += " " + format2(vs.std_dev) + " |";
        out += "\n| Min |";
        for (const auto& vs : g.variables) out += " " + format2(vs.min) + " |";
        out += "\n| Max |";
        for (const auto& vs : g.variables) out += " " + format2(vs.max) + " |";
        out += "\n\n";
      }
      return out;
    }
  }
  throw InternalError("unhandled report format");
}

}  // namespace dea
