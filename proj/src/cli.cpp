#include "dea/cli.hpp"

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dea/dataset.hpp"
#include "dea/dea.hpp"
#include "dea/errors.hpp"
#include "dea/hashing.hpp"
#include "dea/report.hpp"
#include "dea/scale.hpp"

namespace dea::cli {
namespace {

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open input file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad())
    throw ValidationError("failed reading input file '" + path + "'");
  return buffer.str();
}

std::string digest_of(std::string_view bytes) {
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return std::string("fnv1a64:") + hex;
}

void write_output(const std::string& text, const std::string& output_path,
                  std::ostream& out) {
  if (output_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(output_path, std::ios::binary);
  if (!file)
    throw ValidationError("cannot open output file '" + output_path + "'");
  file << text;
  file.flush();
  if (!file)
    throw ValidationError("failed writing output file '" + output_path + "'");
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

ModelSelection parse_models(const std::string& text) {
  if (text == "ccr") return ModelSelection::CcrOnly;
  if (text == "bcc") return ModelSelection::BccOnly;
  return ModelSelection::Both;
}

struct AnalyzeOpts {
  std::string input;
  std::string scenario = "per-group";
  std::string model = "both";
  std::string format = "json";
  std::string output;
  std::uint64_t seed = 0;
  std::size_t virtual_count = 0;
  std::string id_prefix = "virtual-";
  bool force = false;
  bool robust_lambda = false;
  unsigned threads = 0;
  bool timestamp = false;
  SolverTolerances solver{};
  double efficient_tol = 1e-6;
  double peer_tol = 1e-6;
  double rts_tol = 1e-6;
};

int run_analyze(const AnalyzeOpts& opts, std::ostream& out) {
  const std::string bytes = read_file_bytes(opts.input);
  std::istringstream stream(bytes);
  Dataset dataset = load_csv(stream);

  ReportMetadata meta;
  meta.input_digest = digest_of(bytes);
  meta.models = opts.model;
  meta.scenario = opts.scenario;
  meta.solver = opts.solver;
  meta.efficient_tol = opts.efficient_tol;
  meta.peer_tol = opts.peer_tol;
  meta.rts_tol = opts.rts_tol;

  if (opts.virtual_count > 0) {
    McConfig config;
    config.seed = opts.seed;
    config.virtual_count_per_group = opts.virtual_count;
    config.id_prefix = opts.id_prefix;
    dataset = expand_monte_carlo(dataset, config);
    ExpansionMetadata expansion;
    expansion.seed = opts.seed;
    expansion.virtual_count_per_group = opts.virtual_count;
    expansion.id_prefix = opts.id_prefix;
    expansion.prng = std::string(kMonteCarloAlgorithmId);
    meta.expansion = std::move(expansion);
  }
  if (opts.timestamp) meta.timestamp = utc_timestamp();

  EvaluationOptions eval;
  eval.models = parse_models(opts.model);
  eval.force = opts.force;
  eval.robust_lambda_range = opts.robust_lambda;
  eval.threads = opts.threads;
  eval.solver = opts.solver;
  eval.efficient_tol = opts.efficient_tol;
  eval.peer_tol = opts.peer_tol;

  ReportOptions report_opts;
  report_opts.rts_tol = opts.rts_tol;

  ReportDocument doc;
  doc.metadata = std::move(meta);

  const bool want_per_group =
      opts.scenario == "per-group" || opts.scenario == "both";
  const bool want_merged =
      opts.scenario == "merged" || opts.scenario == "both";

  std::vector<EfficiencyRecord> per_group;
  std::vector<EfficiencyRecord> merged;
  if (want_per_group) {
    eval.scenario = GroupScenario::PerGroup;
    per_group = evaluate_all(dataset, eval);
    doc.reports.push_back(
        build_analysis_report(dataset, per_group, "per-group", report_opts));
  }
  if (want_merged) {
    eval.scenario = GroupScenario::Merged;
    merged = evaluate_all(dataset, eval);
    doc.reports.push_back(
        build_analysis_report(dataset, merged, "merged", report_opts));
  }
  if (want_per_group && want_merged) {
    for (std::size_t i = 0; i < per_group.size(); ++i) {
      ScenarioDelta delta;
      delta.dmu_id = per_group[i].dmu_id;
      delta.group = per_group[i].group;
      if (merged[i].theta_crs && per_group[i].theta_crs)
        delta.delta_crs = *merged[i].theta_crs - *per_group[i].theta_crs;
      if (merged[i].theta_vrs && per_group[i].theta_vrs)
        delta.delta_vrs = *merged[i].theta_vrs - *per_group[i].theta_vrs;
      doc.deltas.push_back(std::move(delta));
    }
  }

  write_output(render(doc, parse_report_format(opts.format)), opts.output, out);
  return 0;
}

struct SummarizeOpts {
  std::string input;
  std::string format = "json";
  std::string output;
  bool pooled = false;
};

int run_summarize(const SummarizeOpts& opts, std::ostream& out) {
  const std::string bytes = read_file_bytes(opts.input);
  std::istringstream stream(bytes);
  const Dataset dataset = load_csv(stream);
  std::vector<GroupStats> stats = summarize(dataset, /*by_group=*/true);
  if (opts.pooled) {
    std::vector<GroupStats> whole = summarize(dataset, /*by_group=*/false);
    stats.insert(stats.end(), whole.begin(), whole.end());
  }
  write_output(
      render_summary(stats, digest_of(bytes), parse_report_format(opts.format)),
      opts.output, out);
  return 0;
}

struct GenOpts {
  std::string input;
  std::string output;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  std::string id_prefix = "virtual-";
};

int run_gen(const GenOpts& opts, std::ostream& out) {
  const std::string bytes = read_file_bytes(opts.input);
  std::istringstream stream(bytes);
  const Dataset dataset = load_csv(stream);
  McConfig config;
  config.seed = opts.seed;
  config.virtual_count_per_group = opts.count;
  config.id_prefix = opts.id_prefix;
  write_output(render_csv(expand_monte_carlo(dataset, config)), opts.output,
               out);
  return 0;
}

struct ValidateOpts {
  std::string input;
};

int run_validate(const ValidateOpts& opts, std::ostream& out,
                 std::ostream& err) {
  const std::string bytes = read_file_bytes(opts.input);
  std::istringstream stream(bytes);
  const Dataset dataset = load_csv(stream);

  const std::size_t required =
      sample_size_threshold(dataset.n_inputs(), dataset.m_outputs());
  out << "inputs: " << dataset.n_inputs()
      << ", outputs: " << dataset.m_outputs()
      << ", required group size: " << required << "\n";

  std::vector<std::string> failures;
  for (const auto& label : dataset.groups()) {
    std::size_t count = 0;
    for (const auto& dmu : dataset.dmus)
      if (dmu.group == label) ++count;
    out << "group '" << label << "': " << count << " DMUs ("
        << (count >= required ? "ok" : "below threshold") << ")\n";
    if (count < required)
      failures.push_back("group '" + label + "' has " + std::to_string(count) +
                         " DMUs; at least " + std::to_string(required) +
                         " are required for " +
                         std::to_string(dataset.n_inputs()) + " input(s) and " +
                         std::to_string(dataset.m_outputs()) + " output(s)");
  }
  if (!failures.empty()) {
    for (const auto& message : failures) err << "error: " << message << "\n";
    return 1;
  }
  out << "ok\n";
  return 0;
}

struct RenderOpts {
  std::string input;
  std::string format = "markdown";
  std::string output;
};

int run_render(const RenderOpts& opts, std::ostream& out) {
  const std::string bytes = read_file_bytes(opts.input);
  const ReportDocument doc = parse_json_report(bytes);
  write_output(render(doc, parse_report_format(opts.format)), opts.output,
               out);
  return 0;
}

void add_format_option(CLI::App* cmd, std::string& target,
                       const char* help_text) {
  cmd->add_option("--format", target, help_text)
      ->check(CLI::IsMember({"json", "csv", "markdown"}))
      ->envname("DEA_FORMAT")
      ->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Frontier efficiency analysis for multi-input, multi-output "
               "units (radial input-oriented models)"};
  app.name("dea");
  app.require_subcommand(1);

  AnalyzeOpts analyze_opts;
  auto* analyze = app.add_subcommand(
      "analyze", "Evaluate every unit against the frontier and emit a report");
  analyze->add_option("input", analyze_opts.input, "Input CSV file")
      ->required();
  analyze
      ->add_option("--scenario", analyze_opts.scenario,
                   "Frontier scope: within each group, pooled, or both")
      ->check(CLI::IsMember({"per-group", "merged", "both"}))
      ->capture_default_str();
  analyze
      ->add_option("--model", analyze_opts.model,
                   "Returns-to-scale assumption(s) to solve")
      ->check(CLI::IsMember({"ccr", "bcc", "both"}))
      ->capture_default_str();
  add_format_option(analyze, analyze_opts.format, "Report format");
  analyze->add_option("-o,--output", analyze_opts.output,
                      "Write the report to a file instead of stdout");
  analyze
      ->add_option("--virtual-count,--count", analyze_opts.virtual_count,
                   "Synthetic DMUs to add per group before evaluating")
      ->capture_default_str();
  analyze
      ->add_option("--seed", analyze_opts.seed,
                   "Seed for synthetic DMU generation")
      ->capture_default_str();
  analyze
      ->add_option("--id-prefix", analyze_opts.id_prefix,
                   "Prefix for synthetic DMU ids")
      ->capture_default_str();
  analyze->add_flag("--force", analyze_opts.force,
                    "Evaluate groups smaller than the sample-size threshold");
  analyze->add_flag(
      "--robust-lambda", analyze_opts.robust_lambda,
      "Also report the attainable range of the peer-weight sum at the "
      "radial optimum");
  analyze
      ->add_option("--threads", analyze_opts.threads,
                   "Worker threads (0 = hardware concurrency)")
      ->capture_default_str();
  analyze->add_flag(
      "--timestamp", analyze_opts.timestamp,
      "Embed the wall-clock time (off by default so repeated runs are "
      "byte-identical)");
  analyze
      ->add_option("--feasibility-tol", analyze_opts.solver.feasibility,
                   "Solver feasibility tolerance")
      ->capture_default_str();
  analyze
      ->add_option("--optimality-tol", analyze_opts.solver.optimality,
                   "Solver optimality tolerance")
      ->capture_default_str();
  analyze
      ->add_option("--pivot-tol", analyze_opts.solver.pivot,
                   "Solver pivot tolerance")
      ->capture_default_str();
  analyze
      ->add_option("--efficient-tol", analyze_opts.efficient_tol,
                   "Treat theta within this distance of 1 as efficient")
      ->capture_default_str();
  analyze
      ->add_option("--peer-tol", analyze_opts.peer_tol,
                   "Smallest peer weight reported")
      ->capture_default_str();
  analyze
      ->add_option("--rts-tol", analyze_opts.rts_tol,
                   "Dead zone around 1 when classifying returns to scale "
                   "from the peer-weight sum")
      ->capture_default_str();

  SummarizeOpts summarize_opts;
  auto* summarize_cmd = app.add_subcommand(
      "summarize", "Per-group mean/std/min/max for every variable");
  summarize_cmd->add_option("input", summarize_opts.input, "Input CSV file")
      ->required();
  add_format_option(summarize_cmd, summarize_opts.format, "Output format");
  summarize_cmd->add_option("-o,--output", summarize_opts.output,
                            "Write to a file instead of stdout");
  summarize_cmd->add_flag("--pooled", summarize_opts.pooled,
                          "Append pooled statistics over all groups");

  GenOpts gen_opts;
  auto* gen = app.add_subcommand(
      "gen", "Expand a dataset with synthetic DMUs drawn from per-group "
             "truncated normals");
  gen->add_option("input", gen_opts.input, "Input CSV file")->required();
  gen->add_option("--count,--virtual-count", gen_opts.count,
                  "Synthetic DMUs to add per group")
      ->required();
  gen->add_option("--seed", gen_opts.seed, "Generation seed")
      ->capture_default_str();
  gen->add_option("--id-prefix", gen_opts.id_prefix,
                  "Prefix for synthetic DMU ids")
      ->capture_default_str();
  gen->add_option("-o,--output", gen_opts.output,
                  "Write the CSV to a file instead of stdout");

  ValidateOpts validate_opts;
  auto* validate = app.add_subcommand(
      "validate", "Check the schema and per-group sample-size threshold");
  validate->add_option("input", validate_opts.input, "Input CSV file")
      ->required();

  RenderOpts render_opts;
  auto* render_cmd = app.add_subcommand(
      "report", "Re-render a stored JSON report as CSV or Markdown");
  render_cmd->add_option("input", render_opts.input, "Stored JSON report")
      ->required();
  add_format_option(render_cmd, render_opts.format, "Target format");
  render_cmd->add_option("-o,--output", render_opts.output,
                         "Write to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (analyze->parsed()) return run_analyze(analyze_opts, out);
    if (summarize_cmd->parsed()) return run_summarize(summarize_opts, out);
    if (gen->parsed()) return run_gen(gen_opts, out);
    if (validate->parsed()) return run_validate(validate_opts, out, err);
    if (render_cmd->parsed()) return run_render(render_opts, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace dea::cli
