#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace dea {

// One decision-making unit: an entity under evaluation with measured
// inputs (strictly positive) and outputs (non-negative).
struct Dmu {
  std::string id;
  std::string group;
  std::vector<double> inputs;
  std::vector<double> outputs;

  friend bool operator==(const Dmu&, const Dmu&) = default;
};

// The population under evaluation. Immutable by convention once loaded;
// operations that change it return a new Dataset.
struct Dataset {
  std::vector<std::string> input_names;
  std::vector<std::string> output_names;
  std::vector<Dmu> dmus;

  friend bool operator==(const Dataset&, const Dataset&) = default;

  [[nodiscard]] std::size_t n_inputs() const { return input_names.size(); }
  [[nodiscard]] std::size_t m_outputs() const { return output_names.size(); }
  [[nodiscard]] std::size_t size() const { return dmus.size(); }

  // Distinct group labels in order of first appearance (the user-visible
  // ordering everywhere in this library).
  [[nodiscard]] std::vector<std::string> groups() const;

  // New dataset containing only the given group's DMUs, same variables.
  [[nodiscard]] Dataset subset(std::string_view group) const;

  // Structural invariants: at least one DMU, unique non-empty ids, vector
  // lengths matching the declared variables, finite values, strictly
  // positive inputs, non-negative outputs. Throws ValidationError.
  void validate() const;
};

// Per-variable location/spread within one group (or the pooled sample).
struct VariableStats {
  std::string variable;
  double mean = 0.0;
  double std_dev = 0.0;  // sample standard deviation (divisor count - 1)
  double min = 0.0;
  double max = 0.0;
};

struct GroupStats {
  std::string group;
  std::size_t count = 0;
  bool degenerate_std = false;  // count == 1: std reported as 0
  std::vector<VariableStats> variables;  // inputs first, then outputs
};

// Monte Carlo expansion settings. Deterministic: a fixed seed and source
// dataset always produce the same virtual DMUs.
struct McConfig {
  std::uint64_t seed = 0;
  std::size_t virtual_count_per_group = 0;
  std::string id_prefix = "virtual-";
};

// Identifies the pinned generation scheme recorded in report metadata.
// Virtual values are reproducible across implementations only when this
// exact scheme is used: one mt19937_64 engine per group seeded with
// splitmix64(seed XOR fnv1a64(group label)); standard normals via
// Box-Muller (two uniforms in (0,1] per draw, cosine branch only);
// truncation by rejection with a 1000-attempt cap, then clamping.
inline constexpr std::string_view kMonteCarloAlgorithmId =
    "mc1:mt19937_64/box-muller/reject1000-clamp";

// --- CSV ---------------------------------------------------------------
//
// Schema: header row with columns `id`, `group`, one or more `input:<name>`,
// one or more `output:<name>`, in any order; `.` decimal point; UTF-8 text;
// LF or CRLF line ends; no quoting. Rendering emits the canonical order
// id, group, inputs, outputs with shortest-round-trip numbers, so
// load(render(ds)) == ds exactly.

[[nodiscard]] Dataset load_csv(std::istream& stream);
[[nodiscard]] Dataset load_csv_file(const std::string& path);
[[nodiscard]] std::string render_csv(const Dataset& dataset);

// Minimum group size for adequate efficiency discrimination with n inputs
// and m outputs: max(m*n, 3*(m+n)).
[[nodiscard]] std::size_t sample_size_threshold(std::size_t n_inputs,
                                                std::size_t m_outputs);

// Mean/std/min/max per variable, per group when by_group is set, otherwise
// pooled under the group label "all".
[[nodiscard]] std::vector<GroupStats> summarize(const Dataset& dataset,
                                                bool by_group);

// Appends config.virtual_count_per_group synthetic DMUs to every group,
// each variable drawn from a truncated normal fitted to the group's
// mean/std and clipped to the group's observed [min, max]. Original rows
// are preserved bit-exactly. Requires every group to have at least 2 DMUs.
[[nodiscard]] Dataset expand_monte_carlo(const Dataset& dataset,
                                         const McConfig& config);

}  // namespace dea
