#include "dea/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dea/errors.hpp"
#include "dea/hashing.hpp"

namespace dea {

namespace {

std::string_view trim(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
    text.remove_prefix(1);
  while (!text.empty() &&
         (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
    text.remove_suffix(1);
  return text;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

double parse_number(std::string_view cell, std::size_t line_number,
                    const std::string& column) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size())
    throw ValidationError("line " + std::to_string(line_number) +
                          ", column '" + column + "': '" + std::string(cell) +
                          "' is not a number");
  if (!std::isfinite(value))
    throw ValidationError("line " + std::to_string(line_number) +
                          ", column '" + column + "': value must be finite");
  return value;
}

std::string format_double(double value) {
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

}  // namespace

std::vector<std::string> Dataset::groups() const {
  std::vector<std::string> labels;
  std::unordered_set<std::string> seen;
  for (const auto& dmu : dmus)
    if (seen.insert(dmu.group).second) labels.push_back(dmu.group);
  return labels;
}

Dataset Dataset::subset(std::string_view group) const {
  Dataset out;
  out.input_names = input_names;
  out.output_names = output_names;
  for (const auto& dmu : dmus)
    if (dmu.group == group) out.dmus.push_back(dmu);
  return out;
}

void Dataset::validate() const {
  if (input_names.empty())
    throw ValidationError("dataset declares no input variables");
  if (output_names.empty())
    throw ValidationError("dataset declares no output variables");
  if (dmus.empty()) throw ValidationError("dataset has no DMUs");

  std::unordered_set<std::string> ids;
  for (std::size_t i = 0; i < dmus.size(); ++i) {
    const Dmu& dmu = dmus[i];
    if (dmu.id.empty())
      throw ValidationError("DMU at position " + std::to_string(i + 1) +
                            " has an empty id");
    if (dmu.group.empty())
      throw ValidationError("DMU '" + dmu.id + "' has an empty group label");
    if (!ids.insert(dmu.id).second)
      throw ValidationError("duplicate DMU id '" + dmu.id + "'");
    if (dmu.inputs.size() != input_names.size())
      throw ValidationError("DMU '" + dmu.id + "' has " +
                            std::to_string(dmu.inputs.size()) +
                            " inputs, dataset declares " +
                            std::to_string(input_names.size()));
    if (dmu.outputs.size() != output_names.size())
      throw ValidationError("DMU '" + dmu.id + "' has " +
                            std::to_string(dmu.outputs.size()) +
                            " outputs, dataset declares " +
                            std::to_string(output_names.size()));
    for (std::size_t v = 0; v < dmu.inputs.size(); ++v) {
      if (!std::isfinite(dmu.inputs[v]))
        throw ValidationError("DMU '" + dmu.id + "': input '" +
                              input_names[v] + "' is not finite");
      if (dmu.inputs[v] <= 0.0)
        throw ValidationError("DMU '" + dmu.id + "': input '" +
                              input_names[v] +
                              "' must be strictly positive, got " +
                              format_double(dmu.inputs[v]));
    }
    for (std::size_t v = 0; v < dmu.outputs.size(); ++v) {
      if (!std::isfinite(dmu.outputs[v]))
        throw ValidationError("DMU '" + dmu.id + "': output '" +
                              output_names[v] + "' is not finite");
      if (dmu.outputs[v] < 0.0)
        throw ValidationError("DMU '" + dmu.id + "': output '" +
                              output_names[v] +
                              "' must be non-negative, got " +
                              format_double(dmu.outputs[v]));
    }
  }
}

Dataset load_csv(std::istream& stream) {
  std::string line;
  std::size_t line_number = 0;

  // Header: establish column roles.
  enum class Role { Id, Group, Input, Output };
  struct Column {
    Role role;
    std::size_t variable_index;  // within inputs or outputs
  };
  std::vector<Column> columns;
  Dataset ds;
  bool saw_id = false, saw_group = false;

  while (std::getline(stream, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    const auto cells = split_cells(line);
    for (const auto cell : cells) {
      if (cell == "id") {
        if (saw_id) throw ValidationError("header repeats column 'id'");
        saw_id = true;
        columns.push_back({Role::Id, 0});
      } else if (cell == "group") {
        if (saw_group) throw ValidationError("header repeats column 'group'");
        saw_group = true;
        columns.push_back({Role::Group, 0});
      } else if (cell.starts_with("input:")) {
        const auto name = std::string(trim(cell.substr(6)));
        if (name.empty())
          throw ValidationError("header has an input column with no name");
        if (std::find(ds.input_names.begin(), ds.input_names.end(), name) !=
            ds.input_names.end())
          throw ValidationError("header repeats input column '" + name + "'");
        columns.push_back({Role::Input, ds.input_names.size()});
        ds.input_names.push_back(name);
      } else if (cell.starts_with("output:")) {
        const auto name = std::string(trim(cell.substr(7)));
        if (name.empty())
          throw ValidationError("header has an output column with no name");
        if (std::find(ds.output_names.begin(), ds.output_names.end(), name) !=
            ds.output_names.end())
          throw ValidationError("header repeats output column '" + name +
                                "'");
        columns.push_back({Role::Output, ds.output_names.size()});
        ds.output_names.push_back(name);
      } else {
        throw ValidationError(
            "unrecognized header column '" + std::string(cell) +
            "' (expected id, group, input:<name>, or output:<name>)");
      }
    }
    break;
  }
  if (columns.empty()) throw ValidationError("input has no header row");
  if (!saw_id) throw ValidationError("header is missing the 'id' column");
  if (!saw_group) throw ValidationError("header is missing the 'group' column");
  if (ds.input_names.empty())
    throw ValidationError("header declares no input:<name> columns");
  if (ds.output_names.empty())
    throw ValidationError("header declares no output:<name> columns");

  auto column_label = [&](std::size_t index) -> std::string {
    const Column& col = columns[index];
    switch (col.role) {
      case Role::Id:
        return "id";
      case Role::Group:
        return "group";
      case Role::Input:
        return "input:" + ds.input_names[col.variable_index];
      case Role::Output:
        return "output:" + ds.output_names[col.variable_index];
    }
    return "?";
  };

  std::unordered_set<std::string> seen_ids;
  while (std::getline(stream, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    const auto cells = split_cells(line);
    if (cells.size() != columns.size())
      throw ValidationError("line " + std::to_string(line_number) + " has " +
                            std::to_string(cells.size()) +
                            " cells, expected " +
                            std::to_string(columns.size()));
    Dmu dmu;
    dmu.inputs.resize(ds.input_names.size());
    dmu.outputs.resize(ds.output_names.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      switch (columns[c].role) {
        case Role::Id:
          dmu.id = std::string(cells[c]);
          break;
        case Role::Group:
          dmu.group = std::string(cells[c]);
          break;
        case Role::Input:
          dmu.inputs[columns[c].variable_index] =
              parse_number(cells[c], line_number, column_label(c));
          break;
        case Role::Output:
          dmu.outputs[columns[c].variable_index] =
              parse_number(cells[c], line_number, column_label(c));
          break;
      }
    }
    if (dmu.id.empty())
      throw ValidationError("line " + std::to_string(line_number) +
                            ": empty id");
    if (dmu.group.empty())
      throw ValidationError("line " + std::to_string(line_number) +
                            ": empty group for DMU '" + dmu.id + "'");
    if (!seen_ids.insert(dmu.id).second)
      throw ValidationError("line " + std::to_string(line_number) +
                            ": duplicate DMU id '" + dmu.id + "'");
    for (std::size_t v = 0; v < dmu.inputs.size(); ++v)
      if (dmu.inputs[v] <= 0.0)
        throw ValidationError("line " + std::to_string(line_number) +
                              ": DMU '" + dmu.id + "': input '" +
                              ds.input_names[v] +
                              "' must be strictly positive, got " +
                              format_double(dmu.inputs[v]));
    for (std::size_t v = 0; v < dmu.outputs.size(); ++v)
      if (dmu.outputs[v] < 0.0)
        throw ValidationError("line " + std::to_string(line_number) +
                              ": DMU '" + dmu.id + "': output '" +
                              ds.output_names[v] +
                              "' must be non-negative, got " +
                              format_double(dmu.outputs[v]));
    ds.dmus.push_back(std::move(dmu));
  }

  ds.validate();
  return ds;
}

Dataset load_csv_file(const std::string& path) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream)
    throw ValidationError("cannot open input file '" + path + "'");
  return load_csv(stream);
}

std::string render_csv(const Dataset& dataset) {
  std::string out = "id,group";
  for (const auto& name : dataset.input_names) out += ",input:" + name;
  for (const auto& name : dataset.output_names) out += ",output:" + name;
  out += '\n';
  for (const auto& dmu : dataset.dmus) {
    out += dmu.id;
    out += ',';
    out += dmu.group;
    for (const double v : dmu.inputs) {
      out += ',';
      out += format_double(v);
    }
    for (const double v : dmu.outputs) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::size_t sample_size_threshold(std::size_t n_inputs,
                                  std::size_t m_outputs) {
  if (n_inputs < 1 || m_outputs < 1)
    throw ValidationError("sample size rule requires at least one input and one output variable");
  return std::max(m_outputs * n_inputs, 3 * (m_outputs + n_inputs));
}

namespace {

struct RunningStats {
  double mean = 0.0, std_dev = 0.0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
};

// Column `v` spans inputs then outputs; pull the value from the right vector.
double variable_value(const Dmu& dmu, std::size_t v, std::size_t n_inputs) {
  return v < n_inputs ? dmu.inputs[v] : dmu.outputs[v - n_inputs];
}

RunningStats compute_stats(const std::vector<const Dmu*>& members,
                           std::size_t v, std::size_t n_inputs) {
  RunningStats s;
  double sum = 0.0;
  for (const Dmu* dmu : members) {
    const double value = variable_value(*dmu, v, n_inputs);
    sum += value;
    s.min = std::min(s.min, value);
    s.max = std::max(s.max, value);
  }
  s.mean = sum / static_cast<double>(members.size());
  if (members.size() > 1) {
    double sq = 0.0;
    for (const Dmu* dmu : members) {
      const double d = variable_value(*dmu, v, n_inputs) - s.mean;
      sq += d * d;
    }
    s.std_dev = std::sqrt(sq / static_cast<double>(members.size() - 1));
  }
  return s;
}

}  // namespace

std::vector<GroupStats> summarize(const Dataset& dataset, bool by_group) {
  dataset.validate();
  const std::size_t n = dataset.n_inputs();
  const std::size_t total_vars = n + dataset.m_outputs();

  std::vector<std::pair<std::string, std::vector<const Dmu*>>> partitions;
  if (by_group) {
    for (const auto& label : dataset.groups()) partitions.emplace_back(label, std::vector<const Dmu*>{});
    for (const auto& dmu : dataset.dmus)
      for (auto& [label, members] : partitions)
        if (label == dmu.group) members.push_back(&dmu);
  } else {
    partitions.emplace_back("all", std::vector<const Dmu*>{});
    for (const auto& dmu : dataset.dmus) partitions[0].second.push_back(&dmu);
  }

  std::vector<GroupStats> out;
  for (const auto& [label, members] : partitions) {
    GroupStats stats;
    stats.group = label;
    stats.count = members.size();
    stats.degenerate_std = members.size() == 1;
    for (std::size_t v = 0; v < total_vars; ++v) {
      const RunningStats s = compute_stats(members, v, n);
      VariableStats vs;
      vs.variable = v < n ? dataset.input_names[v]
                          : dataset.output_names[v - n];
      vs.mean = s.mean;
      vs.std_dev = s.std_dev;
      vs.min = s.min;
      vs.max = s.max;
      stats.variables.push_back(std::move(vs));
    }
    out.push_back(std::move(stats));
  }
  return out;
}

namespace {

// Uniform in (0, 1]: never returns 0, so log() below is always finite.
double next_uniform(std::mt19937_64& rng) {
  return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

// One standard normal per call (Box-Muller, cosine branch; two uniforms
// consumed per draw so the stream layout is fully pinned).
double next_normal(std::mt19937_64& rng) {
  const double u1 = next_uniform(rng);
  const double u2 = next_uniform(rng);
  constexpr double two_pi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

double draw_truncated(std::mt19937_64& rng, const RunningStats& s) {
  if (s.std_dev == 0.0) return s.mean;
  double candidate = s.mean;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    candidate = s.mean + s.std_dev * next_normal(rng);
    if (candidate >= s.min && candidate <= s.max) return candidate;
  }
  return std::clamp(candidate, s.min, s.max);
}

}  // namespace

Dataset expand_monte_carlo(const Dataset& dataset, const McConfig& config) {
  dataset.validate();
  Dataset out = dataset;
  if (config.virtual_count_per_group == 0) return out;

  const std::size_t n = dataset.n_inputs();
  const std::size_t total_vars = n + dataset.m_outputs();

  std::unordered_set<std::string> ids;
  for (const auto& dmu : dataset.dmus) ids.insert(dmu.id);

  for (const auto& label : dataset.groups()) {
    std::vector<const Dmu*> members;
    for (const auto& dmu : dataset.dmus)
      if (dmu.group == label) members.push_back(&dmu);
    if (members.size() < 2)
      throw ValidationError("group '" + label + "' has " +
                            std::to_string(members.size()) +
                            " DMUs; Monte Carlo expansion needs at least 2 "
                            "for a spread estimate");

    std::vector<RunningStats> stats;
    stats.reserve(total_vars);
    for (std::size_t v = 0; v < total_vars; ++v)
      stats.push_back(compute_stats(members, v, n));

    std::mt19937_64 rng(splitmix64(config.seed ^ fnv1a64(label)));
    for (std::size_t k = 0; k < config.virtual_count_per_group; ++k) {
      Dmu dmu;
      dmu.id = config.id_prefix + label + "-" + std::to_string(k + 1);
      if (!ids.insert(dmu.id).second)
        throw ValidationError("generated id '" + dmu.id +
                              "' collides with an existing DMU id");
      dmu.group = label;
      for (std::size_t v = 0; v < total_vars; ++v) {
        const double value = draw_truncated(rng, stats[v]);
        if (v < n)
          dmu.inputs.push_back(value);
        else
          dmu.outputs.push_back(value);
      }
      out.dmus.push_back(std::move(dmu));
    }
  }
  return out;
}

}  // namespace dea
