#include "dea/dea.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "dea/errors.hpp"

namespace dea {

namespace {

void check_target(const Dataset& dataset, std::size_t target_index) {
  if (target_index >= dataset.size())
    throw ValidationError("target index " + std::to_string(target_index) +
                          " is out of range for " +
                          std::to_string(dataset.size()) + " DMUs");
}

}  // namespace

LinearProgram build_envelopment_lp(const Dataset& dataset,
                                   std::size_t target_index,
                                   RtsAssumption rts) {
  dataset.validate();
  check_target(dataset, target_index);

  const std::size_t k = dataset.size();
  const std::size_t n = dataset.n_inputs();
  const std::size_t m = dataset.m_outputs();
  const std::size_t n_rows = n + m + (rts == RtsAssumption::VRS ? 1 : 0);
  const Dmu& target = dataset.dmus[target_index];

  LinearProgram lp = LinearProgram::with_dimensions(n_rows, 1 + k);
  lp.objective[0] = 1.0;  // minimize theta
  lp.variable_names.reserve(1 + k);
  lp.variable_names.emplace_back("theta");
  for (const auto& dmu : dataset.dmus)
    lp.variable_names.push_back("lambda:" + dmu.id);

  for (std::size_t i = 0; i < n; ++i) {
    lp.constraints.at(i, 0) = -target.inputs[i];
    for (std::size_t j = 0; j < k; ++j)
      lp.constraints.at(i, 1 + j) = dataset.dmus[j].inputs[i];
    lp.senses[i] = ConstraintSense::LessEqual;
    lp.rhs[i] = 0.0;
  }
  for (std::size_t o = 0; o < m; ++o) {
    const std::size_t row = n + o;
    for (std::size_t j = 0; j < k; ++j)
      lp.constraints.at(row, 1 + j) = dataset.dmus[j].outputs[o];
    lp.senses[row] = ConstraintSense::GreaterEqual;
    lp.rhs[row] = target.outputs[o];
  }
  if (rts == RtsAssumption::VRS) {
    const std::size_t row = n + m;
    for (std::size_t j = 0; j < k; ++j) lp.constraints.at(row, 1 + j) = 1.0;
    lp.senses[row] = ConstraintSense::Equal;
    lp.rhs[row] = 1.0;
  }
  return lp;
}

RadialResult radial_efficiency(const Dataset& dataset,
                               std::size_t target_index, RtsAssumption rts,
                               const SolverTolerances& tolerances) {
  const LinearProgram lp = build_envelopment_lp(dataset, target_index, rts);
  const LpSolution solution = solve(lp, tolerances);
  if (solution.status != SolveStatus::Optimal)
    throw InternalError(
        "envelopment model for DMU '" + dataset.dmus[target_index].id +
        "' reported " + to_string(solution.status) +
        "; self-evaluation always admits theta = 1, so this is a bug");

  RadialResult result;
  result.theta = solution.variable_values[0];
  // theta > 1 is impossible in exact arithmetic (lambda = self attains 1);
  // shave solver dust, but refuse to mask a real excess.
  if (result.theta > 1.0) {
    if (result.theta > 1.0 + 1e-7)
      throw InternalError("radial score " + std::to_string(result.theta) +
                          " exceeds 1; the model admits theta = 1 at self");
    result.theta = 1.0;
  }
  result.lambdas.assign(solution.variable_values.begin() + 1,
                        solution.variable_values.end());
  result.iterations = solution.iteration_count;
  return result;
}

SlackResult max_slack_stage(const Dataset& dataset, std::size_t target_index,
                            RtsAssumption rts, double theta_star,
                            const SolverTolerances& tolerances) {
  dataset.validate();
  check_target(dataset, target_index);

  const std::size_t k = dataset.size();
  const std::size_t n = dataset.n_inputs();
  const std::size_t m = dataset.m_outputs();
  const std::size_t n_rows = n + m + (rts == RtsAssumption::VRS ? 1 : 0);
  const Dmu& target = dataset.dmus[target_index];

  // Variables: lambda_1..lambda_K, input slacks, output slacks.
  LinearProgram lp = LinearProgram::with_dimensions(n_rows, k + n + m);
  for (std::size_t s = 0; s < n + m; ++s) lp.objective[k + s] = -1.0;

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j)
      lp.constraints.at(i, j) = dataset.dmus[j].inputs[i];
    lp.constraints.at(i, k + i) = 1.0;
    lp.senses[i] = ConstraintSense::Equal;
    lp.rhs[i] = theta_star * target.inputs[i];
  }
  for (std::size_t o = 0; o < m; ++o) {
    const std::size_t row = n + o;
    for (std::size_t j = 0; j < k; ++j)
      lp.constraints.at(row, j) = dataset.dmus[j].outputs[o];
    lp.constraints.at(row, k + n + o) = -1.0;
    lp.senses[row] = ConstraintSense::Equal;
    lp.rhs[row] = target.outputs[o];
  }
  if (rts == RtsAssumption::VRS) {
    const std::size_t row = n + m;
    for (std::size_t j = 0; j < k; ++j) lp.constraints.at(row, j) = 1.0;
    lp.senses[row] = ConstraintSense::Equal;
    lp.rhs[row] = 1.0;
  }

  const LpSolution solution = solve(lp, tolerances);
  if (solution.status != SolveStatus::Optimal)
    throw InternalError("slack stage for DMU '" + target.id + "' reported " +
                        to_string(solution.status) +
                        "; theta* was not an optimal radial score");

  SlackResult result;
  result.lambdas.assign(solution.variable_values.begin(),
                        solution.variable_values.begin() +
                            static_cast<std::ptrdiff_t>(k));
  result.input_slacks.assign(
      solution.variable_values.begin() + static_cast<std::ptrdiff_t>(k),
      solution.variable_values.begin() + static_cast<std::ptrdiff_t>(k + n));
  result.output_slacks.assign(
      solution.variable_values.begin() + static_cast<std::ptrdiff_t>(k + n),
      solution.variable_values.end());
  return result;
}

std::pair<double, double> sum_lambda_range(const Dataset& dataset,
                                           std::size_t target_index,
                                           double theta_star,
                                           const SolverTolerances& tolerances) {
  dataset.validate();
  check_target(dataset, target_index);

  const std::size_t k = dataset.size();
  const std::size_t n = dataset.n_inputs();
  const std::size_t m = dataset.m_outputs();
  const Dmu& target = dataset.dmus[target_index];

  LinearProgram lp = LinearProgram::with_dimensions(n + m, k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j)
      lp.constraints.at(i, j) = dataset.dmus[j].inputs[i];
    lp.senses[i] = ConstraintSense::LessEqual;
    lp.rhs[i] = theta_star * target.inputs[i];
  }
  for (std::size_t o = 0; o < m; ++o) {
    for (std::size_t j = 0; j < k; ++j)
      lp.constraints.at(n + o, j) = dataset.dmus[j].outputs[o];
    lp.senses[n + o] = ConstraintSense::GreaterEqual;
    lp.rhs[n + o] = target.outputs[o];
  }

  auto optimum = [&](double direction) {
    for (std::size_t j = 0; j < k; ++j) lp.objective[j] = direction;
    const LpSolution solution = solve(lp, tolerances);
    if (solution.status != SolveStatus::Optimal)
      throw InternalError("sum-lambda range LP for DMU '" + target.id +
                          "' reported " + to_string(solution.status));
    return direction * solution.objective_value;
  };
  const double lowest = optimum(1.0);
  const double highest = optimum(-1.0);
  return {lowest, highest};
}

namespace {

struct Partition {
  Dataset subset;                     // reference set
  std::vector<std::size_t> members;   // global index per subset position
};

EfficiencyRecord evaluate_one(const Partition& part, std::size_t local,
                              std::size_t dataset_size,
                              const EvaluationOptions& options) {
  const Dmu& dmu = part.subset.dmus[local];
  const bool want_crs = options.models != ModelSelection::BccOnly;
  const bool want_vrs = options.models != ModelSelection::CcrOnly;

  EfficiencyRecord rec;
  rec.dmu_id = dmu.id;
  rec.group = dmu.group;
  rec.degenerate = std::all_of(dmu.outputs.begin(), dmu.outputs.end(),
                               [](double y) { return y == 0.0; });

  RadialResult crs, vrs;
  if (want_crs) {
    crs = radial_efficiency(part.subset, local, RtsAssumption::CRS,
                            options.solver);
    rec.theta_crs = crs.theta;
  }
  if (want_vrs) {
    vrs = radial_efficiency(part.subset, local, RtsAssumption::VRS,
                            options.solver);
    rec.theta_vrs = vrs.theta;
  }
  if (want_crs && want_vrs && crs.theta > vrs.theta + 1e-7)
    throw InternalError("DMU '" + dmu.id + "': CRS score " +
                        std::to_string(crs.theta) + " exceeds VRS score " +
                        std::to_string(vrs.theta) +
                        "; the VRS region is a subset of the CRS region");

  const RtsAssumption primary_rts =
      want_crs ? RtsAssumption::CRS : RtsAssumption::VRS;
  const RadialResult& primary = want_crs ? crs : vrs;

  SlackResult slacks = max_slack_stage(part.subset, local, primary_rts,
                                       primary.theta, options.solver);
  const double total_slack =
      std::accumulate(slacks.input_slacks.begin(), slacks.input_slacks.end(),
                      0.0) +
      std::accumulate(slacks.output_slacks.begin(), slacks.output_slacks.end(),
                      0.0);

  // Strong efficiency on the primary model: snap to the canonical
  // self-peer representation (theta exactly 1, lambda = e_self, no slack).
  std::vector<double> crs_lambdas = crs.lambdas;
  std::vector<double> vrs_lambdas = vrs.lambdas;
  const bool canonical = primary.theta >= 1.0 - options.efficient_tol &&
                         total_slack <= 1e-7;
  if (canonical) {
    if (want_crs) {
      rec.theta_crs = 1.0;
      crs_lambdas.assign(part.subset.size(), 0.0);
      crs_lambdas[local] = 1.0;
    }
    if (want_vrs) {
      // CRS-efficiency implies VRS-efficiency; in BCC-only runs this branch
      // is reached on the VRS model's own evidence.
      rec.theta_vrs = 1.0;
      vrs_lambdas.assign(part.subset.size(), 0.0);
      vrs_lambdas[local] = 1.0;
    }
    std::fill(slacks.input_slacks.begin(), slacks.input_slacks.end(), 0.0);
    std::fill(slacks.output_slacks.begin(), slacks.output_slacks.end(), 0.0);
  }
  rec.input_slacks = std::move(slacks.input_slacks);
  rec.output_slacks = std::move(slacks.output_slacks);

  auto scatter = [&](const std::vector<double>& local_lambdas) {
    std::vector<double> full(dataset_size, 0.0);
    for (std::size_t j = 0; j < local_lambdas.size(); ++j)
      full[part.members[j]] = local_lambdas[j];
    return full;
  };
  if (want_crs) {
    rec.lambdas_crs = scatter(crs_lambdas);
    rec.sum_lambda_crs =
        std::accumulate(crs_lambdas.begin(), crs_lambdas.end(), 0.0);
  }
  if (want_vrs) rec.lambdas_vrs = scatter(vrs_lambdas);

  const std::vector<double>& peer_lambdas =
      want_crs ? crs_lambdas : vrs_lambdas;
  for (std::size_t j = 0; j < peer_lambdas.size(); ++j)
    if (peer_lambdas[j] > options.peer_tol)
      rec.peers.push_back(PeerWeight{part.subset.dmus[j].id, peer_lambdas[j]});

  if (options.robust_lambda_range && want_crs)
    rec.sum_lambda_range =
        sum_lambda_range(part.subset, local, crs.theta, options.solver);

  return rec;
}

}  // namespace

std::vector<EfficiencyRecord> evaluate_all(const Dataset& dataset,
                                           const EvaluationOptions& options) {
  dataset.validate();
  const std::size_t threshold =
      sample_size_threshold(dataset.n_inputs(), dataset.m_outputs());

  std::vector<Partition> partitions;
  if (options.scenario == GroupScenario::PerGroup) {
    for (const auto& label : dataset.groups()) {
      Partition part;
      part.subset.input_names = dataset.input_names;
      part.subset.output_names = dataset.output_names;
      for (std::size_t i = 0; i < dataset.size(); ++i) {
        if (dataset.dmus[i].group != label) continue;
        part.subset.dmus.push_back(dataset.dmus[i]);
        part.members.push_back(i);
      }
      if (!options.force && part.members.size() < threshold)
        throw ValidationError(
            "group '" + label + "' has " +
            std::to_string(part.members.size()) + " DMUs; at least " +
            std::to_string(threshold) + " are required for " +
            std::to_string(dataset.n_inputs()) + " input(s) and " +
            std::to_string(dataset.m_outputs()) +
            " output(s); pass force to analyze anyway");
      partitions.push_back(std::move(part));
    }
  } else {
    Partition part;
    part.subset = dataset;
    part.members.resize(dataset.size());
    std::iota(part.members.begin(), part.members.end(), 0);
    if (!options.force && part.members.size() < threshold)
      throw ValidationError(
          "pooled sample has " + std::to_string(part.members.size()) +
          " DMUs; at least " + std::to_string(threshold) +
          " are required for " + std::to_string(dataset.n_inputs()) +
          " input(s) and " + std::to_string(dataset.m_outputs()) +
          " output(s); pass force to analyze anyway");
    partitions.push_back(std::move(part));
  }

  struct WorkItem {
    const Partition* partition;
    std::size_t local;
    std::size_t global;
  };
  std::vector<WorkItem> work;
  work.reserve(dataset.size());
  for (const auto& part : partitions)
    for (std::size_t local = 0; local < part.members.size(); ++local)
      work.push_back(WorkItem{&part, local, part.members[local]});

  std::vector<EfficiencyRecord> records(dataset.size());
  std::atomic<std::size_t> cursor{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t index = cursor.fetch_add(1);
      if (index >= work.size()) return;
      const WorkItem& item = work[index];
      try {
        records[item.global] = evaluate_one(*item.partition, item.local,
                                            dataset.size(), options);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  std::size_t n_threads = options.threads != 0
                              ? options.threads
                              : std::thread::hardware_concurrency();
  n_threads = std::max<std::size_t>(1, std::min(n_threads, work.size()));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& thread : pool) thread.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return records;
}

}  // namespace dea
