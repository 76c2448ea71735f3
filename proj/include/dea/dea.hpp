#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dea/dataset.hpp"
#include "dea/linear_program.hpp"

namespace dea {

// Frontier technology: CRS is the base envelopment model; VRS adds the
// convexity row over the peer weights.
enum class RtsAssumption { CRS, VRS };

// PerGroup restricts each DMU's reference set to its own group; Merged
// evaluates everyone against the pooled frontier.
enum class GroupScenario { PerGroup, Merged };

enum class ModelSelection { Both, CcrOnly, BccOnly };

struct PeerWeight {
  std::string dmu_id;
  double weight = 0.0;

  friend bool operator==(const PeerWeight&, const PeerWeight&) = default;
};

// Everything the envelopment analysis knows about one DMU. Lambda vectors
// are full dataset length in dataset order (zero outside the DMU's
// reference set); slacks and peers come from the primary model (CRS when
// computed, otherwise VRS), with slacks taken from the max-slack second
// stage and lambdas from the radial stage — the same solution the thetas
// are read from.
struct EfficiencyRecord {
  std::string dmu_id;
  std::string group;
  std::optional<double> theta_crs;
  std::optional<double> theta_vrs;
  std::vector<double> lambdas_crs;
  std::vector<double> lambdas_vrs;
  std::optional<double> sum_lambda_crs;
  // Robust mode only: [min, max] of sum(lambda) over the CRS optimal face.
  std::optional<std::pair<double, double>> sum_lambda_range;
  std::vector<double> input_slacks;
  std::vector<double> output_slacks;
  std::vector<PeerWeight> peers;
  // All outputs zero: theta_crs degenerates to 0 because the output
  // constraints are vacuous. Flagged so reporting can exclude the score.
  bool degenerate = false;
};

struct EvaluationOptions {
  GroupScenario scenario = GroupScenario::PerGroup;
  ModelSelection models = ModelSelection::Both;
  bool force = false;               // bypass the sample-size gate
  bool robust_lambda_range = false; // also compute sum_lambda_range
  std::size_t threads = 0;          // 0 = one per hardware thread
  SolverTolerances solver;
  double efficient_tol = 1e-6;      // theta >= 1 - this counts as efficient
  double peer_tol = 1e-6;           // report peers with lambda above this
};

// Input-oriented envelopment LP for one DMU. Variables are ordered
// [theta, lambda_1..lambda_K]; rows are the N input constraints
// sum_k lambda_k x_ik - theta x_i0 <= 0, then the M output constraints
// sum_k lambda_k y_jk >= y_j0, then (VRS only) sum_k lambda_k = 1.
[[nodiscard]] LinearProgram build_envelopment_lp(const Dataset& dataset,
                                                 std::size_t target_index,
                                                 RtsAssumption rts);

struct RadialResult {
  double theta = 0.0;
  std::vector<double> lambdas;  // reference-set size == dataset.size()
  std::size_t iterations = 0;
};

// Minimal radial input shrink factor for one DMU, with the peer weights
// from the same optimal basis.
[[nodiscard]] RadialResult radial_efficiency(
    const Dataset& dataset, std::size_t target_index, RtsAssumption rts,
    const SolverTolerances& tolerances = {});

struct SlackResult {
  std::vector<double> input_slacks;
  std::vector<double> output_slacks;
  std::vector<double> lambdas;
};

// Second stage at fixed theta*: maximize the total slack subject to
// sum_k lambda_k x_ik + s_in_i = theta* x_i0 and
// sum_k lambda_k y_jk - s_out_j = y_j0 (plus convexity under VRS).
// Pins down the otherwise non-unique residual slacks.
[[nodiscard]] SlackResult max_slack_stage(const Dataset& dataset,
                                          std::size_t target_index,
                                          RtsAssumption rts, double theta_star,
                                          const SolverTolerances& tolerances = {});

// [min, max] of sum(lambda) over all CRS-optimal peer weights at fixed
// theta*, for callers that need the classification ambiguity made explicit.
[[nodiscard]] std::pair<double, double> sum_lambda_range(
    const Dataset& dataset, std::size_t target_index, double theta_star,
    const SolverTolerances& tolerances = {});

// Full evaluation: one record per DMU in dataset order. Under PerGroup each
// group must pass the sample-size gate (unless options.force); under Merged
// the pooled sample must. Per-DMU solves run concurrently; results are
// deterministic regardless of thread count.
[[nodiscard]] std::vector<EfficiencyRecord> evaluate_all(
    const Dataset& dataset, const EvaluationOptions& options = {});

}  // namespace dea
