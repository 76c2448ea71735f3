#pragma once

#include "dea/linear_program.hpp"

namespace dea::testing {

struct OracleResult {
  bool feasible = false;
  double objective = 0.0;  // meaningful only when feasible
};

// Brute-force LP optimum by basic-feasible-solution enumeration: convert to
// equality standard form (lower-bound shift, upper bounds as rows, slack and
// surplus columns), solve every square basis system by Gaussian elimination,
// keep the feasible ones, and take the minimum objective.
//
// Sound only for LPs whose optimum is attained at a vertex, i.e. bounded
// instances; callers must not feed unbounded programs.
[[nodiscard]] OracleResult enumerate_optimum(const LinearProgram& lp);

// Largest constraint/bound violation of a candidate point, for feasibility
// certificates on solver output.
[[nodiscard]] double max_violation(const LinearProgram& lp,
                                   const std::vector<double>& point);

}  // namespace dea::testing
