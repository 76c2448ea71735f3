#include "dea/linear_program.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

#include "dea/errors.hpp"

namespace dea {

LinearProgram LinearProgram::with_dimensions(std::size_t n_rows,
                                             std::size_t n_cols) {
  LinearProgram lp;
  lp.objective.assign(n_cols, 0.0);
  lp.constraints = DenseMatrix(n_rows, n_cols);
  lp.senses.assign(n_rows, ConstraintSense::LessEqual);
  lp.rhs.assign(n_rows, 0.0);
  lp.lower_bounds.assign(n_cols, 0.0);
  lp.upper_bounds.assign(n_cols, std::nullopt);
  return lp;
}

void LinearProgram::validate() const {
  const std::size_t rows = constraints.rows();
  const std::size_t cols = constraints.cols();
  auto fail = [](const std::string& what) { throw ValidationError(what); };

  if (senses.size() != rows)
    fail("constraint senses count " + std::to_string(senses.size()) +
         " does not match matrix row count " + std::to_string(rows));
  if (rhs.size() != rows)
    fail("rhs length " + std::to_string(rhs.size()) +
         " does not match matrix row count " + std::to_string(rows));
  if (objective.size() != cols)
    fail("objective length " + std::to_string(objective.size()) +
         " does not match matrix column count " + std::to_string(cols));
  if (lower_bounds.size() != cols)
    fail("lower bound count " + std::to_string(lower_bounds.size()) +
         " does not match matrix column count " + std::to_string(cols));
  if (upper_bounds.size() != cols)
    fail("upper bound count " + std::to_string(upper_bounds.size()) +
         " does not match matrix column count " + std::to_string(cols));
  if (!variable_names.empty() && variable_names.size() != cols)
    fail("variable name count " + std::to_string(variable_names.size()) +
         " does not match matrix column count " + std::to_string(cols));

  for (std::size_t j = 0; j < cols; ++j) {
    if (!std::isfinite(objective[j]))
      fail("objective coefficient " + std::to_string(j) + " is not finite");
    if (!std::isfinite(lower_bounds[j]))
      fail("lower bound " + std::to_string(j) + " is not finite");
    if (upper_bounds[j]) {
      if (!std::isfinite(*upper_bounds[j]))
        fail("upper bound " + std::to_string(j) + " is not finite");
      if (*upper_bounds[j] < lower_bounds[j])
        fail("upper bound " + std::to_string(j) + " (" +
             std::to_string(*upper_bounds[j]) + ") is below lower bound (" +
             std::to_string(lower_bounds[j]) + ")");
    }
  }
  for (std::size_t i = 0; i < rows; ++i) {
    if (!std::isfinite(rhs[i]))
      fail("rhs " + std::to_string(i) + " is not finite");
    for (std::size_t j = 0; j < cols; ++j)
      if (!std::isfinite(constraints.at(i, j)))
        fail("constraint coefficient (" + std::to_string(i) + ", " +
             std::to_string(j) + ") is not finite");
  }
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::Infeasible:
      return "infeasible";
    case SolveStatus::Unbounded:
      return "unbounded";
  }
  return "unknown";
}

namespace {

// Simplex tableau in canonical form. Each row holds the constraint
// coefficients followed by the rhs in its last slot; `cost` is the reduced
// cost row with -(current objective) in its last slot.
struct Tableau {
  std::vector<std::vector<double>> rows;
  std::vector<double> cost;
  std::vector<std::size_t> basis;  // basic column of each row
  std::size_t width = 0;           // column count excluding the rhs slot
};

enum class RunOutcome { Optimal, Unbounded };

void check_finite(const Tableau& t) {
  for (const auto& row : t.rows)
    for (double v : row)
      if (!std::isfinite(v))
        throw NumericalError("simplex tableau degraded to non-finite values");
  for (double v : t.cost)
    if (!std::isfinite(v))
      throw NumericalError("simplex cost row degraded to non-finite values");
}

// Gauss-Jordan pivot on (pivot_row, pivot_col); keeps the tableau canonical.
void pivot(Tableau& t, std::size_t pivot_row, std::size_t pivot_col) {
  auto& prow = t.rows[pivot_row];
  const double inv = 1.0 / prow[pivot_col];
  for (double& v : prow) v *= inv;
  prow[pivot_col] = 1.0;

  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (i == pivot_row) continue;
    auto& row = t.rows[i];
    const double factor = row[pivot_col];
    if (factor == 0.0) continue;
    for (std::size_t j = 0; j <= t.width; ++j) row[j] -= factor * prow[j];
    row[pivot_col] = 0.0;
  }
  const double cost_factor = t.cost[pivot_col];
  if (cost_factor != 0.0) {
    for (std::size_t j = 0; j <= t.width; ++j)
      t.cost[j] -= cost_factor * prow[j];
    t.cost[pivot_col] = 0.0;
  }
  t.basis[pivot_row] = pivot_col;
}

// Entering column under Dantzig's rule: most negative reduced cost, lowest
// index on ties. Columns at or past `column_limit` are never eligible, which
// keeps driven-out artificials from re-entering.
std::size_t dantzig_entering(const Tableau& t, std::size_t column_limit,
                             double optimality_tol) {
  std::size_t best = t.width;
  double best_cost = -optimality_tol;
  for (std::size_t j = 0; j < column_limit; ++j) {
    if (t.cost[j] < best_cost) {
      best_cost = t.cost[j];
      best = j;
    }
  }
  return best;  // t.width means "none"
}

// Entering column under Bland's rule: lowest index with negative reduced cost.
std::size_t bland_entering(const Tableau& t, std::size_t column_limit,
                           double optimality_tol) {
  for (std::size_t j = 0; j < column_limit; ++j)
    if (t.cost[j] < -optimality_tol) return j;
  return t.width;
}

// Leaving row by the minimum-ratio test; ties resolved toward the smallest
// basic column index (Bland-compatible, deterministic).
std::size_t leaving_row(const Tableau& t, std::size_t entering,
                        double pivot_tol) {
  std::size_t best = t.rows.size();
  double best_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double a = t.rows[i][entering];
    if (a <= pivot_tol) continue;
    const double ratio = std::max(t.rows[i][t.width], 0.0) / a;
    if (ratio < best_ratio ||
        (ratio == best_ratio && best < t.rows.size() &&
         t.basis[i] < t.basis[best])) {
      best_ratio = ratio;
      best = i;
    }
  }
  return best;  // t.rows.size() means "unbounded direction"
}

RunOutcome run_simplex(Tableau& t, std::size_t column_limit,
                       const SolverTolerances& tol, int phase,
                       std::size_t& iterations, std::ostream* trace) {
  int stalled = 0;
  bool use_bland = false;
  double previous_objective = -t.cost[t.width];

  for (std::size_t local = 0; local < tol.max_iterations; ++local) {
    const std::size_t entering =
        use_bland ? bland_entering(t, column_limit, tol.optimality)
                  : dantzig_entering(t, column_limit, tol.optimality);
    if (entering == t.width) return RunOutcome::Optimal;

    const std::size_t leaving = leaving_row(t, entering, tol.pivot);
    if (leaving == t.rows.size()) return RunOutcome::Unbounded;

    pivot(t, leaving, entering);
    check_finite(t);
    ++iterations;

    const double objective = -t.cost[t.width];
    if (trace)
      *trace << "phase " << phase << " pivot " << iterations << ": col "
             << entering << " row " << leaving << " obj " << objective << '\n';

    // Degenerate pivots leave the objective flat; after a long stall switch
    // to Bland's rule, which cannot cycle.
    if (previous_objective - objective <= tol.optimality) {
      if (++stalled >= tol.bland_stall) use_bland = true;
    } else {
      stalled = 0;
    }
    previous_objective = objective;
  }
  throw NumericalError("simplex exceeded " +
                       std::to_string(tol.max_iterations) +
                       " iterations in phase " + std::to_string(phase));
}

}  // namespace

LpSolution solve(const LinearProgram& lp, const SolverTolerances& tolerances,
                 std::ostream* trace) {
  lp.validate();

  const std::size_t n_struct = lp.n_cols();

  // Shift every variable by its lower bound so the working variables are
  // all >= 0, and materialize finite upper bounds as explicit rows.
  struct WorkRow {
    std::vector<double> coeffs;
    ConstraintSense sense;
    double rhs;
  };
  std::vector<WorkRow> work;
  work.reserve(lp.n_rows());
  for (std::size_t i = 0; i < lp.n_rows(); ++i) {
    WorkRow row;
    row.coeffs.resize(n_struct);
    double shift = 0.0;
    for (std::size_t j = 0; j < n_struct; ++j) {
      row.coeffs[j] = lp.constraints.at(i, j);
      shift += row.coeffs[j] * lp.lower_bounds[j];
    }
    row.sense = lp.senses[i];
    row.rhs = lp.rhs[i] - shift;
    work.push_back(std::move(row));
  }
  for (std::size_t j = 0; j < n_struct; ++j) {
    if (!lp.upper_bounds[j]) continue;
    WorkRow row;
    row.coeffs.assign(n_struct, 0.0);
    row.coeffs[j] = 1.0;
    row.sense = ConstraintSense::LessEqual;
    row.rhs = *lp.upper_bounds[j] - lp.lower_bounds[j];
    work.push_back(std::move(row));
  }

  // Normalize to non-negative rhs so the phase-1 basis is valid.
  for (auto& row : work) {
    if (row.rhs >= 0.0) continue;
    for (double& c : row.coeffs) c = -c;
    row.rhs = -row.rhs;
    if (row.sense == ConstraintSense::LessEqual)
      row.sense = ConstraintSense::GreaterEqual;
    else if (row.sense == ConstraintSense::GreaterEqual)
      row.sense = ConstraintSense::LessEqual;
  }

  // Column layout: structural | slack/surplus | artificial.
  const std::size_t m = work.size();
  std::size_t n_slack = 0, n_artificial = 0;
  for (const auto& row : work) {
    if (row.sense != ConstraintSense::Equal) ++n_slack;
    if (row.sense != ConstraintSense::LessEqual) ++n_artificial;
  }
  const std::size_t first_slack = n_struct;
  const std::size_t first_artificial = first_slack + n_slack;
  const std::size_t n_total = first_artificial + n_artificial;

  Tableau t;
  t.width = n_total;
  t.rows.assign(m, std::vector<double>(n_total + 1, 0.0));
  t.basis.assign(m, 0);
  t.cost.assign(n_total + 1, 0.0);

  std::size_t slack_cursor = first_slack;
  std::size_t artificial_cursor = first_artificial;
  for (std::size_t i = 0; i < m; ++i) {
    auto& row = t.rows[i];
    std::copy(work[i].coeffs.begin(), work[i].coeffs.end(), row.begin());
    row[n_total] = work[i].rhs;
    switch (work[i].sense) {
      case ConstraintSense::LessEqual:
        row[slack_cursor] = 1.0;
        t.basis[i] = slack_cursor++;
        break;
      case ConstraintSense::GreaterEqual:
        row[slack_cursor] = -1.0;
        ++slack_cursor;
        row[artificial_cursor] = 1.0;
        t.basis[i] = artificial_cursor++;
        break;
      case ConstraintSense::Equal:
        row[artificial_cursor] = 1.0;
        t.basis[i] = artificial_cursor++;
        break;
    }
  }

  std::size_t iterations = 0;

  // Phase 1: minimize the sum of artificials. The cost row starts as
  // sum(artificial columns) made canonical against the artificial basis.
  if (n_artificial > 0) {
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis[i] < first_artificial) continue;
      const auto& row = t.rows[i];
      for (std::size_t j = 0; j <= n_total; ++j) t.cost[j] -= row[j];
    }
    // Artificial columns keep reduced cost 0 relative to themselves.
    for (std::size_t j = first_artificial; j < n_total; ++j) t.cost[j] += 1.0;

    const RunOutcome outcome = run_simplex(t, first_artificial, tolerances,
                                           /*phase=*/1, iterations, trace);
    if (outcome == RunOutcome::Unbounded)
      throw InternalError("phase-1 objective reported unbounded below zero");

    const double residual = -t.cost[n_total];
    if (residual > tolerances.phase1_infeasibility)
      return {SolveStatus::Infeasible, 0.0, {}, iterations};

    // Pivot any artificial still in the basis out on a real column, taking
    // the largest-magnitude coefficient so a near-zero artificial value is
    // not amplified. A row with no eligible column is redundant and dropped.
    std::vector<std::size_t> redundant;
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis[i] < first_artificial) continue;
      std::size_t col = first_artificial;
      double best = tolerances.pivot;
      for (std::size_t j = 0; j < first_artificial; ++j) {
        const double magnitude = std::abs(t.rows[i][j]);
        if (magnitude > best) {
          best = magnitude;
          col = j;
        }
      }
      if (col == first_artificial) {
        redundant.push_back(i);
      } else {
        pivot(t, i, col);
        ++iterations;
      }
    }
    for (auto it = redundant.rbegin(); it != redundant.rend(); ++it) {
      t.rows.erase(t.rows.begin() + static_cast<std::ptrdiff_t>(*it));
      t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(*it));
    }
  }

  // Drop artificial columns and install the real objective, reduced against
  // the current basis.
  for (auto& row : t.rows) {
    row[first_artificial] = row[n_total];
    row.resize(first_artificial + 1);
  }
  t.width = first_artificial;

  std::vector<double> shifted_cost(first_artificial, 0.0);
  std::copy(lp.objective.begin(), lp.objective.end(), shifted_cost.begin());

  t.cost.assign(first_artificial + 1, 0.0);
  std::copy(shifted_cost.begin(), shifted_cost.end(), t.cost.begin());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double basic_cost = shifted_cost[t.basis[i]];
    if (basic_cost == 0.0) continue;
    for (std::size_t j = 0; j <= t.width; ++j)
      t.cost[j] -= basic_cost * t.rows[i][j];
    t.cost[t.basis[i]] = 0.0;
  }

  const RunOutcome outcome = run_simplex(t, t.width, tolerances,
                                         /*phase=*/2, iterations, trace);
  if (outcome == RunOutcome::Unbounded)
    return {SolveStatus::Unbounded, 0.0, {}, iterations};

  std::vector<double> values(lp.lower_bounds.begin(), lp.lower_bounds.end());
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    if (t.basis[i] < n_struct)
      values[t.basis[i]] += t.rows[i][t.width];

  double objective = 0.0;
  for (std::size_t j = 0; j < n_struct; ++j)
    objective += lp.objective[j] * values[j];

  return {SolveStatus::Optimal, objective, std::move(values), iterations};
}

}  // namespace dea
