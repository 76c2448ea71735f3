#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dea {

// Minimal dense row-major matrix; just enough for building and pivoting
// the small LPs this library produces.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  [[nodiscard]] double& at(std::size_t row, std::size_t col) {
    return data_[row * cols_ + col];
  }
  [[nodiscard]] double at(std::size_t row, std::size_t col) const {
    return data_[row * cols_ + col];
  }
  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

enum class ConstraintSense { LessEqual, Equal, GreaterEqual };

// A minimization LP with mixed constraint senses and variable bounds:
//
//   minimize    objective . x
//   subject to  constraints x  (sense_i)  rhs_i      for each row i
//               lower_bounds <= x <= upper_bounds
//
// Lower bounds default to 0; upper bounds default to unbounded. Instances
// are treated as immutable once handed to solve().
struct LinearProgram {
  std::vector<double> objective;
  DenseMatrix constraints;
  std::vector<ConstraintSense> senses;
  std::vector<double> rhs;
  std::vector<double> lower_bounds;
  std::vector<std::optional<double>> upper_bounds;
  std::vector<std::string> variable_names;  // optional; empty or one per column

  // Zeroed program with bounds defaulted (lower 0, upper unbounded).
  [[nodiscard]] static LinearProgram with_dimensions(std::size_t n_rows,
                                                     std::size_t n_cols);

  [[nodiscard]] std::size_t n_rows() const { return constraints.rows(); }
  [[nodiscard]] std::size_t n_cols() const { return constraints.cols(); }

  // Throws ValidationError if any structural invariant fails: mismatched
  // dimensions, non-finite coefficients, or upper bound below lower bound.
  void validate() const;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded };

[[nodiscard]] std::string to_string(SolveStatus status);

struct SolverTolerances {
  double feasibility = 1e-9;   // accepted constraint violation
  double optimality = 1e-9;    // accepted negative reduced cost
  double pivot = 1e-10;        // smallest usable pivot magnitude
  double phase1_infeasibility = 1e-7;  // phase-1 objective above this => infeasible
  int bland_stall = 50;        // iterations without progress before Bland's rule
  std::size_t max_iterations = 50'000;  // per phase; exceeding is a NumericalError
};

struct LpSolution {
  SolveStatus status = SolveStatus::Optimal;
  double objective_value = 0.0;
  std::vector<double> variable_values;  // empty unless status == Optimal
  std::size_t iteration_count = 0;
};

// Two-phase primal dense simplex. Deterministic: identical inputs produce
// bitwise-identical solutions, including on degenerate ties (lowest-index
// pivot selection, switching to Bland's rule after a stall).
//
// Throws ValidationError if lp.validate() fails and NumericalError if the
// tableau degrades to non-finite values or an iteration cap is exceeded.
// When `trace` is non-null, one line per pivot is written to it.
[[nodiscard]] LpSolution solve(const LinearProgram& lp,
                               const SolverTolerances& tolerances = {},
                               std::ostream* trace = nullptr);

}  // namespace dea
