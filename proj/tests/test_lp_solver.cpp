#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include <doctest.h>

#include "dea/errors.hpp"
#include "dea/linear_program.hpp"
#include "support/lp_oracle.hpp"
#include "support/random_instances.hpp"

namespace {

using namespace dea;
using dea::testing::enumerate_optimum;
using dea::testing::max_violation;
using dea::testing::random_bounded_lp;

LinearProgram make_lp(std::vector<double> objective,
                      std::vector<std::vector<double>> rows,
                      std::vector<ConstraintSense> senses,
                      std::vector<double> rhs) {
  LinearProgram lp =
      LinearProgram::with_dimensions(rows.size(), objective.size());
  lp.objective = std::move(objective);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      lp.constraints.at(i, j) = rows[i][j];
  lp.senses = std::move(senses);
  lp.rhs = std::move(rhs);
  return lp;
}

// Every optimal claim in this suite is backed by a feasibility certificate.
void check_certified_optimal(const LinearProgram& lp, const LpSolution& sol) {
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(max_violation(lp, sol.variable_values) <= 1e-7);
}

}  // namespace

TEST_SUITE("lp_solver") {

TEST_CASE("single variable above a floor") {
  const auto lp = make_lp({1.0}, {{1.0}}, {ConstraintSense::GreaterEqual},
                          {1.0});
  const auto sol = solve(lp);
  check_certified_optimal(lp, sol);
  CHECK(sol.objective_value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sol.variable_values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sol.iteration_count > 0);
}

TEST_CASE("tied optima resolve to the lowest-index vertex") {
  const auto lp = make_lp({-1.0, -1.0}, {{1.0, 1.0}},
                          {ConstraintSense::LessEqual}, {1.0});
  const auto sol = solve(lp);
  check_certified_optimal(lp, sol);
  CHECK(sol.objective_value == doctest::Approx(-1.0).epsilon(1e-12));
  // The whole segment x + y = 1 is optimal; the deterministic pivot rule
  // must land on x = 1, y = 0 every time.
  CHECK(sol.variable_values[0] == 1.0);
  CHECK(sol.variable_values[1] == 0.0);
}

TEST_CASE("infeasible by sign") {
  const auto lp =
      make_lp({1.0}, {{1.0}}, {ConstraintSense::LessEqual}, {-1.0});
  const auto sol = solve(lp);
  CHECK(sol.status == SolveStatus::Infeasible);
  CHECK(sol.variable_values.empty());
}

TEST_CASE("unbounded descent") {
  const auto lp = make_lp({-1.0}, {{1.0}}, {ConstraintSense::GreaterEqual},
                          {1.0});
  const auto sol = solve(lp);
  CHECK(sol.status == SolveStatus::Unbounded);
}

TEST_CASE("equality row") {
  const auto lp = make_lp({1.0, 1.0}, {{1.0, 1.0}}, {ConstraintSense::Equal},
                          {2.0});
  const auto sol = solve(lp);
  check_certified_optimal(lp, sol);
  CHECK(sol.objective_value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("duplicated equality rows are tolerated") {
  const auto lp = make_lp({1.0, 1.0}, {{1.0, 1.0}, {1.0, 1.0}},
                          {ConstraintSense::Equal, ConstraintSense::Equal},
                          {2.0, 2.0});
  const auto sol = solve(lp);
  check_certified_optimal(lp, sol);
  CHECK(sol.objective_value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("negative lower bound is honoured") {
  auto lp = make_lp({1.0}, {{1.0}}, {ConstraintSense::LessEqual}, {10.0});
  lp.lower_bounds[0] = -5.0;
  const auto sol = solve(lp);
  check_certified_optimal(lp, sol);
  CHECK(sol.objective_value == doctest::Approx(-5.0).epsilon(1e-12));
}

TEST_CASE("upper bound caps the maximizing variable") {
  auto lp = make_lp({-1.0}, {{1.0}}, {ConstraintSense::LessEqual}, {10.0});
  lp.upper_bounds[0] = 3.0;
  const auto sol = solve(lp);
  check_certified_optimal(lp, sol);
  CHECK(sol.objective_value == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(sol.variable_values[0] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("classic cycling instance terminates at the optimum") {
  // Beale's example: Dantzig's rule cycles without an anti-cycling fallback.
  const auto lp = make_lp(
      {-0.75, 150.0, -0.02, 6.0},
      {{0.25, -60.0, -0.04, 9.0}, {0.5, -90.0, -0.02, 3.0},
       {0.0, 0.0, 1.0, 0.0}},
      {ConstraintSense::LessEqual, ConstraintSense::LessEqual,
       ConstraintSense::LessEqual},
      {0.0, 0.0, 1.0});
  const auto sol = solve(lp);
  check_certified_optimal(lp, sol);
  CHECK(sol.objective_value == doctest::Approx(-0.05).epsilon(1e-9));
}

TEST_CASE("row scaling by a positive constant does not move the optimum") {
  std::mt19937_64 rng(2024);
  std::size_t compared = 0;
  while (compared < 50) {
    const LinearProgram lp = random_bounded_lp(rng);
    const auto base = solve(lp);
    if (base.status != SolveStatus::Optimal) continue;
    LinearProgram scaled = lp;
    for (std::size_t i = 0; i < scaled.n_rows(); ++i) {
      const double factor = 1.0 + static_cast<double>(i % 7);
      for (std::size_t j = 0; j < scaled.n_cols(); ++j)
        scaled.constraints.at(i, j) *= factor;
      scaled.rhs[i] *= factor;
    }
    const auto rescaled = solve(scaled);
    REQUIRE(rescaled.status == SolveStatus::Optimal);
    CHECK(std::abs(rescaled.objective_value - base.objective_value) <= 1e-9);
    ++compared;
  }
}

TEST_CASE("repeat solves are bitwise identical") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 25; ++i) {
    const LinearProgram lp = random_bounded_lp(rng);
    const auto first = solve(lp);
    const auto second = solve(lp);
    CHECK(first.status == second.status);
    CHECK(first.objective_value == second.objective_value);
    CHECK(first.variable_values == second.variable_values);
    CHECK(first.iteration_count == second.iteration_count);
  }
}

TEST_CASE("oracle sanity on known programs") {
  SUBCASE("bounded minimum") {
    const auto lp = make_lp({1.0, 2.0}, {{1.0, 1.0}},
                            {ConstraintSense::GreaterEqual}, {4.0});
    const auto oracle = enumerate_optimum(lp);
    REQUIRE(oracle.feasible);
    CHECK(oracle.objective == doctest::Approx(4.0).epsilon(1e-12));
  }
  SUBCASE("infeasible program") {
    const auto lp =
        make_lp({1.0}, {{1.0}, {1.0}},
                {ConstraintSense::GreaterEqual, ConstraintSense::LessEqual},
                {3.0, 1.0});
    CHECK_FALSE(enumerate_optimum(lp).feasible);
  }
}

TEST_CASE("random programs agree with basis enumeration") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 100; ++i) {
    const LinearProgram lp = random_bounded_lp(rng);
    const auto oracle = enumerate_optimum(lp);
    const auto sol = solve(lp);
    INFO("instance ", i);
    REQUIRE(sol.status != SolveStatus::Unbounded);
    CHECK(oracle.feasible == (sol.status == SolveStatus::Optimal));
    if (oracle.feasible && sol.status == SolveStatus::Optimal) {
      CHECK(std::abs(sol.objective_value - oracle.objective) <= 1e-6);
      CHECK(max_violation(lp, sol.variable_values) <= 1e-7);
    }
  }
}

TEST_CASE("structural validation failures throw") {
  SUBCASE("objective length mismatch") {
    auto lp = make_lp({1.0, 1.0}, {{1.0, 1.0}}, {ConstraintSense::LessEqual},
                      {1.0});
    lp.objective.pop_back();
    CHECK_THROWS_AS((void)solve(lp), ValidationError);
  }
  SUBCASE("upper bound below lower bound") {
    auto lp = make_lp({1.0}, {{1.0}}, {ConstraintSense::LessEqual}, {1.0});
    lp.lower_bounds[0] = 2.0;
    lp.upper_bounds[0] = 1.0;
    CHECK_THROWS_AS((void)solve(lp), ValidationError);
  }
  SUBCASE("non-finite coefficient") {
    auto lp = make_lp({1.0}, {{1.0}}, {ConstraintSense::LessEqual}, {1.0});
    lp.constraints.at(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS((void)solve(lp), ValidationError);
  }
}

TEST_CASE("pivot trace is emitted on request") {
  const auto lp = make_lp({-1.0, -2.0}, {{1.0, 1.0}, {1.0, 3.0}},
                          {ConstraintSense::LessEqual,
                           ConstraintSense::LessEqual},
                          {4.0, 6.0});
  std::ostringstream trace;
  const auto sol = solve(lp, {}, &trace);
  check_certified_optimal(lp, sol);
  CHECK_FALSE(trace.str().empty());
}

}  // TEST_SUITE
