#pragma once

// Property checks shared by the `check` subcommand and the acceptance test.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "smcg/bench.hpp"
#include "smcg/problems.hpp"
#include "smcg/solver.hpp"

namespace smcg {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Residuals of both secular-root solvers and their agreement on random data.
CheckResult check_secular_roots(std::uint64_t seed, int trials = 1000);

/// First-order system and grid-oracle comparison for random 2x2 subproblems,
/// `trials` instances per norm kind.
CheckResult check_subproblem_optimality(std::uint64_t seed, int trials = 500);

/// Dense oracle against the 2x2 paths (n = 2) and its own optimality (n = 3..5).
CheckResult check_whole_space(std::uint64_t seed, int trials = 100);

/// Analytic gradients against central differences at x0 and five nearby points.
CheckResult check_gradients(const std::vector<ProblemSpec>& problems, std::uint64_t seed);

/// Violations of the per-iteration invariants in one trace.
struct InvariantTally {
  long iterations = 0;
  long descent_violations = 0;
  long bound_violations = 0;   // PREG, QUAD and NEGGRAD only
  long f_above_C = 0;
  long wolfe_violations = 0;
  long q_over_bound = 0;
  double max_Q = 1.0;
  double q_bound = 0.0;
  double min_descent_margin = 1e300;  // min of g'd / (-c1 ||g||^2); >= 1 is fine
  double worst_bound_ratio = 0.0;    // max of ||d|| / (c ||g||)

  void merge(const InvariantTally& o);
};

InvariantTally tally_trace(const std::vector<TraceRow>& trace, const SolverParams& params, std::size_t n);

/// Merged tally over every run in `runs` (each must carry its trace).
InvariantTally tally_suite(const std::vector<SuiteRun>& runs, const SolverParams& params);

}  // namespace smcg
