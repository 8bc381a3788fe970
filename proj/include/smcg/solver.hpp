#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smcg/direction.hpp"
#include "smcg/model_core.hpp"

namespace smcg {

enum class RunStatus { Converged, MaxIter, LineSearchFail, EvalFail };

std::string_view to_string(RunStatus s);
RunStatus run_status_from_string(std::string_view s);

/// State at the start of iteration k and the step taken from it. The last row
/// of a trace has has_step = false and records the final point only.
struct TraceRow {
  long k = 0;
  double f = 0.0;
  double C = 0.0;
  double Q = 1.0;
  double gnorm_inf = 0.0;
  double g_sqnorm = 0.0;
  double gtd = 0.0;      // g_k'd_k
  double d_norm = 0.0;
  double alpha = 0.0;
  double gtd_new = 0.0;  // g_{k+1}'d_k
  DirectionKind kind = DirectionKind::NegGrad;
  bool has_step = false;
};

struct RunRecord {
  std::string problem;
  std::size_t n = 0;
  std::string method;
  RunStatus status = RunStatus::MaxIter;
  long iters = 0;
  long n_f = 0;
  long n_g = 0;
  double time_s = 0.0;
  double final_f = 0.0;
  double final_gnorm_inf = 0.0;
  std::array<long, kDirectionKindCount> dir_kind_histogram{};
  long fallbacks = 0;
  double max_Q = 1.0;
};

struct RunOptions {
  bool trace = false;
  std::string problem;  // defaults to probe.name()
  std::string method;   // defaults to smcg_<variant>_p<p>
};

struct RunOutput {
  RunRecord record;
  std::vector<TraceRow> trace;
  Vector x;
};

/// Runs SMCG_PR1 or SMCG_PR2 (params.variant) from x0.
RunOutput run(const ObjectiveProbe& probe, std::span<const double> x0, const SolverParams& params,
              const RunOptions& opts = {});

/// Restart quantities of the last step s with gradients g_prev, g_cur at its ends.
RestartQuantities restart_quantities(double f_prev, double f_cur, std::span<const double> g_prev,
                                     std::span<const double> g_cur, std::span<const double> s);

std::string method_name(const SolverParams& params);

}  // namespace smcg
