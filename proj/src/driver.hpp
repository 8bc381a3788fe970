#pragma once

// Iteration loop shared by the SMCG methods and the beta-formula baselines.

#include <span>

#include "smcg/solver.hpp"

namespace smcg::detail {

struct IterateView {
  long k = 0;
  std::span<const double> x;
  std::span<const double> g;
  double f = 0.0;
  double f_prev = 0.0;
  const PairData* pair = nullptr;      // last step, absent at k = 0
  std::span<const double> d_prev;      // direction that produced the last step
  std::span<const double> g_prev;
};

struct PlannedStep {
  Vector d;
  DirectionKind kind = DirectionKind::NegGrad;
  bool fallback = false;
  double alpha0 = 1.0;
};

class DirectionPolicy {
 public:
  virtual ~DirectionPolicy() = default;
  virtual PlannedStep first(const ObjectiveProbe& probe, const IterateView& it) = 0;
  virtual PlannedStep next(const ObjectiveProbe& probe, const IterateView& it) = 0;
};

RunOutput drive(const ObjectiveProbe& probe, std::span<const double> x0, const SolverParams& params,
                DirectionPolicy& policy, const RunOptions& opts, const std::string& default_method);

}  // namespace smcg::detail
