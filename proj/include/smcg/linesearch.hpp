#pragma once

// Nonmonotone Wolfe line search and initial stepsizes.

#include <optional>
#include <span>

#include "smcg/model_core.hpp"

namespace smcg {

/// Reference value C and weight Q of the nonmonotone Armijo test.
struct NonmonotoneRef {
  double C = 0.0;
  double Q = 1.0;
  std::size_t l = 20;
  std::size_t k = 0;

  static NonmonotoneRef start(double f0, std::size_t n);
};

/// C_{k+1}, Q_{k+1} after accepting a step to a point with value f_new.
NonmonotoneRef update_nonmonotone(const NonmonotoneRef& ref, double f_new);

/// One weighted-average update with an explicit eta_k (k is advanced).
NonmonotoneRef apply_nonmonotone_weight(const NonmonotoneRef& ref, double f_new, double eta_k);

struct LineSearchResult {
  double alpha = 0.0;
  Vector x_new;
  double f_new = 0.0;
  Vector g_new;
  int n_f = 0;
  int n_g = 0;
};

/// Finds alpha with f(x + alpha d) <= C + delta alpha g'd and
/// grad f(x + alpha d)'d >= sigma g'd. At most 60 function evaluations.
/// Throws PreconditionError for a non-descent d, LineSearchError when no
/// step is found and EvaluationError for a non-finite gradient.
LineSearchResult wolfe_search(const ObjectiveProbe& probe, std::span<const double> x, double f,
                              std::span<const double> g, std::span<const double> d, double alpha0, double C,
                              const SolverParams& params);

/// Minimizer of the quadratic through phi(0), phi'(0) and phi(a); empty when
/// the quadratic is not strictly convex.
std::optional<double> interpolation_minimizer(double phi0, double dphi0, double a, double phia);

double clamp_step(double alpha, const SolverParams& params);

struct InitialStep {
  double alpha0 = 1.0;
  int n_f = 0;
};

/// Initial trial step for subspace and HS directions.
InitialStep initial_step_subspace(const ObjectiveProbe& probe, std::span<const double> x, double f,
                                  std::span<const double> g, std::span<const double> d, bool quad_close,
                                  const SolverParams& params);

struct NegGradStepContext {
  const PairData* pair = nullptr;  // absent on the first iteration
  bool quad_close = false;
  bool prev_was_neggrad = false;
  long numgra = 0;  // successive negative-gradient directions including this one
};

/// Adaptive BB initial step for d = -g.
InitialStep initial_step_neggrad(const ObjectiveProbe& probe, std::span<const double> x, double f,
                                 std::span<const double> g, const NegGradStepContext& ctx,
                                 const SolverParams& params);

}  // namespace smcg
