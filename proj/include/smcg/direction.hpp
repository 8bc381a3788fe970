#pragma once

// Model-choice indicators and the search directions built on span{g_k, s_{k-1}}.

#include <optional>
#include <span>

#include "smcg/model_core.hpp"
#include "smcg/subproblem.hpp"

namespace smcg {

/// Inner products of the current gradient with the last pair.
struct SubspaceScalars {
  double gg = 0.0;
  double gs = 0.0;
  double gy = 0.0;
  double sty = 0.0;
  double ss = 0.0;
  double yy = 0.0;

  static SubspaceScalars from(std::span<const double> g, const PairData& pair);
};

struct Indicators {
  double t_k = 0.0;
  std::optional<double> theta_k;  // absent when 0.5 s'y - g's vanishes
  double r_prev = 0.0;
  double rbar_prev = 0.0;
  double rho_k = 0.0;
  double sigma_k = 0.0;
};

double compute_t(double f_prev, double f_cur, double gts, double sty);
std::optional<double> compute_theta(double f_prev, double f_cur, double gts, double sty);
double compute_sigma_k(int p, double f_prev, double f_cur, double gts, double sty, double ss, NormKind norm_kind,
                       bool euclid_full_power = false);
double compute_rho(double yy, double sty, double gg);

struct RestartQuantities {
  double r = 0.0;
  double rbar = 0.0;
};

/// r and rbar from scalars; g_prev_s = g_{k-1}'s and g_cur_s = g_k's.
RestartQuantities restart_quantities(double f_prev, double f_cur, double g_prev_s, double g_cur_s);

/// All indicators for the pair (x_{k-1}, x_k). Requires sty > 0.
Indicators compute_indicators(double f_prev, double f_cur, const SubspaceScalars& sc, const SolverParams& params);

enum class ModelKind { Preg, Quad, HS, NegGrad };

enum class ChoiceReason {
  RegularizedModel,    // curvature in range, no quadratic indicator
  QuadT,               // t_k small
  QuadTheta,           // theta_k near 1
  QuadIllConditioned,  // s nearly orthogonal to y
  HsConjugacy,         // curvature out of range, HS test holds
  NegGradFallback,     // neither
};

struct ModelChoice {
  ModelKind kind = ModelKind::NegGrad;
  ChoiceReason reason = ChoiceReason::NegGradFallback;
  bool quad_close = false;  // t_k test, reused by the initial stepsize
};

/// t_k <= c1, or t_k and t_{k-1} both <= c2.
bool quadratic_closeness(double t_k, std::optional<double> t_prev, const SolverParams& params);

ModelChoice check_conditions(const SubspaceScalars& sc, const Indicators& ind, std::optional<double> t_prev,
                             const SolverParams& params);

struct DirectionResult {
  Vector d;
  DirectionKind kind = DirectionKind::NegGrad;
  bool fallback = false;  // a numerical failure forced d = -g
  std::optional<SubproblemSolution> sub;
};

DirectionResult direction_preg_hessnorm(std::span<const double> g, const PairData& pair, const SubspaceScalars& sc,
                                        const Indicators& ind, int p);
DirectionResult direction_preg_euclidnorm(std::span<const double> g, const PairData& pair, const SubspaceScalars& sc,
                                          const Indicators& ind, int p);
DirectionResult direction_quad(std::span<const double> g, const PairData& pair, const SubspaceScalars& sc,
                               const Indicators& ind);
DirectionResult direction_hs(std::span<const double> g, const PairData& pair, std::span<const double> d_prev);
DirectionResult direction_neggrad(std::span<const double> g);

/// g and s too close to collinear for the Euclidean metric.
bool near_collinear(const SubspaceScalars& sc);

/// min{1/2, 1 - xi3, 2/(3 xi2), 1/(3 xi2), 2/(5 xi2)}.
double sufficient_descent_constant(const SolverParams& params);

/// max{1, 20 / xi1}.
double direction_bound_constant(const SolverParams& params);

}  // namespace smcg
