#include "smcg/direction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace smcg {

namespace {

Vector combine(std::span<const double> g, std::span<const double> s, double mu, double nu) {
  Vector d(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) d[i] = mu * g[i] + nu * s[i];
  return d;
}

DirectionResult fallback_neggrad(std::span<const double> g) {
  DirectionResult r = direction_neggrad(g);
  r.fallback = true;
  return r;
}

// Accept a subspace direction only if it is finite and downhill.
bool usable(std::span<const double> g, const Vector& d) {
  if (!all_finite(d)) return false;
  const double gtd = dot(g, d);
  return std::isfinite(gtd) && gtd < 0.0;
}

SubproblemInput make_input(const SubspaceScalars& sc, const Indicators& ind, int p, NormKind kind) {
  SubproblemInput in;
  in.c2 = {sc.gg, sc.gs};
  in.B = {ind.rho_k, sc.gy, sc.sty};
  in.E = {sc.gg, sc.gs, sc.ss};
  in.sigma = ind.sigma_k;
  in.p = p;
  in.norm_kind = kind;
  return in;
}

DirectionResult from_solution(std::span<const double> g, const PairData& pair, const SubproblemSolution& sol,
                              DirectionKind kind) {
  DirectionResult r;
  r.d = combine(g, pair.s, sol.mu, sol.nu);
  r.kind = kind;
  r.sub = sol;
  if (!usable(g, r.d)) return fallback_neggrad(g);
  return r;
}

}  // namespace

SubspaceScalars SubspaceScalars::from(std::span<const double> g, const PairData& pair) {
  SubspaceScalars sc;
  sc.gg = dot(g, g);
  sc.gs = dot(g, pair.s);
  sc.gy = dot(g, pair.y);
  sc.sty = pair.sty;
  sc.ss = pair.ss;
  sc.yy = pair.yy;
  return sc;
}

double compute_t(double f_prev, double f_cur, double gts, double sty) {
  if (!(sty > 0.0)) throw DomainError("compute_t: s'y must be positive");
  return std::abs(2.0 * (f_prev - f_cur + gts) / sty - 1.0);
}

std::optional<double> compute_theta(double f_prev, double f_cur, double gts, double sty) {
  const double den = 0.5 * sty - gts;
  if (den == 0.0) return std::nullopt;
  return (f_prev - f_cur) / den;
}

double compute_sigma_k(int p, double f_prev, double f_cur, double gts, double sty, double ss, NormKind norm_kind,
                       bool euclid_full_power) {
  const double num = p * std::abs(f_prev - f_cur + gts - 0.5 * sty);
  if (norm_kind == NormKind::HessNorm) {
    if (!(sty > 0.0)) throw DomainError("compute_sigma_k: s'y must be positive");
    return num / std::pow(sty, 0.5 * p);
  }
  if (!(ss > 0.0)) throw DomainError("compute_sigma_k: ||s|| must be positive");
  // ||s||^(p/2) = ss^(p/4); the full-power variant uses ||s||^p = ss^(p/2).
  const double expo = euclid_full_power ? 0.5 * p : 0.25 * p;
  return num / std::pow(ss, expo);
}

double compute_rho(double yy, double sty, double gg) { return 1.5 * (yy / sty) * gg; }

RestartQuantities restart_quantities(double f_prev, double f_cur, double g_prev_s, double g_cur_s) {
  const double trap = 0.5 * (g_prev_s + g_cur_s);
  const double den = f_prev + trap;
  RestartQuantities q;
  q.r = den == 0.0 ? std::numeric_limits<double>::infinity() : std::abs(f_cur / den - 1.0);
  q.rbar = std::abs(f_cur - f_prev - trap);
  return q;
}

Indicators compute_indicators(double f_prev, double f_cur, const SubspaceScalars& sc, const SolverParams& params) {
  Indicators ind;
  ind.t_k = compute_t(f_prev, f_cur, sc.gs, sc.sty);
  ind.theta_k = compute_theta(f_prev, f_cur, sc.gs, sc.sty);
  const RestartQuantities rq = restart_quantities(f_prev, f_cur, sc.gs - sc.sty, sc.gs);
  ind.r_prev = rq.r;
  ind.rbar_prev = rq.rbar;
  ind.rho_k = compute_rho(sc.yy, sc.sty, sc.gg);
  const NormKind nk = params.variant == Variant::PR1 ? NormKind::HessNorm : NormKind::EuclidNorm;
  ind.sigma_k = compute_sigma_k(params.p, f_prev, f_cur, sc.gs, sc.sty, sc.ss, nk, params.euclid_sigma_full_power);
  return ind;
}

bool quadratic_closeness(double t_k, std::optional<double> t_prev, const SolverParams& params) {
  if (t_k <= params.c1_quad) return true;
  return t_k <= params.c2_quad && t_prev.has_value() && *t_prev <= params.c2_quad;
}

ModelChoice check_conditions(const SubspaceScalars& sc, const Indicators& ind, std::optional<double> t_prev,
                             const SolverParams& params) {
  ModelChoice choice;
  choice.quad_close = quadratic_closeness(ind.t_k, t_prev, params);

  const double curv_lo = sc.sty / sc.ss;
  const double curv_hi = sc.yy / sc.sty;
  const bool curvature_ok = params.xi1 <= curv_lo && curv_lo <= curv_hi && curv_hi <= params.xi2;
  if (curvature_ok) {
    const bool theta_near_one = ind.theta_k.has_value() && std::abs(*ind.theta_k - 1.0) < params.gamma;
    const double scale = sc.ss * sc.yy;
    const bool ill_conditioned = sc.sty * sc.sty <= 1e-5 * scale && ind.rbar_prev * ind.rbar_prev <= 1e-6 * scale;
    if (choice.quad_close) {
      choice.kind = ModelKind::Quad;
      choice.reason = ChoiceReason::QuadT;
    } else if (theta_near_one) {
      choice.kind = ModelKind::Quad;
      choice.reason = ChoiceReason::QuadTheta;
    } else if (ill_conditioned) {
      choice.kind = ModelKind::Quad;
      choice.reason = ChoiceReason::QuadIllConditioned;
    } else {
      choice.kind = ModelKind::Preg;
      choice.reason = ChoiceReason::RegularizedModel;
    }
    return choice;
  }
  const bool hs_ok =
      std::abs(sc.gy * sc.gs) / (sc.sty * sc.gg) <= params.xi3 && params.xi1 <= curv_lo;
  if (hs_ok) {
    choice.kind = ModelKind::HS;
    choice.reason = ChoiceReason::HsConjugacy;
  } else {
    choice.kind = ModelKind::NegGrad;
    choice.reason = ChoiceReason::NegGradFallback;
  }
  return choice;
}

DirectionResult direction_preg_hessnorm(std::span<const double> g, const PairData& pair, const SubspaceScalars& sc,
                                        const Indicators& ind, int p) {
  try {
    const SubproblemSolution sol = solve_hessnorm(make_input(sc, ind, p, NormKind::HessNorm));
    return from_solution(g, pair, sol, DirectionKind::PregHessNorm);
  } catch (const Error&) {
    return fallback_neggrad(g);
  }
}

bool near_collinear(const SubspaceScalars& sc) {
  return sc.gs * sc.gs > (1.0 - 1e-5) * sc.gg * sc.ss;
}

DirectionResult direction_preg_euclidnorm(std::span<const double> g, const PairData& pair, const SubspaceScalars& sc,
                                          const Indicators& ind, int p) {
  try {
    SubproblemInput in = make_input(sc, ind, p, NormKind::EuclidNorm);
    SubproblemSolution sol;
    if (near_collinear(sc)) {
      in.sigma = 0.0;
      sol = solve_hessnorm(in);
    } else {
      sol = solve_euclidnorm(in, sc.yy / sc.sty);
    }
    return from_solution(g, pair, sol, DirectionKind::PregEuclidNorm);
  } catch (const Error&) {
    return fallback_neggrad(g);
  }
}

DirectionResult direction_quad(std::span<const double> g, const PairData& pair, const SubspaceScalars& sc,
                               const Indicators& ind) {
  const double rho = ind.rho_k;
  const double delta = rho * sc.sty - sc.gy * sc.gy;
  if (!(delta > 0.0) || !std::isfinite(delta)) return fallback_neggrad(g);
  SubproblemSolution sol;
  sol.mu = (sc.gy * sc.gs - sc.sty * sc.gg) / delta;
  sol.nu = (sc.gy * sc.gg - rho * sc.gs) / delta;
  return from_solution(g, pair, sol, DirectionKind::Quad);
}

DirectionResult direction_hs(std::span<const double> g, const PairData& pair, std::span<const double> d_prev) {
  const double dty = dot(d_prev, pair.y);
  if (dty == 0.0 || !std::isfinite(dty)) return fallback_neggrad(g);
  const double beta = dot(g, pair.y) / dty;
  DirectionResult r;
  r.kind = DirectionKind::HS;
  r.d.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) r.d[i] = -g[i] + beta * d_prev[i];
  if (!usable(g, r.d)) return fallback_neggrad(g);
  return r;
}

DirectionResult direction_neggrad(std::span<const double> g) {
  DirectionResult r;
  r.kind = DirectionKind::NegGrad;
  r.d.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) r.d[i] = -g[i];
  return r;
}

double sufficient_descent_constant(const SolverParams& params) {
  const double x2 = params.xi2;
  return std::min({0.5, 1.0 - params.xi3, 2.0 / (3.0 * x2), 1.0 / (3.0 * x2), 2.0 / (5.0 * x2)});
}

double direction_bound_constant(const SolverParams& params) { return std::max(1.0, 20.0 / params.xi1); }

}  // namespace smcg
