#include "smcg/linesearch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace smcg {

namespace {

constexpr int kMaxEvaluations = 60;

void step_point(std::span<const double> x, std::span<const double> d, double alpha, Vector& out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + alpha * d[i];
}

// Trial point inside (lo, hi) from the quadratic through (lo, f_lo, dphi_lo) and (hi, f_hi).
double zoom_trial(double lo, double f_lo, double dphi_lo, double hi, double f_hi, double min_frac) {
  const double w = hi - lo;
  double t = 0.5;
  if (std::isfinite(f_hi)) {
    const auto m = interpolation_minimizer(f_lo, dphi_lo, w, f_hi);
    if (m) t = *m / w;
  } else {
    t = 0.1;
  }
  t = std::clamp(t, min_frac, 0.9);
  return lo + t * w;
}

}  // namespace

NonmonotoneRef NonmonotoneRef::start(double f0, std::size_t n) {
  NonmonotoneRef r;
  r.C = f0;
  r.Q = 1.0;
  r.l = std::max<std::size_t>(20, n);
  r.k = 0;
  return r;
}

NonmonotoneRef apply_nonmonotone_weight(const NonmonotoneRef& ref, double f_new, double eta_k) {
  NonmonotoneRef r = ref;
  r.Q = eta_k * ref.Q + 1.0;
  r.C = ref.C + (f_new - ref.C) / r.Q;
  r.k = ref.k + 1;
  return r;
}

NonmonotoneRef update_nonmonotone(const NonmonotoneRef& ref, double f_new) {
  if (ref.k == 0) {
    NonmonotoneRef r = ref;
    r.C = std::min(ref.C, f_new + 1.0);
    r.Q = 2.0;
    r.k = 1;
    return r;
  }
  const double eta = (ref.C - f_new > 0.999 * std::abs(ref.C)) ? 0.7 : 0.999;
  const double eta_k = (ref.k % ref.l == 0) ? eta : 1.0;
  return apply_nonmonotone_weight(ref, f_new, eta_k);
}

std::optional<double> interpolation_minimizer(double phi0, double dphi0, double a, double phia) {
  const double curv = phia - phi0 - dphi0 * a;
  if (!(curv > 0.0) || !std::isfinite(curv)) return std::nullopt;
  const double m = -dphi0 * a * a / (2.0 * curv);
  if (!std::isfinite(m)) return std::nullopt;
  return m;
}

double clamp_step(double alpha, const SolverParams& params) {
  return std::min(std::max(alpha, params.lambda_min), params.lambda_max);
}

LineSearchResult wolfe_search(const ObjectiveProbe& probe, std::span<const double> x, double f,
                              std::span<const double> g, std::span<const double> d, double alpha0, double C,
                              const SolverParams& params) {
  const double gtd = dot(g, d);
  if (!(gtd < 0.0)) throw PreconditionError("wolfe_search: d is not a descent direction");

  LineSearchResult res;
  Vector xt(x.size());
  Vector gt(x.size());

  double lo = 0.0;
  double f_lo = f;
  double dphi_lo = gtd;
  double hi = std::numeric_limits<double>::infinity();
  double f_hi = std::numeric_limits<double>::infinity();
  double alpha = clamp_step(alpha0, params);

  for (int it = 0; it < kMaxEvaluations; ++it) {
    step_point(x, d, alpha, xt);
    const double ft = probe.value(xt);
    ++res.n_f;

    if (!std::isfinite(ft) || ft > C + params.delta * alpha * gtd) {
      hi = alpha;
      f_hi = std::isfinite(ft) ? ft : std::numeric_limits<double>::infinity();
      alpha = zoom_trial(lo, f_lo, dphi_lo, hi, f_hi, lo == 0.0 ? 0.01 : 0.1);
    } else {
      probe.gradient(xt, gt);
      ++res.n_g;
      if (!all_finite(gt)) throw EvaluationError("wolfe_search: non-finite gradient for " + probe.name());
      const double dphi = dot(gt, d);
      if (dphi >= params.sigma * gtd) {
        res.alpha = alpha;
        res.x_new = xt;
        res.f_new = ft;
        res.g_new = gt;
        return res;
      }
      lo = alpha;
      f_lo = ft;
      dphi_lo = dphi;
      if (std::isinf(hi)) {
        if (alpha >= params.lambda_max) break;
        alpha = std::min(5.0 * alpha, params.lambda_max);
      } else {
        alpha = zoom_trial(lo, f_lo, dphi_lo, hi, f_hi, 0.1);
      }
    }
    if (alpha < params.lambda_min) break;
    if (std::isfinite(hi) && hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  throw LineSearchError("wolfe_search: no acceptable step for " + probe.name());
}

InitialStep initial_step_subspace(const ObjectiveProbe& probe, std::span<const double> x, double f,
                                  std::span<const double> g, std::span<const double> d, bool quad_close,
                                  const SolverParams& params) {
  InitialStep st;
  if (!quad_close) return st;
  Vector xt(x.size());
  step_point(x, d, 1.0, xt);
  const double phi1 = probe.value(xt);
  st.n_f = 1;
  if (!std::isfinite(phi1)) return st;
  const auto m = interpolation_minimizer(f, dot(g, d), 1.0, phi1);
  if (m && *m > 0.0) st.alpha0 = clamp_step(*m, params);
  return st;
}

InitialStep initial_step_neggrad(const ObjectiveProbe& probe, std::span<const double> x, double f,
                                 std::span<const double> g, const NegGradStepContext& ctx,
                                 const SolverParams& params) {
  InitialStep st;
  const double gg = dot(g, g);
  if (ctx.pair == nullptr || !(ctx.pair->sty > 0.0)) {
    st.alpha0 = clamp_step(1.0 / std::sqrt(gg), params);
    return st;
  }
  const PairData& pr = *ctx.pair;
  const double lam = (x.size() > 10 && ctx.numgra > 12) ? 0.999 : 1.0;
  const double bb1 = pr.ss / pr.sty;
  const double bb2 = pr.sty / pr.yy;
  const double gs = dot(g, pr.s);
  const double abar = clamp_step(lam * (gs > 0.0 ? bb2 : bb1), params);
  st.alpha0 = abar;
  if (ctx.quad_close && !ctx.prev_was_neggrad && gg <= 1.0) {
    Vector xt(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) xt[i] = x[i] - abar * g[i];
    const double phia = probe.value(xt);
    st.n_f = 1;
    if (std::isfinite(phia)) {
      const auto m = interpolation_minimizer(f, -gg, abar, phia);
      if (m && *m > 0.0) st.alpha0 = clamp_step(*m, params);
    }
  }
  return st;
}

}  // namespace smcg
