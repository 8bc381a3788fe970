#include "smcg/baselines.hpp"

#include <cmath>

#include "driver.hpp"
#include "smcg/linesearch.hpp"

namespace smcg {

namespace {

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

class BetaPolicy final : public detail::DirectionPolicy {
 public:
  BetaPolicy(BetaKind kind, const SolverParams& params) : kind_(kind), params_(params) {}

  detail::PlannedStep first(const ObjectiveProbe& probe, const detail::IterateView& it) override {
    detail::PlannedStep st;
    st.d = direction_neggrad(it.g).d;
    successive_ = 1;
    st.alpha0 = initial_step_neggrad(probe, it.x, it.f, it.g, NegGradStepContext{}, params_).alpha0;
    prev_kind_ = DirectionKind::NegGrad;
    return st;
  }

  detail::PlannedStep next(const ObjectiveProbe& probe, const detail::IterateView& it) override {
    const PairData& pair = *it.pair;
    bool quad_close = false;
    if (pair.sty > 0.0) {
      const double t = compute_t(it.f_prev, it.f, dot(it.g, pair.s), pair.sty);
      quad_close = quadratic_closeness(t, t_prev_, params_);
      t_prev_ = t;
    } else {
      t_prev_.reset();
    }

    const double b = beta(kind_, it.g, it.g_prev, it.d_prev, pair.y);
    detail::PlannedStep st;
    st.d.resize(it.g.size());
    for (std::size_t i = 0; i < it.g.size(); ++i) st.d[i] = -it.g[i] + b * it.d_prev[i];
    st.kind = DirectionKind::HS;
    const double gtd = dot(it.g, st.d);
    if (!all_finite(st.d) || !(gtd < -1e-12 * norm2(it.g) * norm2(st.d))) {
      st.d = direction_neggrad(it.g).d;
      st.kind = DirectionKind::NegGrad;
    }

    if (st.kind == DirectionKind::NegGrad) {
      ++successive_;
      NegGradStepContext ctx;
      ctx.pair = &pair;
      ctx.quad_close = quad_close;
      ctx.prev_was_neggrad = prev_kind_ == DirectionKind::NegGrad;
      ctx.numgra = successive_;
      st.alpha0 = initial_step_neggrad(probe, it.x, it.f, it.g, ctx, params_).alpha0;
    } else {
      successive_ = 0;
      st.alpha0 = initial_step_subspace(probe, it.x, it.f, it.g, st.d, quad_close, params_).alpha0;
    }
    prev_kind_ = st.kind;
    return st;
  }

 private:
  BetaKind kind_;
  const SolverParams& params_;
  std::optional<double> t_prev_;
  long successive_ = 0;
  DirectionKind prev_kind_ = DirectionKind::NegGrad;
};

}  // namespace

std::string_view to_string(BetaKind kind) {
  switch (kind) {
    case BetaKind::FR: return "fr";
    case BetaKind::HS: return "hs";
    case BetaKind::PRP: return "prp";
    case BetaKind::DY: return "dy";
    case BetaKind::HZ: return "hz";
  }
  return "unknown";
}

BetaKind beta_kind_from_string(std::string_view s) {
  if (s == "fr") return BetaKind::FR;
  if (s == "hs") return BetaKind::HS;
  if (s == "prp") return BetaKind::PRP;
  if (s == "dy") return BetaKind::DY;
  if (s == "hz") return BetaKind::HZ;
  throw ConfigError("unknown baseline '" + std::string(s) + "'");
}

double beta(BetaKind kind, std::span<const double> g_new, std::span<const double> g_old,
            std::span<const double> d_old, std::span<const double> y) {
  switch (kind) {
    case BetaKind::FR: return ratio(dot(g_new, g_new), dot(g_old, g_old));
    case BetaKind::HS: return ratio(dot(g_new, y), dot(d_old, y));
    case BetaKind::PRP: return ratio(dot(g_new, y), dot(g_old, g_old));
    case BetaKind::DY: return ratio(dot(g_new, g_new), dot(d_old, y));
    case BetaKind::HZ: {
      const double dty = dot(d_old, y);
      if (dty == 0.0) return 0.0;
      const double yy = dot(y, y);
      return (dot(y, g_new) - 2.0 * yy / dty * dot(d_old, g_new)) / dty;
    }
  }
  return 0.0;
}

RunOutput run_baseline(const ObjectiveProbe& probe, std::span<const double> x0, BetaKind kind,
                       const SolverParams& params, const RunOptions& opts) {
  BetaPolicy policy(kind, params);
  return detail::drive(probe, x0, params, policy, opts, std::string(to_string(kind)));
}

}  // namespace smcg
