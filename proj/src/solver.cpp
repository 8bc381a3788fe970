#include "smcg/solver.hpp"

#include <cmath>

#include "driver.hpp"
#include "smcg/linesearch.hpp"

namespace smcg {

namespace {

class SmcgPolicy final : public detail::DirectionPolicy {
 public:
  explicit SmcgPolicy(const SolverParams& params) : params_(params) {}

  detail::PlannedStep first(const ObjectiveProbe& probe, const detail::IterateView& it) override {
    detail::PlannedStep st;
    DirectionResult r = direction_neggrad(it.g);
    st.d = std::move(r.d);
    st.kind = DirectionKind::NegGrad;
    numgrad_successive_ = 1;
    NegGradStepContext ctx;
    st.alpha0 = initial_step_neggrad(probe, it.x, it.f, it.g, ctx, params_).alpha0;
    prev_kind_ = DirectionKind::NegGrad;
    return st;
  }

  detail::PlannedStep next(const ObjectiveProbe& probe, const detail::IterateView& it) override {
    const PairData& pair = *it.pair;
    const SubspaceScalars sc = SubspaceScalars::from(it.g, pair);

    DirectionResult dir;
    bool quad_close = false;
    if (!(pair.sty > 0.0) || !(pair.ss > 0.0)) {
      // Wolfe curvature guarantees s'y > 0; only rounding can get here.
      dir = direction_neggrad(it.g);
      dir.fallback = true;
      t_prev_.reset();
    } else {
      const Indicators ind = compute_indicators(it.f_prev, it.f, sc, params_);
      ++iter_restart_;
      if (ind.r_prev <= params_.xi4 || ind.rbar_prev <= params_.xi5) ++iter_quad_;
      else iter_quad_ = 0;

      const ModelChoice choice = check_conditions(sc, ind, t_prev_, params_);
      quad_close = choice.quad_close;
      t_prev_ = ind.t_k;

      if (isnotgra_ == params_.max_restart || (iter_quad_ == params_.min_quad && iter_restart_ != iter_quad_)) {
        dir = direction_neggrad(it.g);
      } else {
        switch (choice.kind) {
          case ModelKind::Preg:
            dir = params_.variant == Variant::PR1 ? direction_preg_hessnorm(it.g, pair, sc, ind, params_.p)
                                                  : direction_preg_euclidnorm(it.g, pair, sc, ind, params_.p);
            break;
          case ModelKind::Quad: dir = direction_quad(it.g, pair, sc, ind); break;
          case ModelKind::HS: dir = direction_hs(it.g, pair, it.d_prev); break;
          case ModelKind::NegGrad: dir = direction_neggrad(it.g); break;
        }
      }
    }

    detail::PlannedStep st;
    st.kind = dir.kind;
    st.fallback = dir.fallback;
    if (dir.kind == DirectionKind::NegGrad) {
      ++numgrad_;
      ++numgrad_successive_;
      isnotgra_ = 0;
      iter_restart_ = 0;
      NegGradStepContext ctx;
      ctx.pair = &pair;
      ctx.quad_close = quad_close;
      ctx.prev_was_neggrad = prev_kind_ == DirectionKind::NegGrad;
      ctx.numgra = numgrad_successive_;
      st.alpha0 = initial_step_neggrad(probe, it.x, it.f, it.g, ctx, params_).alpha0;
    } else {
      ++isnotgra_;
      numgrad_successive_ = 0;
      st.alpha0 = initial_step_subspace(probe, it.x, it.f, it.g, dir.d, quad_close, params_).alpha0;
    }
    st.d = std::move(dir.d);
    prev_kind_ = st.kind;
    return st;
  }

 private:
  const SolverParams& params_;
  std::optional<double> t_prev_;
  int iter_restart_ = 0;
  int iter_quad_ = 0;
  int isnotgra_ = 0;
  long numgrad_ = 0;
  long numgrad_successive_ = 0;
  DirectionKind prev_kind_ = DirectionKind::NegGrad;
};

}  // namespace

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "Converged";
    case RunStatus::MaxIter: return "MaxIter";
    case RunStatus::LineSearchFail: return "LineSearchFail";
    case RunStatus::EvalFail: return "EvalFail";
  }
  return "Unknown";
}

RunStatus run_status_from_string(std::string_view s) {
  if (s == "Converged") return RunStatus::Converged;
  if (s == "MaxIter") return RunStatus::MaxIter;
  if (s == "LineSearchFail") return RunStatus::LineSearchFail;
  if (s == "EvalFail") return RunStatus::EvalFail;
  throw DomainError("unknown run status '" + std::string(s) + "'");
}

std::string method_name(const SolverParams& params) {
  return "smcg_" + std::string(to_string(params.variant)) + "_p" + std::to_string(params.p);
}

RunOutput run(const ObjectiveProbe& probe, std::span<const double> x0, const SolverParams& params,
              const RunOptions& opts) {
  SmcgPolicy policy(params);
  return detail::drive(probe, x0, params, policy, opts, method_name(params));
}

RestartQuantities restart_quantities(double f_prev, double f_cur, std::span<const double> g_prev,
                                     std::span<const double> g_cur, std::span<const double> s) {
  return restart_quantities(f_prev, f_cur, dot(g_prev, s), dot(g_cur, s));
}

}  // namespace smcg
