#include "driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "smcg/linesearch.hpp"

namespace smcg::detail {

namespace {

// Counts every evaluation made on behalf of one run.
class CountingProbe final : public ObjectiveProbe {
 public:
  explicit CountingProbe(const ObjectiveProbe& inner) : inner_(inner) {}

  std::size_t dim() const override { return inner_.dim(); }
  std::string name() const override { return inner_.name(); }
  double value(std::span<const double> x) const override {
    ++n_f;
    return inner_.value(x);
  }
  void gradient(std::span<const double> x, std::span<double> g) const override {
    ++n_g;
    inner_.gradient(x, g);
  }

  mutable long n_f = 0;
  mutable long n_g = 0;

 private:
  const ObjectiveProbe& inner_;
};

TraceRow row_at(long k, double f, const NonmonotoneRef& ref, std::span<const double> g) {
  TraceRow r;
  r.k = k;
  r.f = f;
  r.C = ref.C;
  r.Q = ref.Q;
  r.gnorm_inf = norm_inf(g);
  r.g_sqnorm = dot(g, g);
  return r;
}

}  // namespace

RunOutput drive(const ObjectiveProbe& probe_in, std::span<const double> x0, const SolverParams& params,
                DirectionPolicy& policy, const RunOptions& opts, const std::string& default_method) {
  validate(params);
  if (x0.size() != probe_in.dim()) throw DomainError("run: x0 has the wrong dimension");
  if (!all_finite(x0)) throw DomainError("run: x0 must be finite");

  const auto t_start = std::chrono::steady_clock::now();
  CountingProbe probe(probe_in);
  const std::size_t n = x0.size();

  RunOutput out;
  RunRecord& rec = out.record;
  rec.problem = opts.problem.empty() ? probe_in.name() : opts.problem;
  rec.method = opts.method.empty() ? default_method : opts.method;
  rec.n = n;

  Vector x(x0.begin(), x0.end());
  Vector g(n);
  double f = probe.value(x);
  probe.gradient(x, g);

  NonmonotoneRef ref = NonmonotoneRef::start(f, n);
  long k = 0;

  auto finish = [&](RunStatus status) {
    rec.status = status;
    rec.iters = k;
    rec.n_f = probe.n_f;
    rec.n_g = probe.n_g;
    rec.final_f = f;
    rec.final_gnorm_inf = norm_inf(g);
    if (opts.trace) out.trace.push_back(row_at(k, f, ref, g));
    out.x = x;
    rec.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return out;
  };

  if (!std::isfinite(f) || !all_finite(g)) return finish(RunStatus::EvalFail);
  if (norm_inf(g) <= params.eps) return finish(RunStatus::Converged);
  if (k >= params.max_iter) return finish(RunStatus::MaxIter);

  std::optional<PairData> pair;
  Vector d_prev;
  Vector g_prev;
  double f_prev = f;

  auto view = [&]() {
    IterateView v;
    v.k = k;
    v.x = x;
    v.g = g;
    v.f = f;
    v.f_prev = f_prev;
    v.pair = pair ? &*pair : nullptr;
    v.d_prev = d_prev;
    v.g_prev = g_prev;
    return v;
  };

  PlannedStep step;
  try {
    step = policy.first(probe, view());
  } catch (const EvaluationError&) {
    return finish(RunStatus::EvalFail);
  }

  for (;;) {
    LineSearchResult ls;
    try {
      ls = wolfe_search(probe, x, f, g, step.d, step.alpha0, ref.C, params);
    } catch (const LineSearchError&) {
      return finish(RunStatus::LineSearchFail);
    } catch (const PreconditionError&) {
      return finish(RunStatus::LineSearchFail);
    } catch (const EvaluationError&) {
      return finish(RunStatus::EvalFail);
    }

    ++rec.dir_kind_histogram[static_cast<std::size_t>(step.kind)];
    if (step.fallback) ++rec.fallbacks;
    if (opts.trace) {
      TraceRow r = row_at(k, f, ref, g);
      r.gtd = dot(g, step.d);
      r.d_norm = norm2(step.d);
      r.alpha = ls.alpha;
      r.gtd_new = dot(ls.g_new, step.d);
      r.kind = step.kind;
      r.has_step = true;
      out.trace.push_back(r);
    }

    Vector s(n);
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = ls.x_new[i] - x[i];
      y[i] = ls.g_new[i] - g[i];
    }
    pair = PairData::make(std::move(s), std::move(y));
    d_prev = std::move(step.d);
    g_prev = std::move(g);
    f_prev = f;
    x = std::move(ls.x_new);
    g = std::move(ls.g_new);
    f = ls.f_new;
    ref = update_nonmonotone(ref, f);
    rec.max_Q = std::max(rec.max_Q, ref.Q);
    ++k;

    if (norm_inf(g) <= params.eps) return finish(RunStatus::Converged);
    if (k >= params.max_iter) return finish(RunStatus::MaxIter);

    try {
      step = policy.next(probe, view());
    } catch (const EvaluationError&) {
      return finish(RunStatus::EvalFail);
    }
  }
}

}  // namespace smcg::detail
