#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "smcg/checks.hpp"
#include "smcg/problems.hpp"
#include "smcg/solver.hpp"

using namespace smcg;

namespace {

RunOutput run_named(const std::string& name, std::size_t n, const SolverParams& params, bool trace = false) {
  const ProblemSpec* spec = find_problem(name);
  REQUIRE(spec != nullptr);
  const auto probe = spec->make(n);
  RunOptions opts;
  opts.trace = trace;
  return run(*probe, spec->x0(n), params, opts);
}

long histogram_total(const RunRecord& r) {
  return std::accumulate(r.dir_kind_histogram.begin(), r.dir_kind_histogram.end(), 0L);
}

void check_record_contract(const RunRecord& r, const SolverParams& params) {
  CHECK((r.status == RunStatus::Converged) == (r.final_gnorm_inf <= params.eps));
  CHECK(r.n_f >= r.iters);
  CHECK(r.n_g >= r.iters);
  CHECK(histogram_total(r) == r.iters);
}

}  // namespace

TEST_CASE("sphere converges quickly") {
  const SolverParams params;
  const RunOutput out = run_named("SPHERE", 10, params);
  CHECK(out.record.status == RunStatus::Converged);
  CHECK(out.record.iters <= 20);
  CHECK(out.record.problem == "SPHERE");
  CHECK(out.record.method == "smcg_pr1_p3");
  check_record_contract(out.record, params);
}

TEST_CASE("Rosenbrock n=2 converges for all variants") {
  for (Variant v : {Variant::PR1, Variant::PR2}) {
    for (int p : {3, 4}) {
      SolverParams params;
      params.variant = v;
      params.p = p;
      const RunOutput out = run_named("ROSENBROCK", 2, params, true);
      CAPTURE(method_name(params));
      CHECK(out.record.status == RunStatus::Converged);
      CHECK(out.record.iters <= 200);
      CHECK(std::abs(out.x[0] - 1.0) <= 1e-5);
      CHECK(std::abs(out.x[1] - 1.0) <= 1e-5);
      check_record_contract(out.record, params);
      const InvariantTally t = tally_trace(out.trace, params, 2);
      CHECK(t.descent_violations == 0);
      CHECK(t.bound_violations == 0);
      CHECK(t.f_above_C == 0);
      CHECK(t.wolfe_violations == 0);
    }
  }
}

TEST_CASE("iteration cap") {
  SolverParams params;
  params.max_iter = 5;
  const RunOutput out = run_named("ROSENBROCK", 2, params);
  CHECK(out.record.status == RunStatus::MaxIter);
  CHECK(out.record.iters == 5);
  check_record_contract(out.record, params);

  params.max_iter = 0;
  const RunOutput z = run_named("ROSENBROCK", 2, params);
  CHECK(z.record.status == RunStatus::MaxIter);
  CHECK(z.record.iters == 0);
}

TEST_CASE("start at a stationary point") {
  FunctionProbe p(
      "flat", 3, [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; },
      [](std::span<const double> x, std::span<double> g) {
        for (int i = 0; i < 3; ++i) g[i] = 2.0 * x[i];
      });
  const Vector x0{0.0, 0.0, 0.0};
  const RunOutput out = run(p, x0, SolverParams{});
  CHECK(out.record.status == RunStatus::Converged);
  CHECK(out.record.iters == 0);
  CHECK(out.record.n_f == 1);
  CHECK(out.record.n_g == 1);
}

TEST_CASE("evaluation failures") {
  FunctionProbe p(
      "nan", 2, [](std::span<const double>) { return std::numeric_limits<double>::quiet_NaN(); },
      [](std::span<const double>, std::span<double> g) { g[0] = g[1] = 1.0; });
  const Vector x0{1.0, 1.0};
  const RunOutput out = run(p, x0, SolverParams{});
  CHECK(out.record.status == RunStatus::EvalFail);
  CHECK(out.record.iters == 0);
  CHECK_THROWS_AS(run(p, Vector{1.0, std::numeric_limits<double>::infinity()}, SolverParams{}), DomainError);
}

TEST_CASE("inconsistent gradient ends in a line-search failure") {
  FunctionProbe p(
      "liar", 2, [](std::span<const double> x) { return x[0] + x[1]; },
      [](std::span<const double>, std::span<double> g) { g[0] = g[1] = -1.0; });
  const RunOutput out = run(p, Vector{0.0, 0.0}, SolverParams{});
  CHECK(out.record.status == RunStatus::LineSearchFail);
  CHECK(out.record.iters == 0);
}

TEST_CASE("runs are deterministic") {
  const SolverParams params;
  const RunOutput a = run_named("WOOD", 4, params, true);
  const RunOutput b = run_named("WOOD", 4, params, true);
  CHECK(a.record.iters == b.record.iters);
  CHECK(a.record.n_f == b.record.n_f);
  CHECK(a.record.final_f == b.record.final_f);
  CHECK(a.x == b.x);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) CHECK(a.trace[i].f == b.trace[i].f);
}

TEST_CASE("trace rows") {
  const SolverParams params;
  const RunOutput out = run_named("BEALE", 2, params, true);
  REQUIRE(out.record.status == RunStatus::Converged);
  REQUIRE(out.trace.size() == static_cast<std::size_t>(out.record.iters) + 1);
  CHECK_FALSE(out.trace.back().has_step);
  CHECK(out.trace.back().f == out.record.final_f);
  CHECK(out.trace.front().kind == DirectionKind::NegGrad);
  for (std::size_t i = 0; i + 1 < out.trace.size(); ++i) {
    const TraceRow& r = out.trace[i];
    CHECK(r.has_step);
    CHECK(r.k == static_cast<long>(i));
    CHECK(r.f <= r.C);
    if (r.kind == DirectionKind::NegGrad) {
      // d = -g exactly after a restart
      CHECK(r.gtd == -r.g_sqnorm);
      CHECK(r.d_norm == doctest::Approx(std::sqrt(r.g_sqnorm)).epsilon(1e-15));
    }
  }
  CHECK(run_named("BEALE", 2, params, false).trace.empty());
}

TEST_CASE("restart quantities from vectors") {
  const Vector g_prev{-1.0, 0.0}, g_cur{-1.0, 0.0}, s{1.0, 0.0};
  const RestartQuantities q = restart_quantities(2.0, 1.0, g_prev, g_cur, s);
  CHECK(q.r == 0.0);
  CHECK(q.rbar == 0.0);
  const RestartQuantities inf = restart_quantities(0.0, 1.0, Vector{0.0}, Vector{0.0}, Vector{1.0});
  CHECK(std::isinf(inf.r));

  // exact quadratic: trapezoid rule is exact
  const double a = 3.0, b = -2.0;
  auto f = [&](double t) { return a * t * t + b * t; };
  auto fp = [&](double t) { return 2.0 * a * t + b; };
  const RestartQuantities e =
      restart_quantities(f(0.2), f(1.7), Vector{fp(0.2)}, Vector{fp(1.7)}, Vector{1.5});
  CHECK(e.rbar <= 1e-14);
}

TEST_CASE("direction mix on an ill-conditioned problem") {
  const SolverParams params;
  const RunOutput out = run_named("PALMER1D", 7, params);
  CHECK(out.record.status == RunStatus::Converged);
  check_record_contract(out.record, params);
}

TEST_CASE("PR2 uses the Euclidean-norm model") {
  SolverParams params;
  params.variant = Variant::PR2;
  const RunOutput out = run_named("EXTFREUROTH", 100, params);
  CHECK(out.record.status == RunStatus::Converged);
  CHECK(out.record.dir_kind_histogram[static_cast<std::size_t>(DirectionKind::PregHessNorm)] == 0);
  CHECK(out.record.method == "smcg_pr2_p3");
}

TEST_CASE("method names and statuses") {
  SolverParams p;
  p.p = 4;
  p.variant = Variant::PR2;
  CHECK(method_name(p) == "smcg_pr2_p4");
  for (RunStatus s : {RunStatus::Converged, RunStatus::MaxIter, RunStatus::LineSearchFail, RunStatus::EvalFail}) {
    CHECK(run_status_from_string(to_string(s)) == s);
  }
  CHECK_THROWS_AS(run_status_from_string("Done"), DomainError);
}
