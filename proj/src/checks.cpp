#include "smcg/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "smcg/direction.hpp"
#include "smcg/subproblem.hpp"
#include "smcg/subproblem_oracle.hpp"

namespace smcg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Sym2 random_spd(std::mt19937_64& rng, double lo_exp = -2.0, double hi_exp = 2.0) {
  std::uniform_real_distribution<double> ue(lo_exp, hi_exp);
  std::uniform_real_distribution<double> ua(0.0, 3.141592653589793);
  const double l1 = std::pow(10.0, ue(rng));
  const double l2 = std::pow(10.0, ue(rng));
  const double t = ua(rng);
  const double c = std::cos(t);
  const double s = std::sin(t);
  return {l1 * c * c + l2 * s * s, (l1 - l2) * c * s, l1 * s * s + l2 * c * c};
}

Eigen::MatrixXd to_eigen(const Sym2& a) {
  Eigen::MatrixXd m(2, 2);
  m << a.a11, a.a12, a.a12, a.a22;
  return m;
}

Eigen::MatrixXd random_spd_n(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = nd(rng);
  return m * m.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n);
}

double ws_model(const Eigen::MatrixXd& H, const Eigen::MatrixXd& A, const Eigen::VectorXd& c, double sigma, double p,
                const Eigen::VectorXd& x) {
  const double na = std::sqrt(std::max(0.0, x.dot(A * x)));
  return c.dot(x) + 0.5 * x.dot(H * x) + sigma / p * std::pow(na, p);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

}  // namespace

CheckResult check_secular_roots(std::uint64_t seed, int trials) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1e4);
  std::uniform_real_distribution<double> le(-8.0, 4.0);
  double worst_res = 0.0;
  double worst_agree = 0.0;
  long failures = 0;
  for (int i = 0; i < trials; ++i) {
    const int p = (i % 2 == 0) ? 3 : 4;
    // Half the samples uniform, half log-uniform to reach small sigma and q.
    const double sigma = (i % 4 < 2) ? u(rng) : std::pow(10.0, le(rng));
    const double q = (i % 4 < 2) ? u(rng) : std::pow(10.0, le(rng));
    const double zc = secular_root_closed(p, sigma, q);
    const double zg = secular_root_general(p, sigma, q);
    const double scale = std::max(1.0, q);
    const double rc = std::abs(sigma * std::pow(zc, p - 1) + zc - q) / scale;
    const double rg = std::abs(sigma * std::pow(zg, p - 1) + zg - q) / scale;
    const double denom = std::max(std::abs(zc), std::abs(zg));
    const double agree = denom == 0.0 ? 0.0 : std::abs(zc - zg) / denom;
    worst_res = std::max({worst_res, rc, rg});
    worst_agree = std::max(worst_agree, agree);
    if (!(rc <= 1e-12) || !(rg <= 1e-12) || !(agree <= 1e-10) || zc < 0.0 || zg < 0.0) ++failures;
  }
  CheckResult r;
  r.name = "secular roots";
  r.seconds = seconds_since(t0);
  r.pass = failures == 0 && r.seconds < 1.0;
  r.detail = std::to_string(trials) + " trials, worst scaled residual " + fmt(worst_res) + ", worst disagreement " +
             fmt(worst_agree) + ", " + std::to_string(failures) + " failures";
  return r;
}

CheckResult check_subproblem_optimality(std::uint64_t seed, int trials) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> us(0.0, 10.0);
  const double inf = std::numeric_limits<double>::infinity();
  double worst_grad = 0.0;
  double worst_gap = -inf;
  double worst_sys = 0.0;
  long failures = 0;
  long guard_failures = 0;

  for (int kind = 0; kind < 2; ++kind) {
    for (int i = 0; i < trials; ++i) {
      SubproblemInput in;
      in.norm_kind = kind == 0 ? NormKind::HessNorm : NormKind::EuclidNorm;
      in.B = random_spd(rng);
      in.E = random_spd(rng);
      in.c2 = {nd(rng), nd(rng)};
      in.sigma = us(rng);
      in.p = (i % 2 == 0) ? 3.0 : 4.0;

      const SubproblemSolution sol =
          kind == 0 ? solve_hessnorm(in, inf) : solve_euclidnorm(in, inf);
      const auto gr = model_gradient(in, sol.mu, sol.nu);
      const double cn = std::max(1.0, std::hypot(in.c2[0], in.c2[1]));
      const double gres = std::hypot(gr[0], gr[1]) / cn;
      worst_grad = std::max(worst_grad, gres);
      bool ok = gres <= 1e-10;

      if (kind == 1) {
        const Sym2 M{in.B.a11 + sol.lambda * in.E.a11, in.B.a12 + sol.lambda * in.E.a12,
                     in.B.a22 + sol.lambda * in.E.a22};
        const auto Mu = M.apply({sol.mu, sol.nu});
        const double sres = std::hypot(Mu[0] + in.c2[0], Mu[1] + in.c2[1]) / cn;
        worst_sys = std::max(worst_sys, sres);
        ok = ok && sres <= 1e-10;
      }

      const double unorm = std::hypot(sol.mu, sol.nu);
      const double radius = unorm > 0.0 ? 5.0 * unorm : 1.0;
      const GridOracleResult orc = brute_force_2d_oracle(in, radius, 201);
      const double gap = model_value(in, sol.mu, sol.nu) - orc.model_value;
      worst_gap = std::max(worst_gap, gap);
      ok = ok && gap <= 1e-8;
      if (!ok) ++failures;

      // Default safeguards.
      const SubproblemSolution guarded =
          kind == 0 ? solve_hessnorm(in) : solve_euclidnorm(in, 0.5 * (in.B.a11 + in.B.a22));
      if (kind == 0 && !(guarded.shrink_T >= 0.5 && guarded.shrink_T <= 1.0)) ++guard_failures;
      if (kind == 1 && !(guarded.lambda <= 0.5 * (in.B.a11 + in.B.a22))) ++guard_failures;
    }
  }
  CheckResult r;
  r.name = "subproblem optimality";
  r.seconds = seconds_since(t0);
  r.pass = failures == 0 && guard_failures == 0 && r.seconds < 30.0;
  r.detail = std::to_string(trials) + " instances per norm, worst gradient residual " + fmt(worst_grad) +
             ", worst shifted-system residual " + fmt(worst_sys) + ", worst model excess over grid " + fmt(worst_gap) +
             ", " + std::to_string(failures + guard_failures) + " failures";
  return r;
}

CheckResult check_whole_space(std::uint64_t seed, int trials) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> us(0.0, 10.0);
  const double inf = std::numeric_limits<double>::infinity();
  double worst_coef = 0.0;
  double worst_stat = 0.0;
  long failures = 0;
  int pairs = 0;

  for (int i = 0; i < trials; ++i) {
    const double p = (i % 3 == 0) ? 4.0 : 3.0;
    const double sigma = us(rng);
    if (i % 2 == 0) {
      ++pairs;
      SubproblemInput in;
      in.B = random_spd(rng);
      in.E = random_spd(rng);
      in.c2 = {nd(rng), nd(rng)};
      in.sigma = sigma;
      in.p = p;
      const Eigen::VectorXd c = (Eigen::VectorXd(2) << in.c2[0], in.c2[1]).finished();
      const Eigen::MatrixXd H = to_eigen(in.B);
      for (int kind = 0; kind < 2; ++kind) {
        in.norm_kind = kind == 0 ? NormKind::HessNorm : NormKind::EuclidNorm;
        const SubproblemSolution sol = kind == 0 ? solve_hessnorm(in, inf) : solve_euclidnorm(in, inf);
        const Eigen::MatrixXd A = kind == 0 ? H : to_eigen(in.E);
        const Eigen::VectorXd x = whole_space_oracle(H, A, c, sigma, p);
        const double scale = std::max(1.0, x.norm());
        const double diff = std::max(std::abs(x(0) - sol.mu), std::abs(x(1) - sol.nu)) / scale;
        worst_coef = std::max(worst_coef, diff);
        if (!(diff <= 1e-8)) ++failures;
      }
    } else {
      const int n = 3 + (i / 2) % 3;
      Eigen::MatrixXd H = random_spd_n(rng, n) - 2.0 * Eigen::MatrixXd::Identity(n, n);
      const Eigen::MatrixXd A = random_spd_n(rng, n);
      Eigen::VectorXd c(n);
      for (int j = 0; j < n; ++j) c(j) = nd(rng);
      const double sg = std::max(sigma, 0.1);
      const Eigen::VectorXd x = whole_space_oracle(H, A, c, sg, p);
      const double na = std::sqrt(x.dot(A * x));
      const double lam = sg * std::pow(na, p - 2.0);
      const Eigen::MatrixXd K = H + lam * A;
      const double stat = (K * x + c).norm() / std::max(1.0, c.norm());
      worst_stat = std::max(worst_stat, stat);
      const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(K).eigenvalues().minCoeff();
      bool ok = stat <= 1e-8 && lmin >= -1e-8 * std::max(1.0, K.norm());
      // No random perturbation of the minimizer may lower the model.
      const double m0 = ws_model(H, A, c, sg, p, x);
      for (int t = 0; t < 20 && ok; ++t) {
        Eigen::VectorXd dx(n);
        for (int j = 0; j < n; ++j) dx(j) = nd(rng);
        dx *= 0.3 * std::max(1.0, x.norm()) / dx.norm();
        if (ws_model(H, A, c, sg, p, x + dx) < m0 - 1e-12 * std::max(1.0, std::abs(m0))) ok = false;
      }
      if (!ok) ++failures;
    }
  }
  CheckResult r;
  r.name = "whole-space oracle";
  r.seconds = seconds_since(t0);
  r.pass = failures == 0;
  r.detail = std::to_string(trials) + " instances (" + std::to_string(pairs) +
             " two-dimensional, both norms), worst coefficient gap " + fmt(worst_coef) +
             ", worst stationarity residual " + fmt(worst_stat) + ", " + std::to_string(failures) + " failures";
  return r;
}

CheckResult check_gradients(const std::vector<ProblemSpec>& problems, std::uint64_t seed) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  std::string worst_name;
  std::vector<std::string> failed;
  for (const auto& spec : problems) {
    const auto probe = spec.make(spec.default_dim);
    const Vector x0 = spec.x0(spec.default_dim);
    double pw = 0.0;
    for (int pt = 0; pt < 6; ++pt) {
      Vector x = x0;
      if (pt > 0) {
        for (auto& v : x) v += 0.1 * u(rng) * std::max(1.0, std::abs(v));
      }
      double err = std::numeric_limits<double>::infinity();
      try {
        err = finite_difference_check(*probe, x, 1e-6);
      } catch (const Error&) {
      }
      pw = std::max(pw, err);
    }
    if (pw > worst) {
      worst = pw;
      worst_name = spec.name;
    }
    if (!(pw <= 1e-6)) failed.push_back(spec.name);
  }
  CheckResult r;
  r.name = "gradient validation";
  r.seconds = seconds_since(t0);
  r.pass = failed.empty();
  r.detail = std::to_string(problems.size()) + " problems x 6 points, worst relative error " + fmt(worst) + " (" +
             worst_name + ")";
  if (!failed.empty()) {
    r.detail += ", failing:";
    for (const auto& f : failed) r.detail += " " + f;
  }
  return r;
}

void InvariantTally::merge(const InvariantTally& o) {
  iterations += o.iterations;
  descent_violations += o.descent_violations;
  bound_violations += o.bound_violations;
  f_above_C += o.f_above_C;
  wolfe_violations += o.wolfe_violations;
  q_over_bound += o.q_over_bound;
  max_Q = std::max(max_Q, o.max_Q);
  q_bound = std::max(q_bound, o.q_bound);
  min_descent_margin = std::min(min_descent_margin, o.min_descent_margin);
  worst_bound_ratio = std::max(worst_bound_ratio, o.worst_bound_ratio);
}

InvariantTally tally_trace(const std::vector<TraceRow>& trace, const SolverParams& params, std::size_t n) {
  InvariantTally t;
  const double c1 = sufficient_descent_constant(params);
  const double cb = direction_bound_constant(params);
  const double l = static_cast<double>(std::max<std::size_t>(20, n));
  t.q_bound = 1.0 + (l + 1.0) / 0.3;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const TraceRow& r = trace[i];
    if (r.f > r.C) ++t.f_above_C;
    if (r.Q > t.q_bound) ++t.q_over_bound;
    t.max_Q = std::max(t.max_Q, r.Q);
    if (!r.has_step) continue;
    ++t.iterations;
    if (r.g_sqnorm > 0.0) {
      t.min_descent_margin = std::min(t.min_descent_margin, r.gtd / (-c1 * r.g_sqnorm));
    }
    if (!(r.gtd <= -c1 * r.g_sqnorm)) ++t.descent_violations;
    if (r.kind != DirectionKind::HS) {
      const double gl = std::sqrt(r.g_sqnorm);
      if (gl > 0.0) t.worst_bound_ratio = std::max(t.worst_bound_ratio, r.d_norm / (cb * gl));
      if (!(r.d_norm <= cb * gl)) ++t.bound_violations;
    }
    if (i + 1 < trace.size()) {
      const TraceRow& nx = trace[i + 1];
      const bool armijo = !(nx.f > r.C + params.delta * r.alpha * r.gtd);
      const bool curvature = r.gtd_new >= params.sigma * r.gtd;
      if (!armijo || !curvature) ++t.wolfe_violations;
    }
  }
  return t;
}

InvariantTally tally_suite(const std::vector<SuiteRun>& runs, const SolverParams& params) {
  InvariantTally all;
  for (const auto& r : runs) all.merge(tally_trace(r.trace, params, r.record.n));
  return all;
}

}  // namespace smcg
