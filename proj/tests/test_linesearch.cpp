#include <doctest.h>

#include <cmath>
#include <random>

#include "smcg/linesearch.hpp"
#include "smcg/problems.hpp"

using namespace smcg;

namespace {

// f(x) = a x^2 + b x in one dimension
FunctionProbe quad1(double a, double b) {
  return FunctionProbe(
      "quad1", 1, [a, b](std::span<const double> x) { return a * x[0] * x[0] + b * x[0]; },
      [a, b](std::span<const double> x, std::span<double> g) { g[0] = 2.0 * a * x[0] + b; });
}

}  // namespace

TEST_CASE("Wolfe search accepts the exact minimizer of a quadratic") {
  const auto p = quad1(0.5, -1.0);  // phi(alpha) = alpha^2/2 - alpha
  const Vector x{0.0}, g{-1.0}, d{1.0};
  const SolverParams params;
  const LineSearchResult r = wolfe_search(p, x, 0.0, g, d, 1.0, 0.0, params);
  CHECK(r.alpha == 1.0);
  CHECK(r.f_new == -0.5);
  CHECK(r.g_new[0] == 0.0);
  CHECK(r.n_f == 1);
  CHECK(r.n_g == 1);
}

TEST_CASE("Wolfe search errors") {
  const SolverParams params;
  SUBCASE("ascent direction") {
    const auto p = quad1(0.5, -1.0);
    const Vector x{0.0}, g{-1.0}, d{-1.0};
    CHECK_THROWS_AS(wolfe_search(p, x, 0.0, g, d, 1.0, 0.0, params), PreconditionError);
  }
  SUBCASE("no decrease along d") {
    // phi(alpha) = alpha while the reported slope claims descent
    FunctionProbe liar(
        "liar", 1, [](std::span<const double> x) { return x[0]; },
        [](std::span<const double>, std::span<double> g) { g[0] = -1.0; });
    const Vector x{0.0}, g{-1.0}, d{1.0};
    CHECK_THROWS_AS(wolfe_search(liar, x, 0.0, g, d, 1.0, 0.0, params), LineSearchError);
  }
  SUBCASE("non-finite gradient") {
    FunctionProbe bad(
        "bad", 1, [](std::span<const double> x) { return -x[0]; },
        [](std::span<const double> x, std::span<double> g) { g[0] = x[0] > 0.0 ? NAN : -1.0; });
    const Vector x{0.0}, g{-1.0}, d{1.0};
    CHECK_THROWS_AS(wolfe_search(bad, x, 0.0, g, d, 1.0, 0.0, params), EvaluationError);
  }
}

TEST_CASE("Wolfe search brackets overshoots and expands short steps") {
  const auto p = quad1(0.5, -1.0);
  const Vector x{0.0}, g{-1.0}, d{1.0};
  const SolverParams params;
  for (double a0 : {1e-6, 1e-3, 0.1, 3.0, 50.0, 1e5}) {
    const LineSearchResult r = wolfe_search(p, x, 0.0, g, d, a0, 0.0, params);
    const double gtd = -1.0;
    CHECK(r.f_new <= 0.0 + params.delta * r.alpha * gtd);
    CHECK(r.g_new[0] * d[0] >= params.sigma * gtd);
    CHECK(r.n_f <= 60);
  }
}

TEST_CASE("Wolfe conditions hold on Rosenbrock from random points") {
  const ProblemSpec* spec = find_problem("ROSENBROCK");
  REQUIRE(spec != nullptr);
  const auto probe = spec->make(4);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  SolverParams params;
  params.sigma = 0.5;
  for (int i = 0; i < 50; ++i) {
    Vector x(4);
    for (double& v : x) v = u(rng);
    const double f = probe->value(x);
    const Vector g = probe->eval_grad(x);
    Vector d(4);
    for (std::size_t j = 0; j < 4; ++j) d[j] = -g[j] + 0.1 * u(rng);
    double gtd = 0.0;
    for (std::size_t j = 0; j < 4; ++j) gtd += g[j] * d[j];
    if (!(gtd < 0.0)) continue;
    const double C = f + 0.5 * std::abs(u(rng));
    const LineSearchResult r = wolfe_search(*probe, x, f, g, d, 1.0, C, params);
    double gtd_new = 0.0;
    for (std::size_t j = 0; j < 4; ++j) gtd_new += r.g_new[j] * d[j];
    CHECK(r.f_new <= C + params.delta * r.alpha * gtd);
    CHECK(gtd_new >= params.sigma * gtd);
    CHECK(r.alpha >= params.lambda_min);
    CHECK(r.alpha <= params.lambda_max);
    CHECK(r.f_new == probe->value(r.x_new));
  }
}

TEST_CASE("nonmonotone reference") {
  SUBCASE("plain weighted average") {
    NonmonotoneRef r;
    r.C = 10.0;
    r.Q = 1.0;
    r.k = 3;
    const NonmonotoneRef n = apply_nonmonotone_weight(r, 2.0, 1.0);
    CHECK(n.Q == 2.0);
    CHECK(n.C == 6.0);
    CHECK(n.k == 4);
  }
  SUBCASE("first update") {
    const NonmonotoneRef r = NonmonotoneRef::start(5.0, 3);
    CHECK(r.C == 5.0);
    CHECK(r.Q == 1.0);
    CHECK(r.l == 20);
    const NonmonotoneRef n = update_nonmonotone(r, 3.0);
    CHECK(n.C == 4.0);
    CHECK(n.Q == 2.0);
    const NonmonotoneRef m = update_nonmonotone(NonmonotoneRef::start(5.0, 3), 4.5);
    CHECK(m.C == 5.0);
  }
  SUBCASE("monotone limit") {
    NonmonotoneRef r;
    r.C = 10.0;
    r.Q = 7.0;
    r.k = 5;
    CHECK(apply_nonmonotone_weight(r, 2.5, 0.0).C == 2.5);
  }
  SUBCASE("eta is applied only on multiples of l") {
    NonmonotoneRef r = NonmonotoneRef::start(100.0, 30);
    CHECK(r.l == 30);
    r = update_nonmonotone(r, 50.0);  // k: 0 -> 1
    double Q = r.Q, C = r.C;
    for (std::size_t k = 1; k < 65; ++k) {
      const double f_new = 50.0 - 0.1 * static_cast<double>(k);
      double eta = 1.0;
      if (k % 30 == 0) eta = (C - f_new > 0.999 * std::abs(C)) ? 0.7 : 0.999;
      const double Qn = eta * Q + 1.0;
      const double Cn = (eta * Q * C + f_new) / Qn;
      r = update_nonmonotone(r, f_new);
      CHECK(r.Q == doctest::Approx(Qn).epsilon(1e-14));
      CHECK(r.C == doctest::Approx(Cn).epsilon(1e-14));
      CHECK(f_new <= r.C);
      Q = Qn;
      C = Cn;
    }
  }
  SUBCASE("large relative decrease selects eta = 0.7") {
    NonmonotoneRef r;
    r.C = 1.0;
    r.Q = 10.0;
    r.l = 20;
    r.k = 20;
    const NonmonotoneRef n = update_nonmonotone(r, -1000.0);
    CHECK(n.Q == doctest::Approx(0.7 * 10.0 + 1.0));
  }
}

TEST_CASE("interpolation minimizer") {
  CHECK(*interpolation_minimizer(0.0, -1.0, 1.0, 0.0) == doctest::Approx(0.5));
  CHECK_FALSE(interpolation_minimizer(0.0, -1.0, 1.0, -2.0).has_value());
  CHECK(*interpolation_minimizer(0.0, -1.0, 0.6, -0.3) == doctest::Approx(0.6));
}

TEST_CASE("initial step for subspace directions") {
  const SolverParams params;
  const auto p = quad1(1.0, -1.0);  // phi(alpha) = alpha^2 - alpha along d = 1
  const Vector x{0.0}, g{-1.0}, d{1.0};
  const InitialStep a = initial_step_subspace(p, x, 0.0, g, d, true, params);
  CHECK(a.alpha0 == doctest::Approx(0.5));
  CHECK(a.n_f == 1);
  CHECK(initial_step_subspace(p, x, 0.0, g, d, false, params).alpha0 == 1.0);
  CHECK(initial_step_subspace(p, x, 0.0, g, d, false, params).n_f == 0);
  const auto concave = quad1(-1.0, -1.0);
  CHECK(initial_step_subspace(concave, x, 0.0, g, d, true, params).alpha0 == 1.0);
}

TEST_CASE("initial step for the negative gradient") {
  const SolverParams params;
  SUBCASE("BB1 equals BB2 for proportional pairs") {
    const PairData pair = PairData::make({1.0, 0.0}, {2.0, 0.0});
    CHECK(pair.ss / pair.sty == 0.5);
    CHECK(pair.sty / pair.yy == 0.5);
  }
  SUBCASE("BB2 when g's > 0") {
    // f = x1 + c x1^2 at the origin: g = (1, 0), phi(alpha) = -alpha + c alpha^2
    const double c = 0.3 / 0.36;
    FunctionProbe p(
        "f", 2, [c](std::span<const double> x) { return x[0] + c * x[0] * x[0]; },
        [c](std::span<const double> x, std::span<double> g) {
          g[0] = 1.0 + 2.0 * c * x[0];
          g[1] = 0.0;
        });
    const Vector x{0.0, 0.0}, g{1.0, 0.0};
    const PairData pair = PairData::make({1.0, 1.0}, {2.0, 1.0});
    NegGradStepContext ctx;
    ctx.pair = &pair;
    ctx.numgra = 1;
    const InitialStep plain = initial_step_neggrad(p, x, 0.0, g, ctx, params);
    CHECK(plain.alpha0 == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(plain.n_f == 0);

    ctx.quad_close = true;
    const InitialStep interp = initial_step_neggrad(p, x, 0.0, g, ctx, params);
    CHECK(interp.alpha0 == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(interp.n_f == 1);

    ctx.prev_was_neggrad = true;
    CHECK(initial_step_neggrad(p, x, 0.0, g, ctx, params).n_f == 0);
  }
  SUBCASE("BB1 when g's <= 0 and the 0.999 scaling") {
    const std::size_t n = 12;
    FunctionProbe p(
        "f", n, [](std::span<const double>) { return 0.0; },
        [](std::span<const double>, std::span<double> g) { std::fill(g.begin(), g.end(), 0.0); });
    Vector x(n, 0.0), g(n, 0.0), s(n, 0.0), y(n, 0.0);
    g[0] = -1.0;
    s[0] = 1.0;
    s[1] = 1.0;
    y[0] = 2.0;
    y[1] = 1.0;
    const PairData pair = PairData::make(s, y);
    NegGradStepContext ctx;
    ctx.pair = &pair;
    ctx.numgra = 12;
    CHECK(initial_step_neggrad(p, x, 0.0, g, ctx, params).alpha0 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    ctx.numgra = 13;
    CHECK(initial_step_neggrad(p, x, 0.0, g, ctx, params).alpha0 ==
          doctest::Approx(0.999 * 2.0 / 3.0).epsilon(1e-15));
  }
  SUBCASE("no usable pair") {
    const auto p = quad1(0.5, -1.0);
    const Vector x{0.0}, g{-4.0};
    NegGradStepContext ctx;
    CHECK(initial_step_neggrad(p, x, 0.0, g, ctx, params).alpha0 == 0.25);
    const PairData bad = PairData::make({1.0}, {-1.0});
    ctx.pair = &bad;
    CHECK(initial_step_neggrad(p, x, 0.0, g, ctx, params).alpha0 == 0.25);
  }
}

TEST_CASE("step clamp") {
  const SolverParams params;
  CHECK(clamp_step(1e-40, params) == params.lambda_min);
  CHECK(clamp_step(1e40, params) == params.lambda_max);
  CHECK(clamp_step(0.3, params) == 0.3);
}
