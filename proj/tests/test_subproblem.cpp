#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <random>

#include "smcg/model_core.hpp"
#include "smcg/subproblem.hpp"
#include "smcg/subproblem_oracle.hpp"

using namespace smcg;

namespace {

double psi(double p, double sigma, double q, double z) { return sigma * std::pow(z, p - 1.0) + z - q; }

// plain bisection, independent of the library's Newton paths
double bisect(auto f, double lo, double hi) {
  for (int i = 0; i < 400 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (f(mid) > 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

SubproblemInput hess_input(Sym2 B, std::array<double, 2> c2, double sigma, double p) {
  SubproblemInput in;
  in.B = B;
  in.E = Sym2{1.0, 0.0, 1.0};
  in.c2 = c2;
  in.sigma = sigma;
  in.p = p;
  in.norm_kind = NormKind::HessNorm;
  return in;
}

Sym2 random_spd(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
  // M M' + 0.1 I
  return Sym2{a * a + b * b + 0.1, a * c + b * d, c * c + d * d + 0.1};
}

}  // namespace

TEST_CASE("closed-form secular roots") {
  CHECK(secular_root_closed(3, 0.0, 5.0) == 5.0);
  CHECK(secular_root_closed(3, 2.0, 3.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(secular_root_closed(4, 1.0, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(secular_root_closed(3, 7.0, 0.0) == 0.0);
  CHECK(secular_root_closed(4, 0.0, 2.5) == 2.5);
  CHECK_THROWS_AS(secular_root_closed(3, -1.0, 1.0), DomainError);
  CHECK_THROWS_AS(secular_root_closed(3, 1.0, -1.0), DomainError);
  CHECK_THROWS_AS(secular_root_closed(5, 1.0, 1.0), DomainError);
}

TEST_CASE("general secular root") {
  CHECK(secular_root_general(3.0, 2.0, 3.0) == doctest::Approx(secular_root_closed(3, 2.0, 3.0)).epsilon(1e-12));
  const double z = secular_root_general(2.5, 1.0, 1.0);
  CHECK(std::abs(psi(2.5, 1.0, 1.0, z)) <= 1e-12);
  const double zb = bisect([](double t) { return -psi(2.5, 1.0, 1.0, t); }, 0.0, 1.0);
  CHECK(z == doctest::Approx(zb).epsilon(1e-12));
  CHECK(secular_root_general(4.0, 1e-300, 2.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(secular_root_closed(4, 1e-300, 2.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(secular_root_general(2.0, 1.0, 1.0), DomainError);
}

TEST_CASE("secular roots agree on random data") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1e4);
  std::uniform_real_distribution<double> lg(-8.0, 4.0);
  for (int i = 0; i < 2000; ++i) {
    const int p = 3 + (i & 1);
    const double sigma = (i % 4 < 2) ? u(rng) : std::pow(10.0, lg(rng));
    const double q = (i % 3 == 0) ? u(rng) : std::pow(10.0, lg(rng));
    const double zc = secular_root_closed(p, sigma, q);
    const double zg = secular_root_general(p, sigma, q);
    CHECK(zc >= 0.0);
    CHECK(std::abs(psi(p, sigma, q, zc)) <= 1e-12 * std::max(1.0, q));
    CHECK(std::abs(psi(p, sigma, q, zg)) <= 1e-12 * std::max(1.0, q));
    CHECK(std::abs(zc - zg) <= 1e-10 * std::max(1.0, std::abs(zc)));
  }
}

TEST_CASE("2x2 eigen decomposition and square roots") {
  const Sym2 a{4.0, 1.0, 3.0};
  const SymEigen2 e = eigen_sym2(a);
  Eigen::Matrix2d m;
  m << 4.0, 1.0, 1.0, 3.0;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
  CHECK(e.lambda1 == doctest::Approx(es.eigenvalues()[0]).epsilon(1e-14));
  CHECK(e.lambda2 == doctest::Approx(es.eigenvalues()[1]).epsilon(1e-14));
  const auto av = a.apply(e.v1);
  CHECK(std::abs(av[0] - e.lambda1 * e.v1[0]) <= 1e-14);
  CHECK(std::abs(av[1] - e.lambda1 * e.v1[1]) <= 1e-14);

  const Sym2 r = sqrt_sym2(a);
  CHECK(r.a11 * r.a11 + r.a12 * r.a12 == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(r.a11 * r.a12 + r.a12 * r.a22 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.a12 * r.a12 + r.a22 * r.a22 == doctest::Approx(3.0).epsilon(1e-14));
  const Sym2 ir = inv_sqrt_sym2(a);
  // ir * r = I
  CHECK(ir.a11 * r.a11 + ir.a12 * r.a12 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(ir.a11 * r.a12 + ir.a12 * r.a22) <= 1e-14);

  const SymEigen2 d = eigen_sym2(Sym2{2.0, 0.0, 2.0});
  CHECK(d.lambda1 == 2.0);
  CHECK(d.lambda2 == 2.0);
}

TEST_CASE("Hessian-norm solution without regularization is the quadratic model") {
  const auto in = hess_input(Sym2{1.5, 0.0, 1.0}, {1.0, 0.0}, 0.0, 3.0);
  const SubproblemSolution s = solve_hessnorm(in);
  CHECK(s.mu == doctest::Approx(-2.0 / 3.0).epsilon(1e-15));
  CHECK(s.nu == 0.0);
  CHECK(s.shrink_T == 1.0);
  CHECK_FALSE(s.clamped);
}

TEST_CASE("Hessian-norm clamp") {
  const auto in = hess_input(Sym2{2.0, 0.0, 1.0}, {2.0, 1.0}, 100.0, 3.0);
  const double q = std::sqrt(3.0);  // c2' B^{-1} c2 = 4/2 + 1
  const double z = 2.0 * q / (1.0 + std::sqrt(1.0 + 400.0 * q));
  REQUIRE(100.0 * z > 1.0);
  const SubproblemSolution s = solve_hessnorm(in);
  CHECK(s.clamped);
  CHECK(s.shrink_T == 0.5);
  CHECK(s.mu == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(s.nu == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(s.z_star == doctest::Approx(z).epsilon(1e-12));
}

TEST_CASE("Hessian-norm unclamped norm identity") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> us(0.0, 0.5);
  int unclamped = 0;
  for (int i = 0; i < 200; ++i) {
    const Sym2 B = random_spd(rng);
    const std::array<double, 2> c2{u(rng), u(rng)};
    const double p = (i & 1) ? 4.0 : 3.0;
    const auto in = hess_input(B, c2, us(rng), p);
    const SubproblemSolution s = solve_hessnorm(in);
    CHECK(s.shrink_T >= 0.5);
    CHECK(s.shrink_T <= 1.0);
    // independent q from a 2x2 inverse
    const double det = B.a11 * B.a22 - B.a12 * B.a12;
    const double q2 = (B.a22 * c2[0] * c2[0] - 2.0 * B.a12 * c2[0] * c2[1] + B.a11 * c2[1] * c2[1]) / det;
    const double q = std::sqrt(q2);
    const double normB = std::sqrt(B.quad({s.mu, s.nu}));
    if (!s.clamped) {
      ++unclamped;
      CHECK(normB == doctest::Approx(s.shrink_T * q).epsilon(1e-10));
      CHECK(normB == doctest::Approx(s.z_star).epsilon(1e-10));
    }
  }
  CHECK(unclamped > 50);
}

TEST_CASE("Hessian-norm errors") {
  CHECK_THROWS_AS(solve_hessnorm(hess_input(Sym2{1.0, 2.0, 1.0}, {1.0, 0.0}, 1.0, 3.0)), IndefiniteModelError);
}

TEST_CASE("Euclidean-norm example against a bisection oracle") {
  SubproblemInput in;
  in.B = Sym2{2.0, 0.0, 1.0};
  in.E = Sym2{1.0, 0.0, 1.0};
  in.c2 = {2.0, 1.0};
  in.sigma = 1.0;
  in.p = 3.0;
  in.norm_kind = NormKind::EuclidNorm;
  const SubproblemSolution s = solve_euclidnorm(in, std::numeric_limits<double>::infinity());

  // eigenvalues 1 and 2 with components 1 and 2 of c2
  auto phi = [](double z) { return 1.0 / ((1.0 + z) * (1.0 + z)) + 4.0 / ((2.0 + z) * (2.0 + z)) - z * z; };
  const double z_hi = std::sqrt(1.0 + 1.0);
  CHECK(phi(0.0) > 0.0);
  CHECK(phi(z_hi) <= 0.0);
  const double zb = bisect(phi, 0.0, z_hi);
  CHECK(s.z_star == doctest::Approx(zb).epsilon(1e-10));
  CHECK(std::abs(phi(s.z_star)) <= 1e-10 * std::max(1.0, z_hi * z_hi));
  CHECK(s.z_star == doctest::Approx(0.876).epsilon(1e-3));
  CHECK(s.lambda == doctest::Approx(zb).epsilon(1e-10));
  // (B + lambda I) u = -c2
  CHECK((2.0 + s.lambda) * s.mu == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK((1.0 + s.lambda) * s.nu == doctest::Approx(-1.0).epsilon(1e-12));
  // ||u||_E = z*
  CHECK(std::sqrt(s.mu * s.mu + s.nu * s.nu) == doctest::Approx(s.z_star).epsilon(1e-8));

  const GridOracleResult g = brute_force_2d_oracle(in, 5.0 * std::hypot(s.mu, s.nu));
  CHECK(model_value(in, s.mu, s.nu) <= g.model_value + 1e-8);
}

TEST_CASE("Euclidean-norm without regularization matches the Hessian-norm path") {
  SubproblemInput in;
  in.B = Sym2{3.0, 0.5, 1.0};
  in.E = Sym2{2.0, 0.3, 1.5};
  in.c2 = {2.0, 0.3};
  in.sigma = 0.0;
  in.norm_kind = NormKind::EuclidNorm;
  const SubproblemSolution e = solve_euclidnorm(in, 1e300);
  in.norm_kind = NormKind::HessNorm;
  const SubproblemSolution h = solve_hessnorm(in);
  CHECK(e.lambda == 0.0);
  CHECK(e.mu == doctest::Approx(h.mu).epsilon(1e-13));
  CHECK(e.nu == doctest::Approx(h.nu).epsilon(1e-13));
}

TEST_CASE("Euclidean-norm curvature cap") {
  SubproblemInput in;
  in.B = Sym2{1.0, 0.0, 1.0};
  in.E = Sym2{1.0, 0.0, 1.0};
  in.c2 = {10.0, 10.0};
  in.sigma = 1000.0;
  in.p = 3.0;
  in.norm_kind = NormKind::EuclidNorm;
  const SubproblemSolution s = solve_euclidnorm(in, 2.0);
  CHECK(s.clamped);
  CHECK(s.lambda == 2.0);
  CHECK((1.0 + 2.0) * s.mu == doctest::Approx(-10.0).epsilon(1e-14));
}

TEST_CASE("Euclidean-norm errors") {
  SubproblemInput in;
  in.B = Sym2{1.0, 0.0, 1.0};
  in.E = Sym2{1.0, 1.0, 1.0};  // singular: g and s collinear
  in.c2 = {1.0, 1.0};
  in.sigma = 1.0;
  in.norm_kind = NormKind::EuclidNorm;
  CHECK_THROWS_AS(solve_euclidnorm(in, 1e300), CollinearityError);
}

TEST_CASE("Euclidean-norm bracket and optimality on random instances") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> us(0.0, 10.0);
  for (int i = 0; i < 100; ++i) {
    SubproblemInput in;
    in.B = random_spd(rng);
    in.E = random_spd(rng);
    in.c2 = {u(rng), u(rng)};
    in.sigma = us(rng);
    in.p = (i & 1) ? 4.0 : 3.0;
    in.norm_kind = NormKind::EuclidNorm;
    const SubproblemSolution s = solve_euclidnorm(in, std::numeric_limits<double>::infinity());

    // unregularized solution norm bounds z*
    Eigen::Matrix2d B, E;
    B << in.B.a11, in.B.a12, in.B.a12, in.B.a22;
    E << in.E.a11, in.E.a12, in.E.a12, in.E.a22;
    const Eigen::Vector2d c(in.c2[0], in.c2[1]);
    const Eigen::Vector2d u0 = B.ldlt().solve(-c);
    const double z_hi = std::sqrt(u0.dot(E * u0));
    CHECK(s.z_star >= 0.0);
    CHECK(s.z_star <= z_hi * (1.0 + 1e-12));

    const Eigen::Vector2d uv(s.mu, s.nu);
    const Eigen::Vector2d res = (B + s.lambda * E) * uv + c;
    CHECK(res.norm() <= 1e-10 * std::max(1.0, c.norm()));
    CHECK(std::sqrt(uv.dot(E * uv)) == doctest::Approx(s.z_star).epsilon(1e-8));
    const auto gr = model_gradient(in, s.mu, s.nu);
    CHECK(std::hypot(gr[0], gr[1]) <= 1e-10 * std::max(1.0, c.norm()));

    const GridOracleResult g = brute_force_2d_oracle(in, 5.0 * std::max(1e-12, uv.norm()));
    CHECK(model_value(in, s.mu, s.nu) <= g.model_value + 1e-8);
  }
}

TEST_CASE("grid oracle on the quadratic case") {
  const auto in = hess_input(Sym2{1.5, 0.0, 1.0}, {1.0, 0.0}, 0.0, 3.0);
  const GridOracleResult g = brute_force_2d_oracle(in, 2.0);
  CHECK(g.mu == doctest::Approx(-2.0 / 3.0).epsilon(1e-6));
  CHECK(std::abs(g.nu) <= 1e-6);
  CHECK(g.model_value == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("whole-space oracle") {
  Eigen::MatrixXd H(3, 3), A(3, 3);
  H << 4, 1, 0, 1, 3, 0.5, 0, 0.5, 2;
  A = H;
  SUBCASE("zero linear term") {
    const Eigen::VectorXd x = whole_space_oracle(H, A, Eigen::VectorXd::Zero(3), 2.0, 3.0);
    CHECK(x.norm() == 0.0);
  }
  SUBCASE("H = A gives a scaled Newton step") {
    Eigen::VectorXd c(3);
    c << 1.0, -2.0, 0.5;
    const double sigma = 0.7, p = 3.0;
    const Eigen::VectorXd x = whole_space_oracle(H, A, c, sigma, p);
    const Eigen::VectorXd newton = H.ldlt().solve(-c);
    const double q = std::sqrt(c.dot(H.ldlt().solve(c)));
    const double z = secular_root_general(p, sigma, q);
    const Eigen::VectorXd expect = newton / (1.0 + sigma * std::pow(z, p - 2.0));
    CHECK((x - expect).norm() <= 1e-10 * expect.norm());
  }
  SUBCASE("n = 2 matches the Euclidean-norm example") {
    Eigen::MatrixXd B(2, 2), E(2, 2);
    B << 2, 0, 0, 1;
    E << 1, 0, 0, 1;
    Eigen::VectorXd c(2);
    c << 2, 1;
    const Eigen::VectorXd x = whole_space_oracle(B, E, c, 1.0, 3.0);
    SubproblemInput in;
    in.B = Sym2{2.0, 0.0, 1.0};
    in.E = Sym2{1.0, 0.0, 1.0};
    in.c2 = {2.0, 1.0};
    in.sigma = 1.0;
    in.norm_kind = NormKind::EuclidNorm;
    const SubproblemSolution s = solve_euclidnorm(in, 1e300);
    CHECK(std::abs(x[0] - s.mu) <= 1e-8);
    CHECK(std::abs(x[1] - s.nu) <= 1e-8);
  }
  SUBCASE("indefinite H") {
    Eigen::MatrixXd Hi(2, 2);
    Hi << -1.0, 0.0, 0.0, 2.0;
    Eigen::VectorXd c(2);
    c << 1.0, 1.0;
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2, 2);
    const Eigen::VectorXd x = whole_space_oracle(Hi, I, c, 1.0, 3.0);
    const double lam = 1.0 * x.norm();
    CHECK(lam - 1.0 >= -1e-12);
    CHECK(((Hi + lam * I) * x + c).norm() <= 1e-8);
  }
  SUBCASE("errors") {
    Eigen::MatrixXd Hi(2, 2);
    Hi << -1.0, 0.0, 0.0, 2.0;
    Eigen::VectorXd c(2);
    c << 0.0, 1.0;  // no component along the negative eigenvector
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(whole_space_oracle(Hi, I, c, 1.0, 3.0), UnsupportedHardCase);
    CHECK_THROWS_AS(whole_space_oracle(Hi, I, c, 0.0, 3.0), DomainError);
    CHECK_THROWS_AS(whole_space_oracle(Eigen::MatrixXd::Identity(11, 11), Eigen::MatrixXd::Identity(11, 11),
                                       Eigen::VectorXd::Ones(11), 1.0, 3.0),
                    DomainError);
  }
}
