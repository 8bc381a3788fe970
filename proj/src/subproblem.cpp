#include "smcg/subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "smcg/model_core.hpp"

namespace smcg {

namespace {

void check_root_args(double sigma, double q) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw DomainError("secular root: sigma must be finite and >= 0");
  if (!(q >= 0.0) || !std::isfinite(q)) throw DomainError("secular root: q_tilde must be finite and >= 0");
}

double psi(double p, double sigma, double q, double z) { return sigma * std::pow(z, p - 1.0) + z - q; }

double psi_prime(double p, double sigma, double z) { return (p - 1.0) * sigma * std::pow(z, p - 2.0) + 1.0; }

// One Newton step, kept only if it reduces the residual.
double newton_polish(double p, double sigma, double q, double z) {
  const double r = psi(p, sigma, q, z);
  const double zn = z - r / psi_prime(p, sigma, z);
  if (zn >= 0.0 && std::abs(psi(p, sigma, q, zn)) < std::abs(r)) return zn;
  return z;
}

Sym2 congruence(const Sym2& s, const Sym2& m) {
  // s * m * s for symmetric s.
  const double t11 = s.a11 * m.a11 + s.a12 * m.a12;
  const double t12 = s.a11 * m.a12 + s.a12 * m.a22;
  const double t21 = s.a12 * m.a11 + s.a22 * m.a12;
  const double t22 = s.a12 * m.a12 + s.a22 * m.a22;
  Sym2 r;
  r.a11 = t11 * s.a11 + t12 * s.a12;
  r.a12 = 0.5 * ((t11 * s.a12 + t12 * s.a22) + (t21 * s.a11 + t22 * s.a12));
  r.a22 = t21 * s.a12 + t22 * s.a22;
  return r;
}

Sym2 spectral_function(const Sym2& a, double (*fn)(double)) {
  const SymEigen2 e = eigen_sym2(a);
  if (!(e.lambda1 > 0.0)) throw DomainError("matrix function of a non-positive-definite 2x2 matrix");
  const double f1 = fn(e.lambda1);
  const double f2 = fn(e.lambda2);
  Sym2 r;
  r.a11 = f1 * e.v1[0] * e.v1[0] + f2 * e.v2[0] * e.v2[0];
  r.a12 = f1 * e.v1[0] * e.v1[1] + f2 * e.v2[0] * e.v2[1];
  r.a22 = f1 * e.v1[1] * e.v1[1] + f2 * e.v2[1] * e.v2[1];
  return r;
}

void check_input(const SubproblemInput& in) {
  if (!(in.p > 2.0) || !std::isfinite(in.p)) throw DomainError("subproblem: p must be > 2");
  if (!(in.sigma >= 0.0) || !std::isfinite(in.sigma)) throw DomainError("subproblem: sigma must be finite and >= 0");
}

}  // namespace

SymEigen2 eigen_sym2(const Sym2& a) {
  const double theta = 0.5 * std::atan2(2.0 * a.a12, a.a11 - a.a22);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  SymEigen2 e;
  e.lambda2 = a.a11 * c * c + 2.0 * a.a12 * c * s + a.a22 * s * s;
  e.lambda1 = a.a11 * s * s - 2.0 * a.a12 * c * s + a.a22 * c * c;
  e.v2 = {c, s};
  e.v1 = {-s, c};
  // Small eigenvalue from the determinant when that is more accurate.
  const double det = a.det();
  if (e.lambda2 > 0.0 && det > 0.0) e.lambda1 = det / e.lambda2;
  if (e.lambda1 > e.lambda2) {
    std::swap(e.lambda1, e.lambda2);
    std::swap(e.v1, e.v2);
  }
  return e;
}

Sym2 sqrt_sym2(const Sym2& a) {
  return spectral_function(a, [](double v) { return std::sqrt(v); });
}

Sym2 inv_sqrt_sym2(const Sym2& a) {
  return spectral_function(a, [](double v) { return 1.0 / std::sqrt(v); });
}

double secular_root_closed(int p, double sigma, double q) {
  check_root_args(sigma, q);
  if (q == 0.0) return 0.0;
  if (p == 3) return 2.0 * q / (1.0 + std::sqrt(1.0 + 4.0 * sigma * q));
  if (p != 4) throw DomainError("secular_root_closed: p must be 3 or 4");
  if (sigma < 1e-12) return secular_root_general(4.0, sigma, q);
  // sigma z^3 + z - q = 0. With A^3 - B^3 = q/sigma and A*B = 1/(3 sigma),
  // z = A - B = (q/sigma) / (A^2 + AB + B^2), free of cancellation.
  const double half = q / (2.0 * sigma);
  const double third = 1.0 / (3.0 * sigma);
  const double A = std::cbrt(half + std::sqrt(half * half + third * third * third));
  const double B = third / A;
  const double z = (q / sigma) / (A * A + third + B * B);
  if (!std::isfinite(z)) return secular_root_general(4.0, sigma, q);
  return newton_polish(4.0, sigma, q, z);
}

double secular_root_general(double p, double sigma, double q) {
  check_root_args(sigma, q);
  if (!(p > 2.0) || !std::isfinite(p)) throw DomainError("secular_root_general: p must be > 2");
  if (q == 0.0) return 0.0;
  if (sigma == 0.0) return q;

  // psi is increasing and convex on [0, inf); Newton from an upper bound
  // decreases monotonically to the root.
  double hi = std::min(q, std::pow(q / sigma, 1.0 / (p - 1.0)));
  double lo = 0.0;
  double z = hi;
  const double tol = 1e-15 * q;
  for (int it = 0; it < 100; ++it) {
    const double r = psi(p, sigma, q, z);
    if (std::abs(r) <= tol) return z;
    if (r > 0.0) hi = z;
    else lo = z;
    double zn = z - r / psi_prime(p, sigma, z);
    if (!(zn > lo && zn < hi)) zn = 0.5 * (lo + hi);
    if (zn == z || hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * hi) return zn;
    z = zn;
  }
  if (std::abs(psi(p, sigma, q, z)) <= 1e-12 * std::max(1.0, q)) return z;
  throw NumericError("secular_root_general: no convergence");
}

SubproblemSolution solve_hessnorm(const SubproblemInput& in, double shift_cap) {
  check_input(in);
  const Sym2& B = in.B;
  const double delta = B.det();
  if (!(B.a11 > 0.0) || !(delta > 0.0) || !std::isfinite(delta)) {
    throw IndefiniteModelError("solve_hessnorm: B is not positive definite");
  }
  const double g1 = in.c2[0];
  const double g2 = in.c2[1];
  const double mu_bar = (B.a12 * g2 - B.a22 * g1) / delta;
  const double nu_bar = (B.a12 * g1 - B.a11 * g2) / delta;
  const double q2 = -(g1 * mu_bar + g2 * nu_bar);
  const double q = std::sqrt(std::max(0.0, q2));

  const int ip = static_cast<int>(in.p);
  double z = (static_cast<double>(ip) == in.p && (ip == 3 || ip == 4)) ? secular_root_closed(ip, in.sigma, q)
                                                                        : secular_root_general(in.p, in.sigma, q);
  SubproblemSolution sol;
  sol.z_star = z;
  double shift = in.sigma * std::pow(z, in.p - 2.0);
  if (shift > shift_cap) {
    shift = shift_cap;
    sol.clamped = true;
  }
  sol.lambda = shift;
  sol.shrink_T = 1.0 / (1.0 + shift);
  sol.mu = sol.shrink_T * mu_bar;
  sol.nu = sol.shrink_T * nu_bar;
  if (!std::isfinite(sol.mu) || !std::isfinite(sol.nu)) throw NumericError("solve_hessnorm: non-finite solution");
  return sol;
}

SubproblemSolution solve_euclidnorm(const SubproblemInput& in, double curvature_cap) {
  check_input(in);
  const Sym2& B = in.B;
  const Sym2& E = in.E;
  if (!(B.a11 > 0.0) || !(B.det() > 0.0)) throw IndefiniteModelError("solve_euclidnorm: B is not positive definite");
  const SymEigen2 ee = eigen_sym2(E);
  if (!(ee.lambda1 > 0.0) || !(E.det() > 0.0)) throw CollinearityError("solve_euclidnorm: E is singular");

  const Sym2 Eis = inv_sqrt_sym2(E);
  const Sym2 M = congruence(Eis, B);
  const SymEigen2 me = eigen_sym2(M);
  if (!(me.lambda1 > 0.0)) throw IndefiniteModelError("solve_euclidnorm: transformed model is not positive definite");

  const std::array<double, 2> w = Eis.apply(in.c2);
  const double b1 = me.v1[0] * w[0] + me.v1[1] * w[1];
  const double b2 = me.v2[0] * w[0] + me.v2[1] * w[1];
  const double m1 = me.lambda1;
  const double m2 = me.lambda2;
  const double p = in.p;
  const double sigma = in.sigma;

  auto terms = [&](double z) {
    const double lam = sigma * std::pow(z, p - 2.0);
    const double d1 = m1 + lam;
    const double d2 = m2 + lam;
    return std::array<double, 3>{b1 * b1 / (d1 * d1), b2 * b2 / (d2 * d2), lam};
  };
  auto phi = [&](double z) {
    const auto t = terms(z);
    return t[0] + t[1] - z * z;
  };
  auto phi_prime = [&](double z) {
    const double lam = sigma * std::pow(z, p - 2.0);
    const double dlam = sigma * (p - 2.0) * std::pow(z, p - 3.0);
    const double d1 = m1 + lam;
    const double d2 = m2 + lam;
    return -2.0 * dlam * (b1 * b1 / (d1 * d1 * d1) + b2 * b2 / (d2 * d2 * d2)) - 2.0 * z;
  };

  const double z_hi = std::hypot(b1 / m1, b2 / m2);
  double z = z_hi;
  if (sigma > 0.0 && z_hi > 0.0) {
    double lo = 0.0;
    double hi = z_hi;
    for (int it = 0; it < 300; ++it) {
      const auto t = terms(z);
      const double val = t[0] + t[1] - z * z;
      if (std::abs(val) <= 1e-13 * (t[0] + t[1] + z * z)) break;
      if (val > 0.0) lo = z;
      else hi = z;
      if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
      double zn = z - val / phi_prime(z);
      if (!(zn > lo && zn < hi)) zn = 0.5 * (lo + hi);
      z = zn;
    }
    if (!(std::abs(phi(z)) <= 1e-10 * std::max(1.0, z_hi * z_hi))) {
      throw NumericError("solve_euclidnorm: secular equation did not converge");
    }
  }

  SubproblemSolution sol;
  sol.z_star = z;
  double lam = sigma * std::pow(z, p - 2.0);
  if (z == 0.0) lam = 0.0;
  if (lam > curvature_cap) {
    lam = curvature_cap;
    sol.clamped = true;
  }
  sol.lambda = lam;
  sol.shrink_T = 1.0;

  // (B + lam E) u = -c2 solved by Cramer's rule.
  const double a11 = B.a11 + lam * E.a11;
  const double a12 = B.a12 + lam * E.a12;
  const double a22 = B.a22 + lam * E.a22;
  const double det = a11 * a22 - a12 * a12;
  if (!(det > 0.0)) throw NumericError("solve_euclidnorm: shifted system is singular");
  sol.mu = (a12 * in.c2[1] - a22 * in.c2[0]) / det;
  sol.nu = (a12 * in.c2[0] - a11 * in.c2[1]) / det;
  if (!std::isfinite(sol.mu) || !std::isfinite(sol.nu)) throw NumericError("solve_euclidnorm: non-finite solution");
  return sol;
}

double model_value(const SubproblemInput& in, double mu, double nu) {
  const std::array<double, 2> u{mu, nu};
  const double lin = in.c2[0] * mu + in.c2[1] * nu;
  const double quad = in.B.quad(u);
  const double nsq = in.norm_kind == NormKind::HessNorm ? quad : in.E.quad(u);
  const double norm = std::sqrt(std::max(0.0, nsq));
  return lin + 0.5 * quad + in.sigma / in.p * std::pow(norm, in.p);
}

std::array<double, 2> model_gradient(const SubproblemInput& in, double mu, double nu) {
  const std::array<double, 2> u{mu, nu};
  const Sym2& N = in.norm_kind == NormKind::HessNorm ? in.B : in.E;
  const auto Bu = in.B.apply(u);
  const auto Nu = N.apply(u);
  const double norm = std::sqrt(std::max(0.0, N.quad(u)));
  const double w = in.sigma * std::pow(norm, in.p - 2.0);
  return {in.c2[0] + Bu[0] + w * Nu[0], in.c2[1] + Bu[1] + w * Nu[1]};
}

GridOracleResult brute_force_2d_oracle(const SubproblemInput& in, double r, int steps) {
  if (!(r > 0.0)) throw DomainError("brute_force_2d_oracle: radius must be positive");
  if (steps < 101) throw DomainError("brute_force_2d_oracle: need at least 101 grid steps");
  const double h = 2.0 * r / (steps - 1);
  GridOracleResult best{0.0, 0.0, model_value(in, 0.0, 0.0)};
  for (int i = 0; i < steps; ++i) {
    const double mu = -r + i * h;
    for (int j = 0; j < steps; ++j) {
      const double nu = -r + j * h;
      const double v = model_value(in, mu, nu);
      if (v < best.model_value) best = {mu, nu, v};
    }
  }
  double step = h;
  const double min_step = 1e-15 * std::max(1.0, r);
  static constexpr double dirs[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  while (step > min_step) {
    bool improved = false;
    for (const auto& d : dirs) {
      const double mu = best.mu + step * d[0];
      const double nu = best.nu + step * d[1];
      const double v = model_value(in, mu, nu);
      if (v < best.model_value) {
        best = {mu, nu, v};
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

}  // namespace smcg
