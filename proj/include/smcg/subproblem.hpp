#pragma once

// p-regularized model subproblems restricted to span{g, s}.
//
// With d = mu*g + nu*s the model becomes a function of (mu, nu):
//
//   m(u) = c2'u + 1/2 u'Bu + (sigma/p) ||u||_N^p,   N = B (Hessian norm) or E (Euclidean norm)
//
// where c2 = (g'g, g's), B = [[rho, g'y], [g'y, s'y]] and E = [[g'g, g's], [g's, s's]].

#include <array>

namespace smcg {

/// Symmetric 2x2 matrix [[a11, a12], [a12, a22]].
struct Sym2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a22 = 0.0;

  double det() const { return a11 * a22 - a12 * a12; }
  std::array<double, 2> apply(const std::array<double, 2>& u) const {
    return {a11 * u[0] + a12 * u[1], a12 * u[0] + a22 * u[1]};
  }
  double quad(const std::array<double, 2>& u) const {
    return a11 * u[0] * u[0] + 2.0 * a12 * u[0] * u[1] + a22 * u[1] * u[1];
  }
};

/// Eigen-decomposition of a Sym2: lambda1 <= lambda2 with unit eigenvectors v1, v2.
struct SymEigen2 {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::array<double, 2> v1{};
  std::array<double, 2> v2{};
};

SymEigen2 eigen_sym2(const Sym2& a);

/// Symmetric square root and inverse square root of an SPD 2x2 matrix.
Sym2 sqrt_sym2(const Sym2& a);
Sym2 inv_sqrt_sym2(const Sym2& a);

enum class NormKind { HessNorm, EuclidNorm };

struct SubproblemInput {
  std::array<double, 2> c2{};
  Sym2 B;
  Sym2 E;
  double sigma = 0.0;
  double p = 3.0;
  NormKind norm_kind = NormKind::HessNorm;
};

struct SubproblemSolution {
  double mu = 0.0;
  double nu = 0.0;
  double z_star = 0.0;
  double lambda = 0.0;    // applied shift sigma * z*^(p-2) (after any clamp)
  double shrink_T = 1.0;  // 1 / (1 + lambda) on the Hessian-norm path
  bool clamped = false;
};

/// Unique non-negative root of sigma*z^(p-1) + z - q_tilde = 0 for p in {3, 4}.
double secular_root_closed(int p, double sigma, double q_tilde);

/// Same root for any real p > 2 by bracketed Newton on [0, q_tilde].
double secular_root_general(double p, double sigma, double q_tilde);

/// Hessian-norm solution u = T * B^{-1}(-c2). The shift sigma*z*^(p-2) is capped
/// at `shift_cap` (1 by default, giving T >= 1/2); pass infinity for the exact
/// minimizer.
SubproblemSolution solve_hessnorm(const SubproblemInput& input, double shift_cap = 1.0);

/// Euclidean-norm solution u = -(B + lambda E)^{-1} c2 with lambda = sigma*z*^(p-2)
/// and z* the root of the secular equation in the E^{-1/2} B E^{-1/2}
/// eigenbasis. lambda is capped at `curvature_cap` (||y||^2 / s'y in the solver).
SubproblemSolution solve_euclidnorm(const SubproblemInput& input, double curvature_cap);

/// Evaluates m(mu, nu) for the norm selected by input.norm_kind.
double model_value(const SubproblemInput& input, double mu, double nu);

/// Gradient of m at (mu, nu); vanishes at the exact minimizer.
std::array<double, 2> model_gradient(const SubproblemInput& input, double mu, double nu);

struct GridOracleResult {
  double mu = 0.0;
  double nu = 0.0;
  double model_value = 0.0;
};

/// Exhaustive grid search on [-r, r]^2 followed by a compass-search polish.
GridOracleResult brute_force_2d_oracle(const SubproblemInput& input, double grid_radius,
                                       int grid_steps = 201);

}  // namespace smcg
