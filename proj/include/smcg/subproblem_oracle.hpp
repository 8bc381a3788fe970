#pragma once

// Dense n-dimensional p-regularized subproblem, used to cross-check the 2x2 paths.
//
//   min_x  c'x + 1/2 x'Hx + (sigma/p) ||x||_A^p

#include <Eigen/Dense>

namespace smcg {

/// Global minimizer by eigendecomposition of A^{-1/2} H A^{-1/2} and bisection on the
/// secular equation. Intended for n <= 10; the hard case with c != 0 raises
/// UnsupportedHardCase.
Eigen::VectorXd whole_space_oracle(const Eigen::MatrixXd& H, const Eigen::MatrixXd& A, const Eigen::VectorXd& c,
                                   double sigma, double p);

}  // namespace smcg
