#include "smcg/subproblem_oracle.hpp"

#include <cmath>
#include <limits>

#include "smcg/model_core.hpp"

namespace smcg {

Eigen::VectorXd whole_space_oracle(const Eigen::MatrixXd& H, const Eigen::MatrixXd& A, const Eigen::VectorXd& c,
                                   double sigma, double p) {
  const Eigen::Index n = c.size();
  if (n == 0 || H.rows() != n || H.cols() != n || A.rows() != n || A.cols() != n) {
    throw DomainError("whole_space_oracle: dimension mismatch");
  }
  if (n > 10) throw DomainError("whole_space_oracle: n > 10 is outside the oracle's scope");
  if (!(p > 2.0) || !(sigma >= 0.0)) throw DomainError("whole_space_oracle: need p > 2 and sigma >= 0");
  if (c.norm() == 0.0) return Eigen::VectorXd::Zero(n);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esA(A);
  if (esA.info() != Eigen::Success || !(esA.eigenvalues().minCoeff() > 0.0)) {
    throw DomainError("whole_space_oracle: A must be positive definite");
  }
  const Eigen::MatrixXd Ais = esA.operatorInverseSqrt();
  Eigen::MatrixXd M = Ais * H * Ais;
  M = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  if (es.info() != Eigen::Success) throw NumericError("whole_space_oracle: eigendecomposition failed");
  const Eigen::VectorXd mu = es.eigenvalues();
  const Eigen::MatrixXd V = es.eigenvectors();
  const Eigen::VectorXd beta = V.transpose() * (Ais * c);
  const double scale = std::max(1.0, mu.cwiseAbs().maxCoeff());
  const double mu1 = mu(0);

  if (sigma == 0.0) {
    if (!(mu1 > 0.0)) throw DomainError("whole_space_oracle: unbounded quadratic model");
    const Eigen::VectorXd a = -beta.cwiseQuotient(mu);
    return Ais * (V * a);
  }

  // Feasible shifts need mu1 + sigma z^(p-2) >= 0.
  const double z_lo = mu1 < 0.0 ? std::pow(-mu1 / sigma, 1.0 / (p - 2.0)) : 0.0;
  if (mu1 <= 0.0) {
    double bottom = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (mu(i) - mu1 <= 1e-12 * scale) bottom = std::max(bottom, std::abs(beta(i)));
    }
    if (bottom <= 1e-14 * beta.norm()) throw UnsupportedHardCase("whole_space_oracle: hard case");
  }

  auto phi = [&](double z) {
    const double lam = sigma * std::pow(z, p - 2.0);
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double den = mu(i) + lam;
      s += beta(i) * beta(i) / (den * den);
    }
    return s - z * z;
  };

  double lo = z_lo;
  double hi = std::max(2.0 * z_lo, 1.0);
  int grow = 0;
  while (phi(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++grow > 2000) throw NumericError("whole_space_oracle: cannot bracket the secular root");
  }
  for (int it = 0; it < 400 && hi - lo > 2.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (phi(mid) > 0.0) lo = mid;
    else hi = mid;
  }
  const double z = 0.5 * (lo + hi);
  const double lam = sigma * std::pow(z, p - 2.0);
  if (mu1 + lam < -1e-12 * scale) throw NumericError("whole_space_oracle: shifted matrix is indefinite");

  Eigen::VectorXd a(n);
  for (Eigen::Index i = 0; i < n; ++i) a(i) = -beta(i) / (mu(i) + lam);
  return Ais * (V * a);
}

}  // namespace smcg
