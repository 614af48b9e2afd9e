#include "biorx/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "biorx/constants.hpp"

namespace biorx {

GaussHermiteRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: need at least one node");
  // Jacobi matrix of the physicists' Hermite recurrence: off-diagonal sqrt(k/2).
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    J(k, k - 1) = std::sqrt(0.5 * k);
    J(k - 1, k) = J(k, k - 1);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mu0 = std::sqrt(kPi);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = eig.eigenvalues()[k];
    const double v = eig.eigenvectors()(0, k);
    rule.weights[k] = mu0 * v * v;
  }
  return rule;
}

double lognormal_expectation(const InterfererModel& model, const std::function<double(double)>& g,
                             const GaussHermiteRule& rule) {
  if (model.sigma_ci == 0.0) return g(model.mu_ci);
  const double mu = model.log_mu();
  const double s = model.log_sigma();
  double acc = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k)
    acc += rule.weights[k] * g(std::exp(mu + std::sqrt(2.0) * s * rule.nodes[k]));
  return acc / std::sqrt(kPi);
}

}  // namespace biorx
