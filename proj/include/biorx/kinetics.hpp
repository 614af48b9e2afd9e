#pragma once

// Competitive ligand-receptor binding: one receptor type, an information
// ligand (m) and an interferer (i), each receptor in R, RM or RI.

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "biorx/rng.hpp"

namespace biorx {

struct LigandKinetics {
  double k_plus = 4e-17;  // m^3/s
  double k_minus = 2.0;   // 1/s

  double K_D() const { return k_minus / k_plus; }
  void validate(const char* which) const;
};

/// Concentrations in molecules/m^3.
struct ConcentrationPair {
  double c_m = 0.0;
  double c_i = 0.0;
};

struct EquilibriumState {
  double p_RM0 = 0.0;
  double p_RI0 = 0.0;
  double p_R0 = 1.0;
};

/// Log-normal interferer concentration, parameterised by its arithmetic mean and std.
struct InterfererModel {
  double mu_ci = 0.0;
  double sigma_ci = 0.0;

  double log_sigma() const;
  double log_mu() const;
  void validate() const;
};

/// Bound-receptor counts sampled on a uniform grid.
struct ReceptorTrace {
  double dt = 0.0;
  std::vector<int> counts_m;
  std::vector<int> counts_i;
  std::uint64_t seed = 0;

  std::size_t size() const { return counts_m.size(); }
};

/// Probability that a receptor is bound by either species.
double bound_probability(double c_m, double c_i, const LigandKinetics& m, const LigandKinetics& i);

EquilibriumState equilibrium_probabilities(const ConcentrationPair& lambda, const LigandKinetics& m,
                                           const LigandKinetics& i);

/// Full 3x3 generator acting on [p_RM, p_RI, p_R]; columns sum to zero.
Eigen::Matrix3d generator_matrix(const ConcentrationPair& lambda, const LigandKinetics& m,
                                 const LigandKinetics& i);

/// Linearised relaxation matrix of [dp_RM, dp_RI] after eliminating p_R.
Eigen::Matrix2d omega_matrix(const ConcentrationPair& lambda, const LigandKinetics& m,
                             const LigandKinetics& i);

/// Maps reduced fluctuations [dp_RM, dp_RI] to [dp_RM, dp_RI, dp_R].
Eigen::Matrix<double, 3, 2> reduction_matrix();

/// Per-receptor covariance of the (RM, RI) indicator vector at equilibrium.
Eigen::Matrix2d gamma_matrix(const EquilibriumState& eq);

/// Exact event-driven simulation of n_receptors independent three-state
/// receptors, started from the stationary distribution and observed at k*dt,
/// k = 0..n_samples-1. Throws std::domain_error for odd/zero n_samples,
/// n_receptors < 1 or dt <= 0.
ReceptorTrace simulate_trace(int n_receptors, const ConcentrationPair& lambda, const LigandKinetics& m,
                             const LigandKinetics& i, int n_samples, double dt, std::uint64_t seed);

int sample_bound_count(int n_receptors, double p_b, Rng& rng);

double draw_interferer(const InterfererModel& model, Rng& rng);

}  // namespace biorx
