#include "biorx/kinetics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace biorx {

void LigandKinetics::validate(const char* which) const {
  if (!(k_plus > 0.0) || !std::isfinite(k_plus))
    throw std::invalid_argument(std::string(which) + ".k_plus must be positive");
  if (!(k_minus > 0.0) || !std::isfinite(k_minus))
    throw std::invalid_argument(std::string(which) + ".k_minus must be positive");
}

double InterfererModel::log_sigma() const {
  const double ratio = sigma_ci / mu_ci;
  return std::sqrt(std::log1p(ratio * ratio));
}

double InterfererModel::log_mu() const {
  const double s = log_sigma();
  return std::log(mu_ci) - 0.5 * s * s;
}

void InterfererModel::validate() const {
  if (!(mu_ci > 0.0)) throw std::invalid_argument("InterfererModel.mu_ci must be positive");
  if (!(sigma_ci >= 0.0)) throw std::invalid_argument("InterfererModel.sigma_ci must be non-negative");
}

double bound_probability(double c_m, double c_i, const LigandKinetics& m, const LigandKinetics& i) {
  const double x = c_m / m.K_D() + c_i / i.K_D();
  return x / (1.0 + x);
}

EquilibriumState equilibrium_probabilities(const ConcentrationPair& lambda, const LigandKinetics& m,
                                           const LigandKinetics& i) {
  const double xm = lambda.c_m / m.K_D();
  const double xi = lambda.c_i / i.K_D();
  const double z = 1.0 + xm + xi;
  EquilibriumState eq;
  eq.p_RM0 = xm / z;
  eq.p_RI0 = xi / z;
  eq.p_R0 = 1.0 / z;
  return eq;
}

Eigen::Matrix3d generator_matrix(const ConcentrationPair& lambda, const LigandKinetics& m,
                                 const LigandKinetics& i) {
  const double am = m.k_plus * lambda.c_m;
  const double ai = i.k_plus * lambda.c_i;
  Eigen::Matrix3d G;
  G << -m.k_minus, 0.0, am,
       0.0, -i.k_minus, ai,
       m.k_minus, i.k_minus, -am - ai;
  return G;
}

Eigen::Matrix2d omega_matrix(const ConcentrationPair& lambda, const LigandKinetics& m,
                             const LigandKinetics& i) {
  // Eliminating p_R = 1 - p_RM - p_RI puts the binding flux k+ c into both
  // columns of each row.
  const double am = m.k_plus * lambda.c_m;
  const double ai = i.k_plus * lambda.c_i;
  Eigen::Matrix2d W;
  W << -(am + m.k_minus), -am,
       -ai, -(ai + i.k_minus);
  return W;
}

Eigen::Matrix<double, 3, 2> reduction_matrix() {
  Eigen::Matrix<double, 3, 2> R;
  R << 1.0, 0.0,
       0.0, 1.0,
       -1.0, -1.0;
  return R;
}

Eigen::Matrix2d gamma_matrix(const EquilibriumState& eq) {
  Eigen::Matrix2d G;
  G << eq.p_RM0 * (1.0 - eq.p_RM0), -eq.p_RM0 * eq.p_RI0,
       -eq.p_RM0 * eq.p_RI0, eq.p_RI0 * (1.0 - eq.p_RI0);
  return G;
}

ReceptorTrace simulate_trace(int n_receptors, const ConcentrationPair& lambda, const LigandKinetics& m,
                             const LigandKinetics& i, int n_samples, double dt, std::uint64_t seed) {
  if (n_samples <= 0 || n_samples % 2 != 0)
    throw std::domain_error("simulate_trace: sample count must be positive and even");
  if (n_receptors < 1) throw std::domain_error("simulate_trace: need at least one receptor");
  if (!(dt > 0.0)) throw std::domain_error("simulate_trace: dt must be positive");

  enum State { kFree = 0, kBoundM = 1, kBoundI = 2 };

  const double on_m = m.k_plus * lambda.c_m;
  const double on_i = i.k_plus * lambda.c_i;
  const double on_total = on_m + on_i;
  const double leave[3] = {on_total, m.k_minus, i.k_minus};
  const EquilibriumState eq = equilibrium_probabilities(lambda, m, i);

  ReceptorTrace trace;
  trace.dt = dt;
  trace.seed = seed;
  trace.counts_m.assign(n_samples, 0);
  trace.counts_i.assign(n_samples, 0);

  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::exponential_distribution<double> unit_exp(1.0);
  const double t_end = dt * (n_samples - 1);

  for (int r = 0; r < n_receptors; ++r) {
    const double u0 = unif(rng);
    State state = u0 < eq.p_RM0 ? kBoundM : (u0 < eq.p_RM0 + eq.p_RI0 ? kBoundI : kFree);
    double t = 0.0;
    int k = 0;
    while (k < n_samples) {
      const double rate = leave[state];
      const double dwell =
          rate > 0.0 ? unit_exp(rng) / rate : std::numeric_limits<double>::infinity();
      const double t_next = t + dwell;
      // Record every grid point covered by [t, t_next).
      while (k < n_samples && k * dt < t_next) {
        if (state == kBoundM) ++trace.counts_m[k];
        else if (state == kBoundI) ++trace.counts_i[k];
        ++k;
      }
      if (t_next > t_end) break;
      t = t_next;
      if (state == kFree) {
        state = unif(rng) * on_total < on_m ? kBoundM : kBoundI;
      } else {
        state = kFree;
      }
    }
  }
  return trace;
}

int sample_bound_count(int n_receptors, double p_b, Rng& rng) {
  if (p_b <= 0.0) return 0;
  if (p_b >= 1.0) return n_receptors;
  std::binomial_distribution<int> dist(n_receptors, p_b);
  return dist(rng);
}

double draw_interferer(const InterfererModel& model, Rng& rng) {
  if (model.sigma_ci == 0.0) return model.mu_ci;
  std::lognormal_distribution<double> dist(model.log_mu(), model.log_sigma());
  return dist(rng);
}

}  // namespace biorx
