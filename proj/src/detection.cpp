#include "biorx/detection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "biorx/quadrature.hpp"

namespace biorx {

DecisionThreshold ml_threshold(const GaussianStats& s0, const GaussianStats& s1) {
  if (!(s0.mean < s1.mean)) throw std::domain_error("ml_threshold: requires mean0 < mean1");
  if (!(s0.variance > 0.0) || !(s1.variance > 0.0))
    throw std::domain_error("ml_threshold: variances must be positive");

  const double v0 = s0.variance, v1 = s1.variance;
  const double m0 = s0.mean, m1 = s1.mean;
  const double dv = v1 - v0;
  if (std::abs(dv) <= 1e-12 * std::max(v0, v1)) return {0.5 * (m0 + m1), ThresholdRegime::kEqualVariance};

  const double sd0 = std::sqrt(v0), sd1 = std::sqrt(v1);
  const double log_ratio = std::log(sd1 / sd0);
  const double Q = (m1 - m0) * (m1 - m0) + 2.0 * dv * log_ratio;
  const double root = sd1 * sd0 * std::sqrt(Q);
  const double a = v1 * m0 - v0 * m1;
  double gamma;
  if (a >= 0.0) {
    gamma = (a + root) / dv;
  } else {
    // Same root after multiplying through by (a - root); no cancellation when
    // the variances nearly agree.
    gamma = (v1 * m0 * m0 - v0 * m1 * m1 - 2.0 * v1 * v0 * log_ratio) / (a - root);
  }
  return {gamma, ThresholdRegime::kGeneral};
}

double gaussian_bep(const GaussianStats& s0, const GaussianStats& s1, double threshold) {
  return 0.25 * std::erfc((threshold - s0.mean) / std::sqrt(2.0 * s0.variance)) +
         0.25 * std::erfc((s1.mean - threshold) / std::sqrt(2.0 * s1.variance));
}

GaussianStats tdd_output_stats(double c_m, const std::optional<InterfererModel>& interferer,
                               const SpectralModel& model, const FlickerBand& band) {
  const double N_r = model.receiver().N_r;
  const double zeta = model.zeta();
  const double flicker = flicker_variance(band.f_L, band.f_H, model.receiver());

  if (!interferer) {
    const double p = c_m / (model.m().K_D() + c_m);
    return {zeta * N_r * p, zeta * zeta * N_r * p * (1.0 - p) + flicker};
  }

  auto p_of = [&](double c_i) { return bound_probability(c_m, c_i, model.m(), model.i()); };
  auto marginal = [&](const GaussHermiteRule& rule) {
    const double mean_p = lognormal_expectation(*interferer, p_of, rule);
    const double binomial = lognormal_expectation(
        *interferer, [&](double c) { const double p = p_of(c); return p * (1.0 - p); }, rule);
    const double spread = lognormal_expectation(
        *interferer, [&](double c) { const double d = p_of(c) - mean_p; return d * d; }, rule);
    // Law of total variance for N_b: E[Var | c_i] + Var(E | c_i).
    return GaussianStats{mean_p, N_r * binomial + N_r * N_r * spread};
  };

  static const GaussHermiteRule rule64 = gauss_hermite(64);
  static const GaussHermiteRule rule48 = gauss_hermite(48);
  const GaussianStats fine = marginal(rule64);
  const GaussianStats coarse = marginal(rule48);
  const double tol = 1e-8;
  if (std::abs(fine.mean - coarse.mean) > tol * std::abs(fine.mean) + 1e-300 ||
      std::abs(fine.variance - coarse.variance) > tol * std::abs(fine.variance) + 1e-300)
    throw std::runtime_error("tdd_output_stats: Gauss-Hermite marginalisation did not converge");

  return {zeta * N_r * fine.mean, zeta * zeta * fine.variance + flicker};
}

int tdd_decide(double delta_I, const DecisionThreshold& threshold) { return delta_I > threshold.value ? 1 : 0; }

double tdd_bep(const GaussianStats& s0, const GaussianStats& s1, const DecisionThreshold& threshold) {
  return gaussian_bep(s0, s1, threshold.value);
}

double no_interference_variance(double c_m, const SpectralModel& model, int N, double dt) {
  const std::vector<double> f = frequency_grid(N, dt);
  return estimator_variance(fisher_matrix({c_m, 0.0}, model, f, ModelKind::kNoInterference))[0];
}

double two_species_variance(double c_m, double c_i, const SpectralModel& model, int N, double dt) {
  const std::vector<double> f = frequency_grid(N, dt);
  return estimator_variance(fisher_matrix({c_m, c_i}, model, f, ModelKind::kTwoSpecies))[0];
}

DecisionThreshold fdd_threshold(double c_m0, double c_m1, const SpectralModel& model, int N, double dt) {
  if (!(c_m0 < c_m1)) throw std::domain_error("fdd_threshold: requires c_m0 < c_m1");
  const GaussianStats s0{c_m0, no_interference_variance(c_m0, model, N, dt)};
  const GaussianStats s1{c_m1, no_interference_variance(c_m1, model, N, dt)};
  return ml_threshold(s0, s1);
}

FddDecision fdd_decide(const WhittleFit& fit, const DecisionThreshold& threshold) {
  return {fit.lambda_hat.c_m > threshold.value ? 1 : 0, fit.converged};
}

FddAnalysis fdd_analysis(double c_m0, double c_m1, const InterfererModel& interferer, const SpectralModel& model,
                         int N, double dt) {
  FddAnalysis out;
  out.var_hat_0 = two_species_variance(c_m0, interferer.mu_ci, model, N, dt);
  out.var_hat_1 = two_species_variance(c_m1, interferer.mu_ci, model, N, dt);
  if (c_m0 == c_m1) {
    out.threshold = {c_m0, ThresholdRegime::kEqualVariance};
    out.bep = 0.5;
    return out;
  }
  out.threshold = fdd_threshold(c_m0, c_m1, model, N, dt);
  out.bep = gaussian_bep({c_m0, out.var_hat_0}, {c_m1, out.var_hat_1}, out.threshold.value);
  return out;
}

double fdd_bep(double c_m0, double c_m1, const InterfererModel& interferer, const SpectralModel& model, int N,
               double dt) {
  return fdd_analysis(c_m0, c_m1, interferer, model, N, dt).bep;
}

}  // namespace biorx
