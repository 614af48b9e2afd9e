#pragma once

// Binary CSK symbol detectors: one-shot time-domain thresholding of the
// output current, and frequency-domain thresholding of the Whittle estimate.

#include <optional>

#include "biorx/estimation.hpp"
#include "biorx/kinetics.hpp"
#include "biorx/spectral.hpp"

namespace biorx {

struct GaussianStats {
  double mean = 0.0;
  double variance = 1.0;
};

enum class ThresholdRegime { kGeneral, kEqualVariance };

struct DecisionThreshold {
  double value = 0.0;
  ThresholdRegime regime = ThresholdRegime::kGeneral;
};

/// Crossing point of the two Gaussian densities between the means. Falls back
/// to the midpoint when the variances agree to 1e-12 relative. Throws
/// std::domain_error unless s0.mean < s1.mean.
DecisionThreshold ml_threshold(const GaussianStats& s0, const GaussianStats& s1);

/// 1/4 erfc((gamma - mu0)/sqrt(2 var0)) + 1/4 erfc((mu1 - gamma)/sqrt(2 var1)).
double gaussian_bep(const GaussianStats& s0, const GaussianStats& s1, double threshold);

struct FlickerBand {
  double f_L = 0.0;
  double f_H = 0.0;
};

/// Mean and variance of the sampled output current for a received
/// information concentration c_m. With an interferer the binding statistics
/// are marginalised over its log-normal law by 64-node Gauss-Hermite
/// quadrature; without one they are the single-ligand binomial moments.
/// Flicker variance over `band` is added in both cases. Throws
/// std::runtime_error if the quadrature has not converged.
GaussianStats tdd_output_stats(double c_m, const std::optional<InterfererModel>& interferer,
                               const SpectralModel& model, const FlickerBand& band);

/// 1 if delta_I > threshold, else 0.
int tdd_decide(double delta_I, const DecisionThreshold& threshold);

double tdd_bep(const GaussianStats& s0, const GaussianStats& s1, const DecisionThreshold& threshold);

/// Variance of the concentration estimate from the one-parameter
/// no-interference model, 1 / sum_k S^-2 (dS/dc_m)^2.
double no_interference_variance(double c_m, const SpectralModel& model, int N, double dt);

/// Variance of c_m-hat from the two-species information matrix at
/// (c_m, mu_ci), i.e. (F^-1)_11. Throws std::domain_error if F is singular.
double two_species_variance(double c_m, double c_i, const SpectralModel& model, int N, double dt);

/// Receiver threshold on c_m-hat, computed as if there were no interferer.
DecisionThreshold fdd_threshold(double c_m0, double c_m1, const SpectralModel& model, int N, double dt);

struct FddDecision {
  int bit = 0;
  bool fit_converged = true;
};

FddDecision fdd_decide(const WhittleFit& fit, const DecisionThreshold& threshold);

struct FddAnalysis {
  DecisionThreshold threshold;
  double var_hat_0 = 0.0;  // (F_0^-1)_11
  double var_hat_1 = 0.0;  // (F_1^-1)_11
  double bep = 0.5;
};

/// Asymptotic FDD error probability: threshold from the no-interference
/// model, estimator variances from the two-species model at mu_ci.
FddAnalysis fdd_analysis(double c_m0, double c_m1, const InterfererModel& interferer, const SpectralModel& model,
                         int N, double dt);

double fdd_bep(double c_m0, double c_m1, const InterfererModel& interferer, const SpectralModel& model, int N,
               double dt);

}  // namespace biorx
