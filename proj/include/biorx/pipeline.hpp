#pragma once

// One operating point of the link: geometry, receiver, kinetics, CSK levels
// and sampling. Produces the analytic error probabilities of both detectors
// and single Monte Carlo symbol trials.

#include <cstdint>
#include <optional>

#include "biorx/channel.hpp"
#include "biorx/detection.hpp"
#include "biorx/kinetics.hpp"
#include "biorx/spectral.hpp"
#include "biorx/transduction.hpp"

namespace biorx {

struct OperatingPoint {
  ChannelSpec channel;
  ReceiverSpec receiver;
  LigandKinetics m{4e-17, 2.0};
  LigandKinetics i{4e-17, 8.0};
  double N_m0 = 1e3;
  double N_m1 = 5e3;
  double gamma = 1.0;            // mu_ci / c_m|1
  double mu_sigma_ratio = 10.0;  // mu_ci / sigma_ci
  int N = 700;
  double dt = 0.005;
  /// Observation window that sets the lower flicker band edge of the
  /// one-shot time-domain sample; independent of N.
  double tdd_window = 3.5;
  BindingShape threshold_shape = BindingShape::kPrinted;
  /// Receptor states are simulated at dt / oversample and passed through an
  /// ideal low-pass at the output Nyquist frequency before decimation to dt.
  /// 1 gives raw point sampling, which aliases binding noise above 1/(2 dt).
  int oversample = 8;

  void validate() const;

  double c_m0() const;
  double c_m1() const;
  double c_m(int bit) const { return bit ? c_m1() : c_m0(); }
  /// Empty when gamma == 0.
  std::optional<InterfererModel> interferer() const;
  double mu_ci() const { return gamma * c_m1(); }
  SpectralModel model() const;
  FlickerBand tdd_band() const;
};

struct PointAnalysis {
  double c_m0 = 0.0, c_m1 = 0.0, mu_ci = 0.0;
  GaussianStats rx_tdd0, rx_tdd1;  // receiver's interference-free model
  GaussianStats tdd0, tdd1;        // actual, interference-marginalised
  DecisionThreshold gamma_td;
  double tdd_bep = 0.5;
  double rx_var0 = 0.0, rx_var1 = 0.0;  // no-interference Fisher variances
  FddAnalysis fdd;
  CharacteristicFrequencies fch0, fch1;
};

PointAnalysis analyze(const OperatingPoint& op);

enum class TddSampling {
  kConditionalGaussian,  // N_b | c_i Gaussian with binomial moments
  kBinomial,             // N_b | c_i exact binomial
};

/// One TDD symbol: draw c_i, the bound count and a flicker sample, then
/// threshold. Returns the decided bit.
int tdd_trial(const OperatingPoint& op, const PointAnalysis& analysis, int bit, std::uint64_t seed,
              TddSampling sampling = TddSampling::kConditionalGaussian);

struct FddTrial {
  int decided = 0;
  bool converged = true;
  double c_m_hat = 0.0;
  double c_i = 0.0;
};

/// Output current of the receiver over one sampling window: simulated
/// receptor occupancy times zeta, band-limited per `op.oversample`, plus
/// synthesised flicker noise.
std::vector<double> simulate_current(const OperatingPoint& op, const ConcentrationPair& lambda, std::uint64_t seed,
                                     bool with_flicker = true);

/// One FDD symbol through the full chain: kinetics, flicker, periodogram,
/// Whittle fit, threshold.
FddTrial fdd_trial(const OperatingPoint& op, const PointAnalysis& analysis, int bit, std::uint64_t seed);

}  // namespace biorx
