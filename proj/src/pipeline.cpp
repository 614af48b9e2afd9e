#include "biorx/pipeline.hpp"

#include <cmath>
#include <stdexcept>

#include "biorx/estimation.hpp"
#include "biorx/fft.hpp"
#include "biorx/rng.hpp"

namespace biorx {

void OperatingPoint::validate() const {
  channel.validate();
  receiver.validate();
  m.validate("k_m");
  i.validate("k_i");
  if (!(N_m0 >= 0.0)) throw std::invalid_argument("N_m[0] must be non-negative");
  if (!(N_m1 > N_m0)) throw std::invalid_argument("N_m[1] must exceed N_m[0]");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be non-negative");
  if (!(mu_sigma_ratio > 0.0)) throw std::invalid_argument("mu_sigma_ratio must be positive");
  if (N < 4 || N % 2 != 0) throw std::invalid_argument("N must be even and at least 4");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(tdd_window > 2.0 * dt)) throw std::invalid_argument("tdd_window must exceed 2 dt");
  if (oversample < 1) throw std::invalid_argument("oversample must be at least 1");
}

double OperatingPoint::c_m0() const { return received_concentration({N_m0}, channel); }
double OperatingPoint::c_m1() const { return received_concentration({N_m1}, channel); }

std::optional<InterfererModel> OperatingPoint::interferer() const {
  if (gamma == 0.0) return std::nullopt;
  const double mu = mu_ci();
  return InterfererModel{mu, mu / mu_sigma_ratio};
}

SpectralModel OperatingPoint::model() const { return SpectralModel(m, i, receiver, channel.T, threshold_shape); }

FlickerBand OperatingPoint::tdd_band() const { return {1.0 / tdd_window, 1.0 / (2.0 * dt)}; }

PointAnalysis analyze(const OperatingPoint& op) {
  PointAnalysis a;
  const SpectralModel model = op.model();
  const auto interferer = op.interferer();
  const FlickerBand band = op.tdd_band();
  a.c_m0 = op.c_m0();
  a.c_m1 = op.c_m1();
  a.mu_ci = interferer ? interferer->mu_ci : 0.0;

  a.rx_tdd0 = tdd_output_stats(a.c_m0, std::nullopt, model, band);
  a.rx_tdd1 = tdd_output_stats(a.c_m1, std::nullopt, model, band);
  a.gamma_td = ml_threshold(a.rx_tdd0, a.rx_tdd1);
  a.tdd0 = tdd_output_stats(a.c_m0, interferer, model, band);
  a.tdd1 = tdd_output_stats(a.c_m1, interferer, model, band);
  a.tdd_bep = tdd_bep(a.tdd0, a.tdd1, a.gamma_td);

  a.rx_var0 = no_interference_variance(a.c_m0, model, op.N, op.dt);
  a.rx_var1 = no_interference_variance(a.c_m1, model, op.N, op.dt);
  a.fdd = fdd_analysis(a.c_m0, a.c_m1, interferer.value_or(InterfererModel{0.0, 0.0}), model, op.N, op.dt);

  a.fch0 = characteristic_frequencies({a.c_m0, a.mu_ci}, op.m, op.i);
  a.fch1 = characteristic_frequencies({a.c_m1, a.mu_ci}, op.m, op.i);
  return a;
}

int tdd_trial(const OperatingPoint& op, const PointAnalysis& analysis, int bit, std::uint64_t seed,
              TddSampling sampling) {
  Rng rng(seed);
  const auto interferer = op.interferer();
  const double c_i = interferer ? draw_interferer(*interferer, rng) : 0.0;
  const double c_m = bit ? analysis.c_m1 : analysis.c_m0;
  const double p = bound_probability(c_m, c_i, op.m, op.i);
  const int N_r = op.receiver.N_r;

  double bound;
  if (sampling == TddSampling::kBinomial) {
    bound = sample_bound_count(N_r, p, rng);
  } else {
    std::normal_distribution<double> normal(N_r * p, std::sqrt(N_r * p * (1.0 - p)));
    bound = normal(rng);
  }
  const SpectralModel model = op.model();
  const FlickerBand band = op.tdd_band();
  std::normal_distribution<double> flicker(0.0, std::sqrt(flicker_variance(band.f_L, band.f_H, op.receiver)));
  const double current = model.zeta() * bound + flicker(rng);
  return tdd_decide(current, analysis.gamma_td);
}

std::vector<double> simulate_current(const OperatingPoint& op, const ConcentrationPair& lambda, std::uint64_t seed,
                                     bool with_flicker) {
  const SpectralModel model = op.model();
  const int L = op.oversample;
  const int fine_n = op.N * L;
  const ReceptorTrace trace = simulate_trace(op.receiver.N_r, lambda, op.m, op.i, fine_n, op.dt / L,
                                             splitmix64(seed ^ 0x6b696e6574696373ULL));
  std::vector<double> current(fine_n);
  for (int k = 0; k < fine_n; ++k) current[k] = model.zeta() * (trace.counts_m[k] + trace.counts_i[k]);
  if (L > 1) {
    // Brick-wall filter and decimate: keep fine bins below the output Nyquist
    // bin; the retained DFT of the decimated series is the fine DFT over L.
    const auto fine = real_dft(current);
    std::vector<std::complex<double>> coarse(op.N / 2 + 1);
    for (int k = 0; k < op.N / 2; ++k) coarse[k] = fine[k] / static_cast<double>(L);
    current = inverse_real_dft(coarse, op.N);
  }
  if (with_flicker) {
    const auto noise = synthesize_flicker(op.N, op.dt, op.receiver, splitmix64(seed ^ 0x666c69636b6572ULL));
    for (int k = 0; k < op.N; ++k) current[k] += noise[k];
  }
  return current;
}

FddTrial fdd_trial(const OperatingPoint& op, const PointAnalysis& analysis, int bit, std::uint64_t seed) {
  Rng rng(seed);
  const auto interferer = op.interferer();
  FddTrial out;
  out.c_i = interferer ? draw_interferer(*interferer, rng) : 0.0;
  const double c_m = bit ? analysis.c_m1 : analysis.c_m0;
  const auto current = simulate_current(op, {c_m, out.c_i}, seed);
  const Periodogram pg = periodogram(current, op.dt);
  const WhittleFit fit = ml_estimate(pg, op.model(), ModelKind::kTwoSpecies);
  const FddDecision decision = fdd_decide(fit, analysis.fdd.threshold);
  out.decided = decision.bit;
  out.converged = decision.fit_converged;
  out.c_m_hat = fit.lambda_hat.c_m;
  return out;
}

}  // namespace biorx
