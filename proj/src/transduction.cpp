#include "biorx/transduction.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "biorx/constants.hpp"
#include "biorx/fft.hpp"
#include "biorx/rng.hpp"

namespace biorx {

void ReceiverSpec::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument(std::string("ReceiverSpec.") + name + " must be positive");
  };
  if (N_r < 1) throw std::invalid_argument("ReceiverSpec.N_r must be at least 1");
  positive(r, "r");
  positive(N_e, "N_e");
  positive(g, "g");
  positive(c_q, "c_q");
  positive(l_gr, "l_gr");
  positive(A_gr, "A_gr");
  positive(c_ion, "c_ion");
  positive(eps_rel, "eps_rel");
  if (!(S_f1Hz >= 0.0)) throw std::invalid_argument("ReceiverSpec.S_f1Hz must be non-negative");
  if (!(beta >= 0.8 && beta <= 1.2))
    throw std::invalid_argument("ReceiverSpec.beta must lie in [0.8, 1.2]");
}

double debye_length(const ReceiverSpec& spec, double T) {
  using C = PhysicalConstants;
  const double eps = spec.eps_rel * C::eps0;
  return std::sqrt(eps * C::kB * T / (2.0 * C::N_A * C::q * C::q * spec.c_ion));
}

double effective_charge(const ReceiverSpec& spec, double debye) {
  return PhysicalConstants::q * std::exp(-spec.r / debye);
}

double gate_capacitance(const ReceiverSpec& spec, double debye) {
  const double C_gr = spec.A_gr * spec.eps_rel * PhysicalConstants::eps0 / debye;
  const double C_Q = spec.c_q * spec.A_gr;
  return 1.0 / (1.0 / C_gr + 1.0 / C_Q);
}

double gain(const ReceiverSpec& spec, double q_eff, double C_G) {
  return q_eff * spec.N_e * spec.g / C_G;
}

double receptor_gain(const ReceiverSpec& spec, double T) {
  const double debye = debye_length(spec, T);
  return gain(spec, effective_charge(spec, debye), gate_capacitance(spec, debye));
}

double flicker_psd(double f, const ReceiverSpec& spec) {
  if (!(f > 0.0)) throw std::domain_error("flicker_psd: frequency must be positive");
  if (spec.beta == 1.0) return spec.S_f1Hz / f;
  return spec.S_f1Hz * std::pow(f, -spec.beta);
}

double flicker_variance(double f_L, double f_H, const ReceiverSpec& spec) {
  if (!(f_L > 0.0) || f_H < f_L) throw std::domain_error("flicker_variance: need 0 < f_L <= f_H");
  const double flat = f_L * flicker_psd(f_L, spec);
  double band;
  if (std::abs(spec.beta - 1.0) < 1e-12) {
    band = spec.S_f1Hz * std::log(f_H / f_L);
  } else {
    const double e = 1.0 - spec.beta;
    band = spec.S_f1Hz * (std::pow(f_H, e) - std::pow(f_L, e)) / e;
  }
  return flat + band;
}

std::vector<double> synthesize_flicker(int n, double dt, const ReceiverSpec& spec, std::uint64_t seed) {
  if (n < 4 || n % 2 != 0) throw std::domain_error("synthesize_flicker: n must be even and >= 4");
  if (!(dt > 0.0)) throw std::domain_error("synthesize_flicker: dt must be positive");
  std::vector<std::complex<double>> spectrum(n / 2 + 1, {0.0, 0.0});
  if (spec.S_f1Hz == 0.0) return std::vector<double>(n, 0.0);

  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double df = 1.0 / (n * dt);
  for (int k = 1; k < n / 2; ++k) {
    // E|X_k|^2 = S(f_k) * n / (2 dt); the unit complex normal has E|z|^2 = 1.
    const double scale = std::sqrt(flicker_psd(k * df, spec) * n / (2.0 * dt));
    const double re = normal(rng);
    const double im = normal(rng);
    spectrum[k] = scale * std::complex<double>(re, im) / std::sqrt(2.0);
  }
  return inverse_real_dft(spectrum, n);
}

}  // namespace biorx
