#pragma once

// Periodogram and parametric PSD models of the receiver output current.

#include <span>
#include <vector>

#include "biorx/kinetics.hpp"
#include "biorx/transduction.hpp"

namespace biorx {

/// One-sided raw periodogram on the interior bins k = 1..N/2-1.
struct Periodogram {
  int N = 0;
  double dt = 0.0;
  std::vector<double> f;  // Hz
  std::vector<double> Y;  // A^2/Hz

  std::size_t size() const { return Y.size(); }
};

/// Mean-removed periodogram Y_k = (2 dt / N) |X_k|^2. Throws std::domain_error
/// for odd N or N < 4.
Periodogram periodogram(std::span<const double> x, double dt);

/// f_k = k / (N dt), k = 1..N/2-1.
std::vector<double> frequency_grid(int N, double dt);

/// Binding term of the threshold-side model that ignores interference.
enum class BindingShape {
  kPrinted,     // 1 / (2 pi f + 1/tau_m)
  kLorentzian,  // tau_m / (1 + (2 pi f tau_m)^2)
};

struct PsdModelParams {
  ConcentrationPair lambda;
  LigandKinetics m;
  LigandKinetics i{4e-17, 8.0};
  ReceiverSpec receiver;
  double T = 300.0;
};

/// Precomputes the transduction chain once so the PSD can be evaluated for
/// many (f, lambda) pairs. All PSDs are one-sided, in A^2/Hz.
class SpectralModel {
 public:
  SpectralModel(const LigandKinetics& m, const LigandKinetics& i, const ReceiverSpec& receiver, double T,
                BindingShape shape = BindingShape::kPrinted);
  explicit SpectralModel(const PsdModelParams& p, BindingShape shape = BindingShape::kPrinted);

  double binding(double f, const ConcentrationPair& lambda) const;
  /// binding() over a frequency grid; out.size() must equal f.size().
  void binding(std::span<const double> f, const ConcentrationPair& lambda, std::span<double> out) const;
  void total(std::span<const double> f, const ConcentrationPair& lambda, std::span<double> out) const;
  void no_interference(std::span<const double> f, double c_m, std::span<double> out) const;
  double flicker(double f) const { return flicker_psd(f, receiver_); }
  double total(double f, const ConcentrationPair& lambda) const;
  double no_interference(double f, double c_m) const;

  /// q_eff g / C_G: current per elementary charge on a bound ligand.
  double charge_gain() const { return charge_gain_; }
  /// zeta = q_eff N_e g / C_G.
  double zeta() const { return charge_gain_ * receiver_.N_e; }

  const LigandKinetics& m() const { return m_; }
  const LigandKinetics& i() const { return i_; }
  const ReceiverSpec& receiver() const { return receiver_; }
  BindingShape shape() const { return shape_; }

 private:
  LigandKinetics m_;
  LigandKinetics i_;
  ReceiverSpec receiver_;
  double charge_gain_;
  BindingShape shape_;
};

double binding_psd(double f, const PsdModelParams& p);
double total_psd(double f, const PsdModelParams& p);
double no_interference_psd(double f, double c_m, const PsdModelParams& p,
                           BindingShape shape = BindingShape::kPrinted);

/// Corner frequencies of the two-species binding spectrum (Hz). f_ch_m is the
/// '+' root, f_ch_i the '-' root.
struct CharacteristicFrequencies {
  double f_ch_m = 0.0;
  double f_ch_i = 0.0;
};

CharacteristicFrequencies characteristic_frequencies(const ConcentrationPair& lambda,
                                                     const LigandKinetics& m, const LigandKinetics& i);

}  // namespace biorx
