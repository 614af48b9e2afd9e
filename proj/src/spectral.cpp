#include "biorx/spectral.hpp"

#include <cassert>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

#include "biorx/constants.hpp"
#include "biorx/fft.hpp"

namespace biorx {

Periodogram periodogram(std::span<const double> x, double dt) {
  const int n = static_cast<int>(x.size());
  if (n < 4 || n % 2 != 0) throw std::domain_error("periodogram: length must be even and >= 4");
  if (!(dt > 0.0)) throw std::domain_error("periodogram: dt must be positive");

  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  std::vector<double> centred(x.begin(), x.end());
  for (double& v : centred) v -= mean;

  const auto X = real_dft(centred);
  Periodogram pg;
  pg.N = n;
  pg.dt = dt;
  pg.f = frequency_grid(n, dt);
  pg.Y.resize(n / 2 - 1);
  for (int k = 1; k < n / 2; ++k) pg.Y[k - 1] = 2.0 * dt / n * std::norm(X[k]);
  return pg;
}

std::vector<double> frequency_grid(int N, double dt) {
  std::vector<double> f(N / 2 - 1);
  for (int k = 1; k < N / 2; ++k) f[k - 1] = k / (N * dt);
  return f;
}

SpectralModel::SpectralModel(const LigandKinetics& m, const LigandKinetics& i, const ReceiverSpec& receiver,
                             double T, BindingShape shape)
    : m_(m), i_(i), receiver_(receiver), shape_(shape) {
  const double debye = debye_length(receiver, T);
  charge_gain_ = effective_charge(receiver, debye) * receiver.g / gate_capacitance(receiver, debye);
}

SpectralModel::SpectralModel(const PsdModelParams& p, BindingShape shape)
    : SpectralModel(p.m, p.i, p.receiver, p.T, shape) {}

double SpectralModel::binding(double f, const ConcentrationPair& lambda) const {
  double out = 0.0;
  binding(std::span<const double>(&f, 1), lambda, std::span<double>(&out, 1));
  return out;
}

void SpectralModel::binding(std::span<const double> f, const ConcentrationPair& lambda,
                            std::span<double> out) const {
  assert(f.size() == out.size());
  const Eigen::Matrix2d omega = omega_matrix(lambda, m_, i_);
  const Eigen::Matrix2d gamma = gamma_matrix(equilibrium_probabilities(lambda, m_, i_));
  const Eigen::Vector3d z(receiver_.N_e, receiver_.N_e, 0.0);
  const Eigen::Vector2d w = reduction_matrix().transpose() * z;
  const Eigen::RowVector2d wg = w.transpose() * gamma;
  const double pre = 4.0 * receiver_.N_r * charge_gain_ * charge_gain_;

  // Closed-form inverse of M = j w I - Omega in real arithmetic. Eigenvalues of
  // Omega have negative real part, so det(M) never vanishes.
  const double o00 = omega(0, 0), o01 = omega(0, 1), o10 = omega(1, 0), o11 = omega(1, 1);
  const double det_omega = o00 * o11 - o01 * o10;
  const double trace = o00 + o11;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double wk = 2.0 * kPi * f[k];
    // det(M) = (det_omega - w^2) - j w trace
    const double dr = det_omega - wk * wk;
    const double di = -wk * trace;
    const double n2 = dr * dr + di * di;
    // Re{adj(M) / det(M)} with adj entries (jw - o11, o01; o10, jw - o00).
    const double re_diag0 = (-o11 * dr + wk * di) / n2;
    const double re_diag1 = (-o00 * dr + wk * di) / n2;
    const double re_01 = o01 * dr / n2;
    const double re_10 = o10 * dr / n2;
    // quad = wg * R^T * w with R = [[re_diag0, re_01], [re_10, re_diag1]]
    const double quad = wg(0) * (re_diag0 * w(0) + re_10 * w(1)) + wg(1) * (re_01 * w(0) + re_diag1 * w(1));
    out[k] = std::max(0.0, pre * quad);
  }
}

double SpectralModel::total(double f, const ConcentrationPair& lambda) const {
  if (!(f > 0.0)) throw std::domain_error("total_psd: frequency must be positive");
  return binding(f, lambda) + flicker(f);
}

void SpectralModel::total(std::span<const double> f, const ConcentrationPair& lambda,
                          std::span<double> out) const {
  binding(f, lambda, out);
  for (std::size_t k = 0; k < f.size(); ++k) out[k] += flicker(f[k]);
}

double SpectralModel::no_interference(double f, double c_m) const {
  double out = 0.0;
  no_interference(std::span<const double>(&f, 1), c_m, std::span<double>(&out, 1));
  return out;
}

void SpectralModel::no_interference(std::span<const double> f, double c_m, std::span<double> out) const {
  assert(f.size() == out.size());
  const double tau = 1.0 / (c_m * m_.k_plus + m_.k_minus);
  const double p_b = c_m / (m_.K_D() + c_m);
  const double z = zeta();
  const double pre = 4.0 * receiver_.N_r * z * z * p_b * (1.0 - p_b);
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double w = 2.0 * kPi * f[k];
    const double shape =
        shape_ == BindingShape::kPrinted ? 1.0 / (w + 1.0 / tau) : tau / (1.0 + w * w * tau * tau);
    out[k] = pre * shape + flicker(f[k]);
  }
}

double binding_psd(double f, const PsdModelParams& p) { return SpectralModel(p).binding(f, p.lambda); }

double total_psd(double f, const PsdModelParams& p) { return SpectralModel(p).total(f, p.lambda); }

double no_interference_psd(double f, double c_m, const PsdModelParams& p, BindingShape shape) {
  return SpectralModel(p, shape).no_interference(f, c_m);
}

CharacteristicFrequencies characteristic_frequencies(const ConcentrationPair& lambda,
                                                     const LigandKinetics& m, const LigandKinetics& i) {
  const double am = m.k_plus * lambda.c_m;
  const double ai = i.k_plus * lambda.c_i;
  const double rate_m = am + m.k_minus;  // 1/tau_m
  const double rate_i = ai + i.k_minus;  // 1/tau_i
  const double diff = rate_m - rate_i;
  const double root = std::sqrt(diff * diff + 4.0 * am * ai);
  const double plus = rate_m + rate_i + root;
  // The '-' root via the product of roots, det(Omega) = rate_m rate_i - am ai
  // expanded term by term, avoids cancellation when one root is much smaller than the other.
  const double det = am * i.k_minus + ai * m.k_minus + m.k_minus * i.k_minus;
  const double minus = 4.0 * det / plus;
  return {plus / (4.0 * kPi), minus / (4.0 * kPi)};
}

}  // namespace biorx
