#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "biorx/constants.hpp"
#include "biorx/rng.hpp"
#include "biorx/spectral.hpp"
#include "biorx/transduction.hpp"

using namespace biorx;

TEST_CASE("debye length") {
  const ReceiverSpec s;
  // sqrt(80 eps0 kB 300 / (2 N_A q^2 30)) by hand
  CHECK(debye_length(s, 300.0) == doctest::Approx(1.77853e-9).epsilon(1e-5));
  ReceiverSpec s4 = s;
  s4.c_ion *= 4.0;
  CHECK(debye_length(s4, 300.0) == doctest::Approx(debye_length(s, 300.0) / 2.0).epsilon(1e-14));
  CHECK(debye_length(s, 1200.0) == doctest::Approx(2.0 * debye_length(s, 300.0)).epsilon(1e-14));
}

TEST_CASE("effective charge") {
  ReceiverSpec s;
  const double ld = debye_length(s, 300.0);
  CHECK(effective_charge(s, ld) / PhysicalConstants::q == doctest::Approx(0.324806).epsilon(1e-5));
  s.r = 0.0;
  CHECK(effective_charge(s, ld) == PhysicalConstants::q);
  s.r = ld;
  CHECK(effective_charge(s, ld) == doctest::Approx(PhysicalConstants::q / std::exp(1.0)).epsilon(1e-15));
}

TEST_CASE("gate capacitance") {
  ReceiverSpec s;
  const double ld = debye_length(s, 300.0);
  // C_Gr = 1e-10 * 80 * 8.8541878128e-12 / 1.77853e-9 = 3.98272e-11, C_Q = 2e-12
  const double C_G = gate_capacitance(s, ld);
  CHECK(C_G == doctest::Approx(1.90437e-12).epsilon(1e-5));
  CHECK(C_G < 2e-12);
  CHECK(C_G < 3.98272e-11);

  // equal series capacitors: pick c_q so that c_q A = A eps / ld
  ReceiverSpec e = s;
  e.c_q = e.eps_rel * PhysicalConstants::eps0 / ld;
  CHECK(gate_capacitance(e, ld) == doctest::Approx(e.c_q * e.A_gr / 2.0).epsilon(1e-14));

  CHECK(gate_capacitance(s, 1e-15) == doctest::Approx(s.c_q * s.A_gr).epsilon(1e-6));
}

TEST_CASE("gain") {
  const ReceiverSpec s;
  const double zeta = receptor_gain(s, 300.0);
  CHECK(zeta == doctest::Approx(1.56122e-11).epsilon(1e-5));
  const double ld = debye_length(s, 300.0);
  CHECK(gain(s, effective_charge(s, ld), gate_capacitance(s, ld)) == zeta);

  const SpectralModel model(LigandKinetics{4e-17, 2.0}, LigandKinetics{4e-17, 8.0}, s, 300.0);
  CHECK(model.zeta() == doctest::Approx(zeta).epsilon(1e-14));
  CHECK(0 * zeta == 0.0);
  CHECK(zeta * 2 * 37 == doctest::Approx(2 * (zeta * 37)).epsilon(1e-15));

  // Moments propagate linearly: binomial N_b scaled by zeta.
  Rng rng(5);
  std::binomial_distribution<int> binom(120, 0.4);
  const int n = 100000;
  std::vector<double> dI(n);
  for (auto& x : dI) x = zeta * binom(rng);
  const double m = std::accumulate(dI.begin(), dI.end(), 0.0) / n;
  double v = 0.0;
  for (double x : dI) v += (x - m) * (x - m);
  v /= n - 1;
  const double var_nb = 120 * 0.4 * 0.6;
  CHECK(std::abs(m - zeta * 48.0) < 4.0 * zeta * std::sqrt(var_nb / n));
  CHECK(v == doctest::Approx(zeta * zeta * var_nb).epsilon(4.0 * std::sqrt(2.0 / n)));
}

TEST_CASE("flicker psd") {
  ReceiverSpec s;
  CHECK(flicker_psd(1.0, s) == 1e-23);
  CHECK(flicker_psd(10.0, s) == doctest::Approx(1e-24).epsilon(1e-15));
  ReceiverSpec lo = s, hi = s;
  lo.beta = 0.8;
  hi.beta = 1.2;
  CHECK(flicker_psd(100.0, lo) / flicker_psd(100.0, hi) == doctest::Approx(std::pow(100.0, 0.4)).epsilon(1e-13));
  CHECK_THROWS_AS(flicker_psd(0.0, s), std::domain_error);
  CHECK_THROWS_AS(flicker_psd(-1.0, s), std::domain_error);
}

TEST_CASE("flicker variance") {
  using boost::math::quadrature::gauss_kronrod;
  for (double beta : {0.8, 1.0, 1.2}) {
    ReceiverSpec s;
    s.beta = beta;
    for (auto [fL, fH] : {std::pair{1.0, 100.0}, std::pair{1.0 / 3.5, 100.0}, std::pair{0.5, 7.0}}) {
      const double integral = gauss_kronrod<double, 61>::integrate(
          [&](double lf) { return std::exp(lf) * flicker_psd(std::exp(lf), s); }, std::log(fL), std::log(fH), 10,
          1e-13);
      CHECK(flicker_variance(fL, fH, s) == doctest::Approx(fL * flicker_psd(fL, s) + integral).epsilon(1e-10));
    }
  }
  const ReceiverSpec s;
  CHECK(flicker_variance(1.0, 100.0, s) == doctest::Approx(1e-23 * (1.0 + std::log(100.0))).epsilon(1e-14));
  CHECK(flicker_variance(2.5, 2.5, s) == doctest::Approx(2.5 * flicker_psd(2.5, s)).epsilon(1e-15));
  // default band of a 700-sample, 5 ms window: 1e-23 (1 + ln(100 * 3.5))
  CHECK(flicker_variance(1.0 / 3.5, 100.0, s) == doctest::Approx(1e-23 * (1.0 + std::log(350.0))).epsilon(1e-13));
}

TEST_CASE("flicker synthesis") {
  ReceiverSpec s;
  const int n = 700;
  const double dt = 0.005;

  ReceiverSpec silent = s;
  silent.S_f1Hz = 0.0;
  for (double x : synthesize_flicker(n, dt, silent, 1)) CHECK(x == 0.0);

  CHECK(synthesize_flicker(n, dt, s, 3) == synthesize_flicker(n, dt, s, 3));
  CHECK_THROWS_AS(synthesize_flicker(701, dt, s, 3), std::domain_error);

  const int traces = 500;
  std::vector<double> avg(n / 2 - 1, 0.0);
  int mean_ok = 0;
  for (int t = 0; t < traces; ++t) {
    const auto x = synthesize_flicker(n, dt, s, derive_seed(21, 0, t));
    const double m = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double var = 0.0;
    for (double v : x) var += (v - m) * (v - m);
    if (std::abs(m) < 4.0 * std::sqrt(var / (n - 1)) / std::sqrt(double(n))) ++mean_ok;

    const auto pg = periodogram(x, dt);
    for (std::size_t k = 0; k < pg.size(); ++k) avg[k] += pg.Y[k] / traces;

    // one-sided Parseval on the mean-removed series
    double area = 0.0;
    for (double y : pg.Y) area += y / (n * dt);
    if (t < 20) CHECK(area == doctest::Approx(var / n).epsilon(1e-6));
  }
  CHECK(mean_ok == traces);

  const auto f = frequency_grid(n, dt);
  int worst_bad = 0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (f[k] < 1.0 || f[k] > 50.0) continue;
    if (std::abs(avg[k] / flicker_psd(f[k], s) - 1.0) >= 0.10) ++worst_bad;
  }
  // sd of a 500-periodogram average is ~4.5%; 10% is beyond 2.2 sd.
  CHECK(worst_bad <= 8);
}

TEST_CASE("receiver validation") {
  ReceiverSpec s;
  CHECK_NOTHROW(s.validate());
  s.beta = 1.3;
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("beta"), std::invalid_argument);
  s = {};
  s.N_r = -1;
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("N_r"), std::invalid_argument);
  s = {};
  s.c_ion = 0.0;
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("c_ion"), std::invalid_argument);
}
