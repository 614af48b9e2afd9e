#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "biorx/detection.hpp"
#include "biorx/pipeline.hpp"
#include "biorx/quadrature.hpp"
#include "biorx/rng.hpp"

using namespace biorx;

namespace {

double log_density(const GaussianStats& s, double x) {
  return -0.5 * std::log(2 * M_PI * s.variance) - 0.5 * (x - s.mean) * (x - s.mean) / s.variance;
}

// 3 sigma binomial band around p for n trials.
bool within_binomial(int errors, int n, double p) {
  return std::abs(errors - n * p) <= 3.0 * std::sqrt(n * p * (1 - p)) + 1.0;
}

}  // namespace

TEST_CASE("ML threshold") {
  const auto mid = ml_threshold({1.0, 2.0}, {5.0, 2.0});
  CHECK(mid.value == 3.0);
  CHECK(mid.regime == ThresholdRegime::kEqualVariance);

  const auto fb = ml_threshold({0.0, 1.0}, {2.0, (1.0 + 1e-15) * (1.0 + 1e-15)});
  CHECK(fb.regime == ThresholdRegime::kEqualVariance);
  CHECK(fb.value == 1.0);

  // Density crossing between the means by bisection.
  const GaussianStats s0{1.0, 1.0}, s1{3.0, 4.0};
  double lo = s0.mean, hi = s1.mean;
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (lo + hi);
    (log_density(s0, m) > log_density(s1, m) ? lo : hi) = m;
  }
  const auto g = ml_threshold(s0, s1);
  CHECK(g.regime == ThresholdRegime::kGeneral);
  CHECK(g.value == doctest::Approx(lo).epsilon(1e-12));

  // Nearly equal variances stay close to the midpoint without cancellation.
  const auto near = ml_threshold({0.0, 1.0}, {2.0, 1.0 + 1e-9});
  CHECK(near.value == doctest::Approx(1.0).epsilon(1e-8));

  CHECK_THROWS_AS(ml_threshold({2.0, 1.0}, {2.0, 1.0}), std::domain_error);
  CHECK_THROWS_AS(ml_threshold({3.0, 1.0}, {2.0, 1.0}), std::domain_error);
}

TEST_CASE("threshold optimality") {
  Rng rng(2);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int draw = 0; draw < 500; ++draw) {
    const double m0 = u(rng), m1 = m0 + u(rng);
    const GaussianStats s0{m0, u(rng)}, s1{m1, u(rng)};
    const double g = ml_threshold(s0, s1).value;
    const double p = gaussian_bep(s0, s1, g);
    for (double k : {0.99, 0.995, 1.005, 1.01}) CHECK(gaussian_bep(s0, s1, g * k) >= p);
  }
}

TEST_CASE("BEP limits and monotonicity") {
  CHECK(gaussian_bep({1.0, 1.0}, {1.0, 1.0}, 1.0) == 0.5);
  CHECK(gaussian_bep({0.0, 1.0}, {1.0, 1.0}, 1e300) == 0.5);
  CHECK(gaussian_bep({0.0, 1.0}, {1.0, 1.0}, -1e300) == 0.5);
  double prev = 0.5;
  for (double d = 0.1; d < 20.0; d *= 1.3) {
    const GaussianStats s0{0.0, 1.0}, s1{d, 2.0};
    const double p = tdd_bep(s0, s1, ml_threshold(s0, s1));
    CHECK(p >= 0.0);
    CHECK(p <= 0.5);
    CHECK(p <= prev);
    prev = p;
  }
}

TEST_CASE("TDD decision rule") {
  const DecisionThreshold g{2.5e-9};
  CHECK(tdd_decide(2.5e-9, g) == 0);
  CHECK(tdd_decide(std::nextafter(2.5e-9, 1.0), g) == 1);
  CHECK(tdd_decide(1e-9, g) == 0);
  for (double shift : {-1e-9, 3e-10, 7.0}) {
    const DecisionThreshold h{g.value + shift};
    for (double x : {1e-9, 2.4e-9, 2.6e-9, 4e-9}) CHECK(tdd_decide(x + shift, h) == tdd_decide(x, g));
  }
}

TEST_CASE("TDD output statistics") {
  OperatingPoint op;
  const auto model = op.model();
  const FlickerBand band = op.tdd_band();
  const double c = op.c_m1();
  const double flick = flicker_variance(band.f_L, band.f_H, model.receiver());

  const auto plain = tdd_output_stats(c, std::nullopt, model, band);
  const double p = c / (op.m.K_D() + c);
  CHECK(plain.mean == doctest::Approx(model.zeta() * 120 * p).epsilon(1e-14));
  CHECK(plain.variance == doctest::Approx(model.zeta() * model.zeta() * 120 * p * (1 - p) + flick).epsilon(1e-14));

  const double mu = 6e17;
  const auto point = tdd_output_stats(c, InterfererModel{mu, 0.0}, model, band);
  const double pb = bound_probability(c, mu, op.m, op.i);
  CHECK(point.mean == doctest::Approx(model.zeta() * 120 * pb).epsilon(1e-12));
  CHECK(point.variance == doctest::Approx(model.zeta() * model.zeta() * 120 * pb * (1 - pb) + flick).epsilon(1e-12));

  const auto vanishing = tdd_output_stats(c, InterfererModel{1e6, 1e5}, model, band);
  CHECK(vanishing.mean == doctest::Approx(plain.mean).epsilon(1e-6));
  CHECK(vanishing.variance == doctest::Approx(plain.variance).epsilon(1e-6));

  // Marginal moments of N_b by direct sampling of c_i.
  const auto interferer = *op.interferer();
  const auto stats = tdd_output_stats(c, interferer, model, band);
  Rng rng(3);
  const int draws = 1000000;
  double s1 = 0.0, s2 = 0.0, sv = 0.0;
  for (int k = 0; k < draws; ++k) {
    const double q = bound_probability(c, draw_interferer(interferer, rng), op.m, op.i);
    s1 += q;
    s2 += q * q;
    sv += q * (1 - q);
  }
  const double Ep = s1 / draws, Varp = s2 / draws - Ep * Ep;
  const double mc_mean = model.zeta() * 120 * Ep;
  const double mc_var = model.zeta() * model.zeta() * (120 * sv / draws + 120.0 * 120.0 * Varp) + flick;
  CHECK(stats.mean == doctest::Approx(mc_mean).epsilon(0.01));
  CHECK(stats.variance == doctest::Approx(mc_var).epsilon(0.01));
}

TEST_CASE("Gauss-Hermite rule") {
  const auto r = gauss_hermite(64);
  double w = 0.0, x2 = 0.0, x4 = 0.0;
  for (std::size_t k = 0; k < r.nodes.size(); ++k) {
    w += r.weights[k];
    x2 += r.weights[k] * r.nodes[k] * r.nodes[k];
    x4 += r.weights[k] * std::pow(r.nodes[k], 4);
  }
  CHECK(w == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
  CHECK(x2 == doctest::Approx(std::sqrt(M_PI) / 2).epsilon(1e-13));
  CHECK(x4 == doctest::Approx(3 * std::sqrt(M_PI) / 4).epsilon(1e-12));
  const InterfererModel ln{6e17, 6e16};
  CHECK(lognormal_expectation(ln, [](double c) { return c; }, r) == doctest::Approx(6e17).epsilon(1e-13));
  CHECK(lognormal_expectation(ln, [](double c) { return c * c; }, r) ==
        doctest::Approx(6e17 * 6e17 + 6e16 * 6e16).epsilon(1e-12));
}

TEST_CASE("FDD threshold") {
  OperatingPoint op;
  const auto model = op.model();
  const double c0 = op.c_m0(), c1 = op.c_m1();
  const auto g = fdd_threshold(c0, c1, model, op.N, op.dt);
  CHECK(g.value > c0);
  CHECK(g.value < c1);
  CHECK(g.value == doctest::Approx(2.6566e17).epsilon(1e-4));

  const double v0 = no_interference_variance(c0, model, op.N, op.dt);
  const double v1 = no_interference_variance(c1, model, op.N, op.dt);
  const double w0 = no_interference_variance(c0, model, 4 * op.N, op.dt);
  const double w1 = no_interference_variance(c1, model, 4 * op.N, op.dt);
  CHECK(v0 / w0 == doctest::Approx(4.0).epsilon(0.1));
  CHECK(v1 / w1 == doctest::Approx(4.0).epsilon(0.1));
  const auto g4 = fdd_threshold(c0, c1, model, 4 * op.N, op.dt);
  // With both variances shrinking by a common factor the ML root tends to
  // the sd-weighted point (sd1 c0 + sd0 c1) / (sd0 + sd1).
  const double sd0 = std::sqrt(w0), sd1 = std::sqrt(w1);
  const double limit = (sd1 * c0 + sd0 * c1) / (sd0 + sd1);
  CHECK(std::abs(g4.value - limit) < std::abs(g.value - limit));
  const double midpoint = 0.5 * (c0 + c1);

  CHECK(ml_threshold({c0, v1}, {c1, v1}).value == doctest::Approx(midpoint).epsilon(1e-15));
  CHECK_THROWS_AS(fdd_threshold(c1, c0, model, op.N, op.dt), std::domain_error);
}

TEST_CASE("FDD decision rule") {
  WhittleFit fit;
  fit.lambda_hat = {3e17, 1e17};
  fit.converged = false;
  const auto tie = fdd_decide(fit, {3e17});
  CHECK(tie.bit == 0);
  CHECK_FALSE(tie.fit_converged);
  CHECK(fdd_decide(fit, {2.9e17}).bit == 1);

  OperatingPoint op;
  const auto model = op.model();
  const ConcentrationPair l{op.c_m1(), op.mu_ci()};
  Periodogram pg;
  pg.N = op.N;
  pg.dt = op.dt;
  pg.f = frequency_grid(op.N, op.dt);
  pg.Y.resize(pg.f.size());
  model.total(pg.f, l, pg.Y);
  const auto a = analyze(op);
  const auto exact = fdd_decide(ml_estimate(pg, model, ModelKind::kTwoSpecies), a.fdd.threshold);
  CHECK(exact.bit == 1);
  CHECK(exact.fit_converged);
}

TEST_CASE("FDD error probability") {
  OperatingPoint op;
  const auto model = op.model();
  const auto interferer = *op.interferer();
  CHECK(fdd_bep(op.c_m1(), op.c_m1(), interferer, model, op.N, op.dt) == 0.5);

  const auto a = analyze(op);
  CHECK(a.fdd.var_hat_1 == doctest::Approx(7.28392324398e33).epsilon(1e-6));
  CHECK(a.fdd.var_hat_0 == doctest::Approx(1.17289944132e33).epsilon(1e-6));
  CHECK(a.fdd.bep == doctest::Approx(gaussian_bep({a.c_m0, a.fdd.var_hat_0}, {a.c_m1, a.fdd.var_hat_1},
                                                  a.fdd.threshold.value)));

  const double none = fdd_bep(op.c_m0(), op.c_m1(), InterfererModel{0.0, 0.0}, model, op.N, op.dt);
  const double tiny = fdd_bep(op.c_m0(), op.c_m1(), InterfererModel{1e6, 1e5}, model, op.N, op.dt);
  CHECK(tiny == doctest::Approx(none).epsilon(1e-6));

  double prev = 0.5;
  for (double c1 : {1.5e17, 2.5e17, 4e17, 6e17, 1e18}) {
    const double p = fdd_bep(op.c_m0(), c1, interferer, model, op.N, op.dt);
    CHECK(p >= 0.0);
    CHECK(p <= prev);
    prev = p;
  }
}

TEST_CASE("FDD outperforms TDD at the default point") {
  OperatingPoint op;
  for (auto [n0, n1] : {std::pair{1e3, 5e3}, std::pair{2e4, 5e4}}) {
    op.N_m0 = n0;
    op.N_m1 = n1;
    for (double gamma : {0.5, 1.0, 2.0}) {
      op.gamma = gamma;
      const auto a = analyze(op);
      CHECK(a.fdd.bep < a.tdd_bep);
    }
  }
  op = OperatingPoint{};
  const auto a = analyze(op);
  CHECK(a.tdd_bep == doctest::Approx(0.2704).epsilon(1e-3));
  CHECK(a.fdd.bep == doctest::Approx(2.7136e-5).epsilon(1e-3));
}

TEST_CASE("Gaussian-surrogate Monte Carlo agrees with the closed forms") {
  OperatingPoint op;
  op.gamma = 2.0;
  op.N_m1 = 2e3;
  const auto a = analyze(op);
  CHECK(a.fdd.bep > 1e-3);
  const int n = 10000;
  Rng rng(9);
  int tdd_err = 0, fdd_err = 0;
  for (int t = 0; t < n; ++t) {
    const int bit = t & 1;
    const GaussianStats& s = bit ? a.tdd1 : a.tdd0;
    std::normal_distribution<double> current(s.mean, std::sqrt(s.variance));
    tdd_err += tdd_decide(current(rng), a.gamma_td) != bit;
    std::normal_distribution<double> estimate(bit ? a.c_m1 : a.c_m0, std::sqrt(bit ? a.fdd.var_hat_1 : a.fdd.var_hat_0));
    WhittleFit fit;
    fit.lambda_hat = {estimate(rng), 0.0};
    fdd_err += fdd_decide(fit, a.fdd.threshold).bit != bit;
  }
  MESSAGE("TDD " << tdd_err / double(n) << " vs " << a.tdd_bep << ", FDD " << fdd_err / double(n) << " vs "
                 << a.fdd.bep);
  CHECK(within_binomial(tdd_err, n, a.tdd_bep));
  CHECK(within_binomial(fdd_err, n, a.fdd.bep));
}
