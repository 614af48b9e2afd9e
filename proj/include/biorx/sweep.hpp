#pragma once

#include <optional>
#include <string>
#include <vector>

#include "biorx/scenario.hpp"

namespace biorx {

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

/// Wilson score interval for k successes in n trials at normal quantile z.
Interval wilson_interval(long long k, long long n, double z = 1.959963984540054);

struct MonteCarloBep {
  long long trials = 0;  // symbols that produced a decision
  long long errors = 0;
  double bep = 0.0;
  Interval ci;
};

struct ResultRow {
  SweepVariable variable = SweepVariable::kGamma;
  double value = 0.0;
  bool ok = false;  // analytic part succeeded
  double tdd_bep = 0.5;
  double fdd_bep = 0.5;
  std::optional<MonteCarloBep> tdd_mc;
  std::optional<MonteCarloBep> fdd_mc;
  long long fdd_nonconverged = 0;
  long long fdd_failed = 0;
  double c_m0 = 0.0, c_m1 = 0.0, mu_ci = 0.0;
  double gamma_td = 0.0, gamma_fd = 0.0;
  double var_hat_0 = 0.0, var_hat_1 = 0.0;
  double f_ch_m0 = 0.0, f_ch_i0 = 0.0, f_ch_m1 = 0.0, f_ch_i1 = 0.0;
  std::string error;
};

/// Analytic and (if trials > 0) Monte Carlo error probabilities for each
/// sweep value. Trial t of point p uses bit t & 1 and seeds derived from
/// (seed, p, t); results do not depend on the thread count.
std::vector<ResultRow> run_sweep(const Scenario& scn);

}  // namespace biorx
