#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "biorx/report.hpp"
#include "biorx/scenario.hpp"
#include "biorx/sweep.hpp"

using namespace biorx;

namespace {

std::string csv_of(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  write_results(rows, out);
  return out.str();
}

int count(const std::string& s, const std::string& what) {
  int n = 0;
  for (auto p = s.find(what); p != std::string::npos; p = s.find(what, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("empty config gives the default parameter table") {
  const Scenario s = parse_scenario("{}");
  const OperatingPoint d;
  CHECK(s.point.channel.T == 300.0);
  CHECK(s.point.channel.u == d.channel.u);
  CHECK(s.point.receiver.N_r == 120);
  CHECK(s.point.receiver.S_f1Hz == 1e-23);
  CHECK(s.point.receiver.A_gr == doctest::Approx(s.point.receiver.l_gr * s.point.receiver.l_gr));
  CHECK(s.point.m.k_plus == 4e-17);
  CHECK(s.point.m.k_minus == 2.0);
  CHECK(s.point.i.k_minus == 8.0);
  CHECK(s.point.N_m0 == 1e3);
  CHECK(s.point.N_m1 == 5e3);
  CHECK(s.point.N == 700);
  CHECK(s.point.dt == 0.005);
  CHECK(s.point.mu_sigma_ratio == 10.0);
  CHECK(s.trials == 2000);
  CHECK(s.sweep.variable == SweepVariable::kGamma);

  Scenario g = parse_scenario(R"({"l_gr": 2e-5})");
  CHECK(g.point.receiver.A_gr == doctest::Approx(4e-10));
  g = parse_scenario(R"({"l_gr": 2e-5, "A_gr": 1e-10})");
  CHECK(g.point.receiver.A_gr == 1e-10);
}

TEST_CASE("config validation") {
  CHECK_THROWS_WITH_AS(parse_scenario(R"({"N_r": -5})"), doctest::Contains("N_r"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_scenario(R"({"N_rr": 5})"), doctest::Contains("N_rr"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_scenario(R"({"sweep": {"variable": "gamma", "step": 1}})"), doctest::Contains("step"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_scenario(R"({"sweep": {"variable": "temperature"}})"), doctest::Contains("variable"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_scenario(R"({"dt": "fast"})"), doctest::Contains("dt"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_scenario(R"({"N": 701})"), doctest::Contains("N"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_scenario(R"({"beta": 2.0})"), doctest::Contains("beta"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_scenario(R"({"sweep": {"variable": "N", "values": [700.5]}})"), doctest::Contains("N"),
                       std::invalid_argument);
  CHECK_THROWS_AS(parse_scenario("[1, 2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_scenario(R"({"trials": -1})"), std::invalid_argument);
}

TEST_CASE("scenario round trip") {
  Scenario s = parse_scenario(R"({"gamma": 2, "N_m": [2e4, 5e4], "threshold_shape": "lorentzian", "seed": 99,
                                  "trials": 6, "sweep": {"variable": "eta", "values": [2, 8]}})");
  const std::string text = to_json(s);
  const Scenario r = parse_scenario(text);
  CHECK(to_json(r) == text);
  CHECK(r.seed == 99);
  CHECK(r.point.threshold_shape == BindingShape::kLorentzian);
  CHECK(csv_of(run_sweep(s)) == csv_of(run_sweep(r)));
}

TEST_CASE("analytic-only sweep") {
  Scenario s;
  s.trials = 0;
  const auto rows = run_sweep(s);
  REQUIRE(rows.size() == 5);
  for (const auto& r : rows) {
    CHECK(r.ok);
    CHECK_FALSE(r.tdd_mc.has_value());
    CHECK_FALSE(r.fdd_mc.has_value());
    CHECK(r.tdd_bep >= 0.0);
    CHECK(r.tdd_bep <= 0.5);
    CHECK(r.fdd_bep >= 0.0);
    CHECK(r.fdd_bep <= 0.5);
  }
  CHECK(rows[1].tdd_bep == doctest::Approx(0.2704).epsilon(1e-3));
  CHECK(rows[1].fdd_bep == doctest::Approx(2.7136e-5).epsilon(1e-3));
}

TEST_CASE("saturation sweep over gamma") {
  Scenario s;
  s.trials = 0;
  s.point.N_m0 = 2e4;
  s.point.N_m1 = 5e4;
  const auto rows = run_sweep(s);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k].fdd_bep < rows[k].tdd_bep);
    if (k) CHECK(rows[k].tdd_bep >= rows[k - 1].tdd_bep);
  }
}

TEST_CASE("sweep over N") {
  Scenario s = parse_scenario(R"({"trials": 0, "sweep": {"variable": "N", "values": [350, 700, 1400]}})");
  const auto rows = run_sweep(s);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].fdd_bep < rows[0].fdd_bep);
  CHECK(rows[2].fdd_bep < rows[1].fdd_bep);
  CHECK(rows[1].tdd_bep == rows[0].tdd_bep);
  CHECK(rows[2].tdd_bep == rows[0].tdd_bep);
}

TEST_CASE("eta and dt sweeps are expressible") {
  const Scenario e = parse_scenario(R"({"trials": 0, "sweep": {"variable": "eta", "values": [0.5, 4, 16]}})");
  for (double eta : e.sweep.values) {
    const OperatingPoint op = apply_sweep(e, eta);
    CHECK(op.i.K_D() / op.m.K_D() == doctest::Approx(eta).epsilon(1e-14));
    CHECK(op.i.k_plus == e.point.i.k_plus);
  }
  CHECK(run_sweep(e).size() == 3);

  const Scenario d = parse_scenario(R"({"trials": 0, "sweep": {"variable": "dt", "values": [0.0025, 0.01]}})");
  CHECK(apply_sweep(d, 0.01).dt == 0.01);
  const auto rows = run_sweep(d);
  CHECK(rows.size() == 2);
  for (const auto& r : rows) CHECK(r.ok);
}

TEST_CASE("Monte Carlo results do not depend on the thread count") {
  Scenario s = parse_scenario(R"({"trials": 24, "seed": 5, "sweep": {"variable": "gamma", "values": [1, 3]}})");
  s.threads = 1;
  const auto one = run_sweep(s);
  s.threads = 3;
  const auto three = run_sweep(s);
  CHECK(csv_of(one) == csv_of(three));
  for (const auto& r : one) {
    REQUIRE(r.tdd_mc.has_value());
    REQUIRE(r.fdd_mc.has_value());
    CHECK(r.tdd_mc->trials == 24);
    CHECK(r.fdd_mc->trials + r.fdd_failed == 24);
    CHECK(r.tdd_mc->ci.low <= r.tdd_mc->bep);
    CHECK(r.tdd_mc->bep <= r.tdd_mc->ci.high);
  }
  s.seed = 6;
  CHECK(csv_of(run_sweep(s)) != csv_of(one));
}

TEST_CASE("Wilson interval") {
  const auto w = wilson_interval(5, 100);
  CHECK(w.low == doctest::Approx(0.02154).epsilon(1e-3));
  CHECK(w.high == doctest::Approx(0.11175).epsilon(1e-3));
  CHECK(wilson_interval(0, 50).low == 0.0);
  CHECK(wilson_interval(50, 50).high == 1.0);
}

TEST_CASE("CSV output") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  CHECK(csv_field("") == "");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(2.7136e-5) == "2.7136e-05");

  ResultRow r;
  r.value = 1.5;
  r.error = "fit failed, see \"log\"";
  const std::string csv = csv_of({r});
  CHECK(csv.find("\"fit failed, see \"\"log\"\"\"") != std::string::npos);
  CHECK(csv.find("[1/m^3]") != std::string::npos);
  CHECK(csv.find("[Hz]") != std::string::npos);
  CHECK(count(csv, "\r\n") == 2);
}

TEST_CASE("PSD figure") {
  const Scenario s;
  const auto fig = emit_psd_figure(s);
  REQUIRE(fig.f.size() == 200);
  CHECK(fig.markers.size() == 4);
  for (std::size_t k = 0; k < fig.f.size(); ++k) {
    CHECK(std::isfinite(fig.S0[k]));
    CHECK(std::isfinite(fig.S1[k]));
    CHECK(fig.S0[k] > 0.0);
  }
  for (const auto& m : fig.markers) CHECK(std::isfinite(m.f));
  CHECK(fig.f.front() == doctest::Approx(1.0 / 3.5));
  CHECK(fig.f.back() == doctest::Approx(100.0));

  std::ostringstream csv;
  write_psd_csv(fig, csv);
  CHECK(count(csv.str(), "\r\n") == 1 + 200 + 4);
  CHECK(count(csv.str(), "marker,f_ch_") == 4);

  std::ostringstream svg;
  write_svg(psd_plot(fig), svg);
  CHECK(svg.str().rfind("<svg", 0) == 0);
  CHECK(svg.str().find("</svg>") != std::string::npos);
  CHECK(count(svg.str(), "<polyline") == 2);
}

TEST_CASE("PSD figure without interference") {
  Scenario s;
  s.point.gamma = 0.0;
  s.point.receiver.S_f1Hz = 0.0;
  const auto fig = emit_psd_figure(s, 400, 1e-3, 1e3);
  for (const auto* S : {&fig.S0, &fig.S1}) {
    // Local minima of the log-log curvature.
    int corners = 0;
    std::vector<double> curv;
    for (std::size_t k = 1; k + 1 < fig.f.size(); ++k) {
      const double h = std::log(fig.f[k + 1] / fig.f[k]);
      curv.push_back((std::log((*S)[k + 1]) - 2 * std::log((*S)[k]) + std::log((*S)[k - 1])) / (h * h));
    }
    for (std::size_t k = 1; k + 1 < curv.size(); ++k)
      corners += curv[k] < curv[k - 1] && curv[k] <= curv[k + 1] && curv[k] < -0.05;
    CHECK(corners == 1);
  }
  // Low-frequency ratio equals the ratio of the zero-frequency plateaus.
  const OperatingPoint& op = s.point;
  const double r0 = op.c_m0() * op.m.k_plus + op.m.k_minus, r1 = op.c_m1() * op.m.k_plus + op.m.k_minus;
  const double p0 = op.c_m0() / (op.m.K_D() + op.c_m0()), p1 = op.c_m1() / (op.m.K_D() + op.c_m1());
  const double plateau_ratio = (p1 * (1 - p1) / r1) / (p0 * (1 - p0) / r0);
  CHECK(fig.S1.front() / fig.S0.front() == doctest::Approx(plateau_ratio).epsilon(1e-5));
}

TEST_CASE("sweep plot") {
  Scenario s;
  s.trials = 0;
  std::ostringstream svg;
  write_svg(bep_plot(run_sweep(s)), svg);
  CHECK(count(svg.str(), "<polyline") >= 2);
}
