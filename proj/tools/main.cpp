// biorx: sweeps, PSD illustrations and config validation.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "biorx/report.hpp"
#include "biorx/scenario.hpp"
#include "biorx/sweep.hpp"

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> threads;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON scenario; omitted keys take the defaults");
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--seed", c.seed, "master seed (overrides config)");
  cmd->add_option("--trials", c.trials, "Monte Carlo symbols per point, 0 for analytic only")->check(CLI::NonNegativeNumber);
  cmd->add_option("--threads", c.threads, "worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);
}

biorx::Scenario resolve(const Common& c) {
  biorx::Scenario s = c.config.empty() ? biorx::parse_scenario("{}") : biorx::load_scenario(c.config);
  if (c.seed) s.seed = *c.seed;
  if (c.trials) s.trials = *c.trials;
  if (c.threads) s.threads = *c.threads;
  s.validate();
  return s;
}

std::ofstream open(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  return out;
}

int run_sweep_cmd(const Common& c) {
  const biorx::Scenario s = resolve(c);
  const auto rows = biorx::run_sweep(s);
  auto csv = open(c.out, "sweep.csv");
  biorx::write_results(rows, csv);
  auto svg = open(c.out, "sweep.svg");
  biorx::write_svg(biorx::bep_plot(rows), svg);
  int failed = 0;
  for (const auto& r : rows) {
    if (!r.error.empty()) {
      std::cerr << to_string(r.variable) << "=" << r.value << ": " << r.error << "\n";
      ++failed;
    }
  }
  std::cout << "wrote " << (fs::path(c.out) / "sweep.csv").string() << " (" << rows.size() << " points)\n";
  return failed ? 3 : 0;
}

int run_psd_cmd(const Common& c) {
  const biorx::Scenario s = resolve(c);
  const auto fig = biorx::emit_psd_figure(s);
  auto csv = open(c.out, "psd.csv");
  biorx::write_psd_csv(fig, csv);
  auto svg = open(c.out, "psd.svg");
  biorx::write_svg(biorx::psd_plot(fig), svg);
  std::cout << "wrote " << (fs::path(c.out) / "psd.csv").string() << "\n";
  return 0;
}

int run_validate_cmd(const Common& c) {
  const biorx::Scenario s = resolve(c);
  std::cout << biorx::to_json(s);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frequency-domain detection for molecular receivers under interference"};
  app.require_subcommand(1);
  Common sweep_opts, psd_opts, validate_opts;
  auto* sweep = app.add_subcommand("sweep", "analytic and Monte Carlo BEP over the configured sweep");
  add_common(sweep, sweep_opts);
  auto* psd = app.add_subcommand("psd", "model PSD of both bits with characteristic frequencies");
  add_common(psd, psd_opts);
  auto* validate = app.add_subcommand("validate", "check a config and print it with defaults filled in");
  add_common(validate, validate_opts);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*sweep) return run_sweep_cmd(sweep_opts);
    if (*psd) return run_psd_cmd(psd_opts);
    if (*validate) return run_validate_cmd(validate_opts);
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
