#include "biorx/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include "biorx/rng.hpp"

namespace biorx {

Interval wilson_interval(long long k, long long n, double z) {
  if (n <= 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * nn)) / (1.0 + z2 / nn);
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / (1.0 + z2 / nn);
  return {k == 0 ? 0.0 : std::max(0.0, centre - half), k == n ? 1.0 : std::min(1.0, centre + half)};
}

namespace {

constexpr int kChunk = 50;

struct ChunkResult {
  long long tdd_errors = 0;
  long long fdd_trials = 0, fdd_errors = 0, fdd_nonconverged = 0, fdd_failed = 0;
  std::string first_failure;
};

MonteCarloBep summarize(long long errors, long long trials) {
  MonteCarloBep mc;
  mc.trials = trials;
  mc.errors = errors;
  mc.bep = trials > 0 ? static_cast<double>(errors) / static_cast<double>(trials) : 0.0;
  mc.ci = wilson_interval(errors, trials);
  return mc;
}

void run_parallel(std::size_t tasks, int threads, const std::function<void(std::size_t)>& body) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(tasks, threads > 0 ? threads : hw);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < tasks;) {
      try {
        body(t);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::vector<ResultRow> run_sweep(const Scenario& scn) {
  scn.validate();
  const std::size_t points = scn.sweep.values.size();
  std::vector<ResultRow> rows(points);
  std::vector<OperatingPoint> ops(points);
  std::vector<PointAnalysis> analyses(points);

  run_parallel(points, scn.threads, [&](std::size_t p) {
    ResultRow& row = rows[p];
    row.variable = scn.sweep.variable;
    row.value = scn.sweep.values[p];
    try {
      ops[p] = apply_sweep(scn, row.value);
      const PointAnalysis a = analyze(ops[p]);
      analyses[p] = a;
      row.tdd_bep = a.tdd_bep;
      row.fdd_bep = a.fdd.bep;
      row.c_m0 = a.c_m0;
      row.c_m1 = a.c_m1;
      row.mu_ci = a.mu_ci;
      row.gamma_td = a.gamma_td.value;
      row.gamma_fd = a.fdd.threshold.value;
      row.var_hat_0 = a.fdd.var_hat_0;
      row.var_hat_1 = a.fdd.var_hat_1;
      row.f_ch_m0 = a.fch0.f_ch_m;
      row.f_ch_i0 = a.fch0.f_ch_i;
      row.f_ch_m1 = a.fch1.f_ch_m;
      row.f_ch_i1 = a.fch1.f_ch_i;
      row.ok = true;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });

  if (scn.trials == 0) return rows;

  const std::size_t chunks = (static_cast<std::size_t>(scn.trials) + kChunk - 1) / kChunk;
  std::vector<ChunkResult> results(points * chunks);
  run_parallel(points * chunks, scn.threads, [&](std::size_t task) {
    const std::size_t p = task / chunks;
    if (!rows[p].ok) return;
    const std::size_t c = task % chunks;
    ChunkResult& out = results[task];
    const long long begin = static_cast<long long>(c) * kChunk;
    const long long end = std::min<long long>(begin + kChunk, scn.trials);
    for (long long t = begin; t < end; ++t) {
      const int bit = static_cast<int>(t & 1);
      const auto trial = static_cast<std::uint64_t>(t);
      out.tdd_errors += tdd_trial(ops[p], analyses[p], bit, derive_seed(scn.seed, p, 2 * trial)) != bit;
      try {
        const FddTrial r = fdd_trial(ops[p], analyses[p], bit, derive_seed(scn.seed, p, 2 * trial + 1));
        ++out.fdd_trials;
        out.fdd_errors += r.decided != bit;
        out.fdd_nonconverged += !r.converged;
      } catch (const std::exception& e) {
        ++out.fdd_failed;
        if (out.first_failure.empty()) out.first_failure = e.what();
      }
    }
  });

  for (std::size_t p = 0; p < points; ++p) {
    ResultRow& row = rows[p];
    if (!row.ok) continue;
    long long tdd_errors = 0, fdd_trials = 0, fdd_errors = 0;
    std::string failure;
    for (std::size_t c = 0; c < chunks; ++c) {
      const ChunkResult& r = results[p * chunks + c];
      tdd_errors += r.tdd_errors;
      fdd_trials += r.fdd_trials;
      fdd_errors += r.fdd_errors;
      row.fdd_nonconverged += r.fdd_nonconverged;
      row.fdd_failed += r.fdd_failed;
      if (failure.empty()) failure = r.first_failure;
    }
    row.tdd_mc = summarize(tdd_errors, scn.trials);
    row.fdd_mc = summarize(fdd_errors, fdd_trials);
    if (row.fdd_failed > 0)
      row.error = std::to_string(row.fdd_failed) + " FDD trials failed; first: " + failure;
  }
  return rows;
}

}  // namespace biorx
