#pragma once

// Whittle maximum-likelihood fitting of receptor concentrations to a periodogram.

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "biorx/spectral.hpp"

namespace biorx {

enum class ModelKind {
  kTwoSpecies,      // total PSD, parameters (c_m, c_i)
  kNoInterference,  // threshold-side model, parameter c_m
};

/// Writes S(f_k; params) for every f_k into `out`.
using PsdFunction =
    std::function<void(std::span<const double> f, std::span<const double> params, std::span<double> out)>;

PsdFunction make_psd_function(const SpectralModel& model, ModelKind kind);

std::size_t parameter_count(ModelKind kind);

/// l(lambda) = sum_k Y_k / S(f_k) + ln S(f_k). Throws std::domain_error if the
/// model PSD is not positive at some bin.
double whittle_neg_log_lik(std::span<const double> params, const Periodogram& pg, const PsdFunction& psd);
double whittle_neg_log_lik(const ConcentrationPair& lambda, const Periodogram& pg, const SpectralModel& model);

struct NewtonOptions {
  int max_iterations = 100;
  /// Converged when the inf-norm of the log-parameter gradient is below
  /// gradient_tol times the number of periodogram bins.
  double gradient_tol = 1e-8;
  int grid_points = 8;
  /// Newton is run from the best cell of each of this many c_m grid columns
  /// (ranked by objective); the lowest refined objective wins.
  int multistart = 8;
  double grid_low = 1e-3;   // x K_D
  double grid_high = 1e3;   // x K_D
  double bound_low = 1e-9;  // x K_D, hard box on the iterate
  double bound_high = 1e9;
  double fd_rel_step = 1e-6;
  double hessian_step = 1e-4;  // in log-parameter units
};

struct WhittleFit {
  ConcentrationPair lambda_hat;
  double neg_log_lik = 0.0;
  int iterations = 0;
  bool converged = false;
  ConcentrationPair init;
  double gradient_norm = 0.0;
};

/// Grid-seeded Newton iteration on l in log-concentration space. For
/// kNoInterference the c_i fields of the result are zero.
WhittleFit ml_estimate(const Periodogram& pg, const SpectralModel& model, ModelKind kind,
                       const NewtonOptions& options = {});

/// Newton refinement from a given starting point, skipping the grid search.
WhittleFit ml_refine(const Periodogram& pg, const SpectralModel& model, ModelKind kind,
                     const ConcentrationPair& start, const NewtonOptions& options = {});

struct FisherMatrix {
  Eigen::MatrixXd entries;
  std::vector<double> evaluated_at;
};

/// Smoothed information sum_k S^-2 dS/dp_a dS/dp_b by central differences of
/// S. The step for p_j is max(rel_step |p_j|, step_floor[j]); an empty
/// step_floor means rel_step.
FisherMatrix fisher_matrix(std::span<const double> params, const PsdFunction& psd, std::span<const double> freqs,
                           double rel_step = 1e-6, std::span<const double> step_floor = {});
FisherMatrix fisher_matrix(const ConcentrationPair& lambda, const SpectralModel& model,
                           std::span<const double> freqs, ModelKind kind, double rel_step = 1e-6);

/// Observed information from the full second-derivative expression, for a
/// given periodogram realisation.
FisherMatrix observed_fisher_matrix(std::span<const double> params, const PsdFunction& psd, const Periodogram& pg,
                                    double rel_step = 1e-4, std::span<const double> step_floor = {});
FisherMatrix observed_fisher_matrix(const ConcentrationPair& lambda, const SpectralModel& model,
                                    const Periodogram& pg, ModelKind kind, double rel_step = 1e-4);

/// Diagonal of F^-1. Throws std::domain_error if F is singular or indefinite.
std::vector<double> estimator_variance(const FisherMatrix& F);

}  // namespace biorx
