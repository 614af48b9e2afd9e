#include "biorx/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace biorx {

PsdFunction make_psd_function(const SpectralModel& model, ModelKind kind) {
  if (kind == ModelKind::kTwoSpecies) {
    return [model](std::span<const double> f, std::span<const double> p, std::span<double> out) {
      model.total(f, ConcentrationPair{p[0], p[1]}, out);
    };
  }
  return [model](std::span<const double> f, std::span<const double> p, std::span<double> out) {
    model.no_interference(f, p[0], out);
  };
}

std::size_t parameter_count(ModelKind kind) { return kind == ModelKind::kTwoSpecies ? 2 : 1; }

double whittle_neg_log_lik(std::span<const double> params, const Periodogram& pg, const PsdFunction& psd) {
  std::vector<double> S(pg.size());
  psd(pg.f, params, S);
  double l = 0.0;
  for (std::size_t k = 0; k < S.size(); ++k) {
    if (!(S[k] > 0.0)) throw std::domain_error("whittle_neg_log_lik: model PSD must be positive");
    l += pg.Y[k] / S[k] + std::log(S[k]);
  }
  return l;
}

double whittle_neg_log_lik(const ConcentrationPair& lambda, const Periodogram& pg, const SpectralModel& model) {
  const double p[2] = {lambda.c_m, lambda.c_i};
  return whittle_neg_log_lik(p, pg, make_psd_function(model, ModelKind::kTwoSpecies));
}

namespace {

/// l and its gradient with respect to log-parameters. Derivatives of S come
/// from central differences in log space, dS/dtheta = c dS/dc.
class LogSpaceObjective {
 public:
  LogSpaceObjective(const Periodogram& pg, PsdFunction psd, std::size_t dim, double rel_step)
      : pg_(pg), psd_(std::move(psd)), dim_(dim), h_(rel_step), S_(pg.size()), Sp_(pg.size()), Sm_(pg.size()) {}

  double value(const Eigen::VectorXd& theta) {
    eval(theta, S_);
    double l = 0.0;
    for (std::size_t k = 0; k < S_.size(); ++k) {
      if (!(S_[k] > 0.0)) return std::numeric_limits<double>::infinity();
      l += pg_.Y[k] / S_[k] + std::log(S_[k]);
    }
    return l;
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& theta) {
    eval(theta, S_);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
      Eigen::VectorXd tp = theta, tm = theta;
      tp[j] += h_;
      tm[j] -= h_;
      eval(tp, Sp_);
      eval(tm, Sm_);
      double acc = 0.0;
      for (std::size_t k = 0; k < S_.size(); ++k) {
        const double dS = (Sp_[k] - Sm_[k]) / (2.0 * h_);
        acc += (1.0 - pg_.Y[k] / S_[k]) * dS / S_[k];
      }
      g[j] = acc;
    }
    return g;
  }

  /// Hessian of l in log space from a stencil on S with step h:
  /// sum_k (2Y/S - 1) S_a S_b / S^2 + (1 - Y/S) S_ab / S.
  Eigen::MatrixXd hessian(const Eigen::VectorXd& theta, double h) {
    eval(theta, S_);
    const std::size_t n = S_.size();
    std::vector<std::vector<double>> plus(dim_, std::vector<double>(n)), minus(dim_, std::vector<double>(n));
    for (std::size_t j = 0; j < dim_; ++j) {
      Eigen::VectorXd tp = theta, tm = theta;
      tp[j] += h;
      tm[j] -= h;
      eval(tp, plus[j]);
      eval(tm, minus[j]);
    }
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim_, dim_);
    for (std::size_t a = 0; a < dim_; ++a) {
      for (std::size_t b = a; b < dim_; ++b) {
        if (a == b) {
          Sab_.assign(n, 0.0);
          for (std::size_t k = 0; k < n; ++k) Sab_[k] = (plus[a][k] - 2.0 * S_[k] + minus[a][k]) / (h * h);
        } else {
          Eigen::VectorXd t = theta;
          std::vector<double> pp(n), pm(n), mp(n), mm(n);
          t[a] = theta[a] + h, t[b] = theta[b] + h, eval(t, pp);
          t[b] = theta[b] - h, eval(t, pm);
          t[a] = theta[a] - h, eval(t, mm);
          t[b] = theta[b] + h, eval(t, mp);
          Sab_.resize(n);
          for (std::size_t k = 0; k < n; ++k) Sab_[k] = (pp[k] - pm[k] - mp[k] + mm[k]) / (4.0 * h * h);
        }
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double r = pg_.Y[k] / S_[k];
          const double Sa = (plus[a][k] - minus[a][k]) / (2.0 * h);
          const double Sb = (plus[b][k] - minus[b][k]) / (2.0 * h);
          acc += (2.0 * r - 1.0) * Sa * Sb / (S_[k] * S_[k]) + (1.0 - r) * Sab_[k] / S_[k];
        }
        H(a, b) = H(b, a) = acc;
      }
    }
    return H;
  }

  /// Expected information in log space, sum_k dlnS/dtheta_a dlnS/dtheta_b.
  Eigen::MatrixXd scoring_matrix(const Eigen::VectorXd& theta) {
    eval(theta, S_);
    Eigen::MatrixXd D(S_.size(), dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
      Eigen::VectorXd tp = theta, tm = theta;
      tp[j] += h_;
      tm[j] -= h_;
      eval(tp, Sp_);
      eval(tm, Sm_);
      for (std::size_t k = 0; k < S_.size(); ++k) D(k, j) = (Sp_[k] - Sm_[k]) / (2.0 * h_ * S_[k]);
    }
    return D.transpose() * D;
  }

  std::size_t bins() const { return S_.size(); }

 private:
  void eval(const Eigen::VectorXd& theta, std::vector<double>& out) {
    double p[2] = {0.0, 0.0};
    for (std::size_t j = 0; j < dim_; ++j) p[j] = std::exp(theta[j]);
    psd_(pg_.f, std::span<const double>(p, dim_), out);
  }

  const Periodogram& pg_;
  PsdFunction psd_;
  std::size_t dim_;
  double h_;
  std::vector<double> S_, Sp_, Sm_, Sab_;
};

ConcentrationPair to_pair(const Eigen::VectorXd& theta) {
  ConcentrationPair c;
  c.c_m = std::exp(theta[0]);
  c.c_i = theta.size() > 1 ? std::exp(theta[1]) : 0.0;
  return c;
}

Eigen::VectorXd newton_direction(const Eigen::MatrixXd& H, const Eigen::VectorXd& g) {
  Eigen::LLT<Eigen::MatrixXd> llt(H);
  if (llt.info() != Eigen::Success) return {};
  Eigen::VectorXd step = -llt.solve(g);
  if (!step.allFinite()) return {};
  return step;
}

}  // namespace

WhittleFit ml_refine(const Periodogram& pg, const SpectralModel& model, ModelKind kind,
                     const ConcentrationPair& start, const NewtonOptions& options) {
  const std::size_t dim = parameter_count(kind);
  LogSpaceObjective obj(pg, make_psd_function(model, kind), dim, options.fd_rel_step);

  const double kd[2] = {model.m().K_D(), model.i().K_D()};
  Eigen::VectorXd lo(dim), hi(dim), theta(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    lo[j] = std::log(options.bound_low * kd[j]);
    hi[j] = std::log(options.bound_high * kd[j]);
  }
  theta[0] = std::log(std::max(start.c_m, options.bound_low * kd[0]));
  if (dim > 1) theta[1] = std::log(std::max(start.c_i, options.bound_low * kd[1]));
  theta = theta.cwiseMax(lo).cwiseMin(hi);

  WhittleFit fit;
  fit.init = to_pair(theta);
  double l = obj.value(theta);
  const double tol = options.gradient_tol * static_cast<double>(obj.bins());
  int stalled = 0;

  for (int iter = 0; iter <= options.max_iterations; ++iter) {
    const Eigen::VectorXd g = obj.gradient(theta);
    // Coordinates pinned at a bound with the gradient pushing outward are frozen.
    std::vector<int> free;
    for (std::size_t j = 0; j < dim; ++j) {
      const bool pinned_low = theta[j] <= lo[j] && g[j] > 0.0;
      const bool pinned_high = theta[j] >= hi[j] && g[j] < 0.0;
      if (!pinned_low && !pinned_high) free.push_back(static_cast<int>(j));
    }
    double gnorm = 0.0;
    for (int j : free) gnorm = std::max(gnorm, std::abs(g[j]));
    fit.gradient_norm = gnorm;
    fit.iterations = iter;
    if (gnorm < tol) {
      fit.converged = true;
      break;
    }
    if (iter == options.max_iterations) break;

    const std::size_t nf = free.size();
    Eigen::VectorXd gf(nf);
    for (std::size_t a = 0; a < nf; ++a) gf[a] = g[free[a]];

    const Eigen::MatrixXd Hfull = obj.hessian(theta, options.hessian_step);
    Eigen::MatrixXd H(nf, nf);
    for (std::size_t a = 0; a < nf; ++a)
      for (std::size_t b = 0; b < nf; ++b) H(a, b) = Hfull(free[a], free[b]);

    // A usable direction is a solve that succeeded and points downhill by a
    // margin; ill-conditioned curvature gives steps nearly orthogonal to g.
    auto usable = [&](const Eigen::VectorXd& d) {
      return d.size() != 0 && -gf.dot(d) > 1e-3 * gf.norm() * d.norm();
    };
    Eigen::VectorXd step = newton_direction(H, gf);
    if (!usable(step)) {
      // Fall back to Fisher scoring, then to steepest descent.
      const Eigen::MatrixXd I = obj.scoring_matrix(theta);
      Eigen::MatrixXd If(nf, nf);
      for (std::size_t a = 0; a < nf; ++a)
        for (std::size_t b = 0; b < nf; ++b) If(a, b) = I(free[a], free[b]);
      step = newton_direction(If, gf);
      if (!usable(step)) step = -gf;
    }
    // Keep single steps within a factor e^3 per coordinate.
    const double biggest = step.cwiseAbs().maxCoeff();
    if (biggest > 3.0) step *= 3.0 / biggest;

    // Objective differences below rounding in l are not evidence of ascent.
    const double slack = 32.0 * std::numeric_limits<double>::epsilon() * (std::abs(l) + obj.bins());
    double scale = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 40; ++halving, scale *= 0.5) {
      Eigen::VectorXd trial = theta;
      for (std::size_t a = 0; a < nf; ++a) trial[free[a]] += scale * step[a];
      trial = trial.cwiseMax(lo).cwiseMin(hi);
      const double lt = obj.value(trial);
      if (lt <= l + slack) {
        stalled = lt < l - slack ? 0 : stalled + 1;
        theta = trial;
        l = lt;
        accepted = true;
        break;
      }
    }
    if (!accepted || stalled >= 3) break;  // no descent available at machine precision
  }

  fit.lambda_hat = to_pair(theta);
  fit.neg_log_lik = l;
  return fit;
}

WhittleFit ml_estimate(const Periodogram& pg, const SpectralModel& model, ModelKind kind,
                       const NewtonOptions& options) {
  const std::size_t dim = parameter_count(kind);
  const PsdFunction psd = make_psd_function(model, kind);
  const int n = std::max(options.grid_points, 1);
  auto grid_value = [&](double kd, int idx) {
    const double t = n == 1 ? 0.5 : static_cast<double>(idx) / (n - 1);
    return kd * std::exp(std::log(options.grid_low) + t * (std::log(options.grid_high) - std::log(options.grid_low)));
  };

  struct Cell {
    double l;
    ConcentrationPair c;
  };
  std::vector<Cell> cells;
  std::vector<double> S(pg.size());
  auto score = [&](double cm, double ci) {
    const double p[2] = {cm, ci};
    psd(pg.f, std::span<const double>(p, dim), S);
    double l = 0.0;
    for (std::size_t k = 0; k < S.size(); ++k) l += pg.Y[k] / S[k] + std::log(S[k]);
    return l;
  };

  // One candidate per c_m column (its best c_i cell), so the starts span
  // distinct c_m basins. Ascending c_i with strict improvement keeps the
  // smallest c_i among equal likelihoods; the stable sort preserves it.
  const int n_i = dim > 1 ? n : 1;
  for (int a = 0; a < n; ++a) {
    const double cm = grid_value(model.m().K_D(), a);
    Cell col{std::numeric_limits<double>::infinity(), {cm, 0.0}};
    for (int b = 0; b < n_i; ++b) {
      const double ci = dim > 1 ? grid_value(model.i().K_D(), b) : 0.0;
      const double l = score(cm, ci);
      if (l < col.l) col = {l, {cm, ci}};
    }
    cells.push_back(col);
  }
  std::stable_sort(cells.begin(), cells.end(), [](const Cell& x, const Cell& y) { return x.l < y.l; });

  const std::size_t starts = std::min<std::size_t>(std::max(options.multistart, 1), cells.size());
  WhittleFit best;
  for (std::size_t s = 0; s < starts; ++s) {
    WhittleFit fit = ml_refine(pg, model, kind, cells[s].c, options);
    fit.init = cells[s].c;
    if (s == 0 || fit.neg_log_lik < best.neg_log_lik) best = fit;
  }
  return best;
}

namespace {

std::vector<double> fd_steps(std::span<const double> params, double rel_step, std::span<const double> floor) {
  std::vector<double> h(params.size());
  for (std::size_t j = 0; j < params.size(); ++j) {
    const double base = floor.empty() ? rel_step : floor[j];
    h[j] = std::max(rel_step * std::abs(params[j]), base);
  }
  return h;
}

std::vector<double> concentration_floor(const SpectralModel& model, ModelKind kind, double rel_step) {
  std::vector<double> floor = {rel_step * model.m().K_D(), rel_step * model.i().K_D()};
  floor.resize(parameter_count(kind));
  return floor;
}

}  // namespace

FisherMatrix fisher_matrix(std::span<const double> params, const PsdFunction& psd, std::span<const double> freqs,
                           double rel_step, std::span<const double> step_floor) {
  const std::size_t dim = params.size();
  const std::size_t K = freqs.size();
  std::vector<double> S(K), Sp(K), Sm(K);
  psd(freqs, params, S);

  Eigen::MatrixXd D(K, dim);
  const std::vector<double> steps = fd_steps(params, rel_step, step_floor);
  std::vector<double> p(params.begin(), params.end());
  for (std::size_t j = 0; j < dim; ++j) {
    const double h = steps[j];
    p[j] = params[j] + h;
    psd(freqs, p, Sp);
    p[j] = params[j] - h;
    psd(freqs, p, Sm);
    p[j] = params[j];
    for (std::size_t k = 0; k < K; ++k) D(k, j) = (Sp[k] - Sm[k]) / (2.0 * h * S[k]);
  }
  FisherMatrix F;
  F.entries = D.transpose() * D;
  F.evaluated_at.assign(params.begin(), params.end());
  return F;
}

FisherMatrix fisher_matrix(const ConcentrationPair& lambda, const SpectralModel& model,
                           std::span<const double> freqs, ModelKind kind, double rel_step) {
  const double p[2] = {lambda.c_m, lambda.c_i};
  return fisher_matrix(std::span<const double>(p, parameter_count(kind)), make_psd_function(model, kind), freqs,
                       rel_step, concentration_floor(model, kind, rel_step));
}

FisherMatrix observed_fisher_matrix(const ConcentrationPair& lambda, const SpectralModel& model,
                                    const Periodogram& pg, ModelKind kind, double rel_step) {
  const double p[2] = {lambda.c_m, lambda.c_i};
  return observed_fisher_matrix(std::span<const double>(p, parameter_count(kind)), make_psd_function(model, kind),
                                pg, rel_step, concentration_floor(model, kind, rel_step));
}

FisherMatrix observed_fisher_matrix(std::span<const double> params, const PsdFunction& psd, const Periodogram& pg,
                                    double rel_step, std::span<const double> step_floor) {
  const std::size_t dim = params.size();
  const std::size_t K = pg.size();
  const std::vector<double> h = fd_steps(params, rel_step, step_floor);

  std::vector<double> p(params.begin(), params.end());
  auto eval_at = [&](std::span<const int> offsets) {
    for (std::size_t j = 0; j < dim; ++j) p[j] = params[j] + offsets[j] * h[j];
    std::vector<double> out(K);
    psd(pg.f, p, out);
    return out;
  };

  const std::vector<int> zero(dim, 0);
  const std::vector<double> S = eval_at(zero);
  std::vector<std::vector<double>> d1(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    std::vector<int> up(dim, 0), dn(dim, 0);
    up[j] = 1;
    dn[j] = -1;
    const auto Sp = eval_at(up);
    const auto Sm = eval_at(dn);
    d1[j].resize(K);
    for (std::size_t k = 0; k < K; ++k) d1[j][k] = (Sp[k] - Sm[k]) / (2.0 * h[j]);
  }

  Eigen::MatrixXd F(dim, dim);
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = a; b < dim; ++b) {
      std::vector<double> d2(K);
      if (a == b) {
        std::vector<int> up(dim, 0), dn(dim, 0);
        up[a] = 1;
        dn[a] = -1;
        const auto Sp = eval_at(up);
        const auto Sm = eval_at(dn);
        for (std::size_t k = 0; k < K; ++k) d2[k] = (Sp[k] - 2.0 * S[k] + Sm[k]) / (h[a] * h[a]);
      } else {
        std::vector<int> pp(dim, 0), pm(dim, 0), mp(dim, 0), mm(dim, 0);
        pp[a] = 1; pp[b] = 1;
        pm[a] = 1; pm[b] = -1;
        mp[a] = -1; mp[b] = 1;
        mm[a] = -1; mm[b] = -1;
        const auto Spp = eval_at(pp), Spm = eval_at(pm), Smp = eval_at(mp), Smm = eval_at(mm);
        for (std::size_t k = 0; k < K; ++k) d2[k] = (Spp[k] - Spm[k] - Smp[k] + Smm[k]) / (4.0 * h[a] * h[b]);
      }
      double acc = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        const double s = S[k];
        const double y = pg.Y[k];
        acc += (s - y) / (s * s) * d2[k] + (2.0 * y - s) / (s * s * s) * d1[a][k] * d1[b][k];
      }
      F(a, b) = acc;
      F(b, a) = acc;
    }
  }
  FisherMatrix out;
  out.entries = F;
  out.evaluated_at.assign(params.begin(), params.end());
  return out;
}

std::vector<double> estimator_variance(const FisherMatrix& F) {
  const Eigen::MatrixXd& A = F.entries;
  if (A.rows() == 0 || A.rows() != A.cols()) throw std::domain_error("estimator_variance: empty or non-square FIM");
  // Scale to unit diagonal so the conditioning test is unit-free.
  const Eigen::VectorXd d = A.diagonal();
  if ((d.array() <= 0.0).any() || !d.allFinite())
    throw std::domain_error("estimator_variance: FIM has a non-positive diagonal (parameter not identifiable)");
  const Eigen::VectorXd s = d.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd C = s.asDiagonal() * A * s.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C);
  if (eig.eigenvalues().minCoeff() <= 1e-12 * eig.eigenvalues().maxCoeff())
    throw std::domain_error("estimator_variance: FIM is singular (parameters not identifiable)");
  const Eigen::MatrixXd Cinv = C.inverse();
  std::vector<double> var(A.rows());
  for (Eigen::Index j = 0; j < A.rows(); ++j) var[j] = Cinv(j, j) * s[j] * s[j];
  return var;
}

}  // namespace biorx
