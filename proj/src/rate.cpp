#include "lilab/rate.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lilab/errors.hpp"
#include "lilab/skeleton.hpp"
#include "lilab/special.hpp"

namespace lilab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kResidualFloor = 1e-9;  // keeps sqrt smooth at zero mismatch

Vec start_state(const RateOptions& opts, int dim) {
  if (opts.x0.size() == 0) return Vec::Zero(dim);
  if (opts.x0.size() != dim) {
    throw DomainError("options carry an x0 of dimension " +
                      std::to_string(opts.x0.size()) + ", fields need " +
                      std::to_string(dim));
  }
  return opts.x0;
}

SamplePath prepared_target(const SamplePath& target, const RateOptions& opts,
                           int dim) {
  if (target.dim() != dim) {
    throw DomainError("target dimension mismatch");
  }
  if (target.cells() == opts.cells) return target;
  return target.resampled(opts.cells);
}

// Mismatch objective evaluated through the skeleton map.  With
// energy_weight = 1 this is I(f) + lambda * S_beta, with energy_weight = 0
// just S_beta; gradients flow through the discrete adjoint.
struct Evaluation {
  double objective = 0.0;
  double smoothed = 0.0;
  double residual = 0.0;  // unsmoothed sup mismatch
  double energy = 0.0;
};

Evaluation eval_objective(const FieldSystem& fields, const Control& control,
                          const Mat& target_nodes, const Vec& x0, double beta,
                          double lambda, double energy_weight,
                          const SkeletonOptions& sopts, Mat* grad) {
  SkeletonTape tape;
  SamplePath g = integrate_skeleton(fields, control, x0, sopts,
                                    grad ? &tape : nullptr);

  const int n = g.cells() + 1;
  Eigen::ArrayXd r(n);
  Mat err(n, g.dim());
  double sup = 0.0;
  for (int i = 0; i < n; ++i) {
    err.row(i) = g.values().row(i) - target_nodes.row(i);
    const double e = err.row(i).norm();
    sup = std::max(sup, e);
    r[i] = std::sqrt(e * e + kResidualFloor * kResidualFloor);
  }

  const double m = r.maxCoeff();
  Eigen::ArrayXd w = (beta * (r - m)).exp();
  const double z = w.sum();
  const double smoothed = m + std::log(z) / beta;
  w /= z;

  Evaluation out;
  out.smoothed = smoothed;
  out.residual = sup;
  out.energy = control.energy();
  out.objective = energy_weight * out.energy + lambda * smoothed;

  if (grad) {
    Mat node_bar(n, g.dim());
    for (int i = 0; i < n; ++i) {
      node_bar.row(i) = (lambda * w[i] / r[i]) * err.row(i);
    }
    *grad = skeleton_adjoint(fields, control, tape, node_bar);
    if (energy_weight != 0.0) {
      *grad += (energy_weight / control.cells()) * control.rates();
    }
  }
  return out;
}

void project_energy(Control& control, double cap) {
  const double e = control.energy();
  if (e > cap) {
    control.rates() *= std::sqrt(cap / e);
  }
}

struct StartOutcome {
  Control control = Control::zero(1, 1);
  double objective = kInf;
  double smoothed = kInf;
  double residual = kInf;
  double energy = kInf;
  int iterations = 0;
  bool plateaued = false;
  bool failed = false;
};

// Adam with bias correction, fresh moments per annealing stage.
StartOutcome run_start(const FieldSystem& fields, Control control,
                       const Mat& target_nodes, const Vec& x0,
                       const RateOptions& opts, bool distance_mode) {
  const double energy_weight = distance_mode ? 0.0 : 1.0;
  const SkeletonOptions sopts{opts.substeps, opts.blowup_norm};

  StartOutcome out;
  Mat grad(control.cells(), control.noise_dim());
  Mat m1 = Mat::Zero(control.cells(), control.noise_dim());
  Mat m2 = Mat::Zero(control.cells(), control.noise_dim());

  int total_iters = 0;
  double last_window_best = kInf;
  double window_best = kInf;
  bool plateaued = false;

  try {
    if (distance_mode) project_energy(control, opts.energy_cap);
    for (std::size_t stage = 0; stage < opts.betas.size(); ++stage) {
      const double beta = opts.betas[stage];
      const double lambda =
          distance_mode
              ? 1.0
              : (stage < opts.lambdas.size() ? opts.lambdas[stage]
                                             : opts.lambdas.back());
      const bool final_stage = stage + 1 == opts.betas.size();

      m1.setZero();
      m2.setZero();
      double best = kInf;
      last_window_best = kInf;
      window_best = kInf;

      for (int it = 1; it <= opts.iters_per_stage; ++it) {
        const Evaluation ev =
            eval_objective(fields, control, target_nodes, x0, beta, lambda,
                           energy_weight, sopts, &grad);
        best = std::min(best, ev.objective);

        m1 = 0.9 * m1 + 0.1 * grad;
        m2 = 0.999 * m2 + 0.001 * grad.array().square().matrix();
        const double c1 = 1.0 - std::pow(0.9, it);
        const double c2 = 1.0 - std::pow(0.999, it);
        control.rates().array() -=
            opts.learning_rate * (m1.array() / c1) /
            ((m2.array() / c2).sqrt() + 1e-8);
        if (distance_mode) project_energy(control, opts.energy_cap);

        ++total_iters;
        if (final_stage) {
          window_best = std::min(window_best, ev.objective);
          if (it % 50 == 0) {
            plateaued = (last_window_best - window_best) < 1e-10;
            last_window_best = window_best;
            window_best = kInf;
          }
        }
      }
    }

    const Evaluation fin =
        eval_objective(fields, control, target_nodes, x0, opts.betas.back(),
                       distance_mode ? 1.0 : opts.lambdas.back(),
                       energy_weight, sopts, nullptr);
    out.control = control;
    out.objective = fin.objective;
    out.smoothed = fin.smoothed;
    out.residual = fin.residual;
    out.energy = fin.energy;
    out.iterations = total_iters;
    out.plateaued = plateaued;
  } catch (const NumericalError&) {
    out.failed = true;  // divergent start; others may still succeed
    out.iterations = total_iters;
  }
  return out;
}

std::vector<Control> build_starts(const RateOptions& opts, int k, int dim,
                                  bool distance_mode) {
  (void)dim;
  std::vector<Control> starts;
  starts.push_back(Control::zero(opts.cells, k));
  for (int i = 1; i <= opts.random_starts; ++i) {
    const double cap = distance_mode ? opts.energy_cap : 1.0;
    const double energy = 0.25 * static_cast<double>(i) * cap;
    starts.push_back(
        Control::random(opts.cells, k, energy, mix_seed(opts.seed, i)));
  }
  for (const auto& c : opts.extra_starts) {
    if (c.noise_dim() != k) {
      throw DomainError("extra start has wrong noise dimension");
    }
    if (c.cells() == opts.cells) {
      starts.push_back(c);
    } else {
      // Warm starts on another grid: take the rate of the source cell under
      // each destination cell midpoint.
      Mat rates(opts.cells, k);
      for (int cidx = 0; cidx < opts.cells; ++cidx) {
        const double t = (static_cast<double>(cidx) + 0.5) / opts.cells;
        const int src =
            std::min(static_cast<int>(t * c.cells()), c.cells() - 1);
        rates.row(cidx) = c.rates().row(src);
      }
      starts.emplace_back(std::move(rates));
    }
  }
  return starts;
}

}  // namespace

RateResult rate_exact_full_rank(const FieldSystem& fields,
                                const SamplePath& target,
                                const RateOptions& opts) {
  const int d = fields.dim();
  const int k = fields.noise_dim();
  const SamplePath tgt = prepared_target(target, opts, d);
  const int m = tgt.cells();

  Mat rates(m, k);
  Vec mid(d), gdot(d), b(d), a(d);
  Mat amat(d, k);
  for (int c = 0; c < m; ++c) {
    mid = 0.5 * (tgt.node(c) + tgt.node(c + 1));
    gdot = static_cast<double>(m) * (tgt.node(c + 1) - tgt.node(c));
    for (int j = 0; j < k; ++j) {
      fields.diffusion(j).eval(mid, a);
      amat.col(j) = a;
    }
    fields.drift().eval(mid, b);
    b = gdot - b;

    Eigen::JacobiSVD<Mat> svd(amat,
                              Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (k < d || sv(sv.size() - 1) < 1e-8) {
      throw NumericalError(
          "diffusion matrix is rank deficient along the target at t = " +
          std::to_string((c + 0.5) / m));
    }
    Vec coeff = svd.matrixU().transpose() * b;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      coeff[i] *= sv[i] / (sv[i] * sv[i] + 1e-10);
    }
    rates.row(c) = (svd.matrixV() * coeff).transpose();
  }

  Control control(std::move(rates));
  const SkeletonOptions sopts{opts.substeps, opts.blowup_norm};
  SamplePath recovered =
      integrate_skeleton(fields, control, start_state(opts, d), sopts);

  RateResult out;
  out.value = control.energy();
  out.residual = sup_distance(recovered, tgt);
  out.control = control;
  out.method = "exact";
  out.iterations = 0;
  out.start_index = 0;
  out.converged = out.residual <= opts.match_tol;
  return out;
}

RateResult rate_variational(const FieldSystem& fields,
                            const SamplePath& target,
                            const RateOptions& opts) {
  if (opts.betas.empty()) {
    throw DomainError("the annealing schedule must not be empty");
  }
  const int d = fields.dim();
  const int k = fields.noise_dim();
  const SamplePath tgt = prepared_target(target, opts, d);
  const Vec x0 = start_state(opts, d);

  std::vector<Control> starts = build_starts(opts, k, d, false);
  std::vector<StartOutcome> outcomes;
  outcomes.reserve(starts.size());
  for (auto& s : starts) {
    outcomes.push_back(
        run_start(fields, std::move(s), tgt.values(), x0, opts, false));
  }

  int winner = -1;
  bool winner_feasible = false;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    if (o.failed) continue;
    const bool feasible = o.residual <= opts.match_tol;
    if (winner < 0) {
      winner = static_cast<int>(i);
      winner_feasible = feasible;
      continue;
    }
    const auto& w = outcomes[static_cast<std::size_t>(winner)];
    if (feasible != winner_feasible) {
      if (feasible) {
        winner = static_cast<int>(i);
        winner_feasible = true;
      }
      continue;
    }
    const double mine = feasible ? o.energy : o.objective;
    const double its = feasible ? w.energy : w.objective;
    if (mine < its) {
      winner = static_cast<int>(i);
    }
  }
  if (winner < 0) {
    throw NumericalError("every optimization start diverged");
  }

  const auto& w = outcomes[static_cast<std::size_t>(winner)];
  RateResult out;
  out.control = w.control;
  out.residual = w.residual;
  out.method = "variational";
  out.iterations = w.iterations;
  out.start_index = winner;
  out.converged = w.residual <= opts.match_tol;
  out.value = (w.residual <= 10.0 * opts.match_tol) ? w.energy : kInf;
  return out;
}

ThetaQuery dist_to_theta(const FieldSystem& fields, const SamplePath& target,
                         const RateOptions& opts) {
  if (opts.betas.empty()) {
    throw DomainError("the annealing schedule must not be empty");
  }
  const int d = fields.dim();
  const int k = fields.noise_dim();
  const SamplePath tgt = prepared_target(target, opts, d);
  const Vec x0 = start_state(opts, d);

  std::vector<Control> starts = build_starts(opts, k, d, true);
  int winner = -1;
  StartOutcome best;
  int winner_index = 0;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    StartOutcome o = run_start(fields, std::move(starts[i]), tgt.values(), x0,
                               opts, true);
    if (o.failed) continue;
    if (winner < 0 || o.residual < best.residual) {
      winner = static_cast<int>(i);
      best = std::move(o);
      winner_index = winner;
    }
  }
  if (winner < 0) {
    throw NumericalError("every optimization start diverged");
  }

  const SkeletonOptions sopts{opts.substeps, opts.blowup_norm};
  ThetaQuery out;
  out.distance = best.residual;
  out.argmin = integrate_skeleton(fields, best.control, x0, sopts);
  out.control = best.control;
  out.iterations = best.iterations;
  out.start_index = winner_index;
  out.converged = best.plateaued;
  return out;
}

double theta_bound(const FieldSystem& fields) {
  double sum_sq = 0.0;
  for (int j = 0; j < fields.noise_dim(); ++j) {
    const auto b = fields.diffusion(j).sup_bound();
    if (!b) {
      throw DomainError("diffusion field " + std::to_string(j + 1) +
                        " has no declared sup bound");
    }
    sum_sq += *b * *b;
  }
  const auto b0 = fields.drift().sup_bound();
  if (!b0) {
    throw DomainError("the drift field has no declared sup bound");
  }
  return std::sqrt(2.0) * std::sqrt(sum_sq) + *b0;
}

}  // namespace lilab
