#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lilab/coefficient_system.hpp"
#include "lilab/control.hpp"
#include "lilab/sample_path.hpp"

namespace lilab {

struct RateOptions {
  // Control resolution; targets are resampled onto this grid.
  int cells = 64;
  int substeps = 4;
  // Starting state of the skeleton; empty means the origin.
  Vec x0;

  // A candidate matches the target when the unsmoothed sup mismatch is at
  // most match_tol; beyond 10x this the minimization reports +inf.
  double match_tol = 1e-3;

  // Smoothing / penalty anneal, one optimization stage per entry.
  std::vector<double> betas = {10.0, 100.0, 1000.0};
  std::vector<double> lambdas = {10.0, 100.0, 100.0};
  int iters_per_stage = 400;
  double learning_rate = 0.05;

  // Starts: the zero control, `random_starts` seeded random controls, then
  // any extra warm starts supplied by the caller.
  int random_starts = 4;
  std::uint64_t seed = 11;
  std::vector<Control> extra_starts;

  // Energy level set used by dist_to_theta.
  double energy_cap = 1.0;

  double blowup_norm = 1e12;
};

struct RateResult {
  double value = 0.0;     // infinity when no control matches the target
  double residual = 0.0;  // unsmoothed sup mismatch of the reported control
  Control control = Control::zero(1, 1);
  std::string method;
  int iterations = 0;
  int start_index = 0;
  bool converged = true;
};

// Action functional by midpoint least squares: requires the diffusion matrix
// to have full row rank along the target; throws NumericalError (with the
// offending time) otherwise.
RateResult rate_exact_full_rank(const FieldSystem& fields,
                                const SamplePath& target,
                                const RateOptions& opts = {});

// Penalized multi-start descent on I(f) + lambda * smoothed sup mismatch.
// Works for degenerate diffusions; reports +inf when no start reproduces the
// target within tolerance.
RateResult rate_variational(const FieldSystem& fields,
                            const SamplePath& target,
                            const RateOptions& opts = {});

struct ThetaQuery {
  double distance = 0.0;  // unsmoothed sup distance to the reported path
  SamplePath argmin = SamplePath::zero(1, 1);
  Control control = Control::zero(1, 1);
  int iterations = 0;
  int start_index = 0;
  bool converged = true;
};

// Distance from the target to the set of skeleton paths with energy at most
// energy_cap (default the unit sublevel set), by projected descent on the
// smoothed sup distance.
ThetaQuery dist_to_theta(const FieldSystem& fields, const SamplePath& target,
                         const RateOptions& opts = {});

// sqrt(2) * sqrt(sum_j bound_j^2) + bound_0 from the declared field bounds;
// every unit-sublevel skeleton path started at the origin stays inside this
// radius.  Throws DomainError when a bound is missing.
double theta_bound(const FieldSystem& fields);

}  // namespace lilab
