#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lilab/coefficient_system.hpp"
#include "lilab/control.hpp"
#include "lilab/flow_solver.hpp"
#include "lilab/initial_condition.hpp"
#include "lilab/rate.hpp"

namespace lilab {

// One long trajectory per seed, examined along the scale ladder u = c^i.
struct LilConfig {
  LilConfig(CoefficientSystem system, InitialConditionSpec init)
      : system(std::move(system)), init(std::move(init)) {
    dist_options.substeps = 2;
  }

  CoefficientSystem system;
  InitialConditionSpec init;

  double ratio = 2.0;
  int windows = 40;
  double delta = 1e-3;
  // Output resolution of the rescaled paths.
  int output_cells = 256;
  // First window examined; 0 picks the smallest i with ratio^(i-1) > e^e.
  int burn_in = 0;
  // Closeness level used by the exceedance and hit counts.
  double rho = 0.5;

  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8};
  // Sub-scales per window used by the gamma statistic.
  int subgrid = 8;
  int threads = 0;  // 0 = hardware concurrency

  SolveOptions solve;
  RateOptions dist_options;

  // Recurrence targets, each with energy strictly below 1.
  std::vector<Control> targets;
};

struct LilRow {
  std::uint64_t seed = 0;
  int i = 0;
  double u = 0.0;
  double dist_theta = 0.0;     // NaN when not computed
  double endpoint_norm = 0.0;  // |xi^u(1)|
  double gamma = 0.0;          // NaN when not computed
  int target_id = -1;
  double dist_target = 0.0;  // NaN when not computed
};

struct LilReport {
  std::string mode;
  int burn_in = 0;
  std::vector<LilRow> rows;

  // Per-window aggregates over seeds (index-aligned with `index`).
  std::vector<int> index;
  std::vector<double> median_dist;
  std::vector<double> min_dist;
  std::vector<int> exceed_count;  // dist above rho

  // Per-target fraction of seeds whose best window distance beats rho.
  std::vector<double> target_hit_fraction;
};

// Smallest i >= 1 with ratio^(i-1) > e^e; scales below carry no loglog mass.
int auto_burn_in(double ratio);

// Distance to the unit energy sublevel set of the limit skeletons at every
// ladder scale.
LilReport run_convergence(const LilConfig& cfg);

// Sup distance to fixed limit skeleton targets at every ladder scale.
LilReport run_recurrence(const LilConfig& cfg);

// gamma_i = max over the geometric subgrid u in [c^(i-1), c^i] of
// sup_t |xi^u_t - (phi(c^i)/phi(u)) xi^{c^i}_t|.
LilReport gamma_stat(const LilConfig& cfg);

// Distance to the sublevel set at caller-chosen scales (not just the
// ladder); row index i holds the position in the scan.
LilReport lemma25_scan(const LilConfig& cfg, const std::vector<double>& scan);

}  // namespace lilab
