#include "lilab/lil_lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

#include "lilab/errors.hpp"
#include "lilab/geometric_grid.hpp"
#include "lilab/scale.hpp"
#include "lilab/skeleton.hpp"
#include "lilab/wiener_path.hpp"

namespace lilab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int resolve_burn_in(const LilConfig& cfg) {
  int i0 = cfg.burn_in > 0 ? cfg.burn_in : auto_burn_in(cfg.ratio);
  if (i0 > cfg.windows) {
    throw DomainError("burn-in window exceeds the window count");
  }
  if (!(std::pow(cfg.ratio, i0 - 1) > min_scale())) {
    throw DomainError("burn-in too small: scales must exceed e");
  }
  return i0;
}

void validate(const LilConfig& cfg) {
  if (cfg.seeds.empty()) {
    throw DomainError("at least one seed is required");
  }
  if (cfg.output_cells < 1) {
    throw DomainError("output resolution must be positive");
  }
  if (cfg.subgrid < 2) {
    throw DomainError("gamma subgrid needs at least two points");
  }
  for (const auto& t : cfg.targets) {
    if (!(t.energy() < 1.0)) {
      throw DomainError("recurrence targets must have energy below 1");
    }
  }
}

// Runs fn(seed_index) over a small pool; results land in preallocated slots
// so the merge order never depends on scheduling.
void parallel_over_seeds(const LilConfig& cfg, std::size_t n,
                         const std::function<void(std::size_t)>& fn) {
  unsigned hw = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                : std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const std::size_t workers = std::min<std::size_t>(hw, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mu;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct SeedTrajectory {
  WienerPath path;
  FlowPath flow;
};

SeedTrajectory solve_seed(const LilConfig& cfg, const GeometricGrid& grid,
                          std::uint64_t seed) {
  WienerPath path = WienerPath::sample(grid, cfg.system.noise_dim(), seed);
  FlowPath flow = solve_anticipating(cfg.system, path, cfg.init,
                                     grid.horizon(), cfg.solve);
  return SeedTrajectory{std::move(path), std::move(flow)};
}

void fill_window_aggregates(LilReport& report, const LilConfig& cfg, int i0) {
  report.index.clear();
  report.median_dist.clear();
  report.min_dist.clear();
  report.exceed_count.clear();
  for (int i = i0; i <= cfg.windows; ++i) {
    std::vector<double> dists;
    for (const auto& r : report.rows) {
      if (r.i == i && !std::isnan(r.dist_theta)) dists.push_back(r.dist_theta);
    }
    report.index.push_back(i);
    if (dists.empty()) {
      report.median_dist.push_back(kNaN);
      report.min_dist.push_back(kNaN);
      report.exceed_count.push_back(0);
      continue;
    }
    std::sort(dists.begin(), dists.end());
    const std::size_t n = dists.size();
    const double median = (n % 2 == 1)
                              ? dists[n / 2]
                              : 0.5 * (dists[n / 2 - 1] + dists[n / 2]);
    report.median_dist.push_back(median);
    report.min_dist.push_back(dists.front());
    int exceed = 0;
    for (double v : dists) {
      if (v > cfg.rho) ++exceed;
    }
    report.exceed_count.push_back(exceed);
  }
}

}  // namespace

int auto_burn_in(double ratio) {
  if (!(ratio > 1.0)) {
    throw DomainError("ratio must exceed 1");
  }
  const double ee = std::exp(std::exp(1.0));
  int i = 1;
  while (!(std::pow(ratio, i - 1) > ee)) ++i;
  return i;
}

LilReport run_convergence(const LilConfig& cfg) {
  validate(cfg);
  const int i0 = resolve_burn_in(cfg);
  const FieldSystem& limit = cfg.system.limit();
  const GeometricGrid grid(cfg.ratio, cfg.windows, cfg.delta);
  const int per_seed = cfg.windows - i0 + 1;

  LilReport report;
  report.mode = "convergence";
  report.burn_in = i0;
  report.rows.assign(cfg.seeds.size() * static_cast<std::size_t>(per_seed),
                     LilRow{});

  parallel_over_seeds(cfg, cfg.seeds.size(), [&](std::size_t s) {
    const SeedTrajectory traj = solve_seed(cfg, grid, cfg.seeds[s]);
    for (int i = i0; i <= cfg.windows; ++i) {
      const double u = std::pow(cfg.ratio, i);
      SamplePath xi = extract_rescaled(traj.flow, u, cfg.output_cells);
      ThetaQuery q = dist_to_theta(limit, xi, cfg.dist_options);

      LilRow& row =
          report.rows[s * static_cast<std::size_t>(per_seed) + (i - i0)];
      row.seed = cfg.seeds[s];
      row.i = i;
      row.u = u;
      row.dist_theta = q.distance;
      row.endpoint_norm = xi.node(xi.cells()).norm();
      row.gamma = kNaN;
      row.target_id = -1;
      row.dist_target = kNaN;
    }
  });

  fill_window_aggregates(report, cfg, i0);
  return report;
}

LilReport run_recurrence(const LilConfig& cfg) {
  validate(cfg);
  if (cfg.targets.empty()) {
    throw DomainError("a recurrence study needs at least one target");
  }
  const int i0 = resolve_burn_in(cfg);
  const FieldSystem& limit = cfg.system.limit();
  const GeometricGrid grid(cfg.ratio, cfg.windows, cfg.delta);

  // Limit skeletons of the targets on the output grid.
  std::vector<SamplePath> target_paths;
  target_paths.reserve(cfg.targets.size());
  const Vec origin = Vec::Zero(cfg.system.dim());
  for (const auto& t : cfg.targets) {
    SamplePath g = integrate_skeleton(limit, t, origin);
    target_paths.push_back(g.cells() == cfg.output_cells
                               ? g
                               : g.resampled(cfg.output_cells));
  }

  const int per_seed =
      (cfg.windows - i0 + 1) * static_cast<int>(cfg.targets.size());
  LilReport report;
  report.mode = "recurrence";
  report.burn_in = i0;
  report.rows.assign(cfg.seeds.size() * static_cast<std::size_t>(per_seed),
                     LilRow{});

  parallel_over_seeds(cfg, cfg.seeds.size(), [&](std::size_t s) {
    const SeedTrajectory traj = solve_seed(cfg, grid, cfg.seeds[s]);
    std::size_t slot = s * static_cast<std::size_t>(per_seed);
    for (int i = i0; i <= cfg.windows; ++i) {
      const double u = std::pow(cfg.ratio, i);
      SamplePath xi = extract_rescaled(traj.flow, u, cfg.output_cells);
      const double endpoint = xi.node(xi.cells()).norm();
      for (std::size_t t = 0; t < cfg.targets.size(); ++t) {
        LilRow& row = report.rows[slot++];
        row.seed = cfg.seeds[s];
        row.i = i;
        row.u = u;
        row.dist_theta = kNaN;
        row.endpoint_norm = endpoint;
        row.gamma = kNaN;
        row.target_id = static_cast<int>(t);
        row.dist_target = sup_distance(xi, target_paths[t]);
      }
    }
  });

  report.target_hit_fraction.assign(cfg.targets.size(), 0.0);
  for (std::size_t t = 0; t < cfg.targets.size(); ++t) {
    int hits = 0;
    for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& r : report.rows) {
        if (r.seed == cfg.seeds[s] && r.target_id == static_cast<int>(t)) {
          best = std::min(best, r.dist_target);
        }
      }
      if (best < cfg.rho) ++hits;
    }
    report.target_hit_fraction[t] =
        static_cast<double>(hits) / static_cast<double>(cfg.seeds.size());
  }
  fill_window_aggregates(report, cfg, i0);
  return report;
}

LilReport gamma_stat(const LilConfig& cfg) {
  validate(cfg);
  const int i0 = resolve_burn_in(cfg);
  const GeometricGrid grid(cfg.ratio, cfg.windows, cfg.delta);
  const int per_seed = cfg.windows - i0 + 1;

  LilReport report;
  report.mode = "gamma";
  report.burn_in = i0;
  report.rows.assign(cfg.seeds.size() * static_cast<std::size_t>(per_seed),
                     LilRow{});

  parallel_over_seeds(cfg, cfg.seeds.size(), [&](std::size_t s) {
    const SeedTrajectory traj = solve_seed(cfg, grid, cfg.seeds[s]);
    for (int i = i0; i <= cfg.windows; ++i) {
      const double ui = std::pow(cfg.ratio, i);
      SamplePath xi_top = extract_rescaled(traj.flow, ui, cfg.output_cells);
      const double phi_top = phi(ui);

      double gamma = 0.0;
      for (int q = 0; q < cfg.subgrid; ++q) {
        const double expo =
            (i - 1) + static_cast<double>(q) / (cfg.subgrid - 1);
        const double u = std::pow(cfg.ratio, expo);
        SamplePath xi = extract_rescaled(traj.flow, u, cfg.output_cells);
        const double factor = phi_top / phi(u);
        gamma = std::max(gamma, sup_distance(xi, xi_top.scaled(factor)));
      }

      LilRow& row =
          report.rows[s * static_cast<std::size_t>(per_seed) + (i - i0)];
      row.seed = cfg.seeds[s];
      row.i = i;
      row.u = ui;
      row.dist_theta = kNaN;
      row.endpoint_norm = xi_top.node(xi_top.cells()).norm();
      row.gamma = gamma;
      row.target_id = -1;
      row.dist_target = kNaN;
    }
  });

  fill_window_aggregates(report, cfg, i0);
  return report;
}

LilReport lemma25_scan(const LilConfig& cfg, const std::vector<double>& scan) {
  validate(cfg);
  if (scan.empty()) {
    throw DomainError("the scan needs at least one scale");
  }
  const GeometricGrid grid(cfg.ratio, cfg.windows, cfg.delta);
  for (double u : scan) {
    if (!(u > min_scale()) || u > grid.horizon() * (1.0 + 1e-12)) {
      throw DomainError("scan scale " + std::to_string(u) +
                        " outside (e, horizon]");
    }
  }
  const FieldSystem& limit = cfg.system.limit();

  LilReport report;
  report.mode = "scan";
  report.burn_in = resolve_burn_in(cfg);
  report.rows.assign(cfg.seeds.size() * scan.size(), LilRow{});

  parallel_over_seeds(cfg, cfg.seeds.size(), [&](std::size_t s) {
    const SeedTrajectory traj = solve_seed(cfg, grid, cfg.seeds[s]);
    for (std::size_t q = 0; q < scan.size(); ++q) {
      SamplePath xi = extract_rescaled(traj.flow, scan[q], cfg.output_cells);
      ThetaQuery query = dist_to_theta(limit, xi, cfg.dist_options);

      LilRow& row = report.rows[s * scan.size() + q];
      row.seed = cfg.seeds[s];
      row.i = static_cast<int>(q);
      row.u = scan[q];
      row.dist_theta = query.distance;
      row.endpoint_norm = xi.node(xi.cells()).norm();
      row.gamma = kNaN;
      row.target_id = -1;
      row.dist_target = kNaN;
    }
  });
  return report;
}

}  // namespace lilab
