#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lilab/errors.hpp"
#include "lilab/families.hpp"
#include "lilab/lil_lab.hpp"
#include "lilab/sample_path.hpp"
#include "lilab/scale.hpp"
#include "lilab/wiener_path.hpp"

using lilab::CoefficientSystem;
using lilab::Control;
using lilab::FieldSystem;
using lilab::InitialConditionSpec;
using lilab::LilConfig;
using lilab::LilReport;
using lilab::Mat;
using lilab::Vec;

namespace {

CoefficientSystem brownian() {
  FieldSystem f(lilab::make_field("zero", {}, 1),
                {lilab::make_field("constant", {1.0}, 1)});
  return CoefficientSystem(f, f);
}

CoefficientSystem frozen() {
  FieldSystem f(lilab::make_field("zero", {}, 1),
                {lilab::make_field("zero", {}, 1)});
  return CoefficientSystem(f, f);
}

LilConfig small_config(CoefficientSystem sys) {
  LilConfig cfg(std::move(sys),
                InitialConditionSpec::point(Vec::Zero(1)));
  cfg.windows = 6;
  cfg.delta = 0.01;
  cfg.output_cells = 32;
  cfg.seeds = {1, 2};
  cfg.threads = 1;
  cfg.dist_options.cells = 16;
  cfg.dist_options.substeps = 1;
  cfg.dist_options.iters_per_stage = 60;
  cfg.dist_options.random_starts = 0;
  return cfg;
}

bool rows_equal(const LilReport& a, const LilReport& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const auto& x = a.rows[i];
    const auto& y = b.rows[i];
    const auto same = [](double p, double q) {
      return (std::isnan(p) && std::isnan(q)) || p == q;
    };
    if (x.seed != y.seed || x.i != y.i || x.u != y.u ||
        x.target_id != y.target_id || !same(x.dist_theta, y.dist_theta) ||
        !same(x.endpoint_norm, y.endpoint_norm) || !same(x.gamma, y.gamma) ||
        !same(x.dist_target, y.dist_target)) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("burn-in skips windows without loglog mass") {
  CHECK(lilab::auto_burn_in(2.0) == 5);   // 2^4 = 16 > e^e
  CHECK(lilab::auto_burn_in(3.0) == 4);   // 3^3 = 27
  CHECK(lilab::auto_burn_in(16.0) == 2);
  CHECK(lilab::auto_burn_in(20.0) == 2);
  CHECK_THROWS_AS(lilab::auto_burn_in(1.0), lilab::DomainError);
}

TEST_CASE("a frozen system sits exactly on the limit set") {
  LilConfig cfg = small_config(frozen());
  const LilReport r = run_convergence(cfg);

  CHECK(r.mode == "convergence");
  CHECK(r.burn_in == 5);
  REQUIRE(r.rows.size() == 2 * 2);  // 2 seeds x windows {5, 6}
  for (const auto& row : r.rows) {
    CHECK(row.dist_theta == 0.0);
    CHECK(row.endpoint_norm == 0.0);
    CHECK(std::isnan(row.gamma));
    CHECK(row.target_id == -1);
  }
  REQUIRE(r.index == std::vector<int>{5, 6});
  CHECK(r.median_dist == std::vector<double>{0.0, 0.0});
  CHECK(r.min_dist == std::vector<double>{0.0, 0.0});
  CHECK(r.exceed_count == std::vector<int>{0, 0});
}

TEST_CASE("row layout walks seeds then windows") {
  LilConfig cfg = small_config(frozen());
  cfg.seeds = {7, 9, 11};
  const LilReport r = run_convergence(cfg);
  REQUIRE(r.rows.size() == 6);
  CHECK(r.rows[0].seed == 7);
  CHECK(r.rows[0].i == 5);
  CHECK(r.rows[1].seed == 7);
  CHECK(r.rows[1].i == 6);
  CHECK(r.rows[2].seed == 9);
  CHECK(r.rows[5].seed == 11);
  for (const auto& row : r.rows) {
    CHECK(row.u == std::pow(2.0, row.i));
  }
}

TEST_CASE("repeated runs are identical") {
  LilConfig cfg = small_config(brownian());
  const LilReport a = run_convergence(cfg);
  const LilReport b = run_convergence(cfg);
  CHECK(rows_equal(a, b));
}

TEST_CASE("threading does not change the result") {
  LilConfig cfg = small_config(brownian());
  cfg.seeds = {1, 2, 3, 4, 5};
  cfg.subgrid = 4;
  LilConfig cfg4 = cfg;
  cfg4.threads = 4;
  CHECK(rows_equal(gamma_stat(cfg), gamma_stat(cfg4)));
}

TEST_CASE("window aggregates summarize the rows") {
  LilConfig cfg = small_config(brownian());
  cfg.seeds = {1, 2, 3};
  cfg.rho = 0.25;
  const LilReport r = run_convergence(cfg);

  REQUIRE(r.index == std::vector<int>{5, 6});
  for (std::size_t w = 0; w < r.index.size(); ++w) {
    std::vector<double> d;
    for (const auto& row : r.rows) {
      if (row.i == r.index[w]) d.push_back(row.dist_theta);
    }
    REQUIRE(d.size() == 3);
    std::sort(d.begin(), d.end());
    CHECK(r.median_dist[w] == d[1]);
    CHECK(r.min_dist[w] == d[0]);
    int exceed = 0;
    for (double v : d) {
      if (v > cfg.rho) ++exceed;
    }
    CHECK(r.exceed_count[w] == exceed);
  }
}

TEST_CASE("gamma statistic matches direct path arithmetic") {
  LilConfig cfg = small_config(brownian());
  cfg.windows = 7;
  cfg.seeds = {3, 4};
  cfg.subgrid = 4;
  const LilReport r = gamma_stat(cfg);
  CHECK(r.mode == "gamma");

  const lilab::GeometricGrid grid(cfg.ratio, cfg.windows, cfg.delta);
  for (const auto& row : r.rows) {
    const lilab::WienerPath w =
        lilab::WienerPath::sample(grid, 1, row.seed);
    const double ui = row.u;
    const double phi_top = lilab::phi(ui);
    double want = 0.0;
    for (int q = 0; q < cfg.subgrid; ++q) {
      const double expo =
          (row.i - 1) + static_cast<double>(q) / (cfg.subgrid - 1);
      const double u = std::pow(cfg.ratio, expo);
      const double phi_u = lilab::phi(u);
      double sup = 0.0;
      for (int n = 0; n <= cfg.output_cells; ++n) {
        const double t = static_cast<double>(n) / cfg.output_cells;
        const double a = w.at(u * t)(0) / phi_u;
        const double b = (phi_top / phi_u) * (w.at(ui * t)(0) / phi_top);
        sup = std::max(sup, std::abs(a - b));
      }
      want = std::max(want, sup);
    }
    CHECK(std::abs(row.gamma - want) <= 1e-10);
    CHECK(std::isnan(row.dist_theta));
    CHECK(std::isnan(row.dist_target));
  }
}

TEST_CASE("recurrence distances match a hand computation") {
  LilConfig cfg = small_config(brownian());
  cfg.targets.push_back(Control::zero(16, 1));
  cfg.targets.push_back(Control(Mat::Constant(16, 1, 0.5)));
  const LilReport r = run_recurrence(cfg);

  CHECK(r.mode == "recurrence");
  REQUIRE(r.rows.size() == 2 * 2 * 2);  // seeds x windows x targets
  REQUIRE(r.target_hit_fraction.size() == 2);

  const lilab::GeometricGrid grid(cfg.ratio, cfg.windows, cfg.delta);
  for (const auto& row : r.rows) {
    const lilab::WienerPath w =
        lilab::WienerPath::sample(grid, 1, row.seed);
    const double phi_u = lilab::phi(row.u);
    const double slope = row.target_id == 0 ? 0.0 : 0.5;
    double want = 0.0;
    for (int n = 0; n <= cfg.output_cells; ++n) {
      const double t = static_cast<double>(n) / cfg.output_cells;
      want = std::max(want,
                      std::abs(w.at(row.u * t)(0) / phi_u - slope * t));
    }
    CHECK(std::abs(row.dist_target - want) <= 1e-10);
  }
}

TEST_CASE("a frozen system hits the zero target at every window") {
  LilConfig cfg = small_config(frozen());
  cfg.targets.push_back(Control::zero(16, 1));
  const LilReport r = run_recurrence(cfg);
  for (const auto& row : r.rows) CHECK(row.dist_target == 0.0);
  CHECK(r.target_hit_fraction == std::vector<double>{1.0});
}

TEST_CASE("recurrence rejects targets at or above unit energy") {
  LilConfig cfg = small_config(brownian());
  cfg.targets.push_back(Control(Mat::Constant(16, 1, 1.5)));  // energy 1.125
  CHECK_THROWS_AS(run_recurrence(cfg), lilab::DomainError);
}

TEST_CASE("recurrence needs a target") {
  LilConfig cfg = small_config(brownian());
  CHECK_THROWS_AS(run_recurrence(cfg), lilab::DomainError);
}

TEST_CASE("scan evaluates caller chosen scales") {
  LilConfig cfg = small_config(brownian());
  cfg.seeds = {1};
  const LilReport scan = lemma25_scan(cfg, {20.0, 32.0, 50.0});
  CHECK(scan.mode == "scan");
  REQUIRE(scan.rows.size() == 3);
  CHECK(scan.rows[0].u == 20.0);
  CHECK(scan.rows[0].i == 0);
  CHECK(scan.rows[2].i == 2);

  // The ladder scale 32 = 2^5 appears in the convergence run too.
  const LilReport conv = run_convergence(cfg);
  double ladder = -1.0;
  for (const auto& row : conv.rows) {
    if (row.i == 5) ladder = row.dist_theta;
  }
  CHECK(scan.rows[1].dist_theta == ladder);
}

TEST_CASE("scan validates its scales") {
  LilConfig cfg = small_config(brownian());
  CHECK_THROWS_AS(lemma25_scan(cfg, {}), lilab::DomainError);
  CHECK_THROWS_AS(lemma25_scan(cfg, {2.0}), lilab::DomainError);
  CHECK_THROWS_AS(lemma25_scan(cfg, {200.0}), lilab::DomainError);
}

TEST_CASE("lab configuration is validated") {
  LilConfig cfg = small_config(brownian());
  cfg.seeds.clear();
  CHECK_THROWS_AS(run_convergence(cfg), lilab::DomainError);

  LilConfig few = small_config(brownian());
  few.windows = 3;  // burn-in resolves to 5
  CHECK_THROWS_AS(run_convergence(few), lilab::DomainError);

  LilConfig sub = small_config(brownian());
  sub.subgrid = 1;
  CHECK_THROWS_AS(gamma_stat(sub), lilab::DomainError);

  LilConfig burn = small_config(brownian());
  burn.burn_in = 1;  // 2^0 = 1 < e
  CHECK_THROWS_AS(run_convergence(burn), lilab::DomainError);
}
