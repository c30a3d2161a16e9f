#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lilab/errors.hpp"
#include "lilab/geometric_grid.hpp"
#include "lilab/wiener_path.hpp"

using lilab::DrivingPath;
using lilab::GeometricGrid;
using lilab::Mat;
using lilab::Vec;
using lilab::WienerPath;

TEST_CASE("sampling is deterministic in the seed") {
  GeometricGrid grid(2.0, 5, 0.02);
  const WienerPath a = WienerPath::sample(grid, 2, 77);
  const WienerPath b = WienerPath::sample(grid, 2, 77);
  const WienerPath c = WienerPath::sample(grid, 2, 78);
  CHECK(a.values() == b.values());
  CHECK(a.values() != c.values());
  CHECK(a.seed() == 77);
  CHECK(a.noise_dim() == 2);
}

TEST_CASE("paths start at zero") {
  GeometricGrid grid(2.0, 3, 0.1);
  const WienerPath w = WienerPath::sample(grid, 3, 5);
  CHECK(w.values().row(0).norm() == 0.0);
  CHECK(w.at(0.0).norm() == 0.0);
}

TEST_CASE("standardized increments have unit sample variance") {
  GeometricGrid grid(2.0, 12, 0.01);
  REQUIRE(grid.cell_count() == 1300);
  const WienerPath w = WienerPath::sample(grid, 2, 123);

  double sum = 0.0, sum_sq = 0.0;
  const std::size_t n = grid.cell_count() * 2;
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    const double root_h = std::sqrt(grid.cell_width(c));
    for (int j = 0; j < 2; ++j) {
      const double z =
          (w.values()(static_cast<Eigen::Index>(c) + 1, j) -
           w.values()(static_cast<Eigen::Index>(c), j)) /
          root_h;
      sum += z;
      sum_sq += z * z;
    }
  }
  const double mean = sum / static_cast<double>(n);
  const double var = sum_sq / static_cast<double>(n) - mean * mean;
  CHECK(std::abs(mean) < 0.1);   // 5 sigma at n = 2600
  CHECK(std::abs(var - 1.0) < 0.1);
}

TEST_CASE("extending the grid preserves the sampled prefix") {
  GeometricGrid small(2.0, 6, 0.01);
  GeometricGrid large(2.0, 12, 0.01);
  const WienerPath a = WienerPath::sample(small, 2, 9);
  const WienerPath b = WienerPath::sample(large, 2, 9);
  REQUIRE(small.node_count() == 701);
  CHECK(a.values() ==
        b.values().topRows(static_cast<Eigen::Index>(small.node_count())));
}

TEST_CASE("interpolation hits nodes exactly and is linear between them") {
  GeometricGrid grid(2.0, 2, 0.25);
  const WienerPath w = WienerPath::sample(grid, 1, 3);
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    CHECK(w.at(grid.node(i))(0) ==
          w.values()(static_cast<Eigen::Index>(i), 0));
  }
  const double mid = 0.5 * (grid.node(3) + grid.node(4));
  CHECK(w.at(mid)(0) ==
        doctest::Approx(0.5 * (w.values()(3, 0) + w.values()(4, 0)))
            .epsilon(1e-15));
  CHECK_THROWS_AS(w.at(-1.0), lilab::DomainError);
  CHECK_THROWS_AS(w.at(grid.horizon() + 1.0), lilab::DomainError);
}

TEST_CASE("driving path exposes the raw samples") {
  GeometricGrid grid(2.0, 2, 0.5);
  const WienerPath w = WienerPath::sample(grid, 2, 11);
  const DrivingPath d = w.driving();
  CHECK(d.times == grid.nodes());
  CHECK(d.values == w.values());
  CHECK(d.noise_dim() == 2);
  CHECK(d.horizon() == grid.horizon());
}

TEST_CASE("rescaled driver divides time by u and values by sqrt(u)") {
  GeometricGrid grid(2.0, 5, 0.01);
  const WienerPath w = WienerPath::sample(grid, 2, 21);
  const double u = 16.0;  // a window boundary, hence an exact node
  const DrivingPath r = w.rescaled(u);

  CHECK(r.times.front() == 0.0);
  CHECK(r.times.back() == 1.0);
  for (std::size_t i = 0; i + 1 < r.times.size(); ++i) {
    CHECK(r.times[i] < r.times[i + 1]);
    CHECK(r.times[i] == grid.node(i) / u);
  }
  // Values are the original samples shrunk by sqrt(u).
  const Eigen::Index rows = r.values.rows();
  for (Eigen::Index i = 0; i + 1 < rows; i += 37) {
    CHECK((r.values.row(i) * 4.0 - w.values().row(i)).norm() < 1e-14);
  }
  CHECK((r.values.row(rows - 1) * 4.0 - w.at(u).transpose()).norm() < 1e-14);

  // Interpolating the rescaled driver matches rescaling the interpolation.
  for (double s : {0.111, 0.5, 0.93}) {
    CHECK((r.at(s) - w.at(u * s) / 4.0).norm() < 1e-12);
  }
}

TEST_CASE("rescaled endpoint is standard normal across seeds") {
  GeometricGrid grid(2.0, 4, 0.05);
  const double u = grid.horizon();  // 16
  double sum = 0.0, sum_sq = 0.0;
  const int n = 4000;
  for (int seed = 1; seed <= n; ++seed) {
    const WienerPath w = WienerPath::sample(grid, 1, seed);
    const double z = w.rescaled(u).at(1.0)(0);
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.1);
  CHECK(std::abs(var - 1.0) < 0.15);
}

TEST_CASE("rescaling rejects scales outside (e, horizon]") {
  GeometricGrid grid(2.0, 3, 0.1);
  const WienerPath w = WienerPath::sample(grid, 1, 4);
  CHECK_THROWS_AS(w.rescaled(2.0), lilab::DomainError);
  CHECK_THROWS_AS(w.rescaled(8.1), lilab::DomainError);
  CHECK_NOTHROW(w.rescaled(8.0));
  CHECK_NOTHROW(w.rescaled(3.7));
}

TEST_CASE("uniform resampling interpolates the nodes") {
  DrivingPath p;
  p.times = {0.0, 0.5, 1.0};
  p.values = Mat(3, 1);
  p.values << 0.0, 1.0, 3.0;

  const DrivingPath r = p.uniform_resampled(4);
  REQUIRE(r.times.size() == 5);
  CHECK(r.times[1] == 0.25);
  CHECK(r.values(0, 0) == 0.0);
  CHECK(r.values(1, 0) == doctest::Approx(0.5));
  CHECK(r.values(2, 0) == doctest::Approx(1.0));  // original node kept
  CHECK(r.values(3, 0) == doctest::Approx(2.0));
  CHECK(r.values(4, 0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(p.uniform_resampled(0), lilab::DomainError);
}
