#include "lilab/wiener_path.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "lilab/errors.hpp"
#include "lilab/scale.hpp"

namespace lilab {

namespace {

Vec interpolate(const std::vector<double>& times, const Mat& values,
                double t) {
  if (!(t >= times.front()) || !(t <= times.back())) {
    throw DomainError("time " + std::to_string(t) + " outside [" +
                      std::to_string(times.front()) + ", " +
                      std::to_string(times.back()) + "]");
  }
  auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return values.row(0);
  if (it == times.end()) return values.row(values.rows() - 1);
  const std::size_t hi = static_cast<std::size_t>(it - times.begin());
  const std::size_t lo = hi - 1;
  const double span = times[hi] - times[lo];
  const double w = span > 0.0 ? (t - times[lo]) / span : 0.0;
  return values.row(lo) * (1.0 - w) + values.row(hi) * w;
}

}  // namespace

Vec DrivingPath::at(double t) const { return interpolate(times, values, t); }

DrivingPath DrivingPath::uniform_resampled(std::size_t cells) const {
  if (cells == 0) {
    throw DomainError("resampling needs at least one cell");
  }
  DrivingPath out;
  out.times.resize(cells + 1);
  out.values.resize(static_cast<Eigen::Index>(cells) + 1, values.cols());
  const double h = horizon() / static_cast<double>(cells);
  for (std::size_t i = 0; i <= cells; ++i) {
    const double t = (i == cells) ? horizon() : static_cast<double>(i) * h;
    out.times[i] = t;
    out.values.row(static_cast<Eigen::Index>(i)) = at(t);
  }
  return out;
}

WienerPath WienerPath::sample(const GeometricGrid& grid, int noise_dim,
                              std::uint64_t seed) {
  if (noise_dim < 1) {
    throw DomainError("noise dimension must be positive");
  }
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Mat values(static_cast<Eigen::Index>(grid.node_count()), noise_dim);
  values.row(0).setZero();
  for (std::size_t cell = 0; cell < grid.cell_count(); ++cell) {
    const double scale = std::sqrt(grid.cell_width(cell));
    const Eigen::Index row = static_cast<Eigen::Index>(cell);
    for (int j = 0; j < noise_dim; ++j) {
      values(row + 1, j) = values(row, j) + scale * normal(gen);
    }
  }
  return WienerPath(std::make_shared<GeometricGrid>(grid), std::move(values),
                    seed);
}

Vec WienerPath::at(double t) const {
  return interpolate(grid_->nodes(), values_, t);
}

DrivingPath WienerPath::driving() const {
  DrivingPath out;
  out.times = grid_->nodes();
  out.values = values_;
  return out;
}

DrivingPath WienerPath::rescaled(double u) const {
  if (!(u > min_scale())) {
    throw DomainError("rescaling scale must exceed e, got " +
                      std::to_string(u));
  }
  const double horizon = grid_->horizon();
  if (u > horizon * (1.0 + 1e-12)) {
    throw DomainError("rescaling scale " + std::to_string(u) +
                      " exceeds the sampled horizon " +
                      std::to_string(horizon));
  }
  const double root_u = std::sqrt(u);
  const auto& nodes = grid_->nodes();

  DrivingPath out;
  out.times.reserve(nodes.size());
  std::size_t n = 0;
  while (n < nodes.size() && nodes[n] < u * (1.0 - 1e-15)) ++n;
  // nodes[0..n-1] lie strictly below u; close with s = 1 exactly.
  out.values.resize(static_cast<Eigen::Index>(n) + 1, values_.cols());
  for (std::size_t i = 0; i < n; ++i) {
    out.times.push_back(nodes[i] / u);
    out.values.row(static_cast<Eigen::Index>(i)) =
        values_.row(static_cast<Eigen::Index>(i)) / root_u;
  }
  out.times.push_back(1.0);
  out.values.row(static_cast<Eigen::Index>(n)) = at(std::min(u, horizon)) / root_u;
  return out;
}

}  // namespace lilab
