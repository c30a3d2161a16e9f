#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "lilab/geometric_grid.hpp"
#include "lilab/vector_field.hpp"

namespace lilab {

// A k-dimensional piecewise linear driver on [0, horizon]: node times plus
// the path values at those nodes.  Solvers consume the increments between
// consecutive nodes.
struct DrivingPath {
  std::vector<double> times;  // ascending, starts at 0
  Mat values;                 // times.size() x k

  int noise_dim() const { return static_cast<int>(values.cols()); }
  double horizon() const { return times.back(); }

  // Linear interpolation; throws DomainError outside [0, horizon].
  Vec at(double t) const;

  // Resampled onto a uniform grid with the given cell count over the same
  // horizon.  Node values are interpolated, so refinements of the original
  // grid keep every original node exactly.
  DrivingPath uniform_resampled(std::size_t cells) const;
};

// A Wiener path sampled once on a geometric grid.  Sampling walks the cells
// in time order with one generator, so extending the grid by more windows
// leaves the shared prefix of the path unchanged for the same seed.
class WienerPath {
 public:
  static WienerPath sample(const GeometricGrid& grid, int noise_dim,
                           std::uint64_t seed);

  const GeometricGrid& grid() const { return *grid_; }
  int noise_dim() const { return static_cast<int>(values_.cols()); }
  std::uint64_t seed() const { return seed_; }

  // Path values at the grid nodes, row i at grid.node(i).
  const Mat& values() const { return values_; }
  Vec at(double t) const;

  // Full path as a driver for the flow solver.
  DrivingPath driving() const;

  // The scaled driver s -> W(u s) / sqrt(u) on [0, 1], again a standard
  // Wiener path in law.  Requires e < u <= horizon.
  DrivingPath rescaled(double u) const;

 private:
  WienerPath(std::shared_ptr<const GeometricGrid> grid, Mat values,
             std::uint64_t seed)
      : grid_(std::move(grid)), values_(std::move(values)), seed_(seed) {}

  std::shared_ptr<const GeometricGrid> grid_;
  Mat values_;
  std::uint64_t seed_;
};

inline WienerPath sample_path(const GeometricGrid& grid, int noise_dim,
                              std::uint64_t seed) {
  return WienerPath::sample(grid, noise_dim, seed);
}

inline DrivingPath rescaled_increments(const WienerPath& path, double u) {
  return path.rescaled(u);
}

}  // namespace lilab
