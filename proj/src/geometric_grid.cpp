#include "lilab/geometric_grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lilab/errors.hpp"

namespace lilab {

namespace {

std::size_t cells_for(double span, double delta) {
  return static_cast<std::size_t>(std::ceil(span / delta - 1e-12));
}

}  // namespace

GeometricGrid::GeometricGrid(double ratio, int windows, double delta)
    : ratio_(ratio), windows_(windows), delta_(delta) {
  if (!(ratio > 1.0)) {
    throw DomainError("grid ratio must exceed 1, got " + std::to_string(ratio));
  }
  if (windows < 1) {
    throw DomainError("grid needs at least one window, got " +
                      std::to_string(windows));
  }
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw DomainError("grid resolution must lie in (0, 1), got " +
                      std::to_string(delta));
  }

  const std::size_t base_cells = cells_for(1.0, delta);
  const std::size_t window_cells = cells_for(ratio - 1.0, delta);

  window_first_cell_.reserve(static_cast<std::size_t>(windows) + 1);
  nodes_.reserve(base_cells + static_cast<std::size_t>(windows) * window_cells +
                 1);

  window_first_cell_.push_back(0);
  nodes_.push_back(0.0);
  for (std::size_t j = 1; j < base_cells; ++j) {
    nodes_.push_back(static_cast<double>(j) / static_cast<double>(base_cells));
  }
  nodes_.push_back(1.0);

  for (int w = 1; w <= windows; ++w) {
    const double lo = std::pow(ratio, w - 1);
    const double hi = std::pow(ratio, w);
    window_first_cell_.push_back(nodes_.size() - 1);
    const double width = (hi - lo) / static_cast<double>(window_cells);
    for (std::size_t j = 1; j < window_cells; ++j) {
      nodes_.push_back(lo + static_cast<double>(j) * width);
    }
    nodes_.push_back(hi);  // boundary kept exact
  }
}

double GeometricGrid::window_boundary(int i) const {
  if (i < 0 || i > windows_) {
    throw DomainError("window index " + std::to_string(i) + " out of range");
  }
  return nodes_[boundary_node(i)];
}

std::size_t GeometricGrid::boundary_node(int i) const {
  if (i < 0 || i > windows_) {
    throw DomainError("window index " + std::to_string(i) + " out of range");
  }
  if (i == windows_) return nodes_.size() - 1;
  return window_first_cell_[static_cast<std::size_t>(i) + 1];
}

int GeometricGrid::window_of_cell(std::size_t cell) const {
  if (cell >= cell_count()) {
    throw DomainError("cell index out of range");
  }
  auto it = std::upper_bound(window_first_cell_.begin(),
                             window_first_cell_.end(), cell);
  return static_cast<int>(it - window_first_cell_.begin()) - 1;
}

std::size_t GeometricGrid::cells_in_window(int i) const {
  if (i < 0 || i > windows_) {
    throw DomainError("window index " + std::to_string(i) + " out of range");
  }
  const std::size_t first = window_first_cell_[static_cast<std::size_t>(i)];
  const std::size_t next = (i == windows_) ? cell_count()
                                           : window_first_cell_[i + 1];
  return next - first;
}

std::size_t GeometricGrid::locate(double t) const {
  if (!(t >= 0.0) || !(t <= horizon())) {
    throw DomainError("time " + std::to_string(t) + " outside [0, " +
                      std::to_string(horizon()) + "]");
  }
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
  std::size_t idx = static_cast<std::size_t>(it - nodes_.begin());
  if (idx == 0) return 0;
  if (idx > cell_count()) return cell_count() - 1;
  return idx - 1;
}

GeometricGrid build_grid(double ratio, int windows, double delta) {
  return GeometricGrid(ratio, windows, delta);
}

}  // namespace lilab
