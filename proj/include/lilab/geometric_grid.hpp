#pragma once

#include <cstddef>
#include <vector>

namespace lilab {

// Multiresolution time grid on [0, c^N].
//
// Window 0 covers [0, 1] with ceil(1/delta) equal cells.  Window i >= 1
// covers [c^(i-1), c^i] with ceil((c-1)/delta) equal cells, so the step
// inside window i is proportional to c^(i-1): resolution delta in the time
// variable rescaled by any u up to the horizon.  Window boundaries c^i are
// exact grid nodes.
class GeometricGrid {
 public:
  GeometricGrid(double ratio, int windows, double delta);

  double ratio() const { return ratio_; }
  int windows() const { return windows_; }
  double delta() const { return delta_; }
  double horizon() const { return nodes_.back(); }

  std::size_t cell_count() const { return nodes_.size() - 1; }
  std::size_t node_count() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }

  double node(std::size_t i) const { return nodes_[i]; }
  double cell_width(std::size_t cell) const {
    return nodes_[cell + 1] - nodes_[cell];
  }

  // Boundary c^i for i in [0, windows]; always an exact node.
  double window_boundary(int i) const;
  std::size_t boundary_node(int i) const;

  int window_of_cell(std::size_t cell) const;
  std::size_t cells_in_window(int i) const;

  // Index of the cell whose closed span contains t (the last such cell when
  // t is a node).  Throws DomainError when t is outside [0, horizon].
  std::size_t locate(double t) const;

 private:
  double ratio_;
  int windows_;
  double delta_;
  std::vector<double> nodes_;
  std::vector<std::size_t> window_first_cell_;  // size windows_ + 1
};

GeometricGrid build_grid(double ratio, int windows, double delta);

}  // namespace lilab
