#pragma once

#include <vector>

#include "lilab/coefficient_system.hpp"
#include "lilab/control.hpp"
#include "lilab/sample_path.hpp"

namespace lilab {

struct SkeletonOptions {
  // Runge-Kutta substeps per control cell.
  int substeps = 4;
  double blowup_norm = 1e12;
};

// Forward pass record used by the discrete adjoint: the four stage states of
// every Runge-Kutta substep, plus the node states.
struct SkeletonTape {
  int cells = 0;
  int substeps = 0;
  int dim = 0;
  std::vector<Vec> stage_states;  // ((cell * substeps + sub) * 4 + stage)
  Mat nodes;                      // (cells + 1) x dim

  const Vec& stage(int cell, int sub, int s) const {
    return stage_states[static_cast<std::size_t>(
        ((cell * substeps) + sub) * 4 + s)];
  }
};

// Integrates the controlled ODE g' = A0(g) + sum_j Aj(g) fdot_j with the
// classical fourth order Runge-Kutta scheme, fdot frozen per cell.  Returns
// the path at the control cell boundaries.
SamplePath integrate_skeleton(const FieldSystem& sys, const Control& control,
                              const Vec& x0, const SkeletonOptions& opts = {},
                              SkeletonTape* tape = nullptr);

// Reverse sweep of the same scheme.  node_bar holds the objective cotangent
// of every path node; returns the gradient with respect to the control rates
// and, optionally, the cotangent of the initial state.
Mat skeleton_adjoint(const FieldSystem& sys, const Control& control,
                     const SkeletonTape& tape, const Mat& node_bar,
                     Vec* x0_bar = nullptr);

}  // namespace lilab
