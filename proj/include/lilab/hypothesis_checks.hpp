#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lilab/coefficient_system.hpp"
#include "lilab/initial_condition.hpp"

namespace lilab {

// Axis-aligned compact box used as the test domain.
struct Box {
  Vec lo;
  Vec hi;
};

struct HEntry {
  double u = 0.0;
  int field = 0;  // 0 drift, 1..k diffusions
  double sup_dev = 0.0;
  double sup_dev_jacobian = 0.0;
  Vec witness;           // argmax of the value deviation
  Vec witness_jacobian;  // argmax of the Jacobian deviation
};

struct HReport {
  std::vector<HEntry> entries;  // ordered by (u, field)
  double tol = 0.0;
  bool pass = false;
  std::string detail;
};

// Compares the rescaled fields (and their Jacobians) against the declared
// limit fields over a grid on the box, at each scale.  Passes when, for
// every field, both deviations are non-increasing across scales and the
// final ones fall below tol.  Convergence is only ever claimed on the box
// that was actually scanned.
HReport check_hypothesis_H(const CoefficientSystem& sys, const Box& box,
                           const std::vector<double>& scales,
                           int points_per_axis, double tol);

struct CEntry {
  double u = 0.0;
  // log P(|X0| > delta phi(u)) / L(u); for "mc_underflow" entries this is
  // the resolution bound log(1/samples) / L(u), an upper bound.
  double estimate = 0.0;
  std::string method;  // "analytic", "mc", "mc_underflow"
};

struct CReport {
  std::vector<CEntry> entries;
  double delta = 0.0;
  bool pass = false;
  std::string detail;
};

// Tail decay diagnostic for the initial condition: the normalized log tail
// should fall along the scale ladder.  Analytic forms are used when the
// description provides them, Monte Carlo otherwise.
CReport check_condition_C(const InitialConditionSpec& init, int dim,
                          const std::vector<double>& scales, double delta,
                          std::int64_t mc_samples,
                          std::uint64_t mc_seed = 2718);

}  // namespace lilab
