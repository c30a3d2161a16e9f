#pragma once

#include <vector>

#include "lilab/coefficient_system.hpp"
#include "lilab/initial_condition.hpp"
#include "lilab/sample_path.hpp"
#include "lilab/wiener_path.hpp"

namespace lilab {

// State trajectory on the (generally non-uniform) time grid of the driver.
struct FlowPath {
  std::vector<double> times;
  Mat states;  // times.size() x d

  int dim() const { return static_cast<int>(states.cols()); }
  Vec at(double t) const;
  double sup_norm() const;
};

enum class Scheme {
  // Predictor-corrector (trapezoidal) step, consistent with the
  // Stratonovich reading of the equation.
  kHeunStratonovich,
  // Explicit Euler on the equivalent Ito form; drift gains the correction
  // (noise_scale^2 / 2) sum_j (dAj) Aj.
  kItoEuler,
};

struct SolveOptions {
  Scheme scheme = Scheme::kHeunStratonovich;
  // Multiplier applied to every noise increment (the rescaled dynamics use
  // 1 / sqrt(L(u))).
  double noise_scale = 1.0;
  double blowup_norm = 1e12;
};

// Integrates dX = A0(X) dt + sum_j Aj(X) o dW^j along the driver, stepping
// cell by cell and cutting the last cell at the horizon.  Throws
// NumericalError on blow-up and DomainError when the driver is too short.
FlowPath solve_flow(const FieldSystem& sys, const DrivingPath& noise,
                    const Vec& x0, double horizon,
                    const SolveOptions& opts = {});

// Realizes the (possibly path-dependent) starting point from the same path
// that drives the equation, then integrates.
FlowPath solve_anticipating(const CoefficientSystem& sys,
                            const WienerPath& path,
                            const InitialConditionSpec& init, double horizon,
                            const SolveOptions& opts = {});

// xi^u on the uniform output grid: xi^u(t) = X(u t) / phi(u), sampled at
// t = i/m from an already computed trajectory covering [0, u].
SamplePath extract_rescaled(const FlowPath& flow, double u, int cells);

// Route A: solve in real time up to u, then rescale the trajectory.
SamplePath rescaled_solution(const CoefficientSystem& sys,
                             const WienerPath& path,
                             const InitialConditionSpec& init, double u,
                             int cells, const SolveOptions& opts = {});

// Route B: rescale the coefficients and the driver first, then solve on
// [0, 1] with a uniform step matching the grid resolution.  Agrees with
// route A up to the discretization error of the two schemes.
SamplePath rescaled_solution_direct(const CoefficientSystem& sys,
                                    const WienerPath& path,
                                    const InitialConditionSpec& init, double u,
                                    int cells, const SolveOptions& opts = {});

}  // namespace lilab
