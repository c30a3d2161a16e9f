#include "lilab/flow_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lilab/errors.hpp"
#include "lilab/scale.hpp"

namespace lilab {

namespace {

Vec interpolate(const std::vector<double>& times, const Mat& values,
                double t) {
  if (!(t >= times.front()) || !(t <= times.back() * (1.0 + 1e-12))) {
    throw DomainError("time " + std::to_string(t) +
                      " outside the solved span");
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

void check_state(const Vec& x, double t, double blowup) {
  if (!x.allFinite() || x.norm() > blowup) {
    throw NumericalError("trajectory blow-up near t = " + std::to_string(t));
  }
}

}  // namespace

Vec FlowPath::at(double t) const { return interpolate(times, states, t); }

double FlowPath::sup_norm() const {
  double best = 0.0;
  for (Eigen::Index i = 0; i < states.rows(); ++i) {
    best = std::max(best, states.row(i).norm());
  }
  return best;
}

FlowPath solve_flow(const FieldSystem& sys, const DrivingPath& noise,
                    const Vec& x0, double horizon, const SolveOptions& opts) {
  if (x0.size() != sys.dim()) {
    throw DomainError("initial state dimension mismatch");
  }
  if (sys.noise_dim() != noise.noise_dim()) {
    throw DomainError("driver has " + std::to_string(noise.noise_dim()) +
                      " components, system expects " +
                      std::to_string(sys.noise_dim()));
  }
  if (!(horizon > 0.0)) {
    throw DomainError("horizon must be positive");
  }
  if (horizon > noise.horizon() * (1.0 + 1e-12)) {
    throw DomainError("driver ends at " + std::to_string(noise.horizon()) +
                      ", before the requested horizon " +
                      std::to_string(horizon));
  }

  const int d = sys.dim();
  const int k = sys.noise_dim();
  const double kappa = opts.noise_scale;

  std::size_t cells = 0;
  while (cells + 1 < noise.times.size() &&
         noise.times[cells] < horizon * (1.0 - 1e-15)) {
    ++cells;
  }

  FlowPath out;
  out.times.reserve(cells + 1);
  out.states.resize(static_cast<Eigen::Index>(cells) + 1, d);

  Vec x = x0;
  out.times.push_back(0.0);
  out.states.row(0) = x;
  check_state(x, 0.0, opts.blowup_norm);

  Vec drift0(d), drift1(d), xbar(d), incr(d), a(d);
  Mat diff0(d, k), jac(d, d);

  for (std::size_t c = 0; c < cells; ++c) {
    const double t0 = noise.times[c];
    const double t1 = std::min(noise.times[c + 1], horizon);
    const double h = t1 - t0;
    const double cell_span = noise.times[c + 1] - noise.times[c];
    const double frac = cell_span > 0.0 ? h / cell_span : 0.0;
    Vec dw = kappa * frac *
             (noise.values.row(c + 1) - noise.values.row(c)).transpose();

    if (opts.scheme == Scheme::kHeunStratonovich) {
      sys.drift().eval(x, drift0);
      for (int j = 0; j < k; ++j) {
        sys.diffusion(j).eval(x, a);
        diff0.col(j) = a;
      }
      xbar = x + h * drift0 + diff0 * dw;
      sys.drift().eval(xbar, drift1);
      incr = 0.5 * h * (drift0 + drift1) + 0.5 * (diff0 * dw);
      for (int j = 0; j < k; ++j) {
        sys.diffusion(j).eval(xbar, a);
        incr += 0.5 * dw[j] * a;
      }
      x += incr;
    } else {
      sys.drift().eval(x, drift0);
      incr = h * drift0;
      for (int j = 0; j < k; ++j) {
        sys.diffusion(j).eval(x, a);
        incr += dw[j] * a;
        sys.diffusion(j).jacobian(x, jac);
        incr.noalias() += (0.5 * kappa * kappa * h) * (jac * a);
      }
      x += incr;
    }

    check_state(x, t1, opts.blowup_norm);
    out.times.push_back(t1);
    out.states.row(static_cast<Eigen::Index>(c) + 1) = x;
    if (t1 >= horizon) {
      out.states.conservativeResize(static_cast<Eigen::Index>(c) + 2, d);
      break;
    }
  }
  if (out.times.back() < horizon * (1.0 - 1e-12)) {
    throw DomainError("driver grid did not reach the horizon");
  }
  out.states.conservativeResize(static_cast<Eigen::Index>(out.times.size()),
                                d);
  return out;
}

FlowPath solve_anticipating(const CoefficientSystem& sys,
                            const WienerPath& path,
                            const InitialConditionSpec& init, double horizon,
                            const SolveOptions& opts) {
  const Vec x0 = init.realize(path, sys.dim());
  return solve_flow(sys.fields(), path.driving(), x0, horizon, opts);
}

SamplePath extract_rescaled(const FlowPath& flow, double u, int cells) {
  const double phi_u = phi(u);
  Mat out(cells + 1, flow.dim());
  for (int i = 0; i <= cells; ++i) {
    const double t = u * (static_cast<double>(i) / cells);
    out.row(i) = flow.at(std::min(t, flow.times.back())) / phi_u;
  }
  return SamplePath(std::move(out));
}

SamplePath rescaled_solution(const CoefficientSystem& sys,
                             const WienerPath& path,
                             const InitialConditionSpec& init, double u,
                             int cells, const SolveOptions& opts) {
  FlowPath flow = solve_anticipating(sys, path, init, u, opts);
  return extract_rescaled(flow, u, cells);
}

SamplePath rescaled_solution_direct(const CoefficientSystem& sys,
                                    const WienerPath& path,
                                    const InitialConditionSpec& init, double u,
                                    int cells, const SolveOptions& opts) {
  RescaledSystem rs = rescale(sys, u);
  const std::size_t steps = static_cast<std::size_t>(
      std::ceil(1.0 / path.grid().delta() - 1e-12));
  DrivingPath driver = path.rescaled(u).uniform_resampled(steps);

  const Vec z0 = init.realize(path, sys.dim()) / rs.phi_u();

  SolveOptions inner = opts;
  inner.noise_scale = opts.noise_scale * rs.noise_scale();
  FlowPath flow = solve_flow(rs.fields(), driver, z0, 1.0, inner);

  Mat out(cells + 1, flow.dim());
  for (int i = 0; i <= cells; ++i) {
    out.row(i) = flow.at(static_cast<double>(i) / cells);
  }
  return SamplePath(std::move(out));
}

}  // namespace lilab
