#include "lilab/skeleton.hpp"

#include <cmath>
#include <string>

#include "lilab/errors.hpp"

namespace lilab {

namespace {

// F(y) = A0(y) + sum_j fdot_j Aj(y)
void controlled_field(const FieldSystem& sys, const Vec& y, const Vec& fdot,
                      Vec& out, Vec& scratch) {
  sys.drift().eval(y, out);
  for (int j = 0; j < sys.noise_dim(); ++j) {
    sys.diffusion(j).eval(y, scratch);
    out += fdot[j] * scratch;
  }
}

// J(y) = dA0(y) + sum_j fdot_j dAj(y)
void controlled_jacobian(const FieldSystem& sys, const Vec& y, const Vec& fdot,
                         Mat& out, Mat& scratch) {
  sys.drift().jacobian(y, out);
  for (int j = 0; j < sys.noise_dim(); ++j) {
    sys.diffusion(j).jacobian(y, scratch);
    out += fdot[j] * scratch;
  }
}

}  // namespace

SamplePath integrate_skeleton(const FieldSystem& sys, const Control& control,
                              const Vec& x0, const SkeletonOptions& opts,
                              SkeletonTape* tape) {
  if (x0.size() != sys.dim()) {
    throw DomainError("initial state dimension mismatch");
  }
  if (control.noise_dim() != sys.noise_dim()) {
    throw DomainError("control has " + std::to_string(control.noise_dim()) +
                      " components, system expects " +
                      std::to_string(sys.noise_dim()));
  }
  if (opts.substeps < 1) {
    throw DomainError("substep count must be positive");
  }

  const int d = sys.dim();
  const int m = control.cells();
  const double h = 1.0 / (static_cast<double>(m) * opts.substeps);

  Mat nodes(m + 1, d);
  nodes.row(0) = x0;

  if (tape) {
    tape->cells = m;
    tape->substeps = opts.substeps;
    tape->dim = d;
    tape->stage_states.assign(
        static_cast<std::size_t>(m) * opts.substeps * 4, Vec());
  }

  Vec y = x0;
  Vec k1(d), k2(d), k3(d), k4(d), stage(d), scratch(d);
  for (int c = 0; c < m; ++c) {
    const Vec fdot = control.rates().row(c);
    for (int s = 0; s < opts.substeps; ++s) {
      const std::size_t base =
          (static_cast<std::size_t>(c) * opts.substeps + s) * 4;
      controlled_field(sys, y, fdot, k1, scratch);
      if (tape) tape->stage_states[base] = y;
      stage = y + (0.5 * h) * k1;
      controlled_field(sys, stage, fdot, k2, scratch);
      if (tape) tape->stage_states[base + 1] = stage;
      stage = y + (0.5 * h) * k2;
      controlled_field(sys, stage, fdot, k3, scratch);
      if (tape) tape->stage_states[base + 2] = stage;
      stage = y + h * k3;
      controlled_field(sys, stage, fdot, k4, scratch);
      if (tape) tape->stage_states[base + 3] = stage;
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!y.allFinite() || y.norm() > opts.blowup_norm) {
        throw NumericalError("skeleton blow-up near t = " +
                             std::to_string((c + 1.0) / m));
      }
    }
    nodes.row(c + 1) = y;
  }
  if (tape) tape->nodes = nodes;
  return SamplePath(std::move(nodes));
}

Mat skeleton_adjoint(const FieldSystem& sys, const Control& control,
                     const SkeletonTape& tape, const Mat& node_bar,
                     Vec* x0_bar) {
  const int d = tape.dim;
  const int m = tape.cells;
  if (node_bar.rows() != m + 1 || node_bar.cols() != d) {
    throw DomainError("node cotangent shape mismatch");
  }
  const double h = 1.0 / (static_cast<double>(m) * tape.substeps);

  Mat grad = Mat::Zero(m, control.noise_dim());
  Vec lambda = node_bar.row(m);

  Vec ak1(d), ak2(d), ak3(d), ak4(d), a(d), scratch(d);
  Vec v1(d), v2(d), v3(d), v4(d);
  Mat jac(d, d), jscratch(d, d);

  for (int c = m - 1; c >= 0; --c) {
    const Vec fdot = control.rates().row(c);
    for (int s = tape.substeps - 1; s >= 0; --s) {
      const Vec& y1 = tape.stage(c, s, 0);
      const Vec& y2 = tape.stage(c, s, 1);
      const Vec& y3 = tape.stage(c, s, 2);
      const Vec& y4 = tape.stage(c, s, 3);
      a = lambda;

      ak4 = (h / 6.0) * a;
      controlled_jacobian(sys, y4, fdot, jac, jscratch);
      v4.noalias() = jac.transpose() * ak4;
      ak3 = (h / 3.0) * a + h * v4;
      controlled_jacobian(sys, y3, fdot, jac, jscratch);
      v3.noalias() = jac.transpose() * ak3;
      ak2 = (h / 3.0) * a + 0.5 * h * v3;
      controlled_jacobian(sys, y2, fdot, jac, jscratch);
      v2.noalias() = jac.transpose() * ak2;
      ak1 = (h / 6.0) * a + 0.5 * h * v2;
      controlled_jacobian(sys, y1, fdot, jac, jscratch);
      v1.noalias() = jac.transpose() * ak1;

      for (int j = 0; j < control.noise_dim(); ++j) {
        double g = 0.0;
        sys.diffusion(j).eval(y1, scratch);
        g += scratch.dot(ak1);
        sys.diffusion(j).eval(y2, scratch);
        g += scratch.dot(ak2);
        sys.diffusion(j).eval(y3, scratch);
        g += scratch.dot(ak3);
        sys.diffusion(j).eval(y4, scratch);
        g += scratch.dot(ak4);
        grad(c, j) += g;
      }

      lambda = a + v1 + v2 + v3 + v4;
    }
    lambda += node_bar.row(c).transpose();
  }
  if (x0_bar) *x0_bar = lambda;
  return grad;
}

}  // namespace lilab
