#include "lilab/sample_path.hpp"

#include <cmath>
#include <string>

#include "lilab/errors.hpp"

namespace lilab {

SamplePath::SamplePath(Mat values) : values_(std::move(values)) {
  if (values_.rows() < 2 || values_.cols() < 1) {
    throw DomainError("a sample path needs at least two nodes");
  }
}

Vec SamplePath::at(double t) const {
  if (!(t >= 0.0) || !(t <= 1.0)) {
    throw DomainError("sample paths live on [0, 1], got t = " +
                      std::to_string(t));
  }
  const double pos = t * cells();
  const int lo = std::min(static_cast<int>(pos), cells() - 1);
  const double w = pos - lo;
  return values_.row(lo) * (1.0 - w) + values_.row(lo + 1) * w;
}

double SamplePath::sup_norm() const {
  double best = 0.0;
  for (Eigen::Index i = 0; i < values_.rows(); ++i) {
    best = std::max(best, values_.row(i).norm());
  }
  return best;
}

SamplePath SamplePath::resampled(int cells) const {
  if (cells < 1) {
    throw DomainError("a sample path needs at least one cell");
  }
  Mat out(cells + 1, dim());
  for (int i = 0; i <= cells; ++i) {
    out.row(i) = at(static_cast<double>(i) / cells);
  }
  return SamplePath(std::move(out));
}

SamplePath SamplePath::scaled(double factor) const {
  return SamplePath(factor * values_);
}

SamplePath SamplePath::zero(int cells, int dim) {
  return SamplePath(Mat::Zero(cells + 1, dim));
}

SamplePath SamplePath::line(int cells, const Vec& slope) {
  Mat out(cells + 1, slope.size());
  for (int i = 0; i <= cells; ++i) {
    out.row(i) = (static_cast<double>(i) / cells) * slope.transpose();
  }
  return SamplePath(std::move(out));
}

double sup_distance(const SamplePath& a, const SamplePath& b) {
  if (a.cells() != b.cells() || a.dim() != b.dim()) {
    throw DomainError("sup distance needs matching grids: " +
                      std::to_string(a.cells()) + "x" +
                      std::to_string(a.dim()) + " vs " +
                      std::to_string(b.cells()) + "x" +
                      std::to_string(b.dim()));
  }
  double best = 0.0;
  for (Eigen::Index i = 0; i < a.values().rows(); ++i) {
    best = std::max(best, (a.values().row(i) - b.values().row(i)).norm());
  }
  return best;
}

}  // namespace lilab
