#pragma once

#include "lilab/vector_field.hpp"

namespace lilab {

// A d-dimensional path sampled on the uniform grid i/m, i = 0..m, over [0,1].
class SamplePath {
 public:
  explicit SamplePath(Mat values);

  int dim() const { return static_cast<int>(values_.cols()); }
  int cells() const { return static_cast<int>(values_.rows()) - 1; }
  double time(int i) const { return static_cast<double>(i) / cells(); }

  const Mat& values() const { return values_; }
  Mat& values() { return values_; }
  Vec node(int i) const { return values_.row(i); }
  Vec at(double t) const;

  double sup_norm() const;
  SamplePath resampled(int cells) const;
  SamplePath scaled(double factor) const;

  static SamplePath zero(int cells, int dim);
  // Path t -> t * slope.
  static SamplePath line(int cells, const Vec& slope);

 private:
  Mat values_;
};

// Maximum euclidean node distance; both paths must share the grid and the
// dimension.
double sup_distance(const SamplePath& a, const SamplePath& b);

}  // namespace lilab
