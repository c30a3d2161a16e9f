#pragma once

#include <cstdint>

#include "lilab/vector_field.hpp"

namespace lilab {

// Piecewise constant control rate f-dot on the uniform grid over [0, 1]:
// row c holds the k rate components on cell [c/m, (c+1)/m).
class Control {
 public:
  explicit Control(Mat rates);

  int cells() const { return static_cast<int>(rates_.rows()); }
  int noise_dim() const { return static_cast<int>(rates_.cols()); }

  const Mat& rates() const { return rates_; }
  Mat& rates() { return rates_; }

  // (1/2) integral of |f-dot|^2 over [0, 1].
  double energy() const;

  // The control path f itself, f(0) = 0, at the m+1 cell boundaries.
  Mat path() const;

  static Control zero(int cells, int noise_dim);
  // Gaussian rates rescaled to the requested energy.
  static Control random(int cells, int noise_dim, double energy,
                        std::uint64_t seed);

  // Each cell split into `factor` equal cells with the same rate.
  Control refined(int factor) const;

 private:
  Mat rates_;
};

inline double energy(const Control& c) { return c.energy(); }

}  // namespace lilab
