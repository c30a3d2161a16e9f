#include "lilab/control.hpp"

#include <cmath>
#include <random>

#include "lilab/errors.hpp"

namespace lilab {

Control::Control(Mat rates) : rates_(std::move(rates)) {
  if (rates_.rows() < 1 || rates_.cols() < 1) {
    throw DomainError("a control needs at least one cell and one component");
  }
}

double Control::energy() const {
  return 0.5 * rates_.squaredNorm() / static_cast<double>(cells());
}

Mat Control::path() const {
  Mat f(cells() + 1, noise_dim());
  f.row(0).setZero();
  const double h = 1.0 / cells();
  for (int c = 0; c < cells(); ++c) {
    f.row(c + 1) = f.row(c) + h * rates_.row(c);
  }
  return f;
}

Control Control::zero(int cells, int noise_dim) {
  return Control(Mat::Zero(cells, noise_dim));
}

Control Control::random(int cells, int noise_dim, double energy,
                        std::uint64_t seed) {
  if (!(energy >= 0.0)) {
    throw DomainError("control energy must be nonnegative");
  }
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat rates(cells, noise_dim);
  for (int c = 0; c < cells; ++c) {
    for (int j = 0; j < noise_dim; ++j) rates(c, j) = normal(gen);
  }
  Control out(std::move(rates));
  const double e = out.energy();
  if (e > 0.0 && energy > 0.0) {
    out.rates() *= std::sqrt(energy / e);
  } else if (energy == 0.0) {
    out.rates().setZero();
  }
  return out;
}

Control Control::refined(int factor) const {
  if (factor < 1) {
    throw DomainError("refinement factor must be positive");
  }
  Mat rates(cells() * factor, noise_dim());
  for (int c = 0; c < cells(); ++c) {
    for (int r = 0; r < factor; ++r) {
      rates.row(c * factor + r) = rates_.row(c);
    }
  }
  return Control(std::move(rates));
}

}  // namespace lilab
