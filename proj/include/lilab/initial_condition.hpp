#pragma once

#include <optional>
#include <random>
#include <string>

#include "lilab/vector_field.hpp"
#include "lilab/wiener_path.hpp"

namespace lilab {

// Describes the (possibly path-dependent) starting point of the flow.  The
// same description yields the realized value for a concrete path, analytic
// tail probabilities where a closed form exists, and Monte Carlo draws of
// |X0| as a fallback.
class InitialConditionSpec {
 public:
  enum class Kind { kPoint, kWienerEndpoint, kRunningMax, kGaussian, kCauchy };

  static InitialConditionSpec point(Vec x0);
  // First d coordinates of W at time 1; needs d <= noise dimension.
  static InitialConditionSpec wiener_endpoint();
  // max_{t in [0,1]} W^c_t, broadcast to every state coordinate.
  static InitialConditionSpec running_max(int coordinate = 0);
  // Coordinates iid N(0, sigma^2), drawn from an auxiliary stream derived
  // from the path seed (independent of the increments).
  static InitialConditionSpec gaussian(double sigma);
  // Coordinates iid Cauchy with the given scale, auxiliary stream as above.
  static InitialConditionSpec cauchy(double scale);

  // Copy with |X0| clamped radially to the given bound.
  InitialConditionSpec bounded(double bound) const;

  Kind kind() const { return kind_; }
  std::string describe() const;

  Vec realize(const WienerPath& path, int dim) const;

  // log P(|X0| > a) when a closed form is available, -inf when the event is
  // impossible, nullopt when only sampling is available.
  std::optional<double> log_tail(double a, int dim) const;

  // Almost sure bound on |X0| when one exists.
  std::optional<double> hard_bound(int dim) const;

  // One Monte Carlo draw of |X0|.
  double sample_norm(int dim, std::mt19937_64& gen) const;

 private:
  InitialConditionSpec(Kind kind) : kind_(kind) {}

  Kind kind_;
  Vec point_;
  int coordinate_ = 0;
  double sigma_ = 1.0;
  double scale_ = 1.0;
  std::optional<double> clip_;
};

}  // namespace lilab
