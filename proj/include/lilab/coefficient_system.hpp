#pragma once

#include <optional>
#include <vector>

#include "lilab/vector_field.hpp"

namespace lilab {

// Drift field A0 together with k diffusion fields A1..Ak, all on R^d.
class FieldSystem {
 public:
  FieldSystem(VectorField drift, std::vector<VectorField> diffusion);

  int dim() const { return drift_.dim(); }
  int noise_dim() const { return static_cast<int>(diffusion_.size()); }

  const VectorField& drift() const { return drift_; }
  const VectorField& diffusion(int j) const { return diffusion_[j]; }
  const std::vector<VectorField>& diffusions() const { return diffusion_; }

 private:
  VectorField drift_;
  std::vector<VectorField> diffusion_;
};

// The limit fields may be declared directly; no generating pre-limit system
// has to be exhibited for them.
using LimitSystem = FieldSystem;

// Driving coefficients of the equation, optionally paired with the limit
// fields they are supposed to approach under rescaling.
class CoefficientSystem {
 public:
  explicit CoefficientSystem(FieldSystem fields)
      : fields_(std::move(fields)) {}
  CoefficientSystem(FieldSystem fields, LimitSystem limit);

  int dim() const { return fields_.dim(); }
  int noise_dim() const { return fields_.noise_dim(); }

  const FieldSystem& fields() const { return fields_; }
  bool has_limit() const { return limit_.has_value(); }
  const LimitSystem& limit() const;

 private:
  FieldSystem fields_;
  std::optional<LimitSystem> limit_;
};

// Drift of the equivalent Ito form: B = A0 + (1/2) sum_j (dAj) Aj.
VectorField ito_drift(const FieldSystem& sys);
inline VectorField ito_drift(const CoefficientSystem& sys) {
  return ito_drift(sys.fields());
}

// Coefficients of the equation satisfied by the rescaled process
// z_s = x_{u s} / phi(u).  The drift admits two algebraically equal forms;
// both are exposed so they can be checked against each other.
class RescaledSystem {
 public:
  RescaledSystem(const CoefficientSystem& base, double u);

  double u() const { return u_; }
  double phi_u() const { return phi_u_; }
  double loglog_u() const { return loglog_u_; }
  // Multiplier 1 / sqrt(L(u)) applied to the noise in the rescaled equation.
  double noise_scale() const { return noise_scale_; }

  // Rescaled drift and diffusions, drift in the direct form
  // (u / phi(u)) A0(phi(u) z).
  const FieldSystem& fields() const { return fields_; }

  Vec drift_simplified(const Vec& z) const;
  // Same drift written through the Ito form: the Ito correction of the base
  // system is added inside B and subtracted again term by term.
  Vec drift_bracket(const Vec& z) const;

  // Jacobians of the rescaled fields: phi(u) dAj(phi(u) z) for the
  // diffusions and u dA0(phi(u) z) for the drift.
  Mat diffusion_jacobian(int j, const Vec& z) const;
  Mat drift_jacobian(const Vec& z) const;

 private:
  CoefficientSystem base_;
  double u_;
  double phi_u_;
  double loglog_u_;
  double noise_scale_;
  FieldSystem fields_;
};

// Throws DomainError when u <= e.
RescaledSystem rescale(const CoefficientSystem& sys, double u);

}  // namespace lilab
