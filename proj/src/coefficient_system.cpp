#include "lilab/coefficient_system.hpp"

#include <string>
#include <utility>

#include "lilab/errors.hpp"
#include "lilab/scale.hpp"

namespace lilab {

FieldSystem::FieldSystem(VectorField drift, std::vector<VectorField> diffusion)
    : drift_(std::move(drift)), diffusion_(std::move(diffusion)) {
  if (diffusion_.empty()) {
    throw DomainError("a field system needs at least one diffusion field");
  }
  for (const auto& f : diffusion_) {
    if (f.dim() != drift_.dim()) {
      throw DomainError("field dimensions disagree: drift has dim " +
                        std::to_string(drift_.dim()) + ", a diffusion has dim " +
                        std::to_string(f.dim()));
    }
  }
}

CoefficientSystem::CoefficientSystem(FieldSystem fields, LimitSystem limit)
    : fields_(std::move(fields)), limit_(std::move(limit)) {
  if (limit_->dim() != fields_.dim() ||
      limit_->noise_dim() != fields_.noise_dim()) {
    throw DomainError("limit system shape does not match the coefficients");
  }
}

const LimitSystem& CoefficientSystem::limit() const {
  if (!limit_) {
    throw DomainError("no limit system was declared for this system");
  }
  return *limit_;
}

VectorField ito_drift(const FieldSystem& sys) {
  const int d = sys.dim();
  auto eval = [sys, d](const Vec& x, Vec& out) {
    sys.drift().eval(x, out);
    Vec a(d);
    Mat jac(d, d);
    for (int j = 0; j < sys.noise_dim(); ++j) {
      sys.diffusion(j).eval(x, a);
      sys.diffusion(j).jacobian(x, jac);
      out.noalias() += 0.5 * (jac * a);
    }
  };
  return VectorField(d, std::move(eval));
}

namespace {

FieldSystem build_rescaled_fields(const CoefficientSystem& base, double u,
                                  double phi_u) {
  const int d = base.dim();
  const double drift_factor = u / phi_u;

  VectorField drift(
      d,
      [f = base.fields().drift(), phi_u, drift_factor](const Vec& z, Vec& out) {
        f.eval(phi_u * z, out);
        out *= drift_factor;
      },
      [f = base.fields().drift(), phi_u, u](const Vec& z, Mat& out) {
        f.jacobian(phi_u * z, out);
        out *= u;
      });
  if (auto b = base.fields().drift().sup_bound()) {
    drift.set_sup_bound(drift_factor * *b);
  }

  std::vector<VectorField> diffusion;
  diffusion.reserve(static_cast<std::size_t>(base.noise_dim()));
  for (int j = 0; j < base.noise_dim(); ++j) {
    VectorField g(
        d,
        [f = base.fields().diffusion(j), phi_u](const Vec& z, Vec& out) {
          f.eval(phi_u * z, out);
        },
        [f = base.fields().diffusion(j), phi_u](const Vec& z, Mat& out) {
          f.jacobian(phi_u * z, out);
          out *= phi_u;
        });
    if (auto b = base.fields().diffusion(j).sup_bound()) {
      g.set_sup_bound(*b);
    }
    diffusion.push_back(std::move(g));
  }
  return FieldSystem(std::move(drift), std::move(diffusion));
}

}  // namespace

RescaledSystem::RescaledSystem(const CoefficientSystem& base, double u)
    : base_(base),
      u_(u),
      phi_u_(phi(u)),
      loglog_u_(loglog(u)),
      noise_scale_(1.0 / std::sqrt(loglog(u))),
      fields_(build_rescaled_fields(base, u, phi_u_)) {}

Vec RescaledSystem::drift_simplified(const Vec& z) const {
  Vec out(base_.dim());
  fields_.drift().eval(z, out);
  return out;
}

Vec RescaledSystem::drift_bracket(const Vec& z) const {
  const int d = base_.dim();
  const Vec x = phi_u_ * z;
  Vec b = ito_drift(base_.fields())(x);

  Vec corr = Vec::Zero(d);
  Vec a(d);
  Mat jac(d, d);
  for (int j = 0; j < base_.noise_dim(); ++j) {
    base_.fields().diffusion(j).eval(x, a);
    base_.fields().diffusion(j).jacobian(x, jac);
    for (int l = 0; l < d; ++l) {
      for (int i = 0; i < d; ++i) {
        corr[i] += jac(i, l) * a[l];
      }
    }
  }
  return (u_ / phi_u_) * (b - 0.5 * corr);
}

Mat RescaledSystem::diffusion_jacobian(int j, const Vec& z) const {
  Mat out(base_.dim(), base_.dim());
  fields_.diffusion(j).jacobian(z, out);
  return out;
}

Mat RescaledSystem::drift_jacobian(const Vec& z) const {
  Mat out(base_.dim(), base_.dim());
  fields_.drift().jacobian(z, out);
  return out;
}

RescaledSystem rescale(const CoefficientSystem& sys, double u) {
  return RescaledSystem(sys, u);
}

}  // namespace lilab
