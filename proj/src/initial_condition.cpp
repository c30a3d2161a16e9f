#include "lilab/initial_condition.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "lilab/errors.hpp"
#include "lilab/special.hpp"

namespace lilab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::uint64_t kGaussianSalt = 0x67617573;
constexpr std::uint64_t kCauchySalt = 0x63617563;

}  // namespace

InitialConditionSpec InitialConditionSpec::point(Vec x0) {
  InitialConditionSpec s(Kind::kPoint);
  s.point_ = std::move(x0);
  return s;
}

InitialConditionSpec InitialConditionSpec::wiener_endpoint() {
  return InitialConditionSpec(Kind::kWienerEndpoint);
}

InitialConditionSpec InitialConditionSpec::running_max(int coordinate) {
  InitialConditionSpec s(Kind::kRunningMax);
  s.coordinate_ = coordinate;
  return s;
}

InitialConditionSpec InitialConditionSpec::gaussian(double sigma) {
  if (!(sigma > 0.0)) {
    throw DomainError("gaussian initial condition needs sigma > 0");
  }
  InitialConditionSpec s(Kind::kGaussian);
  s.sigma_ = sigma;
  return s;
}

InitialConditionSpec InitialConditionSpec::cauchy(double scale) {
  if (!(scale > 0.0)) {
    throw DomainError("cauchy initial condition needs a positive scale");
  }
  InitialConditionSpec s(Kind::kCauchy);
  s.scale_ = scale;
  return s;
}

InitialConditionSpec InitialConditionSpec::bounded(double bound) const {
  if (!(bound > 0.0)) {
    throw DomainError("initial condition bound must be positive");
  }
  InitialConditionSpec s(*this);
  s.clip_ = bound;
  return s;
}

std::string InitialConditionSpec::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::kPoint: {
      os << "point[";
      for (Eigen::Index i = 0; i < point_.size(); ++i) {
        if (i) os << ",";
        os << point_[i];
      }
      os << "]";
      break;
    }
    case Kind::kWienerEndpoint:
      os << "wiener_endpoint";
      break;
    case Kind::kRunningMax:
      os << "running_max[" << coordinate_ << "]";
      break;
    case Kind::kGaussian:
      os << "gaussian[" << sigma_ << "]";
      break;
    case Kind::kCauchy:
      os << "cauchy[" << scale_ << "]";
      break;
  }
  if (clip_) os << " clipped at " << *clip_;
  return os.str();
}

Vec InitialConditionSpec::realize(const WienerPath& path, int dim) const {
  Vec x(dim);
  switch (kind_) {
    case Kind::kPoint: {
      if (point_.size() != dim) {
        throw DomainError("point initial condition has dimension " +
                          std::to_string(point_.size()) + ", state needs " +
                          std::to_string(dim));
      }
      x = point_;
      break;
    }
    case Kind::kWienerEndpoint: {
      if (dim > path.noise_dim()) {
        throw DomainError(
            "wiener_endpoint initial condition needs state dimension <= "
            "noise dimension");
      }
      x = path.at(1.0).head(dim);
      break;
    }
    case Kind::kRunningMax: {
      if (coordinate_ < 0 || coordinate_ >= path.noise_dim()) {
        throw DomainError("running_max coordinate out of range");
      }
      const std::size_t last = path.grid().boundary_node(0);
      double m = 0.0;
      for (std::size_t i = 0; i <= last; ++i) {
        m = std::max(m, path.values()(static_cast<Eigen::Index>(i),
                                      coordinate_));
      }
      x.setConstant(m);
      break;
    }
    case Kind::kGaussian: {
      std::mt19937_64 gen(mix_seed(path.seed(), kGaussianSalt));
      std::normal_distribution<double> normal(0.0, sigma_);
      for (int i = 0; i < dim; ++i) x[i] = normal(gen);
      break;
    }
    case Kind::kCauchy: {
      std::mt19937_64 gen(mix_seed(path.seed(), kCauchySalt));
      std::cauchy_distribution<double> cauchy(0.0, scale_);
      for (int i = 0; i < dim; ++i) x[i] = cauchy(gen);
      break;
    }
  }
  if (clip_) {
    const double r = x.norm();
    if (r > *clip_) x *= *clip_ / r;
  }
  return x;
}

std::optional<double> InitialConditionSpec::log_tail(double a, int dim) const {
  if (a < 0.0) return 0.0;
  if (clip_ && a >= *clip_) return kNegInf;
  const double root2 = std::sqrt(2.0);
  switch (kind_) {
    case Kind::kPoint:
      return point_.norm() > a ? 0.0 : kNegInf;
    case Kind::kWienerEndpoint:
      if (dim == 1) return log_erfc(a / root2);
      return std::nullopt;
    case Kind::kRunningMax: {
      // Reflection: P(max_{[0,1]} W > m) = 2 P(W_1 > m) = erfc(m / sqrt 2).
      const double m = a / std::sqrt(static_cast<double>(dim));
      return log_erfc(m / root2);
    }
    case Kind::kGaussian:
      if (dim == 1) return log_erfc(a / (sigma_ * root2));
      return std::nullopt;
    case Kind::kCauchy:
      if (dim == 1) {
        if (a == 0.0) return 0.0;
        return std::log((2.0 / M_PI) * std::atan(scale_ / a));
      }
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<double> InitialConditionSpec::hard_bound(int dim) const {
  (void)dim;
  if (kind_ == Kind::kPoint) {
    const double r = point_.norm();
    return clip_ ? std::min(r, *clip_) : r;
  }
  return clip_;
}

double InitialConditionSpec::sample_norm(int dim, std::mt19937_64& gen) const {
  double v = 0.0;
  switch (kind_) {
    case Kind::kPoint:
      v = point_.norm();
      break;
    case Kind::kWienerEndpoint: {
      std::normal_distribution<double> normal(0.0, 1.0);
      double s = 0.0;
      for (int i = 0; i < dim; ++i) {
        const double z = normal(gen);
        s += z * z;
      }
      v = std::sqrt(s);
      break;
    }
    case Kind::kRunningMax: {
      // 1024-step walk over [0, 1]; resolution bias is negligible next to
      // the tails this feeds into.
      constexpr int kSteps = 1024;
      std::normal_distribution<double> normal(0.0, 1.0);
      const double root_h = std::sqrt(1.0 / kSteps);
      double w = 0.0, m = 0.0;
      for (int i = 0; i < kSteps; ++i) {
        w += root_h * normal(gen);
        m = std::max(m, w);
      }
      v = m * std::sqrt(static_cast<double>(dim));
      break;
    }
    case Kind::kGaussian: {
      std::normal_distribution<double> normal(0.0, sigma_);
      double s = 0.0;
      for (int i = 0; i < dim; ++i) {
        const double z = normal(gen);
        s += z * z;
      }
      v = std::sqrt(s);
      break;
    }
    case Kind::kCauchy: {
      std::cauchy_distribution<double> cauchy(0.0, scale_);
      double s = 0.0;
      for (int i = 0; i < dim; ++i) {
        const double z = cauchy(gen);
        s += z * z;
      }
      v = std::sqrt(s);
      break;
    }
  }
  if (clip_) v = std::min(v, *clip_);
  return v;
}

}  // namespace lilab
