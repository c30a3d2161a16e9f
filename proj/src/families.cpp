#include "lilab/families.hpp"

#include <cmath>
#include <string>

#include "lilab/errors.hpp"

namespace lilab {

namespace {

void require_params(const std::string& family, std::size_t got,
                    std::size_t want) {
  if (got != want) {
    throw ConfigError("field family '" + family + "' takes " +
                      std::to_string(want) + " parameter(s), got " +
                      std::to_string(got));
  }
}

Vec param_vector(const std::string& family, const std::vector<double>& params,
                 int dim) {
  require_params(family, params.size(), static_cast<std::size_t>(dim));
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = params[static_cast<std::size_t>(i)];
  return v;
}

}  // namespace

VectorField make_field(const std::string& family,
                       const std::vector<double>& params, int dim) {
  if (dim < 1) {
    throw ConfigError("field dimension must be positive");
  }

  if (family == "zero") {
    require_params(family, params.size(), 0);
    VectorField f(
        dim, [](const Vec& x, Vec& out) { out.setZero(x.size()); },
        [](const Vec& x, Mat& out) { out.setZero(x.size(), x.size()); });
    f.set_sup_bound(0.0);
    return f;
  }

  if (family == "constant") {
    Vec v = param_vector(family, params, dim);
    VectorField f(
        dim, [v](const Vec&, Vec& out) { out = v; },
        [](const Vec& x, Mat& out) { out.setZero(x.size(), x.size()); });
    f.set_sup_bound(v.norm());
    return f;
  }

  if (family == "linear") {
    require_params(family, params.size(), 1);
    const double s = params[0];
    return VectorField(
        dim, [s](const Vec& x, Vec& out) { out = s * x; },
        [s](const Vec& x, Mat& out) {
          out = s * Mat::Identity(x.size(), x.size());
        });
  }

  if (family == "sine") {
    require_params(family, params.size(), 2);
    const double a = params[0];
    const double b = params[1];
    VectorField f(
        dim,
        [a, b](const Vec& x, Vec& out) {
          out = a * (b * x.array()).sin().matrix();
        },
        [a, b](const Vec& x, Mat& out) {
          out.setZero(x.size(), x.size());
          out.diagonal() = a * b * (b * x.array()).cos().matrix();
        });
    f.set_sup_bound(std::abs(a) * std::sqrt(static_cast<double>(dim)));
    return f;
  }

  if (family == "tanh") {
    require_params(family, params.size(), 2);
    const double a = params[0];
    const double b = params[1];
    VectorField f(
        dim,
        [a, b](const Vec& x, Vec& out) {
          out = a * (b * x.array()).tanh().matrix();
        },
        [a, b](const Vec& x, Mat& out) {
          out.setZero(x.size(), x.size());
          Eigen::ArrayXd t = (b * x.array()).tanh();
          out.diagonal() = (a * b * (1.0 - t * t)).matrix();
        });
    f.set_sup_bound(std::abs(a) * std::sqrt(static_cast<double>(dim)));
    return f;
  }

  if (family == "sign") {
    require_params(family, params.size(), 1);
    const double a = params[0];
    VectorField f(
        dim,
        [a](const Vec& x, Vec& out) {
          out.resize(x.size());
          for (Eigen::Index i = 0; i < x.size(); ++i) {
            out[i] = x[i] < 0.0 ? -a : a;
          }
        },
        [](const Vec& x, Mat& out) { out.setZero(x.size(), x.size()); });
    f.set_sup_bound(std::abs(a) * std::sqrt(static_cast<double>(dim)));
    return f;
  }

  if (family == "radial_saturating") {
    Vec v = param_vector(family, params, dim);
    VectorField f(
        dim,
        [v](const Vec& x, Vec& out) {
          const double r = x.norm();
          out = (r / (1.0 + r)) * v;
        },
        [v](const Vec& x, Mat& out) {
          const double r = x.norm();
          if (r == 0.0) {
            out.setZero(x.size(), x.size());
            return;
          }
          const double g = 1.0 / (r * (1.0 + r) * (1.0 + r));
          out.noalias() = g * (v * x.transpose());
        });
    f.set_sup_bound(v.norm());
    return f;
  }

  throw ConfigError("unknown field family '" + family + "'");
}

const std::vector<std::string>& field_families() {
  static const std::vector<std::string> names = {
      "zero",  "constant", "linear",           "sine",
      "tanh",  "sign",     "radial_saturating"};
  return names;
}

}  // namespace lilab
