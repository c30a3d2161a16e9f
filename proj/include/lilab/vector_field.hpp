#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <utility>

namespace lilab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// A smooth vector field on R^d with an optional analytic Jacobian and an
// optional a-priori sup bound on its euclidean norm.  Evaluation closures
// must be pure; all accessors are const and safe to call concurrently.
class VectorField {
 public:
  using Eval = std::function<void(const Vec&, Vec&)>;
  using Jac = std::function<void(const Vec&, Mat&)>;

  VectorField(int dim, Eval eval) : dim_(dim), eval_(std::move(eval)) {}
  VectorField(int dim, Eval eval, Jac jac)
      : dim_(dim), eval_(std::move(eval)), jac_(std::move(jac)) {}

  // Wraps an allocating functor x -> A(x).
  template <typename F>
  static VectorField map(int dim, F f) {
    return VectorField(dim,
                       [f = std::move(f)](const Vec& x, Vec& out) { out = f(x); });
  }
  template <typename F, typename G>
  static VectorField map(int dim, F f, G g) {
    return VectorField(
        dim, [f = std::move(f)](const Vec& x, Vec& out) { out = f(x); },
        [g = std::move(g)](const Vec& x, Mat& out) { out = g(x); });
  }

  int dim() const { return dim_; }

  void eval(const Vec& x, Vec& out) const { eval_(x, out); }
  Vec operator()(const Vec& x) const {
    Vec out(dim_);
    eval_(x, out);
    return out;
  }

  bool has_analytic_jacobian() const { return static_cast<bool>(jac_); }

  void jacobian(const Vec& x, Mat& out) const {
    if (jac_) {
      jac_(x, out);
    } else {
      fd_jacobian(eval_, x, out);
    }
  }
  Mat jacobian(const Vec& x) const {
    Mat out(dim_, dim_);
    jacobian(x, out);
    return out;
  }

  std::optional<double> sup_bound() const { return sup_bound_; }
  void set_sup_bound(double bound) { sup_bound_ = bound; }

  // Central differences, step 1e-6 * (1 + |x_j|) per coordinate.
  static void fd_jacobian(const Eval& eval, const Vec& x, Mat& out);

 private:
  int dim_;
  Eval eval_;
  Jac jac_;
  std::optional<double> sup_bound_;
};

}  // namespace lilab
