#include "lilab/vector_field.hpp"

#include <cmath>

namespace lilab {

void VectorField::fd_jacobian(const Eval& eval, const Vec& x, Mat& out) {
  const int d = static_cast<int>(x.size());
  out.resize(d, d);
  Vec xp = x;
  Vec fp(d), fm(d);
  for (int j = 0; j < d; ++j) {
    const double h = 1e-6 * (1.0 + std::abs(x[j]));
    const double xj = x[j];
    xp[j] = xj + h;
    eval(xp, fp);
    xp[j] = xj - h;
    eval(xp, fm);
    xp[j] = xj;
    out.col(j) = (fp - fm) / (2.0 * h);
  }
}

}  // namespace lilab
