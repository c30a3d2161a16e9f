#include "lilab/scale.hpp"

#include <cmath>
#include <string>

#include "lilab/errors.hpp"

namespace lilab {

double min_scale() { return std::exp(1.0); }

double loglog(double u) {
  if (!(u > min_scale())) {
    throw DomainError("scale u = " + std::to_string(u) +
                      " is out of domain: scales must exceed e");
  }
  return std::log(std::log(u));
}

double phi(double u) { return std::sqrt(u * loglog(u)); }

}  // namespace lilab
