#pragma once

#include <string>
#include <vector>

#include "lilab/vector_field.hpp"

namespace lilab {

// Named field families constructible from configs.
//
//   zero                          A(x) = 0
//   constant v1..vd               A(x) = v
//   linear s                      A(x) = s x
//   sine a b                      A_i(x) = a sin(b x_i)
//   tanh a b                      A_i(x) = a tanh(b x_i)
//   sign a                        A_i(x) = a sign(x_i), sign(0) = 1
//   radial_saturating v1..vd      A(x) = v |x| / (1 + |x|)
//
// All carry analytic Jacobians; the bounded ones carry sup bounds.
VectorField make_field(const std::string& family,
                       const std::vector<double>& params, int dim);

const std::vector<std::string>& field_families();

}  // namespace lilab
