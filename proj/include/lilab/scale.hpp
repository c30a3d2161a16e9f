#pragma once

namespace lilab {

// Scale functions used throughout the rescaling machinery.  Both are defined
// only for u > e; smaller scales make log(log(u)) vanish or turn negative.

// Smallest admissible scale (exclusive): e = 2.71828...
double min_scale();

// L(u) = log(log(u)).  Throws DomainError when u <= e.
double loglog(double u);

// phi(u) = sqrt(u * log(log(u))).  Throws DomainError when u <= e.
double phi(double u);

}  // namespace lilab
