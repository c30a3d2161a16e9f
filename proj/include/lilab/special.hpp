#pragma once

#include <cstdint>

namespace lilab {

// log(erfc(x)), stable far into the tail where erfc underflows.
double log_erfc(double x);

// Deterministic 64-bit mix used to derive auxiliary random streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace lilab
