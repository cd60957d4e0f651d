#pragma once

#include <cstdint>

#include "dfwer/rng.hpp"

namespace dfwer {

// Inversion samplers. Each consumes a fixed, parameter-determined pattern of
// draws, so results depend only on the generator stream. Parameters whose
// starting probability would underflow fall back to the standard library.

std::int64_t sample_poisson(Philox4x32& rng, double mean);
std::int64_t sample_binomial(Philox4x32& rng, std::int64_t n, double p);

}  // namespace dfwer
