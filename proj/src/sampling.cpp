#include "dfwer/sampling.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace dfwer {

namespace {
constexpr double kMinLogStart = -700.0;
}

std::int64_t sample_poisson(Philox4x32& rng, double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw std::invalid_argument("sample_poisson: bad mean");
  if (mean == 0.0) return 0;
  if (-mean < kMinLogStart) {
    std::poisson_distribution<std::int64_t> dist(mean);
    return dist(rng);
  }
  const double u = rng.uniform();
  double pmf = std::exp(-mean);
  double cdf = pmf;
  std::int64_t k = 0;
  // The cdf can stall just below 1 in floating point; stop once the remaining
  // mass is negligible.
  while (u > cdf) {
    ++k;
    pmf *= mean / static_cast<double>(k);
    cdf += pmf;
    if (pmf == 0.0 && static_cast<double>(k) > mean) break;
  }
  return k;
}

std::int64_t sample_binomial(Philox4x32& rng, std::int64_t n, double p) {
  if (n < 0 || !(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_binomial: bad parameters");
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  if (p > 0.5) return n - sample_binomial(rng, n, 1.0 - p);

  const double q = 1.0 - p;
  const double log_start = static_cast<double>(n) * std::log1p(-p);
  if (log_start < kMinLogStart) {
    std::binomial_distribution<std::int64_t> dist(n, p);
    return dist(rng);
  }
  const double ratio = p / q;
  const double u = rng.uniform();
  double pmf = std::exp(log_start);
  double cdf = pmf;
  std::int64_t k = 0;
  while (u > cdf && k < n) {
    ++k;
    pmf *= ratio * static_cast<double>(n - k + 1) / static_cast<double>(k);
    cdf += pmf;
  }
  return k;
}

}  // namespace dfwer
