#include "hcount/roots.hpp"

#include <cmath>
#include <numbers>

namespace hcount {

std::complex<double> unit_root(std::uint64_t exponent, std::uint64_t modulus) {
  const std::uint64_t e = exponent % modulus;
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(e) /
                       static_cast<double>(modulus);
  const double re = std::nearbyint(std::cos(angle) * kTermGridScale) / kTermGridScale;
  const double im = std::nearbyint(std::sin(angle) * kTermGridScale) / kTermGridScale;
  return {re, im};
}

}  // namespace hcount
