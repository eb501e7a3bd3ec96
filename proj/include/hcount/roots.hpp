#pragma once

#include <complex>
#include <cstdint>

namespace hcount {

// Term values are snapped to a 2^-32 grid so that sums of up to 2^20 of them
// are exact in double precision: insert/delete cancellation, merging and
// reordering then reproduce accumulators bit for bit.
inline constexpr double kTermGridScale = 4294967296.0;  // 2^32

// exp(2*pi*i*exponent/modulus), snapped to the term grid.
std::complex<double> unit_root(std::uint64_t exponent, std::uint64_t modulus);

}  // namespace hcount
