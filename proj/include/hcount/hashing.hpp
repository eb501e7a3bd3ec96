#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "hcount/pattern.hpp"

namespace hcount {

// Field used by every hash family: p = 2^61 - 1.
inline constexpr std::uint64_t kFieldPrime = (std::uint64_t{1} << 61) - 1;

inline std::uint64_t mul_mod_prime(std::uint64_t a, std::uint64_t b) noexcept {
  const unsigned __int128 z = static_cast<unsigned __int128>(a) * b;
  std::uint64_t r = (static_cast<std::uint64_t>(z) & kFieldPrime) +
                    static_cast<std::uint64_t>(z >> 61);
  if (r >= kFieldPrime) r -= kFieldPrime;
  return r;
}

inline std::uint64_t add_mod_prime(std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t r = a + b;
  if (r >= kFieldPrime) r -= kFieldPrime;
  return r;
}

// Polynomial hash of degree w-1 over F_p with uniformly drawn coefficients;
// a w-wise independent family. Output is reduced into {0, ..., range-1}.
struct KWiseHash {
  std::vector<std::uint64_t> coefficients;  // c_0 .. c_{w-1}
  std::uint64_t range = 1;

  std::size_t independence() const noexcept { return coefficients.size(); }

  // Key must be < kFieldPrime (checked at parse time for stream input).
  std::uint64_t operator()(std::uint64_t key) const noexcept {
    std::uint64_t acc = 0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
      acc = add_mod_prime(mul_mod_prime(acc, key), *it);
    }
    return acc % range;
  }

  // Evaluates keys.size() <= 8 keys with interleaved Horner chains; same
  // results as calling operator() per key.
  void eval_batch(std::span<const std::uint64_t> keys, std::uint64_t* out) const noexcept {
    std::array<std::uint64_t, 8> acc{};
    const std::size_t n = keys.size();
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
      for (std::size_t i = 0; i < n; ++i) acc[i] = add_mod_prime(mul_mod_prime(acc[i], keys[i]), *it);
    }
    for (std::size_t i = 0; i < n; ++i) out[i] = acc[i] % range;
  }

  bool operator==(const KWiseHash&) const = default;
};

inline std::uint64_t eval_hash(const KWiseHash& h, std::uint64_t key) noexcept { return h(key); }

// All randomness of one estimator copy: Q = exp(2*pi*i*q_exponent/tau), one
// X_c hash per pattern vertex (range deg(c), 2tk-wise), and the Y hash
// (range t, 4k-wise) whose output i stands for Y = 2^i.
struct RandomBasis {
  std::uint64_t seed = 0;
  Fingerprint profile_fingerprint{};
  std::uint64_t q_exponent = 0;
  std::vector<KWiseHash> x_hashes;  // indexed by pattern vertex index
  KWiseHash y_hash;

  bool operator==(const RandomBasis&) const = default;
};

// Pure function of (profile, seed). Coefficients come from a counter-mode
// expansion of (seed, fingerprint) with disjoint domains for Q, Y and each X_c.
RandomBasis derive_basis(const PatternProfile& profile, std::uint64_t seed);

// Exponent x with X_c(v) = exp(2*pi*i*x/deg(c)); c is a pattern vertex id.
std::uint64_t x_exponent(const PatternProfile& profile, const RandomBasis& basis, VertexId c,
                         VertexId v);

// Same, addressed by pattern vertex index. No bounds check.
inline std::uint64_t x_exponent_at(const RandomBasis& basis, std::size_t c_index, VertexId v) {
  const KWiseHash& h = basis.x_hashes[c_index];
  return h.range == 1 ? 0 : h(v);
}

// Y(v) as the power of two it denotes.
inline std::uint64_t y_value(const RandomBasis& basis, VertexId v) {
  return std::uint64_t{1} << basis.y_hash(v);
}

namespace prf {

std::uint64_t mix64(std::uint64_t z) noexcept;

// Keyed counter-mode stream; draw(domain, counter) is a pure function.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, const Fingerprint& fp) noexcept;
  std::uint64_t draw(std::uint64_t domain, std::uint64_t counter) const noexcept;

 private:
  std::uint64_t key_;
};

}  // namespace prf

}  // namespace hcount
