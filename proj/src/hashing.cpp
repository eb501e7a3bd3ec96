#include "hcount/hashing.hpp"

#include <limits>

namespace hcount {

namespace prf {

std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CounterStream::CounterStream(std::uint64_t seed, const Fingerprint& fp) noexcept {
  std::uint64_t k = mix64(seed);
  for (std::size_t w = 0; w < 4; ++w) {
    std::uint64_t word = 0;
    for (std::size_t b = 0; b < 8; ++b) word |= std::uint64_t{fp[8 * w + b]} << (8 * b);
    k = mix64(k ^ word);
  }
  key_ = k;
}

std::uint64_t CounterStream::draw(std::uint64_t domain, std::uint64_t counter) const noexcept {
  return mix64(key_ ^ mix64((domain << 40) ^ counter));
}

}  // namespace prf

namespace {

enum Domain : std::uint64_t { kDomainQ = 0, kDomainY = 1, kDomainX = 2 };

class Drawer {
 public:
  Drawer(const prf::CounterStream& s, std::uint64_t domain) : stream_(s), domain_(domain) {}

  std::uint64_t next() { return stream_.draw(domain_, counter_++); }

  std::uint64_t field_element() {
    for (;;) {
      const std::uint64_t v = next() & kFieldPrime;
      if (v != kFieldPrime) return v;
    }
  }

  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    for (;;) {
      const std::uint64_t v = next();
      if (v < limit) return v % bound;
    }
  }

 private:
  const prf::CounterStream& stream_;
  std::uint64_t domain_;
  std::uint64_t counter_ = 0;
};

KWiseHash draw_hash(const prf::CounterStream& s, std::uint64_t domain, std::size_t w,
                    std::uint64_t range) {
  Drawer d(s, domain);
  KWiseHash h;
  h.range = range;
  h.coefficients.reserve(w);
  for (std::size_t i = 0; i < w; ++i) h.coefficients.push_back(d.field_element());
  return h;
}

}  // namespace

RandomBasis derive_basis(const PatternProfile& profile, std::uint64_t seed) {
  const prf::CounterStream stream(seed, profile.fingerprint);
  RandomBasis b;
  b.seed = seed;
  b.profile_fingerprint = profile.fingerprint;
  b.q_exponent = Drawer(stream, kDomainQ).below(profile.tau);

  const std::size_t x_independence = 2 * profile.t * profile.k;
  b.x_hashes.reserve(profile.t);
  for (std::size_t c = 0; c < profile.t; ++c) {
    const std::uint32_t deg = profile.degrees[c];
    // deg 1 means X_c is the constant first root of unity; no coefficients.
    b.x_hashes.push_back(deg == 1 ? KWiseHash{{0}, 1}
                                  : draw_hash(stream, kDomainX + c, x_independence, deg));
  }
  b.y_hash = draw_hash(stream, kDomainY, 4 * profile.k, profile.t);
  return b;
}

std::uint64_t x_exponent(const PatternProfile& profile, const RandomBasis& basis, VertexId c,
                         VertexId v) {
  return x_exponent_at(basis, profile.index_of(c), v);
}

}  // namespace hcount
