#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "hcount/hashing.hpp"
#include "hcount/pattern.hpp"
#include "hcount/wire.hpp"

namespace hcount {

// Hard ceiling on edge size; l! terms are summed per matching pattern edge.
inline constexpr std::size_t kMaxEdgeSize = 8;

// One signed turnstile update. Vertices are stored sorted.
class StreamEdge {
 public:
  // Throws EdgeTooLarge, DuplicateVertexInEdge, VertexIdOutOfRange, or
  // InvalidHypergraph (empty edge / bad sign).
  static StreamEdge make(int sign, std::vector<VertexId> vertices,
                         std::size_t max_edge_size = kMaxEdgeSize);
  static StreamEdge insert(std::vector<VertexId> vertices) { return make(+1, std::move(vertices)); }
  static StreamEdge remove(std::vector<VertexId> vertices) { return make(-1, std::move(vertices)); }

  int sign() const noexcept { return sign_; }
  const std::vector<VertexId>& vertices() const noexcept { return vertices_; }
  std::size_t size() const noexcept { return vertices_.size(); }

  StreamEdge negated() const { return StreamEdge(-sign_, vertices_); }
  bool operator==(const StreamEdge&) const = default;

 private:
  StreamEdge(int sign, std::vector<VertexId> v) : sign_(sign), vertices_(std::move(v)) {}
  int sign_ = 1;
  std::vector<VertexId> vertices_;
};

// All permutations of {0..l-1} in lexicographic order.
const std::vector<std::array<std::uint8_t, kMaxEdgeSize>>& permutations(std::size_t l);

// Exponent E in {0..D-1} with M_{e*}(u_1..u_l) = exp(2*pi*i*E/D), where the
// tuple is an oriented stream edge matched position by position against the
// oriented pattern edge.
std::uint64_t term_exponent(const PatternProfile& profile, const RandomBasis& basis,
                            std::size_t pattern_edge, std::span<const VertexId> oriented_tuple);

// Term evaluations per copy caused by one edge of the given size.
std::uint64_t terms_per_update(const PatternProfile& profile, std::size_t edge_size);

class Sketch {
 public:
  static constexpr std::uint16_t kFormatVersion = 1;

  Sketch(std::shared_ptr<const PatternProfile> profile, std::uint64_t seed);
  Sketch(std::shared_ptr<const PatternProfile> profile, RandomBasis basis);

  void update(const StreamEdge& e);

  std::complex<double> raw_product() const;
  double query() const;

  // Throws BasisMismatch unless both sides share seed and profile.
  void merge_from(const Sketch& other);

  std::vector<std::uint8_t> serialize() const;
  void write(wire::Writer& w) const;
  static Sketch deserialize(std::span<const std::uint8_t> bytes,
                            std::shared_ptr<const PatternProfile> profile);
  static Sketch read(wire::Reader& r, std::shared_ptr<const PatternProfile> profile);

  const PatternProfile& profile() const noexcept { return *profile_; }
  const std::shared_ptr<const PatternProfile>& shared_profile() const noexcept { return profile_; }
  const RandomBasis& basis() const noexcept { return basis_; }
  std::uint64_t seed() const noexcept { return basis_.seed; }
  const std::vector<std::complex<double>>& accumulators() const noexcept { return acc_; }
  std::int64_t edges_processed() const noexcept { return edges_processed_; }

  // Bitwise comparison of state.
  bool operator==(const Sketch& other) const;

 private:
  std::shared_ptr<const PatternProfile> profile_;
  RandomBasis basis_;
  std::vector<std::complex<double>> acc_;
  std::int64_t edges_processed_ = 0;
  // q_part_[c * t + i]: exponent (units of 1/D) of Q^{2^i / deg(c)}.
  std::vector<std::uint64_t> q_part_;
};

Sketch merge(const Sketch& a, const Sketch& b);

}  // namespace hcount
