#include "hcount/sketch.hpp"

#include <algorithm>
#include <numeric>

#include "hcount/error.hpp"
#include "hcount/roots.hpp"

namespace hcount {

namespace {

constexpr std::string_view kSketchMagic = "HCSK";

using PermutationTable = std::vector<std::array<std::uint8_t, kMaxEdgeSize>>;

std::array<PermutationTable, kMaxEdgeSize + 1> build_permutation_tables() {
  std::array<PermutationTable, kMaxEdgeSize + 1> tables;
  for (std::size_t l = 0; l <= kMaxEdgeSize; ++l) {
    std::array<std::uint8_t, kMaxEdgeSize> p{};
    std::iota(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(l), std::uint8_t{0});
    do {
      tables[l].push_back(p);
    } while (std::next_permutation(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(l)));
  }
  return tables;
}

// Exponent of X_c(u) * Q^{Y(u)/deg(c)} in units of 1/D.
//   X part: x / deg      = x * (D/deg) / D
//   Q part: j*y/(tau*deg) = ((j*y) mod tau*deg) * (L/deg) / D
std::uint64_t factor_exponent(const PatternProfile& p, std::uint64_t x, std::uint64_t qy,
                              std::uint32_t deg) {
  const std::uint64_t d = p.exponent_modulus;
  const std::uint64_t q_part = (qy % (p.tau * deg)) * (p.degree_lcm / deg);
  return (x * (d / deg) + q_part) % d;
}

std::complex<double> term_value(const PatternProfile& p, std::uint64_t e) {
  return p.root_table ? (*p.root_table)[e] : unit_root(e, p.exponent_modulus);
}

}  // namespace

const std::vector<std::array<std::uint8_t, kMaxEdgeSize>>& permutations(std::size_t l) {
  static const auto tables = build_permutation_tables();
  if (l > kMaxEdgeSize) throw Error(ErrorCode::EdgeTooLarge, "edge size above 8");
  return tables[l];
}

StreamEdge StreamEdge::make(int sign, std::vector<VertexId> vertices, std::size_t max_edge_size) {
  if (sign != 1 && sign != -1) throw Error(ErrorCode::InvalidHypergraph, "sign must be +1 or -1");
  if (vertices.empty()) throw Error(ErrorCode::InvalidHypergraph, "empty edge");
  const std::size_t limit = std::min(max_edge_size, kMaxEdgeSize);
  if (vertices.size() > limit) {
    throw Error(ErrorCode::EdgeTooLarge, "edge of size " + std::to_string(vertices.size()) +
                                             " exceeds limit " + std::to_string(limit));
  }
  std::sort(vertices.begin(), vertices.end());
  if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end()) {
    throw Error(ErrorCode::DuplicateVertexInEdge, "edge repeats a vertex");
  }
  if (vertices.back() >= kFieldPrime) {
    throw Error(ErrorCode::VertexIdOutOfRange, "vertex id must be below 2^61-1");
  }
  return StreamEdge(sign, std::move(vertices));
}

std::uint64_t term_exponent(const PatternProfile& profile, const RandomBasis& basis,
                            std::size_t pattern_edge, std::span<const VertexId> oriented_tuple) {
  const auto& pe = profile.oriented_edges.at(pattern_edge);
  if (pe.size() != oriented_tuple.size()) {
    throw Error(ErrorCode::SizeMismatch, "tuple size " + std::to_string(oriented_tuple.size()) +
                                             " vs pattern edge size " +
                                             std::to_string(pe.size()));
  }
  std::uint64_t e = 0;
  for (std::size_t i = 0; i < pe.size(); ++i) {
    const std::uint32_t c = pe[i];
    const VertexId u = oriented_tuple[i];
    const std::uint64_t x = x_exponent_at(basis, c, u);
    const std::uint64_t qy = basis.q_exponent * y_value(basis, u);
    e = (e + factor_exponent(profile, x, qy, profile.degrees[c])) % profile.exponent_modulus;
  }
  return e;
}

std::uint64_t terms_per_update(const PatternProfile& profile, std::size_t edge_size) {
  if (edge_size >= profile.edges_by_size.size()) return 0;
  std::uint64_t fact = 1;
  for (std::size_t i = 2; i <= edge_size; ++i) fact *= i;
  return fact * profile.edges_by_size[edge_size].size();
}

Sketch::Sketch(std::shared_ptr<const PatternProfile> profile, std::uint64_t seed)
    : Sketch(profile, derive_basis(*profile, seed)) {}

Sketch::Sketch(std::shared_ptr<const PatternProfile> profile, RandomBasis basis)
    : profile_(std::move(profile)), basis_(std::move(basis)), acc_(profile_->k) {
  const PatternProfile& p = *profile_;
  q_part_.resize(p.t * p.t);
  for (std::size_t c = 0; c < p.t; ++c) {
    for (std::size_t i = 0; i < p.t; ++i) {
      q_part_[c * p.t + i] = factor_exponent(p, 0, basis_.q_exponent << i, p.degrees[c]);
    }
  }
}

void Sketch::update(const StreamEdge& e) {
  edges_processed_ += e.sign();
  const std::size_t l = e.size();
  const PatternProfile& p = *profile_;
  if (l >= p.edges_by_size.size() || p.edges_by_size[l].empty()) return;

  const auto& verts = e.vertices();
  const std::uint64_t d = p.exponent_modulus;

  std::array<std::uint64_t, kMaxEdgeSize> y_index{};
  basis_.y_hash.eval_batch(verts, y_index.data());

  // factor[pos][v]: exponent contributed when stream vertex v sits at
  // position pos of the oriented pattern edge.
  std::array<std::array<std::uint64_t, kMaxEdgeSize>, kMaxEdgeSize> factor{};
  const auto& perms = permutations(l);

  // X_c exponents are shared by every pattern edge through c. All
  // non-constant X hashes have the same length, so their Horner chains are
  // run side by side.
  std::array<std::array<std::uint64_t, kMaxEdgeSize>, 64> xs;
  {
    std::uint64_t used = 0;
    for (std::size_t j : p.edges_by_size[l]) {
      for (std::uint32_t c : p.oriented_edges[j]) used |= std::uint64_t{1} << c;
    }
    std::array<std::uint32_t, 64> live{};
    std::size_t n_live = 0;
    for (std::uint32_t c = 0; c < p.t; ++c) {
      if (!(used >> c & 1U)) continue;
      xs[c].fill(0);
      if (basis_.x_hashes[c].range != 1) live[n_live++] = c;
    }
    if (n_live > 0) {
      const std::size_t w = basis_.x_hashes[live[0]].coefficients.size();
      for (std::size_t i = w; i-- > 0;) {
        for (std::size_t n = 0; n < n_live; ++n) {
          const std::uint32_t c = live[n];
          const std::uint64_t coef = basis_.x_hashes[c].coefficients[i];
          for (std::size_t v = 0; v < l; ++v) {
            xs[c][v] = add_mod_prime(mul_mod_prime(xs[c][v], verts[v]), coef);
          }
        }
      }
      for (std::size_t n = 0; n < n_live; ++n) {
        const std::uint32_t c = live[n];
        for (std::size_t v = 0; v < l; ++v) xs[c][v] %= basis_.x_hashes[c].range;
      }
    }
  }

  for (std::size_t j : p.edges_by_size[l]) {
    const auto& pe = p.oriented_edges[j];
    for (std::size_t pos = 0; pos < l; ++pos) {
      const std::uint32_t c = pe[pos];
      const std::uint64_t x_unit = d / p.degrees[c];
      for (std::size_t v = 0; v < l; ++v) {
        std::uint64_t f = xs[c][v] * x_unit + q_part_[c * p.t + y_index[v]];
        if (f >= d) f -= d;
        factor[pos][v] = f;
      }
    }
    std::complex<double> sum{};
    for (const auto& perm : perms) {
      std::uint64_t ex = 0;
      for (std::size_t pos = 0; pos < l; ++pos) {
        ex += factor[pos][perm[pos]];
        if (ex >= d) ex -= d;
      }
      sum += term_value(p, ex);
    }
    if (e.sign() > 0) {
      acc_[j] += sum;
    } else {
      acc_[j] -= sum;
    }
  }
}

std::complex<double> Sketch::raw_product() const {
  std::complex<double> z{1.0, 0.0};
  for (const auto& a : acc_) z *= a;
  return z;
}

double Sketch::query() const { return profile_->scale.value() * raw_product().real(); }

void Sketch::merge_from(const Sketch& other) {
  if (basis_.seed != other.basis_.seed ||
      basis_.profile_fingerprint != other.basis_.profile_fingerprint) {
    throw Error(ErrorCode::BasisMismatch, "cannot merge sketches with different seeds or patterns");
  }
  for (std::size_t j = 0; j < acc_.size(); ++j) acc_[j] += other.acc_[j];
  edges_processed_ += other.edges_processed_;
}

Sketch merge(const Sketch& a, const Sketch& b) {
  Sketch out = a;
  out.merge_from(b);
  return out;
}

void Sketch::write(wire::Writer& w) const {
  w.tag(kSketchMagic);
  w.u16(kFormatVersion);
  w.bytes(basis_.profile_fingerprint);
  w.u64(basis_.seed);
  w.i64(edges_processed_);
  w.u32(static_cast<std::uint32_t>(acc_.size()));
  for (const auto& a : acc_) {
    w.f64(a.real());
    w.f64(a.imag());
  }
}

std::vector<std::uint8_t> Sketch::serialize() const {
  wire::Writer w;
  write(w);
  return std::move(w).take();
}

Sketch Sketch::read(wire::Reader& r, std::shared_ptr<const PatternProfile> profile) {
  if (!r.tag(kSketchMagic)) throw Error(ErrorCode::CorruptPayload, "not a sketch payload");
  const std::uint16_t version = r.u16();
  if (version != kFormatVersion) {
    throw Error(ErrorCode::VersionMismatch,
                "sketch format version " + std::to_string(version) + " is not supported");
  }
  const auto fp = r.bytes(32);
  if (!std::equal(fp.begin(), fp.end(), profile->fingerprint.begin())) {
    throw Error(ErrorCode::FingerprintMismatch, "sketch was built for a different pattern");
  }
  const std::uint64_t seed = r.u64();
  const std::int64_t edges = r.i64();
  const std::uint32_t k = r.u32();
  if (k != profile->k) {
    throw Error(ErrorCode::CorruptPayload, "accumulator count does not match the pattern");
  }
  Sketch s(profile, seed);
  s.edges_processed_ = edges;
  for (auto& a : s.acc_) {
    const double re = r.f64();
    const double im = r.f64();
    a = {re, im};
  }
  return s;
}

Sketch Sketch::deserialize(std::span<const std::uint8_t> bytes,
                           std::shared_ptr<const PatternProfile> profile) {
  wire::Reader r(bytes);
  Sketch s = read(r, std::move(profile));
  if (!r.done()) throw Error(ErrorCode::CorruptPayload, "trailing bytes after sketch");
  return s;
}

bool Sketch::operator==(const Sketch& other) const {
  if (basis_.seed != other.basis_.seed ||
      basis_.profile_fingerprint != other.basis_.profile_fingerprint ||
      edges_processed_ != other.edges_processed_ || acc_.size() != other.acc_.size()) {
    return false;
  }
  for (std::size_t j = 0; j < acc_.size(); ++j) {
    if (std::bit_cast<std::uint64_t>(acc_[j].real()) !=
            std::bit_cast<std::uint64_t>(other.acc_[j].real()) ||
        std::bit_cast<std::uint64_t>(acc_[j].imag()) !=
            std::bit_cast<std::uint64_t>(other.acc_[j].imag())) {
      return false;
    }
  }
  return true;
}

}  // namespace hcount
