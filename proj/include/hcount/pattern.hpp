#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace hcount {

using VertexId = std::uint64_t;

// A canonical edge: strictly increasing vertex ids, no duplicates.
using Edge = std::vector<VertexId>;

// Explicit small hypergraph. Used for patterns and as input to the exact
// oracle; streamed graphs are never materialized this way.
class Hypergraph {
 public:
  Hypergraph() = default;

  // Edges may be given in any vertex order; they are sorted here. Throws
  // InvalidHypergraph on empty edges, repeated vertices, repeated edges, or
  // edges touching a vertex outside `vertices`.
  Hypergraph(std::vector<VertexId> vertices, std::vector<Edge> edges);

  // Vertex set is the union of the edges.
  static Hypergraph from_edges(std::vector<Edge> edges);

  const std::vector<VertexId>& vertices() const noexcept { return vertices_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  bool has_vertex(VertexId v) const;
  bool has_edge(const Edge& canonical) const { return edge_set_.count(canonical) != 0; }
  std::size_t degree(VertexId v) const;

  // Returns a copy with one more edge. Throws like the constructor.
  Hypergraph with_edge(Edge e) const;

 private:
  std::vector<VertexId> vertices_;  // sorted, unique
  std::vector<Edge> edges_;         // insertion order
  std::set<Edge> edge_set_;
};

// Exact rational t^t / (t! * auto(H)), reduced.
struct Rational {
  unsigned __int128 num = 0;
  unsigned __int128 den = 1;

  double value() const;
  std::string str() const;
  bool operator==(const Rational&) const = default;
};

using Fingerprint = std::array<std::uint8_t, 32>;

struct PatternLimits {
  std::size_t max_vertices = 16;
  std::size_t max_edge_size = 8;
};

// Preprocessed pattern. Pattern vertices are addressed by index
// 0..t-1 in ascending id order; `vertex_ids[i]` recovers the id.
struct PatternProfile {
  std::size_t t = 0;
  std::size_t k = 0;
  std::uint64_t tau = 0;
  std::vector<VertexId> vertex_ids;
  std::vector<std::uint32_t> degrees;
  // Pattern edges as ordered tuples of vertex indices. The orientation is
  // ascending vertex id.
  std::vector<std::vector<std::uint32_t>> oriented_edges;
  std::vector<std::size_t> sizes;
  std::uint64_t automorphisms = 1;
  Rational scale;
  std::uint64_t degree_lcm = 1;
  std::uint64_t exponent_modulus = 1;  // D = tau * degree_lcm
  Fingerprint fingerprint{};

  // edges_by_size[l] lists indices of pattern edges of size l.
  std::vector<std::vector<std::size_t>> edges_by_size;

  // Term values exp(2*pi*i*e/D) for every e < D when D is small; empty
  // otherwise. Shared so profile copies stay cheap.
  std::shared_ptr<const std::vector<std::complex<double>>> root_table;

  std::size_t index_of(VertexId id) const;  // throws UnknownPatternVertex
  std::uint32_t degree_of(VertexId id) const { return degrees[index_of(id)]; }
  std::uint32_t min_degree() const;
  std::size_t max_edge_size() const { return edges_by_size.empty() ? 0 : edges_by_size.size() - 1; }
};

// Exponents of the exponent modulus above this are rejected as TooLarge.
inline constexpr std::uint64_t kMaxExponentModulus = std::uint64_t{1} << 40;

PatternProfile build_pattern_profile(const Hypergraph& h, const PatternLimits& limits = {});

// Convenience for sharing one profile across many sketches.
std::shared_ptr<const PatternProfile> make_profile(const Hypergraph& h,
                                                   const PatternLimits& limits = {});

// Number of injective maps V[H] -> V[G] carrying every edge of H onto an edge
// of G. Backtracking over partial assignments, checking each pattern edge as
// soon as all of its vertices are placed.
std::uint64_t count_injective_homomorphisms(const Hypergraph& h, const Hypergraph& g);

std::uint64_t count_automorphisms(const Hypergraph& h, std::size_t max_vertices = 16);

// Not-necessarily-induced occurrences of h in g.
std::uint64_t exact_count(const Hypergraph& h, const Hypergraph& g);

// One edge per line, whitespace separated ids, '#' comments.
Hypergraph parse_pattern(std::istream& in);
Hypergraph read_pattern_file(const std::string& path);

}  // namespace hcount
