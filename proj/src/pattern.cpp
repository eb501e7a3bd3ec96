#include "hcount/pattern.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include <openssl/evp.h>

#include "hcount/error.hpp"
#include "hcount/roots.hpp"

namespace hcount {

namespace {

constexpr std::uint64_t kRootTableLimit = std::uint64_t{1} << 16;

Edge canonicalize(Edge e) {
  if (e.empty()) throw Error(ErrorCode::InvalidHypergraph, "empty edge");
  std::sort(e.begin(), e.end());
  if (std::adjacent_find(e.begin(), e.end()) != e.end()) {
    throw Error(ErrorCode::InvalidHypergraph, "edge repeats a vertex");
  }
  return e;
}

std::string u128_to_string(unsigned __int128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v != 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

unsigned __int128 gcd128(unsigned __int128 a, unsigned __int128 b) {
  while (b != 0) {
    const auto r = a % b;
    a = b;
    b = r;
  }
  return a;
}

void append_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

Fingerprint fingerprint_of(const PatternProfile& p) {
  std::vector<std::uint8_t> buf;
  constexpr std::string_view tag = "hcount/profile/v1";
  buf.insert(buf.end(), tag.begin(), tag.end());
  append_u64(buf, p.t);
  append_u64(buf, p.k);
  for (VertexId v : p.vertex_ids) append_u64(buf, v);
  for (const auto& e : p.oriented_edges) {
    append_u64(buf, e.size());
    for (std::uint32_t c : e) append_u64(buf, p.vertex_ids[c]);
  }

  Fingerprint fp{};
  unsigned int len = 0;
  if (EVP_Digest(buf.data(), buf.size(), fp.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != fp.size()) {
    throw std::runtime_error("sha256 digest failed");
  }
  return fp;
}

// Greedy ordering: each next vertex shares the most edges with the already
// placed ones, so pattern edges close (and get checked) early.
std::vector<std::size_t> search_order(const Hypergraph& h,
                                      const std::vector<std::vector<std::size_t>>& edges_of) {
  const std::size_t t = h.vertex_count();
  std::vector<std::size_t> order;
  std::vector<bool> placed(t, false);
  std::vector<std::size_t> touching(t, 0);
  for (std::size_t step = 0; step < t; ++step) {
    std::size_t best = t;
    for (std::size_t c = 0; c < t; ++c) {
      if (placed[c]) continue;
      if (best == t || touching[c] > touching[best] ||
          (touching[c] == touching[best] && edges_of[c].size() > edges_of[best].size())) {
        best = c;
      }
    }
    placed[best] = true;
    order.push_back(best);
    for (std::size_t ei : edges_of[best]) {
      for (VertexId v : h.edges()[ei]) {
        const auto idx = static_cast<std::size_t>(
            std::lower_bound(h.vertices().begin(), h.vertices().end(), v) -
            h.vertices().begin());
        ++touching[idx];
      }
    }
  }
  return order;
}

struct HomSearch {
  const Hypergraph& h;
  const Hypergraph& g;
  std::vector<std::size_t> order;                    // pattern vertex index per depth
  std::vector<std::vector<std::size_t>> closing;     // edges completed at each depth
  std::vector<std::vector<std::size_t>> edge_index;  // pattern edges as vertex indices
  std::vector<std::size_t> h_degree;
  std::vector<std::size_t> g_degree;
  std::vector<VertexId> image;                       // image[c] for placed c
  std::vector<bool> used;
  std::uint64_t count = 0;

  void run(std::size_t depth) {
    if (depth == order.size()) {
      ++count;
      return;
    }
    const std::size_t c = order[depth];
    for (std::size_t gi = 0; gi < g.vertex_count(); ++gi) {
      if (used[gi] || g_degree[gi] < h_degree[c]) continue;
      image[c] = g.vertices()[gi];
      if (!closes_ok(depth)) continue;
      used[gi] = true;
      run(depth + 1);
      used[gi] = false;
    }
  }

  bool closes_ok(std::size_t depth) const {
    Edge mapped;
    for (std::size_t ei : closing[depth]) {
      mapped.clear();
      for (std::size_t c : edge_index[ei]) mapped.push_back(image[c]);
      std::sort(mapped.begin(), mapped.end());
      if (!g.has_edge(mapped)) return false;
    }
    return true;
  }
};

}  // namespace

Hypergraph::Hypergraph(std::vector<VertexId> vertices, std::vector<Edge> edges) {
  std::sort(vertices.begin(), vertices.end());
  if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end()) {
    throw Error(ErrorCode::InvalidHypergraph, "vertex listed twice");
  }
  vertices_ = std::move(vertices);
  edges_.reserve(edges.size());
  for (auto& raw : edges) {
    Edge e = canonicalize(std::move(raw));
    for (VertexId v : e) {
      if (!has_vertex(v)) {
        throw Error(ErrorCode::InvalidHypergraph,
                    "edge uses vertex " + std::to_string(v) + " outside the vertex set");
      }
    }
    if (!edge_set_.insert(e).second) {
      throw Error(ErrorCode::InvalidHypergraph, "duplicate edge");
    }
    edges_.push_back(std::move(e));
  }
}

Hypergraph Hypergraph::from_edges(std::vector<Edge> edges) {
  std::vector<VertexId> vs;
  for (const auto& e : edges) vs.insert(vs.end(), e.begin(), e.end());
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return Hypergraph(std::move(vs), std::move(edges));
}

bool Hypergraph::has_vertex(VertexId v) const {
  return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

std::size_t Hypergraph::degree(VertexId v) const {
  return static_cast<std::size_t>(std::count_if(edges_.begin(), edges_.end(), [v](const Edge& e) {
    return std::binary_search(e.begin(), e.end(), v);
  }));
}

Hypergraph Hypergraph::with_edge(Edge e) const {
  auto vs = vertices_;
  for (VertexId v : e) {
    if (!has_vertex(v)) vs.push_back(v);
  }
  auto es = edges_;
  es.push_back(std::move(e));
  return Hypergraph(std::move(vs), std::move(es));
}

double Rational::value() const {
  return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

std::string Rational::str() const { return u128_to_string(num) + "/" + u128_to_string(den); }

std::size_t PatternProfile::index_of(VertexId id) const {
  auto it = std::lower_bound(vertex_ids.begin(), vertex_ids.end(), id);
  if (it == vertex_ids.end() || *it != id) {
    throw Error(ErrorCode::UnknownPatternVertex,
                "vertex " + std::to_string(id) + " is not in the pattern");
  }
  return static_cast<std::size_t>(it - vertex_ids.begin());
}

std::uint32_t PatternProfile::min_degree() const {
  return degrees.empty() ? 0 : *std::min_element(degrees.begin(), degrees.end());
}

std::uint64_t count_injective_homomorphisms(const Hypergraph& h, const Hypergraph& g) {
  const std::size_t t = h.vertex_count();
  if (t == 0) return 1;
  if (t > g.vertex_count()) return 0;

  auto index_in = [](const Hypergraph& x, VertexId v) {
    return static_cast<std::size_t>(
        std::lower_bound(x.vertices().begin(), x.vertices().end(), v) - x.vertices().begin());
  };

  HomSearch s{h, g, {}, {}, {}, {}, {}, {}, {}, 0};
  std::vector<std::vector<std::size_t>> edges_of(t);
  for (std::size_t ei = 0; ei < h.edge_count(); ++ei) {
    std::vector<std::size_t> idx;
    for (VertexId v : h.edges()[ei]) {
      idx.push_back(index_in(h, v));
      edges_of[idx.back()].push_back(ei);
    }
    s.edge_index.push_back(std::move(idx));
  }
  s.order = search_order(h, edges_of);

  std::vector<std::size_t> depth_of(t);
  for (std::size_t d = 0; d < t; ++d) depth_of[s.order[d]] = d;
  s.closing.assign(t, {});
  for (std::size_t ei = 0; ei < s.edge_index.size(); ++ei) {
    std::size_t last = 0;
    for (std::size_t c : s.edge_index[ei]) last = std::max(last, depth_of[c]);
    s.closing[last].push_back(ei);
  }

  for (std::size_t c = 0; c < t; ++c) s.h_degree.push_back(edges_of[c].size());
  s.g_degree.assign(g.vertex_count(), 0);
  for (const auto& e : g.edges()) {
    for (VertexId v : e) ++s.g_degree[index_in(g, v)];
  }
  s.image.assign(t, 0);
  s.used.assign(g.vertex_count(), false);
  s.run(0);
  return s.count;
}

std::uint64_t count_automorphisms(const Hypergraph& h, std::size_t max_vertices) {
  if (h.vertex_count() > max_vertices) {
    throw Error(ErrorCode::TooLarge, "pattern has " + std::to_string(h.vertex_count()) +
                                         " vertices, limit is " + std::to_string(max_vertices));
  }
  return count_injective_homomorphisms(h, h);
}

std::uint64_t exact_count(const Hypergraph& h, const Hypergraph& g) {
  const std::uint64_t homs = count_injective_homomorphisms(h, g);
  if (homs == 0) return 0;
  return homs / count_injective_homomorphisms(h, h);
}

PatternProfile build_pattern_profile(const Hypergraph& h, const PatternLimits& limits) {
  if (h.vertex_count() == 0) {
    throw Error(ErrorCode::InvalidHypergraph, "pattern has no vertices");
  }
  if (h.vertex_count() > limits.max_vertices) {
    throw Error(ErrorCode::TooLarge, "pattern has " + std::to_string(h.vertex_count()) +
                                         " vertices, limit is " +
                                         std::to_string(limits.max_vertices));
  }

  if (h.vertex_count() > 40) {
    throw Error(ErrorCode::TooLarge, "tau = 2^t - 1 must stay below 2^40");
  }

  PatternProfile p;
  p.t = h.vertex_count();
  p.k = h.edge_count();
  p.tau = (std::uint64_t{1} << p.t) - 1;
  p.vertex_ids = h.vertices();
  p.degrees.assign(p.t, 0);

  std::size_t largest = 0;
  for (const auto& e : h.edges()) {
    if (e.size() > limits.max_edge_size) {
      throw Error(ErrorCode::TooLarge, "pattern edge of size " + std::to_string(e.size()) +
                                           " exceeds limit " +
                                           std::to_string(limits.max_edge_size));
    }
    std::vector<std::uint32_t> oriented;
    for (VertexId v : e) {
      const auto c = static_cast<std::uint32_t>(p.index_of(v));
      oriented.push_back(c);
      ++p.degrees[c];
    }
    largest = std::max(largest, e.size());
    p.sizes.push_back(e.size());
    p.oriented_edges.push_back(std::move(oriented));
  }
  for (std::size_t c = 0; c < p.t; ++c) {
    if (p.degrees[c] == 0) {
      throw Error(ErrorCode::IsolatedVertex,
                  "pattern vertex " + std::to_string(p.vertex_ids[c]) + " has degree 0");
    }
  }

  p.edges_by_size.assign(largest + 1, {});
  for (std::size_t j = 0; j < p.k; ++j) p.edges_by_size[p.sizes[j]].push_back(j);

  for (std::uint32_t d : p.degrees) {
    p.degree_lcm = std::lcm(p.degree_lcm, static_cast<std::uint64_t>(d));
    if (p.degree_lcm > kMaxExponentModulus) break;
  }
  if (p.degree_lcm > kMaxExponentModulus / p.tau) {
    throw Error(ErrorCode::TooLarge, "exponent modulus tau * lcm(degrees) exceeds 2^40");
  }
  p.exponent_modulus = p.tau * p.degree_lcm;

  p.automorphisms = count_automorphisms(h, limits.max_vertices);

  unsigned __int128 num = 1;
  unsigned __int128 den = p.automorphisms;
  for (std::size_t i = 0; i < p.t; ++i) num *= p.t;
  for (std::size_t i = 2; i <= p.t; ++i) den *= i;
  const auto g = gcd128(num, den);
  p.scale = Rational{num / g, den / g};

  p.fingerprint = fingerprint_of(p);

  if (p.exponent_modulus <= kRootTableLimit) {
    auto table = std::make_shared<std::vector<std::complex<double>>>();
    table->reserve(p.exponent_modulus);
    for (std::uint64_t e = 0; e < p.exponent_modulus; ++e) {
      table->push_back(unit_root(e, p.exponent_modulus));
    }
    p.root_table = std::move(table);
  }
  return p;
}

std::shared_ptr<const PatternProfile> make_profile(const Hypergraph& h,
                                                   const PatternLimits& limits) {
  return std::make_shared<const PatternProfile>(build_pattern_profile(h, limits));
}

Hypergraph parse_pattern(std::istream& in) {
  std::vector<Edge> edges;
  std::set<Edge> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    Edge e;
    std::string tok;
    while (fields >> tok) {
      if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char ch) {
            return ch >= '0' && ch <= '9';
          })) {
        throw Error(ErrorCode::ParseError, "bad vertex id '" + tok + "'", line_no);
      }
      try {
        e.push_back(std::stoull(tok));
      } catch (const std::out_of_range&) {
        throw Error(ErrorCode::ParseError, "vertex id '" + tok + "' does not fit 64 bits",
                    line_no);
      }
    }
    if (e.empty()) continue;
    std::sort(e.begin(), e.end());
    if (std::adjacent_find(e.begin(), e.end()) != e.end()) {
      throw Error(ErrorCode::DuplicateVertexInEdge, "pattern edge repeats a vertex", line_no);
    }
    if (!seen.insert(e).second) {
      throw Error(ErrorCode::InvalidHypergraph, "pattern edge listed twice", line_no);
    }
    edges.push_back(std::move(e));
  }
  if (edges.empty()) throw Error(ErrorCode::InvalidHypergraph, "pattern has no edges");
  return Hypergraph::from_edges(std::move(edges));
}

Hypergraph read_pattern_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open pattern file " + path);
  try {
    return parse_pattern(in);
  } catch (const Error& e) {
    throw e.with_context(path);
  }
}

}  // namespace hcount
