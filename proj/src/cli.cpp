#include "hcount/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <map>
#include <random>
#include <sstream>

#include "hcount/bank.hpp"
#include "hcount/pattern.hpp"
#include "hcount/stream_io.hpp"

namespace hcount::cli {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::shared_ptr<const PatternProfile> load_profile(const RunConfig& config) {
  if (config.pattern_path.empty()) throw Error(ErrorCode::Usage, "--pattern is required");
  PatternLimits limits;
  limits.max_edge_size = std::min(config.max_edge_size, kMaxEdgeSize);
  return make_profile(read_pattern_file(config.pattern_path), limits);
}

std::vector<StreamEdge> load_streams(const RunConfig& config) {
  std::vector<StreamEdge> edges;
  for (const auto& path : config.stream_paths) {
    auto part = read_stream_file(path, config.max_edge_size);
    edges.insert(edges.end(), std::make_move_iterator(part.begin()),
                 std::make_move_iterator(part.end()));
  }
  return edges;
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "short write to " + path);
}

nlohmann::ordered_json degree_warnings(const PatternProfile& p) {
  auto warnings = nlohmann::ordered_json::array();
  if (p.min_degree() < 2) {
    warnings.push_back("pattern has a vertex of degree " + std::to_string(p.min_degree()) +
                       "; the variance bound assumes minimum degree 2");
  }
  return warnings;
}

std::string human_value(const nlohmann::ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    std::ostringstream os;
    os << std::setprecision(12) << v.get<double>();
    return os.str();
  }
  if (v.is_object()) {
    std::string s;
    for (const auto& [key, val] : v.items()) {
      if (!s.empty()) s += ' ';
      s += key + ":" + human_value(val);
    }
    return s;
  }
  return v.dump();
}

}  // namespace

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Usage:
      return 2;
    case ErrorCode::ParseError:
    case ErrorCode::DuplicateVertexInEdge:
    case ErrorCode::VertexIdOutOfRange:
    case ErrorCode::InvalidHypergraph:
    case ErrorCode::IsolatedVertex:
    case ErrorCode::UnknownPatternVertex:
    case ErrorCode::SizeMismatch:
      return 3;
    case ErrorCode::BasisMismatch:
    case ErrorCode::ConfigMismatch:
    case ErrorCode::VersionMismatch:
    case ErrorCode::FingerprintMismatch:
    case ErrorCode::CorruptPayload:
    case ErrorCode::InvalidEpsilon:
    case ErrorCode::TooFewCopies:
    case ErrorCode::Io:
      return 4;
    case ErrorCode::TooLarge:
    case ErrorCode::EdgeTooLarge:
    case ErrorCode::SizeLimit:
      return 5;
  }
  return 1;
}

Report cmd_info(const RunConfig& config) {
  const auto profile = load_profile(config);
  const PatternProfile& p = *profile;
  Report r;
  r["mode"] = "info";
  r["t"] = p.t;
  r["k"] = p.k;
  r["tau"] = p.tau;
  nlohmann::ordered_json degrees = nlohmann::ordered_json::object();
  for (std::size_t c = 0; c < p.t; ++c) degrees[std::to_string(p.vertex_ids[c])] = p.degrees[c];
  r["degrees"] = degrees;
  r["auto"] = p.automorphisms;
  r["scale"] = p.scale.value();
  r["scale_exact"] = p.scale.str();
  r["degree_lcm"] = p.degree_lcm;
  r["D"] = p.exponent_modulus;
  r["warnings"] = degree_warnings(p);
  return r;
}

Report cmd_estimate(const RunConfig& config) {
  const auto start = Clock::now();
  const auto profile = load_profile(config);
  const auto edges = load_streams(config);

  std::size_t copies = config.copies;
  bool clamped = false;
  if (config.epsilon) {
    std::int64_t net = 0;
    for (const auto& e : edges) net += e.sign();
    const double m = config.m_bound.value_or(static_cast<double>(std::max<std::int64_t>(net, 1)));
    const auto rec =
        recommend_copies(*config.epsilon, m, config.count_lower_bound.value_or(1.0), *profile);
    copies = rec.copies;
    clamped = rec.clamped;
  }
  if (copies == 0) throw Error(ErrorCode::Usage, "--copies must be at least 1");

  EstimatorBank bank(profile, config.seed_base, copies);
  bank.update(edges, config.threads);

  Report r;
  r["mode"] = "estimate";
  r["estimate"] = bank.estimate();
  r["s"] = bank.copies();
  r["seed"] = bank.seed_base();
  r["wall_ms"] = ms_since(start);
  r["edges"] = bank.edges_processed();
  r["updates"] = edges.size();
  if (config.epsilon) {
    r["epsilon"] = *config.epsilon;
    r["clamped"] = clamped;
  }
  if (config.median_groups) r["median_of_means"] = bank.median_of_means(*config.median_groups);
  r["warnings"] = degree_warnings(*profile);
  if (!config.out_path.empty()) {
    write_bytes(config.out_path, bank.serialize());
    r["saved"] = config.out_path;
  }
  return r;
}

Report cmd_exact(const RunConfig& config) {
  const auto start = Clock::now();
  if (config.pattern_path.empty()) throw Error(ErrorCode::Usage, "--pattern is required");
  const Hypergraph h = read_pattern_file(config.pattern_path);
  const auto edges = load_streams(config);

  std::map<Edge, std::int64_t> multiplicity;
  for (const auto& e : edges) multiplicity[e.vertices()] += e.sign();
  std::vector<Edge> present;
  for (const auto& [edge, mult] : multiplicity) {
    if (mult == 0) continue;
    if (mult != 1) {
      throw Error(ErrorCode::InvalidHypergraph,
                  "final stream multiplicity " + std::to_string(mult) +
                      " for an edge; the exact oracle needs a simple hypergraph");
    }
    present.push_back(edge);
  }
  const Hypergraph g = Hypergraph::from_edges(std::move(present));
  if (g.vertex_count() > config.exact_max_vertices || g.edge_count() > config.exact_max_edges) {
    throw Error(ErrorCode::SizeLimit,
                "graph has " + std::to_string(g.vertex_count()) + " vertices and " +
                    std::to_string(g.edge_count()) + " edges; exact mode allows at most " +
                    std::to_string(config.exact_max_vertices) + " and " +
                    std::to_string(config.exact_max_edges));
  }

  Report r;
  r["mode"] = "exact";
  r["count"] = exact_count(h, g);
  r["vertices"] = g.vertex_count();
  r["edges"] = g.edge_count();
  r["wall_ms"] = ms_since(start);
  return r;
}

Report cmd_merge(const RunConfig& config) {
  if (config.inputs.empty()) throw Error(ErrorCode::Usage, "merge needs at least one input");
  const auto profile = load_profile(config);

  std::vector<std::vector<std::uint8_t>> blobs;
  for (const auto& path : config.inputs) blobs.push_back(read_bytes(path));
  auto kind = [](const std::vector<std::uint8_t>& b) {
    return b.size() >= 4 ? std::string(b.begin(), b.begin() + 4) : std::string();
  };
  const std::string first = kind(blobs.front());
  for (std::size_t i = 0; i < blobs.size(); ++i) {
    if (kind(blobs[i]) != first) {
      throw Error(ErrorCode::ConfigMismatch, config.inputs[i] + ": mixes sketch and bank files");
    }
  }

  Report r;
  r["mode"] = "merge";
  std::vector<std::uint8_t> merged;
  auto with_path = [&](std::size_t i, auto&& fn) {
    try {
      return fn(blobs[i]);
    } catch (const Error& e) {
      throw e.with_context(config.inputs[i]);
    }
  };

  if (first == "HCSK") {
    Sketch acc = with_path(0, [&](const auto& b) { return Sketch::deserialize(b, profile); });
    for (std::size_t i = 1; i < blobs.size(); ++i) {
      with_path(i, [&](const auto& b) {
        acc.merge_from(Sketch::deserialize(b, profile));
        return 0;
      });
    }
    r["estimate"] = acc.query();
    r["s"] = 1;
    r["seed"] = acc.seed();
    r["edges"] = acc.edges_processed();
    merged = blobs.size() == 1 ? blobs.front() : acc.serialize();
  } else if (first == "HCBK") {
    EstimatorBank acc =
        with_path(0, [&](const auto& b) { return EstimatorBank::deserialize(b, profile); });
    for (std::size_t i = 1; i < blobs.size(); ++i) {
      with_path(i, [&](const auto& b) {
        acc.merge_from(EstimatorBank::deserialize(b, profile));
        return 0;
      });
    }
    r["estimate"] = acc.estimate();
    r["s"] = acc.copies();
    r["seed"] = acc.seed_base();
    r["edges"] = acc.edges_processed();
    merged = blobs.size() == 1 ? blobs.front() : acc.serialize();
  } else {
    throw Error(ErrorCode::CorruptPayload, config.inputs.front() + ": not a sketch or bank file");
  }
  r["inputs"] = blobs.size();
  if (!config.out_path.empty()) {
    write_bytes(config.out_path, merged);
    r["saved"] = config.out_path;
  }
  return r;
}

Report cmd_bench(const RunConfig& config) {
  const auto profile = load_profile(config);
  const std::size_t l = config.bench_edge_size;
  if (l == 0 || l > config.max_edge_size || l > kMaxEdgeSize) {
    throw Error(ErrorCode::EdgeTooLarge, "bench edge size must be in [1, max edge size]");
  }
  if (config.bench_vertices < l) {
    throw Error(ErrorCode::Usage, "bench vertex universe is smaller than the edge size");
  }

  std::mt19937_64 rng(config.seed_base);
  std::uniform_int_distribution<VertexId> pick(0, config.bench_vertices - 1);
  std::vector<StreamEdge> edges;
  edges.reserve(config.bench_edges);
  std::vector<VertexId> vs;
  for (std::size_t i = 0; i < config.bench_edges; ++i) {
    vs.clear();
    while (vs.size() < l) {
      const VertexId v = pick(rng);
      if (std::find(vs.begin(), vs.end(), v) == vs.end()) vs.push_back(v);
    }
    edges.push_back(StreamEdge::insert(vs));
  }

  EstimatorBank bank(profile, config.seed_base, config.copies);
  const auto start = Clock::now();
  bank.update(edges, config.threads);
  const double wall = ms_since(start);
  const double secs = std::max(wall, 1e-6) / 1000.0;

  Report r;
  r["mode"] = "bench";
  r["estimate"] = bank.estimate();
  r["s"] = bank.copies();
  r["seed"] = bank.seed_base();
  r["wall_ms"] = wall;
  r["edges"] = edges.size();
  r["edge_size"] = l;
  r["edges_per_sec"] = static_cast<double>(edges.size()) / secs;
  r["copy_updates_per_sec"] = static_cast<double>(edges.size() * bank.copies()) / secs;
  r["terms_per_edge"] = terms_per_update(*profile, l) * bank.copies();
  return r;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    Report r;
    switch (config.mode) {
      case Mode::Info: r = cmd_info(config); break;
      case Mode::Estimate: r = cmd_estimate(config); break;
      case Mode::Exact: r = cmd_exact(config); break;
      case Mode::Merge: r = cmd_merge(config); break;
      case Mode::Bench: r = cmd_bench(config); break;
    }
    if (config.json) {
      out << r.dump() << '\n';
    } else {
      for (const auto& [key, val] : r.items()) {
        if (key == "warnings") continue;
        out << key << ": " << human_value(val) << '\n';
      }
    }
    if (r.contains("warnings")) {
      for (const auto& w : r["warnings"]) err << "warning: " << w.get<std::string>() << '\n';
    }
    return 0;
  } catch (const Error& e) {
    if (config.json) {
      nlohmann::ordered_json j;
      j["error"] = std::string(to_string(e.code()));
      j["message"] = e.detail();
      if (e.line()) j["line"] = *e.line();
      err << j.dump() << '\n';
    } else {
      err << "error: " << e.what() << '\n';
    }
    return exit_code_for(e.code());
  }
}

}  // namespace hcount::cli
