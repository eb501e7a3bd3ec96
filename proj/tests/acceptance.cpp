// Acceptance gate: prints one PASS/FAIL line per criterion and exits nonzero
// if any gated criterion fails. Criterion 9 (throughput) is reported only.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "hcount/bank.hpp"
#include "hcount/cli.hpp"
#include "hcount/hashing.hpp"
#include "hcount/pattern.hpp"
#include "hcount/roots.hpp"
#include "hcount/sketch.hpp"
#include "support/oracles.hpp"

using namespace hcount;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void note(Outcome& o, bool ok, const std::string& what) {
  o.pass = o.pass && ok;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += what + (ok ? "" : " [FAILED]");
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

struct Moments {
  double mean = 0;
  double sd = 0;
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  double ss = 0;
  for (double x : v) ss += (x - m.mean) * (x - m.mean);
  m.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  return m;
}

// Per-seed queries of independent sketches, seeds first..first+n-1.
std::vector<double> seed_queries(const std::shared_ptr<const PatternProfile>& profile,
                                 const std::vector<StreamEdge>& stream, std::uint64_t first,
                                 std::size_t n) {
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Sketch s(profile, first + i);
    for (const auto& e : stream) s.update(e);
    out.push_back(s.query());
  }
  return out;
}

Hypergraph triangle() { return Hypergraph::from_edges({{1, 2}, {2, 3}, {1, 3}}); }
Hypergraph three_uniform_fan() { return Hypergraph::from_edges({{1, 2, 3}, {1, 2, 4}, {1, 3, 4}}); }

std::vector<StreamEdge> mixed_stream(std::mt19937_64& rng, std::size_t n, double delete_rate) {
  std::vector<StreamEdge> out;
  std::uniform_int_distribution<std::size_t> size(1, 3);
  std::uniform_int_distribution<VertexId> vert(0, 11);
  std::bernoulli_distribution del(delete_rate);
  while (out.size() < n) {
    std::vector<VertexId> vs;
    const std::size_t l = size(rng);
    while (vs.size() < l) {
      const VertexId v = vert(rng);
      if (std::find(vs.begin(), vs.end(), v) == vs.end()) vs.push_back(v);
    }
    out.push_back(StreamEdge::make(del(rng) ? -1 : 1, vs));
  }
  return out;
}

Outcome unbiasedness() {
  Outcome o;
  constexpr std::size_t kN = 100000;
  std::mt19937_64 rng(2024);
  std::vector<Edge> seven;
  const auto seven_graph = oracle::random_uniform(rng, 6, 2, 7);
  for (const auto& e : seven_graph.edges()) seven.push_back(e);

  struct Fixture {
    std::string name;
    Hypergraph h;
    Hypergraph g;
    std::uint64_t stated;  // 0 = take the oracle value
  };
  std::vector<Fixture> fixtures{
      {"triangle/K4", triangle(), oracle::complete_uniform(4, 2), 4},
      {"triangle/K5", triangle(), oracle::complete_uniform(5, 2), 10},
      {"edge/7-edge graph", Hypergraph::from_edges({{1, 2}}), Hypergraph::from_edges(seven), 7},
      {"3-uniform fan/random G", three_uniform_fan(), oracle::random_uniform(rng, 6, 3, 12), 0},
  };
  for (const auto& f : fixtures) {
    const std::uint64_t exact = exact_count(f.h, f.g);
    const std::uint64_t cross = oracle::edge_subset_count(f.h, f.g);
    const bool oracle_ok = exact == cross && (f.stated == 0 || exact == f.stated);
    const auto start = std::chrono::steady_clock::now();
    const auto q = seed_queries(make_profile(f.h), oracle::inserts_of(f.g), 1, kN);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto m = moments(q);
    const double tol = 4 * m.sd / std::sqrt(static_cast<double>(kN));
    const double dev = std::abs(m.mean - static_cast<double>(exact));
    note(o, oracle_ok && dev <= tol,
         f.name + " exact=" + std::to_string(exact) + fmt(" mean=%.4f", m.mean) +
             fmt(" |dev|=%.4f", dev) + fmt(" tol=%.4f", tol) + fmt(" %.1fs", secs));
  }
  return o;
}

Outcome zero_on_absence() {
  Outcome o;
  const auto h = three_uniform_fan();
  const auto g = oracle::complete_uniform(5, 2);
  const auto q = seed_queries(make_profile(h), oracle::inserts_of(g), 1, 1000);
  double mean_abs = 0;
  for (double v : q) mean_abs += std::abs(v);
  mean_abs /= static_cast<double>(q.size());
  note(o, exact_count(h, g) == 0, "oracle count 0");
  note(o, mean_abs < 0.05, fmt("mean |query| = %.3g over 1000 seeds", mean_abs));
  return o;
}

Outcome turnstile_cancellation() {
  Outcome o;
  std::mt19937_64 rng(7);
  double worst = 0;
  std::size_t copies_checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto h = trial % 2 ? triangle() : three_uniform_fan();
    auto g = oracle::random_uniform(rng, 8, 2, 14);
    const auto triples = oracle::random_uniform(rng, 8, 3, 14);
    for (const auto& e : triples.edges()) g = g.with_edge(e);
    const auto stream = oracle::net_empty_stream(rng, g);
    EstimatorBank bank(make_profile(h), 1000 * static_cast<std::uint64_t>(trial), 50);
    bank.update(stream, 1);
    for (double v : bank.copy_estimates()) worst = std::max(worst, std::abs(v));
    worst = std::max(worst, std::abs(bank.estimate()));
    copies_checked += bank.copies();
  }
  note(o, worst < 1e-9,
       fmt("max |value| = %.3g", worst) + " over " + std::to_string(copies_checked) + " copies");
  return o;
}

Outcome merge_equivalence() {
  Outcome o;
  std::mt19937_64 rng(8);
  double worst_acc = 0;
  double worst_est = 0;
  const std::vector<Hypergraph> patterns{triangle(), three_uniform_fan(),
                                         Hypergraph::from_edges({{1, 2}, {2, 3, 4}})};
  for (int trial = 0; trial < 20; ++trial) {
    const auto profile = make_profile(patterns[static_cast<std::size_t>(trial) % patterns.size()]);
    const auto stream = mixed_stream(rng, 120, 0.3);
    const std::size_t shards = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
    EstimatorBank whole(profile, 77, 16);
    whole.update(stream, 1);
    std::vector<EstimatorBank> parts(shards, EstimatorBank(profile, 77, 16));
    std::uniform_int_distribution<std::size_t> pick(0, shards - 1);
    for (const auto& e : stream) parts[pick(rng)].update(e);
    EstimatorBank merged = parts[0];
    for (std::size_t i = 1; i < shards; ++i) merged.merge_from(parts[i]);
    for (std::size_t c = 0; c < whole.copies(); ++c) {
      for (std::size_t j = 0; j < profile->k; ++j) {
        const auto d = merged.sketches()[c].accumulators()[j] - whole.sketches()[c].accumulators()[j];
        worst_acc = std::max({worst_acc, std::abs(d.real()), std::abs(d.imag())});
      }
    }
    worst_est = std::max(worst_est, std::abs(merged.estimate() - whole.estimate()));
  }
  note(o, worst_acc <= 1e-12, fmt("max accumulator diff %.3g", worst_acc));
  note(o, worst_est <= 1e-9, fmt("max estimate diff %.3g", worst_est));
  return o;
}

Outcome variance_scaling() {
  Outcome o;
  const auto profile = make_profile(triangle());
  const auto stream = oracle::inserts_of(oracle::complete_uniform(4, 2));
  auto bank_estimates = [&](std::size_t s, std::uint64_t base) {
    std::vector<double> est;
    for (std::size_t b = 0; b < 200; ++b) {
      EstimatorBank bank(profile, base + b * s, s);
      bank.update(stream, 1);
      est.push_back(bank.estimate());
    }
    return est;
  };
  const auto small = moments(bank_estimates(100, 1'000'000));
  const auto large = moments(bank_estimates(400, 2'000'000));
  const double ratio = (small.sd * small.sd) / (large.sd * large.sd);
  note(o, ratio >= 3.0 && ratio <= 5.5,
       fmt("Var(s=100)=%.4g", small.sd * small.sd) + fmt(" Var(s=400)=%.4g", large.sd * large.sd) +
           fmt(" ratio=%.3f (want [3, 5.5])", ratio));
  return o;
}

Outcome root_of_unity_facts() {
  Outcome o;
  // Geometric sums of tau-th roots.
  double worst = 0;
  for (std::uint64_t tau : {3u, 7u, 15u, 31u}) {
    const std::complex<double> r = std::polar(1.0, 2 * std::numbers::pi / static_cast<double>(tau));
    for (std::uint64_t k = 0; k <= 4 * tau; ++k) {
      const std::complex<double> rk = std::pow(r, static_cast<double>(k));
      std::complex<double> sum{};
      std::complex<double> term{1.0, 0.0};
      for (std::uint64_t l = 0; l < tau; ++l) {
        sum += term;
        term *= rk;
      }
      const double expect = k % tau == 0 ? static_cast<double>(tau) : 0.0;
      worst = std::max(worst, std::abs(sum - expect) / static_cast<double>(tau));
    }
  }
  note(o, worst < 1e-6, fmt("root sums: max err/tau %.3g", worst));

  // Divisibility by 2^t - 1, exhaustive for t <= 8.
  bool divisibility = true;
  std::size_t checked = 0;
  for (std::size_t t = 1; t <= 8; ++t) {
    const std::uint64_t tau = (std::uint64_t{1} << t) - 1;
    std::vector<std::uint32_t> x(t, 0);
    for (;;) {
      std::uint64_t weighted = 0;
      bool all_one = true;
      bool all_zero = true;
      for (std::size_t i = 0; i < t; ++i) {
        weighted += (std::uint64_t{1} << i) * x[i];
        all_one = all_one && x[i] == 1;
        all_zero = all_zero && x[i] == 0;
      }
      // The zero vector is excluded: 0 is divisible by anything.
      if (!all_zero) divisibility = divisibility && ((weighted % tau == 0) == all_one);
      ++checked;
      std::size_t i = 0;
      for (; i < t; ++i) {
        ++x[i];
        std::uint32_t sum = 0;
        for (auto v : x) sum += v;
        if (sum <= t) break;
        x[i] = 0;
      }
      if (i == t) break;
    }
  }
  note(o, divisibility, "divisibility: " + std::to_string(checked) + " vectors");

  // Moments of the hashed X_c exponents: pattern vertex 1 is the centre of a
  // d-star, so deg = d.
  constexpr std::size_t kN = 100000;
  double worst_mc = 0;
  for (std::uint32_t d = 2; d <= 6; ++d) {
    std::vector<Edge> star;
    for (VertexId v = 2; v <= d + 1; ++v) star.push_back({1, v});
    const auto p = build_pattern_profile(Hypergraph::from_edges(star));
    const auto basis = derive_basis(p, 31 + d);
    for (std::uint32_t i = 1; i <= d; ++i) {
      std::complex<double> mean{};
      for (VertexId v = 0; v < kN; ++v) {
        const auto x = x_exponent(p, basis, 1, v);
        mean += std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(x * i % d) / d);
      }
      mean /= static_cast<double>(kN);
      const double target = i == d ? 1.0 : 0.0;
      worst_mc = std::max(worst_mc, std::abs(mean - target) * std::sqrt(static_cast<double>(kN)));
    }
  }
  note(o, worst_mc <= 3.0, fmt("root moments: max |err|*sqrt(N) = %.3f (want <= 3)", worst_mc));
  return o;
}

Outcome exponent_equivalence() {
  Outcome o;
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<VertexId> vert(0, kFieldPrime - 1);
  double worst = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const auto h = oracle::random_pattern(rng, 8, 6);
    const auto profile = make_profile(h);
    const auto basis = derive_basis(*profile, rng());
    const std::size_t j = std::uniform_int_distribution<std::size_t>(0, h.edge_count() - 1)(rng);
    std::vector<VertexId> tuple;
    while (tuple.size() < h.edges()[j].size()) {
      const VertexId v = trial % 2 ? vert(rng) : vert(rng) % 100;
      if (std::find(tuple.begin(), tuple.end(), v) == tuple.end()) tuple.push_back(v);
    }
    const auto fast = unit_root(term_exponent(*profile, basis, j, tuple), profile->exponent_modulus);
    worst = std::max(worst, std::abs(fast - oracle::naive_term(h, basis, j, tuple)));
  }
  note(o, worst < 1e-9, fmt("10000 triples, max |diff| %.3g", worst));
  return o;
}

Outcome oracle_consistency() {
  Outcome o;
  std::mt19937_64 rng(10);
  bool self = true;
  bool divides = true;
  bool brute = true;
  for (int trial = 0; trial < 50; ++trial) {
    const auto h = oracle::random_pattern(rng, 6, 4);
    self = self && exact_count(h, h) == 1;
    const auto a = count_automorphisms(h);
    std::uint64_t fact = 1;
    for (std::size_t i = 2; i <= h.vertex_count(); ++i) fact *= i;
    divides = divides && fact % a == 0;
    brute = brute && a == oracle::brute_force_automorphisms(h);
  }
  note(o, self, "exact_count(H,H)=1 for 50 patterns");
  note(o, divides, "auto | t!");
  note(o, brute, "auto matches permutation enumeration");
  return o;
}

Outcome throughput(const std::string& pattern_path) {
  Outcome o;
  cli::RunConfig c;
  c.mode = cli::Mode::Bench;
  c.pattern_path = pattern_path;
  c.copies = 100;
  c.bench_edges = 100000;
  c.bench_edge_size = 2;
  c.threads = 1;
  const auto r = cli::cmd_bench(c);
  const double rate = r["edges_per_sec"].get<double>();
  o.pass = rate >= 1e5;
  o.detail = fmt("%.0f size-2 edges/s at s=100", rate) + fmt(" (%.3g copy-updates/s)", r["copy_updates_per_sec"].get<double>()) +
             "; target 1e5 edges/s, reported only";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s TRIANGLE_PATTERN_FILE\n", argv[0]);
    return 2;
  }
  struct Row {
    int id;
    const char* name;
    bool gated;
    Outcome (*fn)();
  };
  const Row rows[] = {
      {1, "unbiasedness", true, unbiasedness},
      {2, "zero on absence", true, zero_on_absence},
      {3, "turnstile cancellation", true, turnstile_cancellation},
      {4, "merge equivalence", true, merge_equivalence},
      {5, "variance scaling", true, variance_scaling},
      {6, "root-of-unity facts", true, root_of_unity_facts},
      {7, "exponent arithmetic", true, exponent_equivalence},
      {8, "oracle self-consistency", true, oracle_consistency},
  };
  bool all = true;
  for (const auto& row : rows) {
    const auto start = std::chrono::steady_clock::now();
    const Outcome out = row.fn();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all = all && out.pass;
    std::printf("criterion %d %-24s %s (%.1fs) %s\n", row.id, row.name, out.pass ? "PASS" : "FAIL", secs,
                out.detail.c_str());
    std::fflush(stdout);
  }
  const Outcome tp = throughput(argv[1]);
  std::printf("criterion 9 %-24s %s %s\n", "throughput", tp.pass ? "PASS" : "BELOW-TARGET (not gated)",
              tp.detail.c_str());
  return all ? 0 : 1;
}
