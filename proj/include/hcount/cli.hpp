#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hcount/error.hpp"

namespace hcount::cli {

enum class Mode { Estimate, Exact, Info, Merge, Bench };

struct RunConfig {
  Mode mode = Mode::Info;
  std::string pattern_path;
  std::vector<std::string> stream_paths;
  std::vector<std::string> inputs;  // merge: sketch or bank files
  std::string out_path;             // estimate: save bank; merge: merged file
  std::size_t copies = 100;
  std::uint64_t seed_base = 1;
  std::optional<double> epsilon;
  std::optional<double> m_bound;
  std::optional<double> count_lower_bound;
  std::optional<std::size_t> median_groups;
  bool json = false;
  std::size_t max_edge_size = 8;
  unsigned threads = 0;

  std::size_t bench_edges = 100'000;
  std::size_t bench_edge_size = 2;
  std::uint64_t bench_vertices = 1'000;

  std::size_t exact_max_vertices = 24;
  std::size_t exact_max_edges = 256;
};

using Report = nlohmann::ordered_json;

// 0 success, 2 usage, 3 parse, 4 config/merge mismatch, 5 size limits.
int exit_code_for(ErrorCode code) noexcept;

Report cmd_info(const RunConfig& config);
Report cmd_estimate(const RunConfig& config);
Report cmd_exact(const RunConfig& config);
Report cmd_merge(const RunConfig& config);
Report cmd_bench(const RunConfig& config);

// Dispatches on config.mode, prints the report (human or one JSON line) to
// `out`, errors to `err`, and returns the process exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace hcount::cli
