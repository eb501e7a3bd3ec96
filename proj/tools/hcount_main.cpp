// hcount: streaming hypergraph pattern counting from the command line.

#include <iostream>

#include "CLI11.hpp"

#include "hcount/cli.hpp"

namespace {

void add_common(CLI::App* cmd, hcount::cli::RunConfig& cfg) {
  cmd->add_option("--pattern", cfg.pattern_path, "Pattern file (one edge per line)")->required();
  cmd->add_flag("--json", cfg.json, "Emit one JSON object per result");
  cmd->add_option("--max-edge-size", cfg.max_edge_size, "Largest accepted edge size")
      ->check(CLI::Range(1, 8));
}

void add_bank_options(CLI::App* cmd, hcount::cli::RunConfig& cfg) {
  cmd->add_option("--copies", cfg.copies, "Number of estimator copies s")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", cfg.seed_base, "Seed of copy 0; copy i uses seed+i");
  cmd->add_option("--threads", cfg.threads, "Worker threads (0 = hardware concurrency)");
}

}  // namespace

int main(int argc, char** argv) {
  using hcount::cli::Mode;
  hcount::cli::RunConfig cfg;

  CLI::App app{"Approximate hypergraph pattern counts over turnstile edge streams"};
  app.require_subcommand(1);

  auto* info = app.add_subcommand("info", "Print pattern constants");
  add_common(info, cfg);

  auto* estimate = app.add_subcommand("estimate", "Estimate the pattern count of a stream");
  add_common(estimate, cfg);
  add_bank_options(estimate, cfg);
  estimate->add_option("--stream", cfg.stream_paths, "Stream file (repeatable)")->required();
  estimate->add_option("--epsilon", cfg.epsilon, "Target relative error; picks --copies");
  estimate->add_option("--m-bound", cfg.m_bound, "Upper bound on the edge count m");
  estimate->add_option("--count-lower-bound", cfg.count_lower_bound,
                       "Lower bound on the pattern count");
  estimate->add_option("--median-groups", cfg.median_groups,
                       "Also report the median of this many group means");
  estimate->add_option("--save", cfg.out_path, "Write the bank to this file");

  auto* exact = app.add_subcommand("exact", "Count occurrences exactly (small graphs only)");
  add_common(exact, cfg);
  exact->add_option("--stream", cfg.stream_paths, "Stream file (repeatable)")->required();
  exact->add_option("--max-vertices", cfg.exact_max_vertices, "Refuse larger graphs");
  exact->add_option("--max-edges", cfg.exact_max_edges, "Refuse larger graphs");

  auto* merge = app.add_subcommand("merge", "Merge sketch or bank files built with one seed");
  add_common(merge, cfg);
  merge->add_option("inputs", cfg.inputs, "Sketch or bank files")->required();
  merge->add_option("--out", cfg.out_path, "Write the merged file here");

  auto* bench = app.add_subcommand("bench", "Measure update throughput on a synthetic stream");
  add_common(bench, cfg);
  add_bank_options(bench, cfg);
  bench->add_option("--edges", cfg.bench_edges, "Synthetic edges to stream");
  bench->add_option("--edge-size", cfg.bench_edge_size, "Size of every synthetic edge");
  bench->add_option("--vertices", cfg.bench_vertices, "Vertex universe size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (info->parsed()) cfg.mode = Mode::Info;
  if (estimate->parsed()) cfg.mode = Mode::Estimate;
  if (exact->parsed()) cfg.mode = Mode::Exact;
  if (merge->parsed()) cfg.mode = Mode::Merge;
  if (bench->parsed()) cfg.mode = Mode::Bench;

  return hcount::cli::run(cfg, std::cout, std::cerr);
}
