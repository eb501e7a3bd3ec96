#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "hcount/sketch.hpp"

namespace hcount {

struct CopyRecommendation {
  std::size_t copies = 1;
  double unclamped = 1.0;
  bool clamped = false;
};

inline constexpr std::size_t kDefaultMaxCopies = 10'000'000;
inline constexpr double kCopiesConstant = 3.0;

// s = ceil(3 * m^k / (eps^2 * lb^2)), clamped to [1, max_copies]. The
// constant 3 is a heuristic choice for the big-O in the Chebyshev argument.
CopyRecommendation recommend_copies(double epsilon, double m_bound, double count_lower_bound,
                                    const PatternProfile& profile,
                                    std::size_t max_copies = kDefaultMaxCopies);

// s independent estimator copies seeded seed_base, seed_base+1, ...
class EstimatorBank {
 public:
  static constexpr std::uint16_t kFormatVersion = 1;

  EstimatorBank(std::shared_ptr<const PatternProfile> profile, std::uint64_t seed_base,
                std::size_t copies);

  void update(const StreamEdge& e);

  // Feeds a batch copy by copy. Each copy still sees the edges in order, so
  // the result equals edge-by-edge updating. `threads` = 0 picks the
  // hardware concurrency.
  void update(std::span<const StreamEdge> edges, unsigned threads = 0);

  // Mean of the per-copy queries.
  double estimate() const;

  // Median over `groups` contiguous groups of the per-copy mean.
  double median_of_means(std::size_t groups) const;

  // Unbiased sample variance of the per-copy queries; needs s >= 2.
  double empirical_variance() const;

  std::vector<double> copy_estimates() const;

  // Throws ConfigMismatch unless profile, seed_base and s agree.
  void merge_from(const EstimatorBank& other);

  std::vector<std::uint8_t> serialize() const;
  static EstimatorBank deserialize(std::span<const std::uint8_t> bytes,
                                   std::shared_ptr<const PatternProfile> profile);

  std::size_t copies() const noexcept { return sketches_.size(); }
  std::uint64_t seed_base() const noexcept { return seed_base_; }
  const std::vector<Sketch>& sketches() const noexcept { return sketches_; }
  const PatternProfile& profile() const noexcept { return *profile_; }
  std::int64_t edges_processed() const noexcept { return sketches_.front().edges_processed(); }

  bool operator==(const EstimatorBank& other) const;

 private:
  EstimatorBank(std::shared_ptr<const PatternProfile> profile, std::uint64_t seed_base,
                std::vector<Sketch> sketches);

  std::shared_ptr<const PatternProfile> profile_;
  std::uint64_t seed_base_;
  std::vector<Sketch> sketches_;
};

EstimatorBank merge(const EstimatorBank& a, const EstimatorBank& b);

}  // namespace hcount
