#include "hcount/bank.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "hcount/error.hpp"

namespace hcount {

namespace {

constexpr std::string_view kBankMagic = "HCBK";

double mean_of(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

}  // namespace

CopyRecommendation recommend_copies(double epsilon, double m_bound, double count_lower_bound,
                                    const PatternProfile& profile, std::size_t max_copies) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::InvalidEpsilon, "epsilon must lie in (0, 1)");
  }
  if (!(m_bound >= 1.0) || !(count_lower_bound >= 1.0)) {
    throw Error(ErrorCode::InvalidEpsilon, "m bound and count lower bound must be >= 1");
  }
  const long double raw = static_cast<long double>(kCopiesConstant) *
                          std::pow(static_cast<long double>(m_bound),
                                   static_cast<long double>(profile.k)) /
                          (static_cast<long double>(epsilon) * epsilon * count_lower_bound *
                           count_lower_bound);
  CopyRecommendation rec;
  // Guard against representation noise such as 3/0.25 evaluating to 12.000...01.
  const long double rounded = std::ceil(raw * (1.0L - 1e-15L));
  rec.unclamped = static_cast<double>(rounded);
  if (rounded > static_cast<long double>(max_copies)) {
    rec.copies = max_copies;
    rec.clamped = true;
  } else {
    rec.copies = std::max<std::size_t>(1, static_cast<std::size_t>(rounded));
  }
  return rec;
}

EstimatorBank::EstimatorBank(std::shared_ptr<const PatternProfile> profile,
                             std::uint64_t seed_base, std::size_t copies)
    : profile_(std::move(profile)), seed_base_(seed_base) {
  if (copies == 0) throw Error(ErrorCode::TooFewCopies, "a bank needs at least one copy");
  sketches_.reserve(copies);
  for (std::size_t i = 0; i < copies; ++i) sketches_.emplace_back(profile_, seed_base + i);
}

EstimatorBank::EstimatorBank(std::shared_ptr<const PatternProfile> profile,
                             std::uint64_t seed_base, std::vector<Sketch> sketches)
    : profile_(std::move(profile)), seed_base_(seed_base), sketches_(std::move(sketches)) {}

void EstimatorBank::update(const StreamEdge& e) {
  for (auto& s : sketches_) s.update(e);
}

void EstimatorBank::update(std::span<const StreamEdge> edges, unsigned threads) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, sketches_.size()));

  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (const auto& e : edges) sketches_[i].update(e);
    }
  };
  if (threads <= 1) {
    run(0, sketches_.size());
    return;
  }
  std::vector<std::jthread> workers;
  const std::size_t chunk = (sketches_.size() + threads - 1) / threads;
  for (std::size_t begin = 0; begin < sketches_.size(); begin += chunk) {
    workers.emplace_back(run, begin, std::min(begin + chunk, sketches_.size()));
  }
}

std::vector<double> EstimatorBank::copy_estimates() const {
  std::vector<double> out;
  out.reserve(sketches_.size());
  for (const auto& s : sketches_) out.push_back(s.query());
  return out;
}

double EstimatorBank::estimate() const { return mean_of(copy_estimates()); }

double EstimatorBank::median_of_means(std::size_t groups) const {
  if (groups == 0 || groups > sketches_.size()) {
    throw Error(ErrorCode::TooFewCopies, "need 1 <= groups <= copies");
  }
  const auto values = copy_estimates();
  std::vector<double> means;
  const std::size_t s = values.size();
  std::size_t begin = 0;
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t size = s / groups + (g < s % groups ? 1 : 0);
    means.push_back(mean_of(std::span(values).subspan(begin, size)));
    begin += size;
  }
  std::sort(means.begin(), means.end());
  const std::size_t mid = means.size() / 2;
  return means.size() % 2 == 1 ? means[mid] : 0.5 * (means[mid - 1] + means[mid]);
}

double EstimatorBank::empirical_variance() const {
  if (sketches_.size() < 2) {
    throw Error(ErrorCode::TooFewCopies, "sample variance needs at least two copies");
  }
  const auto values = copy_estimates();
  const double mu = mean_of(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mu) * (v - mu);
  return ss / static_cast<double>(values.size() - 1);
}

void EstimatorBank::merge_from(const EstimatorBank& other) {
  if (profile_->fingerprint != other.profile_->fingerprint) {
    throw Error(ErrorCode::ConfigMismatch, "banks were built for different patterns");
  }
  if (seed_base_ != other.seed_base_ || sketches_.size() != other.sketches_.size()) {
    throw Error(ErrorCode::ConfigMismatch, "banks differ in seed base or copy count");
  }
  for (std::size_t i = 0; i < sketches_.size(); ++i) sketches_[i].merge_from(other.sketches_[i]);
}

EstimatorBank merge(const EstimatorBank& a, const EstimatorBank& b) {
  EstimatorBank out = a;
  out.merge_from(b);
  return out;
}

std::vector<std::uint8_t> EstimatorBank::serialize() const {
  wire::Writer w;
  w.tag(kBankMagic);
  w.u16(kFormatVersion);
  w.bytes(profile_->fingerprint);
  w.u64(seed_base_);
  w.u64(sketches_.size());
  for (const auto& s : sketches_) s.write(w);
  return std::move(w).take();
}

EstimatorBank EstimatorBank::deserialize(std::span<const std::uint8_t> bytes,
                                         std::shared_ptr<const PatternProfile> profile) {
  wire::Reader r(bytes);
  if (!r.tag(kBankMagic)) throw Error(ErrorCode::CorruptPayload, "not a bank payload");
  const std::uint16_t version = r.u16();
  if (version != kFormatVersion) {
    throw Error(ErrorCode::VersionMismatch,
                "bank format version " + std::to_string(version) + " is not supported");
  }
  const auto fp = r.bytes(32);
  if (!std::equal(fp.begin(), fp.end(), profile->fingerprint.begin())) {
    throw Error(ErrorCode::FingerprintMismatch, "bank was built for a different pattern");
  }
  const std::uint64_t seed_base = r.u64();
  const std::uint64_t s = r.u64();
  if (s == 0) throw Error(ErrorCode::CorruptPayload, "bank with zero copies");
  // Each copy needs at least a header; reject absurd counts before allocating.
  if (s > r.remaining() / 58) throw Error(ErrorCode::CorruptPayload, "payload truncated");

  std::vector<Sketch> sketches;
  sketches.reserve(s);
  for (std::uint64_t i = 0; i < s; ++i) {
    Sketch sk = Sketch::read(r, profile);
    if (sk.seed() != seed_base + i) {
      throw Error(ErrorCode::CorruptPayload, "copy " + std::to_string(i) + " has the wrong seed");
    }
    sketches.push_back(std::move(sk));
  }
  if (!r.done()) throw Error(ErrorCode::CorruptPayload, "trailing bytes after bank");
  return EstimatorBank(std::move(profile), seed_base, std::move(sketches));
}

bool EstimatorBank::operator==(const EstimatorBank& other) const {
  return seed_base_ == other.seed_base_ && sketches_ == other.sketches_;
}

}  // namespace hcount
