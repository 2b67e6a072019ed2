#include "streamreg/drift_detector.hpp"

#include <cmath>
#include <stdexcept>

namespace streamreg {

bool PageHinkley::update(double value) {
  ++count_;
  mean_ += (value - mean_) / static_cast<double>(count_);
  cumulative_ += value - mean_ - options_.allowance_factor * mean_;
  minimum_ = std::min(minimum_, cumulative_);
  if (count_ < options_.min_instances) return false;
  if (cumulative_ - minimum_ > options_.threshold_factor * mean_) {
    reset();
    return true;
  }
  return false;
}

void PageHinkley::reset() {
  count_ = 0;
  mean_ = cumulative_ = minimum_ = 0.0;
}

std::unique_ptr<DriftDetector> PageHinkley::clone_fresh() const {
  return std::make_unique<PageHinkley>(options_);
}

void PageHinkley::hash_into(StateHasher& hasher) const {
  hasher.add(static_cast<std::uint64_t>(count_));
  hasher.add(mean_);
  hasher.add(cumulative_);
  hasher.add(minimum_);
}

namespace {
constexpr std::size_t kAdwinClock = 32;
constexpr std::size_t kAdwinMinWindow = 10;
constexpr std::size_t kAdwinMinSubWindow = 5;
} // namespace

Adwin::Adwin(double delta, std::size_t max_buckets, bool increase_only)
    : delta_(delta), max_buckets_(max_buckets), increase_only_(increase_only) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("ADWIN delta must be in (0,1)");
  if (max_buckets < 2) throw std::invalid_argument("ADWIN needs at least two buckets per level");
}

void Adwin::reset() {
  levels_.clear();
  width_ = 0;
  total_ = variance_ = 0.0;
  ticks_ = 0;
}

std::unique_ptr<DriftDetector> Adwin::clone_fresh() const {
  return std::make_unique<Adwin>(delta_, max_buckets_, increase_only_);
}

void Adwin::hash_into(StateHasher& hasher) const {
  hasher.add(static_cast<std::uint64_t>(width_));
  hasher.add(total_);
  hasher.add(variance_);
  for (const auto& level : levels_)
    for (const auto& bucket : level) {
      hasher.add(bucket.total);
      hasher.add(bucket.variance);
    }
}

bool Adwin::update(double value) {
  ++width_;
  if (levels_.empty()) levels_.emplace_back();
  levels_[0].push_back({value, 0.0});
  if (width_ > 1) {
    const double previous = static_cast<double>(width_ - 1);
    const double diff = value - total_ / previous;
    variance_ += previous * diff * diff / static_cast<double>(width_);
  }
  total_ += value;
  compress();

  if (++ticks_ % kAdwinClock != 0 || width_ <= kAdwinMinWindow) return false;
  return detect_and_shrink();
}

void Adwin::compress() {
  for (std::size_t level = 0; level < levels_.size(); ++level) {
    auto& buckets = levels_[level];
    if (buckets.size() <= max_buckets_) break;
    const double n = std::ldexp(1.0, static_cast<int>(level));
    const Bucket a = buckets.front();
    buckets.pop_front();
    const Bucket b = buckets.front();
    buckets.pop_front();
    const double diff = a.total / n - b.total / n;
    const Bucket merged{a.total + b.total, a.variance + b.variance + n * n * diff * diff / (2.0 * n)};
    if (level + 1 == levels_.size()) levels_.emplace_back();
    levels_[level + 1].push_back(merged);
  }
}

void Adwin::drop_oldest() {
  for (std::size_t level = levels_.size(); level-- > 0;) {
    auto& buckets = levels_[level];
    if (buckets.empty()) continue;
    const Bucket oldest = buckets.front();
    buckets.pop_front();
    const double n1 = std::ldexp(1.0, static_cast<int>(level));
    width_ -= static_cast<std::size_t>(n1);
    total_ -= oldest.total;
    if (width_ == 0) {
      variance_ = 0.0;
    } else {
      const double rest = static_cast<double>(width_);
      const double diff = oldest.total / n1 - total_ / rest;
      variance_ -= oldest.variance + n1 * rest * diff * diff / (n1 + rest);
      if (variance_ < 0.0) variance_ = 0.0;
    }
    while (!levels_.empty() && levels_.back().empty()) levels_.pop_back();
    return;
  }
}

bool Adwin::detect_and_shrink() {
  bool changed = false;
  for (bool reduced = true; reduced;) {
    reduced = false;
    double n0 = 0.0, n1 = static_cast<double>(width_);
    double u0 = 0.0, u1 = total_;
    const double n = static_cast<double>(width_);
    const double dd = std::log(2.0 * std::log(n) / delta_);
    const double v = variance_ / n;
    const double min_sub = static_cast<double>(kAdwinMinSubWindow);
    // Walk cut points from the oldest bucket towards the newest.
    for (std::size_t level = levels_.size(); level-- > 0 && !reduced;) {
      const double size = std::ldexp(1.0, static_cast<int>(level));
      const auto& buckets = levels_[level];
      for (std::size_t i = 0; i < buckets.size(); ++i) {
        n0 += size;
        n1 -= size;
        u0 += buckets[i].total;
        u1 -= buckets[i].total;
        if (n1 <= 0.0) break;
        if (n0 < min_sub || n1 < min_sub) continue;
        const double m = 1.0 / (n0 - min_sub + 1.0) + 1.0 / (n1 - min_sub + 1.0);
        const double eps = std::sqrt(2.0 * m * v * dd) + 2.0 / 3.0 * dd * m;
        if (std::abs(u0 / n0 - u1 / n1) > eps) {
          reduced = true;
          changed = changed || !increase_only_ || u1 / n1 > u0 / n0;
          drop_oldest();
          break;
        }
      }
    }
    if (width_ <= kAdwinMinWindow) break;
  }
  return changed;
}

} // namespace streamreg
