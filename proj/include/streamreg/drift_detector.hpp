#pragma once

#include "streamreg/regressor.hpp"

#include <cstddef>
#include <deque>
#include <memory>
#include <vector>

namespace streamreg {

/// Change detector over a real-valued monitoring signal (here: absolute errors).
class DriftDetector {
public:
  virtual ~DriftDetector() = default;
  /// Feeds one value; true when a change is signalled. After signalling the
  /// detector only retains state describing the new regime.
  virtual bool update(double value) = 0;
  virtual void reset() = 0;
  /// Fresh detector with the same parameters.
  virtual std::unique_ptr<DriftDetector> clone_fresh() const = 0;
  virtual void hash_into(StateHasher& hasher) const = 0;
};

struct PageHinkleyOptions {
  /// Alarm threshold, in units of the running mean of the signal.
  double threshold_factor = 50.0;
  /// Magnitude allowance, in units of the running mean of the signal.
  double allowance_factor = 0.005;
  std::size_t min_instances = 30;
};

/// Page-Hinkley test for an increase in the mean. Threshold and allowance scale
/// with the running mean, so the same settings apply to errors of any magnitude.
class PageHinkley final : public DriftDetector {
public:
  explicit PageHinkley(PageHinkleyOptions options = {}) : options_(options) {}

  bool update(double value) override;
  void reset() override;
  std::unique_ptr<DriftDetector> clone_fresh() const override;
  void hash_into(StateHasher& hasher) const override;

  double mean() const { return mean_; }
  std::size_t count() const { return count_; }

private:
  PageHinkleyOptions options_;
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double cumulative_ = 0.0;
  double minimum_ = 0.0;
};

/// ADWIN adaptive windowing over an exponential histogram of buckets.
///
/// The window is cut on a change in either direction. With `increase_only` an
/// alarm is raised only when the newer side of a cut has the larger mean, so a
/// falling error (a model that is still improving) shrinks the window silently.
class Adwin final : public DriftDetector {
public:
  explicit Adwin(double delta = 0.002, std::size_t max_buckets = 5, bool increase_only = false);

  bool update(double value) override;
  void reset() override;
  std::unique_ptr<DriftDetector> clone_fresh() const override;
  void hash_into(StateHasher& hasher) const override;

  std::size_t width() const { return width_; }
  double mean() const { return width_ ? total_ / static_cast<double>(width_) : 0.0; }

private:
  struct Bucket {
    double total;
    double variance;
  };

  void compress();
  void drop_oldest();
  bool detect_and_shrink();

  double delta_;
  std::size_t max_buckets_;
  bool increase_only_;
  // levels_[i] holds buckets of 2^i values, oldest at the front.
  std::vector<std::deque<Bucket>> levels_;
  std::size_t width_ = 0;
  double total_ = 0.0;
  double variance_ = 0.0;
  std::size_t ticks_ = 0;
};

} // namespace streamreg
