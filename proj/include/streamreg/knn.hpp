#pragma once

#include "streamreg/regressor.hpp"
#include "streamreg/schema.hpp"

#include <cstddef>
#include <vector>

namespace streamreg {

/// k-nearest-neighbour regression over a FIFO window of the most recent
/// instances.
///
/// Distances are Euclidean over numeric features scaled by their running range
/// (min/max over every instance learned so far, not only the window); a
/// categorical feature contributes 0 on a match and 1 on a mismatch. Neighbours
/// are ordered by (distance, arrival), so ties go to the older entry. The
/// prediction is the mean target of the min(k, window size) nearest entries,
/// summed in neighbour order.
class SlidingWindowKnn final : public Regressor {
public:
  SlidingWindowKnn(std::vector<ColumnKind> feature_kinds, std::size_t k = 10,
                   std::size_t capacity = 1000);

  double predict(std::span<const double> x) const override;
  void learn(std::span<const double> x, double y) override;
  std::string_view name() const override { return "knn"; }
  std::uint64_t state_hash() const override;

  std::size_t k() const { return k_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return size_; }
  /// Window entry by age: 0 is the oldest retained instance.
  std::span<const double> features_at(std::size_t age) const;
  double target_at(std::size_t age) const;
  const std::vector<double>& feature_min() const { return min_; }
  const std::vector<double>& feature_max() const { return max_; }

private:
  std::size_t slot_of(std::size_t age) const { return (head_ + age) % capacity_; }

  std::vector<ColumnKind> kinds_;
  std::size_t k_;
  std::size_t capacity_;
  std::size_t dims_;
  // Ring buffer: rows_[slot * dims_ ...], head_ is the oldest slot.
  std::vector<double> rows_;
  std::vector<double> targets_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
  std::vector<double> min_;
  std::vector<double> max_;
  bool seen_any_ = false;
};

} // namespace streamreg
