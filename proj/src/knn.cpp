#include "streamreg/knn.hpp"

#include "streamreg/error.hpp"

#include <algorithm>
#include <utility>

namespace streamreg {

SlidingWindowKnn::SlidingWindowKnn(std::vector<ColumnKind> feature_kinds, std::size_t k,
                                   std::size_t capacity)
    : kinds_(std::move(feature_kinds)), k_(k), capacity_(capacity), dims_(kinds_.size()),
      min_(dims_, 0.0), max_(dims_, 0.0) {
  if (k_ == 0) throw UsageError("knn: k must be positive");
  if (capacity_ == 0) throw UsageError("knn: window capacity must be positive");
  rows_.resize(capacity_ * dims_);
  targets_.resize(capacity_);
}

std::span<const double> SlidingWindowKnn::features_at(std::size_t age) const {
  return std::span<const double>(rows_).subspan(slot_of(age) * dims_, dims_);
}

double SlidingWindowKnn::target_at(std::size_t age) const { return targets_[slot_of(age)]; }

double SlidingWindowKnn::predict(std::span<const double> x) const {
  if (size_ == 0) return 0.0;
  if (x.size() != dims_) throw DataError("knn: feature vector has the wrong length");

  std::vector<std::pair<double, std::size_t>> scored(size_);
  for (std::size_t age = 0; age < size_; ++age) {
    const auto row = features_at(age);
    double d2 = 0.0;
    for (std::size_t j = 0; j < dims_; ++j) {
      if (kinds_[j] == ColumnKind::categorical) {
        if (row[j] != x[j]) d2 += 1.0;
        continue;
      }
      const double range = max_[j] - min_[j];
      if (range <= 0.0) continue;
      const double diff = (row[j] - x[j]) / range;
      d2 += diff * diff;
    }
    scored[age] = {d2, age};
  }
  const std::size_t take = std::min(k_, size_);
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < take; ++i) sum += target_at(scored[i].second);
  return sum / static_cast<double>(take);
}

void SlidingWindowKnn::learn(std::span<const double> x, double y) {
  if (x.size() != dims_) throw DataError("knn: feature vector has the wrong length");
  for (std::size_t j = 0; j < dims_; ++j) {
    if (!seen_any_) {
      min_[j] = max_[j] = x[j];
    } else {
      min_[j] = std::min(min_[j], x[j]);
      max_[j] = std::max(max_[j], x[j]);
    }
  }
  seen_any_ = true;

  std::size_t slot;
  if (size_ < capacity_) {
    slot = slot_of(size_);
    ++size_;
  } else {
    slot = head_;
    head_ = (head_ + 1) % capacity_;
  }
  std::copy(x.begin(), x.end(), rows_.begin() + static_cast<std::ptrdiff_t>(slot * dims_));
  targets_[slot] = y;
}

std::uint64_t SlidingWindowKnn::state_hash() const {
  StateHasher h;
  h.add(static_cast<std::uint64_t>(size_));
  for (std::size_t age = 0; age < size_; ++age) {
    for (double v : features_at(age)) h.add(v);
    h.add(target_at(age));
  }
  for (std::size_t j = 0; j < dims_; ++j) {
    h.add(min_[j]);
    h.add(max_[j]);
  }
  return h.value();
}

} // namespace streamreg
