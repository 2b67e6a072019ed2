#include "streamreg/soknl.hpp"

#include "streamreg/error.hpp"

#include <algorithm>

namespace streamreg {

void rank_leaves(std::vector<LeafNeighbour>& leaves) {
  std::sort(leaves.begin(), leaves.end(), [](const LeafNeighbour& a, const LeafNeighbour& b) {
    return a.distance2 != b.distance2 ? a.distance2 < b.distance2 : a.member < b.member;
  });
}

double nearest_leaf_mean(std::span<const LeafNeighbour> ranked, std::size_t k) {
  if (ranked.empty() || k == 0) return 0.0;
  const std::size_t take = std::min(k, ranked.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < take; ++i) sum += ranked[i].mean;
  return sum / static_cast<double>(take);
}

Soknl::Soknl(std::size_t num_features, ForestOptions options, std::size_t k_max)
    : forest_(num_features, std::move(options)), k_max_(k_max ? k_max : forest_.size()),
      squared_error_(k_max_, 0.0) {}

std::vector<LeafNeighbour> Soknl::ranked_leaves(std::span<const double> x) const {
  std::vector<LeafNeighbour> ranked;
  ranked.reserve(forest_.size());
  for (std::size_t m = 0; m < forest_.size(); ++m) {
    const auto leaf = forest_.member(m).route(x);
    if (leaf.weight <= 0.0) continue;
    double d2 = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double diff = x[j] - leaf.centroid[j];
      d2 += diff * diff;
    }
    ranked.push_back({d2, m, leaf.mean});
  }
  rank_leaves(ranked);
  return ranked;
}

double Soknl::predict_with_k(std::span<const double> x, std::size_t k) const {
  return nearest_leaf_mean(ranked_leaves(x), k);
}

std::size_t Soknl::chosen_k() const {
  const auto best = std::min_element(squared_error_.begin(), squared_error_.end());
  return static_cast<std::size_t>(best - squared_error_.begin()) + 1;
}

double Soknl::predict(std::span<const double> x) const { return predict_with_k(x, chosen_k()); }

void Soknl::learn(std::span<const double> x, double y) {
  const auto ranked = ranked_leaves(x);
  if (!ranked.empty()) {
    double sum = 0.0;
    for (std::size_t k = 1; k <= k_max_; ++k) {
      const std::size_t take = std::min(k, ranked.size());
      if (k <= ranked.size()) sum += ranked[k - 1].mean;
      const double err = y - sum / static_cast<double>(take);
      squared_error_[k - 1] += err * err;
    }
  }
  forest_.learn(x, y);
}

std::uint64_t Soknl::state_hash() const {
  StateHasher h;
  h.add(forest_.state_hash());
  for (double e : squared_error_) h.add(e);
  return h.value();
}

} // namespace streamreg
