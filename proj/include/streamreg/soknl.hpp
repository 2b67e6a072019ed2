#pragma once

#include "streamreg/forest.hpp"

#include <span>
#include <vector>

namespace streamreg {

/// A member's leaf as seen from one query point.
struct LeafNeighbour {
  double distance2 = 0.0;
  std::size_t member = 0;
  double mean = 0.0;
};

/// Sorts by (squared distance, member index).
void rank_leaves(std::vector<LeafNeighbour>& leaves);
/// Mean of the first min(k, size) entries of an already ranked list; 0.0 if empty.
double nearest_leaf_mean(std::span<const LeafNeighbour> ranked, std::size_t k);

/// Self-optimising k-nearest-leaves regression on top of an online-bagging forest.
///
/// For a query, every member contributes the leaf the query routes to (leaves
/// that have seen no data are skipped). Leaves are ranked by Euclidean distance
/// from the query to the leaf centroid (ties by member index) and the prediction
/// is the mean of the k closest leaf means. k is the value in 1..k_max with the
/// lowest cumulative squared error since the stream started (ties to the
/// smaller k), where every candidate k is scored test-then-train on each instance.
class Soknl final : public Regressor {
public:
  /// k_max = 0 means k_max = ensemble size.
  Soknl(std::size_t num_features, ForestOptions options = {}, std::size_t k_max = 0);

  double predict(std::span<const double> x) const override;
  void learn(std::span<const double> x, double y) override;
  std::string_view name() const override { return "soknl"; }
  std::uint64_t state_hash() const override;

  std::size_t chosen_k() const;
  std::size_t k_max() const { return k_max_; }
  /// Cumulative squared error for k = index + 1.
  const std::vector<double>& error_ledger() const { return squared_error_; }
  const OnlineBaggingForest& forest() const { return forest_; }

  /// Mean of the k closest leaf means, in ascending-distance order; 0.0 when no
  /// leaf has data.
  double predict_with_k(std::span<const double> x, std::size_t k) const;

private:
  std::vector<LeafNeighbour> ranked_leaves(std::span<const double> x) const;

  OnlineBaggingForest forest_;
  std::size_t k_max_;
  std::vector<double> squared_error_;
};

} // namespace streamreg
