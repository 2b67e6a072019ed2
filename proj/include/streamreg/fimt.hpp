#pragma once

#include "streamreg/drift_detector.hpp"
#include "streamreg/regressor.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace streamreg {

/// Weighted mean/variance accumulator with an exact merge (Chan et al.).
struct RunningStats {
  double weight = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double value, double w = 1.0);
  void merge(const RunningStats& other);
  /// Population variance; 0 when empty.
  double variance() const { return weight > 0.0 ? m2 / weight : 0.0; }
  double sd() const;
};

/// Hoeffding bound sqrt(range^2 * ln(1/confidence) / (2n)).
double hoeffding_bound(double range, double confidence, double n);

struct FimtOptions {
  std::size_t grace_period = 200;
  double split_confidence = 0.01;
  double tie_threshold = 0.05;
  std::size_t num_bins = 64;
  bool detect_drift = true;
  PageHinkleyOptions page_hinkley{};
  /// Detector cloned into every split node; Page-Hinkley when null.
  std::shared_ptr<const DriftDetector> detector_prototype;
};

/// Read-only view of one leaf.
struct LeafView {
  std::uint64_t id = 0;
  double weight = 0.0;
  /// Mean target of everything learned at this leaf, or the split-time prior
  /// when the leaf is still empty.
  double mean = 0.0;
  std::span<const double> centroid;
};

/// Best binned split of one feature at one leaf.
struct SplitCandidateView {
  double sdr = 0.0;
  double threshold = 0.0;
  double left_weight = 0.0;
  double right_weight = 0.0;
};

struct SplitView {
  std::size_t feature;
  double threshold;
  std::size_t depth;
};

/// Incremental regression tree with mean-valued leaves.
///
/// Each leaf keeps, per feature, an equal-width histogram of target statistics
/// (64 bins by default). The range starts at the first two distinct values seen
/// and doubles, merging adjacent bins, whenever a value falls outside it. Every
/// `grace_period` units of weight the leaf ranks features by their best
/// standard-deviation reduction and splits when the runner-up/best ratio is
/// below 1 - eps (eps from the Hoeffding bound with range 1) or eps drops under
/// the tie threshold. Instances with x[feature] < threshold go left.
///
/// Split nodes run a drift detector on the tree's absolute error; on an alarm the
/// node's subtree is replaced by a fresh leaf.
class FimtTree final : public Regressor {
public:
  explicit FimtTree(std::size_t num_features, FimtOptions options = {});
  FimtTree(FimtTree&&) noexcept;
  FimtTree& operator=(FimtTree&&) noexcept;
  ~FimtTree() override;

  double predict(std::span<const double> x) const override;
  void learn(std::span<const double> x, double y) override { learn_weighted(x, y, 1.0); }
  void learn_weighted(std::span<const double> x, double y, double weight);
  std::string_view name() const override { return "fimt"; }
  std::uint64_t state_hash() const override;

  /// The leaf `x` routes to; weight 0 before any learning.
  LeafView route(std::span<const double> x) const;
  std::vector<LeafView> leaves() const;
  /// Best SDR candidate on `feature` at the leaf `x` routes to; nullopt until
  /// that feature has two distinct values there.
  std::optional<SplitCandidateView> split_candidate(std::span<const double> x,
                                                    std::size_t feature) const;
  std::vector<SplitView> splits() const;
  std::size_t num_features() const { return num_features_; }
  std::size_t drift_alarms() const { return drift_alarms_; }
  const FimtOptions& options() const { return options_; }

private:
  struct Leaf;
  struct Node;

  std::unique_ptr<Node> make_leaf(double prior_mean, std::size_t depth);
  void attempt_split(std::unique_ptr<Node>& slot);

  std::size_t num_features_;
  FimtOptions options_;
  std::unique_ptr<Node> root_;
  std::uint64_t next_leaf_id_ = 0;
  std::size_t drift_alarms_ = 0;
};

} // namespace streamreg
