#pragma once

#include "streamreg/drift_detector.hpp"
#include "streamreg/fimt.hpp"
#include "streamreg/rng.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace streamreg {

struct ForestOptions {
  std::size_t ensemble_size = 30;
  /// Poisson rate of the online-bagging resampling weights.
  double lambda = 6.0;
  /// Test hook: every member receives this weight instead of a Poisson draw.
  std::optional<unsigned> fixed_weight;
  /// Per-member detector on the member's own absolute prequential error.
  bool detect_drift = true;
  /// Cloned once per member; increase-only ADWIN(0.001) when null.
  std::shared_ptr<const DriftDetector> member_detector;
  FimtOptions tree;
  std::uint64_t seed = 1;
};

/// Online bagging over mean-leaf trees (an ARF-Reg style ensemble without
/// warning/background trees or feature subspaces).
///
/// Each member draws its resampling weight from its own RNG sub-stream, so its
/// weight sequence does not depend on the other members. A member whose
/// detector fires is replaced by a fresh tree and keeps learning.
class OnlineBaggingForest final : public Regressor {
public:
  OnlineBaggingForest(std::size_t num_features, ForestOptions options = {});

  /// Unweighted mean of member predictions, summed in member order.
  double predict(std::span<const double> x) const override;
  void learn(std::span<const double> x, double y) override;
  std::string_view name() const override { return "arf"; }
  std::uint64_t state_hash() const override;

  std::size_t size() const { return members_.size(); }
  const FimtTree& member(std::size_t i) const { return members_[i].tree; }
  std::size_t member_resets() const { return resets_; }
  const ForestOptions& options() const { return options_; }

private:
  struct Member {
    FimtTree tree;
    std::unique_ptr<DriftDetector> detector;
    SeededRng rng;
  };

  std::size_t num_features_;
  ForestOptions options_;
  std::vector<Member> members_;
  std::size_t resets_ = 0;
};

} // namespace streamreg
