#include "streamreg/forest.hpp"

#include "streamreg/error.hpp"

#include <cmath>

namespace streamreg {

OnlineBaggingForest::OnlineBaggingForest(std::size_t num_features, ForestOptions options)
    : num_features_(num_features), options_(std::move(options)) {
  if (options_.ensemble_size == 0) throw UsageError("forest: ensemble size must be positive");
  if (!(options_.lambda > 0.0)) throw UsageError("forest: lambda must be positive");
  if (!options_.member_detector) options_.member_detector = std::make_shared<Adwin>(0.001, 5, true);
  const SeededRng root(options_.seed);
  members_.reserve(options_.ensemble_size);
  for (std::size_t i = 0; i < options_.ensemble_size; ++i) {
    members_.push_back(Member{FimtTree(num_features_, options_.tree),
                              options_.member_detector->clone_fresh(),
                              root.substream("member", i)});
  }
}

double OnlineBaggingForest::predict(std::span<const double> x) const {
  double sum = 0.0;
  for (const auto& member : members_) sum += member.tree.predict(x);
  return sum / static_cast<double>(members_.size());
}

void OnlineBaggingForest::learn(std::span<const double> x, double y) {
  for (auto& member : members_) {
    const unsigned weight =
        options_.fixed_weight ? *options_.fixed_weight : member.rng.poisson(options_.lambda);
    if (weight == 0) continue;
    const double error = std::abs(y - member.tree.predict(x));
    member.tree.learn_weighted(x, y, static_cast<double>(weight));
    if (options_.detect_drift && member.detector->update(error)) {
      member.tree = FimtTree(num_features_, options_.tree);
      member.detector = options_.member_detector->clone_fresh();
      ++resets_;
    }
  }
}

std::uint64_t OnlineBaggingForest::state_hash() const {
  StateHasher h;
  for (const auto& member : members_) {
    h.add(member.tree.state_hash());
    member.detector->hash_into(h);
  }
  h.add(static_cast<std::uint64_t>(resets_));
  return h.value();
}

} // namespace streamreg
