#include "streamreg/fimt.hpp"

#include "streamreg/error.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace streamreg {

void RunningStats::add(double value, double w) {
  if (w <= 0.0) return;
  weight += w;
  const double delta = value - mean;
  mean += delta * w / weight;
  m2 += w * delta * (value - mean);
}

void RunningStats::merge(const RunningStats& other) {
  if (other.weight <= 0.0) return;
  if (weight <= 0.0) {
    *this = other;
    return;
  }
  const double total = weight + other.weight;
  const double delta = other.mean - mean;
  mean += delta * other.weight / total;
  m2 += other.m2 + delta * delta * weight * other.weight / total;
  weight = total;
}

double RunningStats::sd() const { return std::sqrt(std::max(0.0, variance())); }

double hoeffding_bound(double range, double confidence, double n) {
  return std::sqrt(range * range * std::log(1.0 / confidence) / (2.0 * n));
}

namespace {

struct Candidate {
  double sdr = 0.0;
  double threshold = 0.0;
  RunningStats left, right;
};

/// Equal-width histogram of target statistics over one feature.
class FeatureHistogram {
public:
  void add(double v, double y, double w, std::size_t num_bins) {
    if (!ranged_) {
      if (!has_anchor_ || v == anchor_) {
        anchor_ = v;
        has_anchor_ = true;
        anchor_stats_.add(y, w);
        return;
      }
      lo_ = std::min(anchor_, v);
      width_ = (std::max(anchor_, v) - lo_) / static_cast<double>(num_bins);
      if (!(width_ > 0.0)) return; // values too close to resolve; keep anchoring
      bins_.assign(num_bins, RunningStats{});
      ranged_ = true;
      bins_[bin_of(anchor_)].merge(anchor_stats_);
    }
    while (v < lo_) extend_down();
    while (v > lo_ + width_ * static_cast<double>(bins_.size())) extend_up();
    bins_[bin_of(v)].add(y, w);
  }

  /// Best standard-deviation reduction over the interior bin edges.
  std::optional<Candidate> best_split(const RunningStats& all) const {
    if (!ranged_) return std::nullopt;
    const std::size_t n = bins_.size();
    std::vector<RunningStats> suffix(n + 1);
    for (std::size_t i = n; i-- > 0;) {
      suffix[i] = suffix[i + 1];
      suffix[i].merge(bins_[i]);
    }
    const double total_weight = suffix[0].weight;
    const double total_sd = all.sd();
    std::optional<Candidate> best;
    RunningStats left;
    for (std::size_t b = 0; b + 1 < n; ++b) {
      left.merge(bins_[b]);
      const RunningStats& right = suffix[b + 1];
      if (left.weight <= 0.0 || right.weight <= 0.0) continue;
      const double sdr = total_sd - left.weight / total_weight * left.sd() -
                         right.weight / total_weight * right.sd();
      if (!best || sdr > best->sdr) {
        best = Candidate{sdr, lo_ + width_ * static_cast<double>(b + 1), left, right};
      }
    }
    return best;
  }

  void hash_into(StateHasher& h) const {
    h.add(ranged_);
    h.add(anchor_);
    h.add(lo_);
    h.add(width_);
    for (const auto& b : bins_) {
      h.add(b.weight);
      h.add(b.mean);
      h.add(b.m2);
    }
  }

private:
  std::size_t bin_of(double v) const {
    const double position = std::floor((v - lo_) / width_);
    if (position <= 0.0) return 0;
    return std::min(static_cast<std::size_t>(position), bins_.size() - 1);
  }

  // Doubling keeps every old bin boundary on a new boundary, so merged bins hold
  // exactly the values of their new range.
  void extend_up() {
    const std::size_t n = bins_.size();
    std::vector<RunningStats> merged(n);
    for (std::size_t i = 0; i < n; ++i) merged[i / 2].merge(bins_[i]);
    bins_ = std::move(merged);
    width_ *= 2.0;
  }

  void extend_down() {
    const std::size_t n = bins_.size();
    std::vector<RunningStats> merged(n);
    for (std::size_t i = 0; i < n; ++i) merged[n / 2 + i / 2].merge(bins_[i]);
    bins_ = std::move(merged);
    lo_ -= width_ * static_cast<double>(n);
    width_ *= 2.0;
  }

  bool ranged_ = false;
  bool has_anchor_ = false;
  double anchor_ = 0.0;
  RunningStats anchor_stats_;
  double lo_ = 0.0;
  double width_ = 0.0;
  std::vector<RunningStats> bins_;
};

} // namespace

struct FimtTree::Leaf {
  std::uint64_t id = 0;
  RunningStats target;
  double prior_mean = 0.0;
  std::vector<double> centroid;
  std::vector<FeatureHistogram> histograms;
  double since_attempt = 0.0;

  double mean() const { return target.weight > 0.0 ? target.mean : prior_mean; }
};

struct FimtTree::Node {
  std::size_t depth = 0;
  // Leaf when set; otherwise a split node.
  std::unique_ptr<Leaf> leaf;
  std::size_t feature = 0;
  double threshold = 0.0;
  std::unique_ptr<Node> left, right;
  std::unique_ptr<DriftDetector> detector;
  RunningStats passing;
};

FimtTree::FimtTree(std::size_t num_features, FimtOptions options)
    : num_features_(num_features), options_(std::move(options)) {
  if (options_.grace_period == 0) throw UsageError("fimt: grace period must be positive");
  if (!(options_.split_confidence > 0.0 && options_.split_confidence < 1.0))
    throw UsageError("fimt: split confidence must be in (0,1)");
  if (options_.num_bins < 2) throw UsageError("fimt: need at least two histogram bins");
  if (!options_.detector_prototype)
    options_.detector_prototype = std::make_shared<PageHinkley>(options_.page_hinkley);
  root_ = make_leaf(0.0, 0);
}

FimtTree::FimtTree(FimtTree&&) noexcept = default;
FimtTree& FimtTree::operator=(FimtTree&&) noexcept = default;
FimtTree::~FimtTree() = default;

std::unique_ptr<FimtTree::Node> FimtTree::make_leaf(double prior_mean, std::size_t depth) {
  auto node = std::make_unique<Node>();
  node->depth = depth;
  node->leaf = std::make_unique<Leaf>();
  node->leaf->id = next_leaf_id_++;
  node->leaf->prior_mean = prior_mean;
  node->leaf->centroid.assign(num_features_, 0.0);
  node->leaf->histograms.resize(num_features_);
  return node;
}

double FimtTree::predict(std::span<const double> x) const { return route(x).mean; }

LeafView FimtTree::route(std::span<const double> x) const {
  if (x.size() != num_features_) throw DataError("fimt: feature vector has the wrong length");
  const Node* node = root_.get();
  while (!node->leaf) node = x[node->feature] < node->threshold ? node->left.get() : node->right.get();
  const Leaf& leaf = *node->leaf;
  return LeafView{leaf.id, leaf.target.weight, leaf.mean(), leaf.centroid};
}

void FimtTree::learn_weighted(std::span<const double> x, double y, double weight) {
  if (x.size() != num_features_) throw DataError("fimt: feature vector has the wrong length");
  if (weight <= 0.0) return;
  const double error = std::abs(y - predict(x));

  std::unique_ptr<Node>* slot = &root_;
  while (!(*slot)->leaf) {
    Node& node = **slot;
    node.passing.add(y, weight);
    if (node.detector && node.detector->update(error)) {
      ++drift_alarms_;
      *slot = make_leaf(node.passing.mean, node.depth);
      break;
    }
    slot = x[node.feature] < node.threshold ? &node.left : &node.right;
  }

  Leaf& leaf = *(*slot)->leaf;
  leaf.target.add(y, weight);
  const double share = weight / leaf.target.weight;
  for (std::size_t j = 0; j < num_features_; ++j) {
    leaf.centroid[j] += share * (x[j] - leaf.centroid[j]);
    leaf.histograms[j].add(x[j], y, weight, options_.num_bins);
  }
  leaf.since_attempt += weight;
  if (leaf.since_attempt >= static_cast<double>(options_.grace_period)) {
    leaf.since_attempt = 0.0;
    attempt_split(*slot);
  }
}

void FimtTree::attempt_split(std::unique_ptr<Node>& slot) {
  Leaf& leaf = *slot->leaf;
  struct Ranked {
    std::size_t feature;
    Candidate candidate;
  };
  std::vector<Ranked> ranked;
  for (std::size_t j = 0; j < num_features_; ++j) {
    auto candidate = leaf.histograms[j].best_split(leaf.target);
    if (candidate && candidate->sdr > 0.0) ranked.push_back({j, *candidate});
  }
  if (ranked.empty()) return;
  std::stable_sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    return a.candidate.sdr > b.candidate.sdr;
  });
  const double best = ranked[0].candidate.sdr;
  const double runner_up = ranked.size() > 1 ? ranked[1].candidate.sdr : 0.0;
  const double eps = hoeffding_bound(1.0, options_.split_confidence, leaf.target.weight);
  if (!(runner_up / best < 1.0 - eps || eps < options_.tie_threshold)) return;

  const auto& chosen = ranked[0];
  auto split = std::make_unique<Node>();
  split->depth = slot->depth;
  split->feature = chosen.feature;
  split->threshold = chosen.candidate.threshold;
  split->passing = leaf.target;
  split->left = make_leaf(chosen.candidate.left.mean, slot->depth + 1);
  split->right = make_leaf(chosen.candidate.right.mean, slot->depth + 1);
  if (options_.detect_drift) split->detector = options_.detector_prototype->clone_fresh();
  slot = std::move(split);
}

std::vector<LeafView> FimtTree::leaves() const {
  std::vector<LeafView> out;
  std::vector<const Node*> stack{root_.get()};
  while (!stack.empty()) {
    const Node* node = stack.back();
    stack.pop_back();
    if (node->leaf) {
      out.push_back({node->leaf->id, node->leaf->target.weight, node->leaf->mean(),
                     node->leaf->centroid});
    } else {
      stack.push_back(node->right.get());
      stack.push_back(node->left.get());
    }
  }
  return out;
}

std::optional<SplitCandidateView> FimtTree::split_candidate(std::span<const double> x,
                                                           std::size_t feature) const {
  if (x.size() != num_features_ || feature >= num_features_)
    throw DataError("fimt: bad feature vector or feature index");
  const Node* node = root_.get();
  while (!node->leaf) node = x[node->feature] < node->threshold ? node->left.get() : node->right.get();
  const Leaf& leaf = *node->leaf;
  const auto c = leaf.histograms[feature].best_split(leaf.target);
  if (!c) return std::nullopt;
  return SplitCandidateView{c->sdr, c->threshold, c->left.weight, c->right.weight};
}

std::vector<SplitView> FimtTree::splits() const {
  std::vector<SplitView> out;
  std::vector<const Node*> stack{root_.get()};
  while (!stack.empty()) {
    const Node* node = stack.back();
    stack.pop_back();
    if (node->leaf) continue;
    out.push_back({node->feature, node->threshold, node->depth});
    stack.push_back(node->right.get());
    stack.push_back(node->left.get());
  }
  return out;
}

std::uint64_t FimtTree::state_hash() const {
  StateHasher h;
  std::vector<const Node*> stack{root_.get()};
  while (!stack.empty()) {
    const Node* node = stack.back();
    stack.pop_back();
    h.add(node->leaf != nullptr);
    if (node->leaf) {
      const Leaf& leaf = *node->leaf;
      h.add(leaf.id);
      h.add(leaf.target.weight);
      h.add(leaf.target.mean);
      h.add(leaf.target.m2);
      h.add(leaf.prior_mean);
      h.add(leaf.since_attempt);
      for (double c : leaf.centroid) h.add(c);
      for (const auto& hist : leaf.histograms) hist.hash_into(h);
    } else {
      h.add(static_cast<std::uint64_t>(node->feature));
      h.add(node->threshold);
      h.add(node->passing.mean);
      if (node->detector) node->detector->hash_into(h);
      stack.push_back(node->right.get());
      stack.push_back(node->left.get());
    }
  }
  h.add(static_cast<std::uint64_t>(drift_alarms_));
  return h.value();
}

} // namespace streamreg
