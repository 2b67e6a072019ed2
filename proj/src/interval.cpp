#include "streamreg/interval.hpp"

#include "streamreg/error.hpp"
#include "streamreg/normal.hpp"

#include <algorithm>
#include <cmath>

namespace streamreg {

IntervalModel::IntervalModel(std::unique_ptr<Regressor> base, double confidence)
    : base_(std::move(base)), confidence_(confidence) {
  if (!base_) throw UsageError("interval model needs a base regressor");
  if (!(confidence > 0.0 && confidence < 1.0)) throw UsageError("confidence must be in (0,1)");
  z_ = inverse_normal_cdf(0.5 * (1.0 + confidence));
}

IntervalPrediction IntervalModel::predict_interval(std::span<const double> x) const {
  const double point = base_->predict(x);
  return {point, interval_around(point)};
}

void IntervalModel::learn(std::span<const double> x, double y) {
  observe(base_->predict(x), y);
  base_->learn(x, y);
}

void ErrorSpread::add(double error) {
  ++count_;
  const double delta = error - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (error - mean_);
}

double ErrorSpread::sd() const {
  if (count_ < 2) return 0.0;
  return std::sqrt(std::max(0.0, m2_ / static_cast<double>(count_ - 1)));
}

void ErrorSpread::hash_into(StateHasher& h) const {
  h.add(static_cast<std::uint64_t>(count_));
  h.add(mean_);
  h.add(m2_);
}

MveModel::MveModel(std::unique_ptr<Regressor> base, double confidence)
    : IntervalModel(std::move(base), confidence) {}

Interval MveModel::interval_around(double point) const {
  const double half = z() * errors_.sd();
  return {point - half, point + half};
}

void MveModel::observe(double point, double y) { errors_.add(y - point); }

std::uint64_t MveModel::state_hash() const {
  StateHasher h;
  h.add(base_hash());
  errors_.hash_into(h);
  return h.value();
}

AdaPiModel::AdaPiModel(std::unique_ptr<Regressor> base, AdaPiOptions options)
    : IntervalModel(std::move(base), options.confidence), options_(options),
      scale_(std::max(options.initial_scale, options.scale_floor)), min_scale_(scale_),
      coverage_(options.confidence) {
  if (!(options_.scale_floor > 0.0)) throw UsageError("adapi: scale floor must be positive");
  if (!(options_.rate > 0.0)) throw UsageError("adapi: rate must be positive");
  if (!(options_.coverage_decay > 0.0 && options_.coverage_decay < 1.0))
    throw UsageError("adapi: coverage decay must be in (0,1)");
}

double AdaPiModel::next_scale(double scale, double target, double coverage_estimate, double rate,
                              double floor) {
  return std::max(floor, scale * (1.0 + rate * (target - coverage_estimate)));
}

Interval AdaPiModel::interval_around(double point) const {
  const double half = scale_ * z() * errors_.sd();
  return {point - half, point + half};
}

void AdaPiModel::observe(double point, double y) {
  const bool covered = interval_around(point).contains(y);
  const double decay = options_.coverage_decay;
  coverage_ = decay * coverage_ + (1.0 - decay) * (covered ? 1.0 : 0.0);
  scale_ = next_scale(scale_, confidence(), coverage_, options_.rate, options_.scale_floor);
  min_scale_ = std::min(min_scale_, scale_);
  errors_.add(y - point);
}

std::uint64_t AdaPiModel::state_hash() const {
  StateHasher h;
  h.add(base_hash());
  errors_.hash_into(h);
  h.add(scale_);
  h.add(coverage_);
  return h.value();
}

} // namespace streamreg
