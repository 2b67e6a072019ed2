#include "streamreg/metrics.hpp"

#include "streamreg/error.hpp"

#include <algorithm>
#include <cmath>

namespace streamreg {

double rmse(std::span<const LabelledPrediction> pairs) {
  if (pairs.empty()) throw UndefinedStatistic("rmse of an empty sequence");
  double sse = 0.0;
  for (const auto& p : pairs) sse += (p.y - p.prediction) * (p.y - p.prediction);
  return std::sqrt(sse / static_cast<double>(pairs.size()));
}

double adjusted_r2(std::span<const LabelledPrediction> pairs, std::size_t num_predictors) {
  const std::size_t n = pairs.size();
  if (n < num_predictors + 2)
    throw UndefinedStatistic("adjusted R2 needs at least p + 2 instances");
  double mean = 0.0;
  for (const auto& p : pairs) mean += p.y;
  mean /= static_cast<double>(n);
  double sse = 0.0, sst = 0.0;
  for (const auto& p : pairs) {
    sse += (p.y - p.prediction) * (p.y - p.prediction);
    sst += (p.y - mean) * (p.y - mean);
  }
  if (!(sst > 0.0)) throw UndefinedStatistic("adjusted R2 undefined for constant targets");
  const double r2 = 1.0 - sse / sst;
  return 1.0 - (1.0 - r2) * static_cast<double>(n - 1) / static_cast<double>(n - num_predictors - 1);
}

double coverage(std::span<const LabelledInterval> entries) {
  if (entries.empty()) throw UndefinedStatistic("coverage of an empty sequence");
  std::size_t inside = 0;
  for (const auto& e : entries) inside += e.interval.contains(e.y) ? 1 : 0;
  return static_cast<double>(inside) / static_cast<double>(entries.size());
}

double nmpiw(std::span<const LabelledInterval> entries, double range) {
  if (!(range > 0.0)) throw UndefinedStatistic("NMPIW undefined for a zero target range");
  if (entries.empty()) throw UndefinedStatistic("NMPIW of an empty sequence");
  double widths = 0.0;
  for (const auto& e : entries) widths += e.interval.width();
  return widths / static_cast<double>(entries.size()) / range;
}

void MetricState::CompensatedSum::add(double v) {
  const double t = sum + v;
  if (std::abs(sum) >= std::abs(v)) carry += (sum - t) + v;
  else carry += (v - t) + sum;
  sum = t;
}

MetricState::MetricState(EvaluationMode mode, std::size_t window, std::size_t num_predictors)
    : mode_(mode), window_(window), num_predictors_(num_predictors) {
  if (mode_ == EvaluationMode::prequential) {
    if (window_ == 0) throw UsageError("prequential window must be positive");
    ring_.reserve(window_);
  }
}

MetricState MetricState::cumulative(std::size_t num_predictors) {
  return MetricState(EvaluationMode::cumulative, 0, num_predictors);
}

MetricState MetricState::prequential(std::size_t window, std::size_t num_predictors) {
  return MetricState(EvaluationMode::prequential, window, num_predictors);
}

void MetricState::add(double y, double prediction, std::optional<Interval> interval) {
  if (seen_ == 0) {
    min_y_ = max_y_ = y;
  } else {
    min_y_ = std::min(min_y_, y);
    max_y_ = std::max(max_y_, y);
  }
  ++seen_;

  if (mode_ == EvaluationMode::prequential) {
    Entry entry{y, prediction, interval.has_value(), interval.value_or(Interval{})};
    if (ring_.size() < window_) {
      ring_.push_back(entry);
    } else {
      ring_[head_] = entry;
      head_ = (head_ + 1) % window_;
    }
    return;
  }

  const double err = y - prediction;
  squared_error_.add(err * err);
  const double delta = y - y_mean_;
  y_mean_ += delta / static_cast<double>(seen_);
  y_m2_.add(delta * (y - y_mean_));
  if (interval) {
    ++with_interval_;
    if (interval->contains(y)) ++inside_;
    width_sum_.add(interval->width());
  }
}

std::size_t MetricState::count() const {
  return mode_ == EvaluationMode::prequential ? ring_.size() : seen_;
}

std::optional<double> MetricState::label_range() const {
  if (seen_ == 0 || !(max_y_ > min_y_)) return std::nullopt;
  return max_y_ - min_y_;
}

MetricValues MetricState::values() const {
  return mode_ == EvaluationMode::prequential ? window_values() : cumulative_values();
}

MetricValues MetricState::cumulative_values() const {
  MetricValues out;
  const std::size_t n = seen_;
  if (n == 0) return out;
  const double sse = squared_error_.value();
  out.rmse = std::sqrt(sse / static_cast<double>(n));
  const double sst = y_m2_.value();
  if (n >= num_predictors_ + 2 && sst > 0.0) {
    const double r2 = 1.0 - sse / sst;
    out.adjusted_r2 =
        1.0 - (1.0 - r2) * static_cast<double>(n - 1) / static_cast<double>(n - num_predictors_ - 1);
  }
  if (with_interval_ > 0) {
    out.coverage = static_cast<double>(inside_) / static_cast<double>(with_interval_);
    if (const auto range = label_range())
      out.nmpiw = width_sum_.value() / static_cast<double>(with_interval_) / *range;
  }
  return out;
}

MetricValues MetricState::window_values() const {
  MetricValues out;
  const std::size_t n = ring_.size();
  if (n == 0) return out;
  std::vector<LabelledPrediction> pairs;
  std::vector<LabelledInterval> intervals;
  pairs.reserve(n);
  for (const auto& e : ring_) {
    pairs.push_back({e.y, e.prediction});
    if (e.has_interval) intervals.push_back({e.y, e.interval});
  }
  out.rmse = rmse(pairs);
  try {
    out.adjusted_r2 = adjusted_r2(pairs, num_predictors_);
  } catch (const UndefinedStatistic&) {
  }
  if (!intervals.empty()) {
    out.coverage = coverage(intervals);
    if (const auto range = label_range()) out.nmpiw = nmpiw(intervals, *range);
  }
  return out;
}

} // namespace streamreg
