#pragma once

#include "streamreg/interval.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace streamreg {

struct LabelledPrediction {
  double y = 0.0;
  double prediction = 0.0;
};

struct LabelledInterval {
  double y = 0.0;
  Interval interval;
};

// Batch forms. Each throws UndefinedStatistic when its precondition fails.

/// sqrt(mean((y - y_hat)^2)); needs at least one pair.
double rmse(std::span<const LabelledPrediction> pairs);
/// 1 - (1 - R^2)(n - 1)/(n - p - 1) with R^2 = 1 - SSE/SST; needs n >= p + 2 and SST > 0.
double adjusted_r2(std::span<const LabelledPrediction> pairs, std::size_t num_predictors);
/// Fraction of y inside its closed interval; needs at least one entry.
double coverage(std::span<const LabelledInterval> entries);
/// mean(upper - lower) / range; needs range > 0 and at least one entry.
double nmpiw(std::span<const LabelledInterval> entries, double range);

/// Metric snapshot; nullopt marks a metric whose precondition is not met yet.
struct MetricValues {
  std::optional<double> rmse;
  std::optional<double> adjusted_r2;
  std::optional<double> coverage;
  std::optional<double> nmpiw;
};

enum class EvaluationMode { cumulative, prequential };

/// Streaming metric accumulator.
///
/// Cumulative mode keeps O(1) compensated sums over every scored instance.
/// Prequential mode keeps the last `window` scored instances in a ring buffer
/// and evaluates them exactly on demand. In both modes the NMPIW range is the
/// running max(y) - min(y) over every label seen so far, and coverage/NMPIW are
/// taken over the instances that carried an interval.
class MetricState {
public:
  static MetricState cumulative(std::size_t num_predictors);
  static MetricState prequential(std::size_t window, std::size_t num_predictors);

  void add(double y, double prediction, std::optional<Interval> interval = std::nullopt);

  EvaluationMode mode() const { return mode_; }
  std::size_t window() const { return window_; }
  std::size_t seen() const { return seen_; }
  /// Number of instances the metrics currently cover.
  std::size_t count() const;
  MetricValues values() const;
  std::optional<double> label_range() const;

private:
  MetricState(EvaluationMode mode, std::size_t window, std::size_t num_predictors);

  struct Entry {
    double y;
    double prediction;
    bool has_interval;
    Interval interval;
  };

  /// Neumaier-compensated sum.
  struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double v);
    double value() const { return sum + carry; }
  };

  MetricValues cumulative_values() const;
  MetricValues window_values() const;

  EvaluationMode mode_;
  std::size_t window_;
  std::size_t num_predictors_;
  std::size_t seen_ = 0;
  double min_y_ = 0.0;
  double max_y_ = 0.0;

  // cumulative
  CompensatedSum squared_error_;
  double y_mean_ = 0.0;
  CompensatedSum y_m2_;
  std::size_t with_interval_ = 0;
  std::size_t inside_ = 0;
  CompensatedSum width_sum_;

  // prequential
  std::vector<Entry> ring_;
  std::size_t head_ = 0;
};

} // namespace streamreg
