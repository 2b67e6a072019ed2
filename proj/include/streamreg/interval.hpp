#pragma once

#include "streamreg/regressor.hpp"

#include <cstddef>
#include <memory>

namespace streamreg {

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  double width() const { return upper - lower; }
  /// Closed on both ends.
  bool contains(double y) const { return lower <= y && y <= upper; }
};

struct IntervalPrediction {
  double point = 0.0;
  Interval interval;
};

/// A regressor wrapped with a symmetric prediction interval.
///
/// learn() scores the interval the model would have produced for x against y,
/// updates the interval state, and only then trains the base model.
class IntervalModel : public Regressor {
public:
  IntervalModel(std::unique_ptr<Regressor> base, double confidence);

  double predict(std::span<const double> x) const override { return base_->predict(x); }
  IntervalPrediction predict_interval(std::span<const double> x) const;
  void learn(std::span<const double> x, double y) final;

  /// Interval around a point prediction under the current state.
  virtual Interval interval_around(double point) const = 0;

  const Regressor& base() const { return *base_; }
  double confidence() const { return confidence_; }
  /// Two-sided normal quantile for the confidence level.
  double z() const { return z_; }

protected:
  /// Called with the base prediction made before y was seen.
  virtual void observe(double point, double y) = 0;
  std::uint64_t base_hash() const { return base_->state_hash(); }

private:
  std::unique_ptr<Regressor> base_;
  double confidence_;
  double z_;
};

/// Running mean and unbiased standard deviation of signed errors y - y_hat.
class ErrorSpread {
public:
  void add(double error);
  std::size_t count() const { return count_; }
  double mean() const { return mean_; }
  /// 0 until two errors have been observed.
  double sd() const;
  void hash_into(StateHasher& h) const;

private:
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Mean and variance estimation: y_hat +/- z * sd(errors), errors assumed Gaussian.
class MveModel final : public IntervalModel {
public:
  MveModel(std::unique_ptr<Regressor> base, double confidence = 0.95);

  Interval interval_around(double point) const override;
  std::string_view name() const override { return "mve"; }
  std::uint64_t state_hash() const override;

  double sigma() const { return errors_.sd(); }
  const ErrorSpread& errors() const { return errors_; }

private:
  void observe(double point, double y) override;
  ErrorSpread errors_;
};

struct AdaPiOptions {
  double confidence = 0.95;
  double scale_floor = 0.01;
  double rate = 0.02;
  /// Decay of the exponentially weighted coverage estimate.
  double coverage_decay = 0.999;
  double initial_scale = 1.0;
};

/// MVE with a feedback scale on the half-width: y_hat +/- scale * z * sd(errors).
///
/// With every label the interval that was issued for it is scored, an
/// exponentially weighted coverage estimate c_hat (seeded at the target level c)
/// is updated, and scale <- max(floor, scale * (1 + rate * (c - c_hat))).
class AdaPiModel final : public IntervalModel {
public:
  AdaPiModel(std::unique_ptr<Regressor> base, AdaPiOptions options = {});

  Interval interval_around(double point) const override;
  std::string_view name() const override { return "adapi"; }
  std::uint64_t state_hash() const override;

  double sigma() const { return errors_.sd(); }
  double scale() const { return scale_; }
  double min_scale_seen() const { return min_scale_; }
  double coverage_estimate() const { return coverage_; }
  const AdaPiOptions& options() const { return options_; }

  static double next_scale(double scale, double target, double coverage_estimate, double rate,
                           double floor);

private:
  void observe(double point, double y) override;

  AdaPiOptions options_;
  ErrorSpread errors_;
  double scale_;
  double min_scale_;
  double coverage_;
};

} // namespace streamreg
