#pragma once

#include "streamreg/interval.hpp"
#include "streamreg/metrics.hpp"
#include "streamreg/regressor.hpp"
#include "streamreg/schema.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace streamreg {

/// Pull-based instance source, so arbitrarily long streams never need to be
/// materialised.
class InstanceStream {
public:
  virtual ~InstanceStream() = default;
  /// Fills `out` and returns true, or returns false at end of stream.
  virtual bool next(Instance& out) = 0;
};

class SpanStream final : public InstanceStream {
public:
  explicit SpanStream(std::span<const Instance> instances) : instances_(instances) {}
  bool next(Instance& out) override;

private:
  std::span<const Instance> instances_;
  std::size_t position_ = 0;
};

struct ExperimentOptions {
  std::size_t prequential_window = 1000;
  /// 0 means "same as the prequential window".
  std::size_t report_every = 0;
  /// Predictor count p for adjusted R^2.
  std::size_t num_predictors = 0;
  /// Emit the model's state hash every this many instances; 0 disables.
  std::size_t state_hash_every = 0;
};

struct EvaluationRecord {
  /// Instances processed so far (1-based position of the last one).
  std::size_t index = 0;
  MetricValues prequential;
  MetricValues cumulative;
};

struct StateHashRecord {
  std::size_t index = 0;
  std::uint64_t hash = 0;
};

struct ExperimentSummary {
  std::size_t instances = 0;
  MetricValues cumulative;
  MetricValues prequential;
};

struct ExperimentSinks {
  std::function<void(const EvaluationRecord&)> on_record;
  std::function<void(const StateHashRecord&)> on_state_hash;
};

/// Test-then-train loop. For each instance, strictly in order: predict (and the
/// interval when `intervals` is set), score into the cumulative and prequential
/// states, then learn. When `intervals` is set it is the model that is trained;
/// it already wraps `learner`, so `learner` is only used for point predictions
/// when `intervals` is null. Records are emitted every report_every instances and
/// once more at the end if the last instance was not on the schedule.
///
/// Throws DataError on an empty stream.
ExperimentSummary run_experiment(InstanceStream& stream, Regressor& learner,
                                 IntervalModel* intervals, const ExperimentOptions& options,
                                 const ExperimentSinks& sinks);

struct ExperimentResult {
  std::vector<EvaluationRecord> records;
  std::vector<StateHashRecord> state_hashes;
  ExperimentSummary summary;
};

ExperimentResult run_experiment(std::span<const Instance> stream, Regressor& learner,
                                const ExperimentOptions& options);
ExperimentResult run_experiment(std::span<const Instance> stream, IntervalModel& model,
                                const ExperimentOptions& options);

enum class SeriesKind { prequential, cumulative };

/// `index,rmse,adj_r2,coverage,nmpiw`; a missing metric is an empty cell.
void write_metrics_csv(const std::filesystem::path& path, std::span<const EvaluationRecord> records,
                       SeriesKind series);

struct MetricsRow {
  std::size_t index = 0;
  MetricValues values;
};

/// Parses a metrics CSV written by write_metrics_csv. Throws DataError if malformed.
std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& path);

/// `key=value` lines, one per summary field; missing values print as empty.
std::string format_summary(const ExperimentSummary& summary);

} // namespace streamreg
