#pragma once

#include "streamreg/correlation.hpp"
#include "streamreg/drift.hpp"
#include "streamreg/experiment.hpp"
#include "streamreg/interval.hpp"
#include "streamreg/manifest.hpp"
#include "streamreg/regressor.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace streamreg {

/// Defaults follow the reference experiment setup: k = 10, window 1000, grace
/// period 200, split confidence 0.01, 30 ensemble members.
struct LearnerConfig {
  std::string name = "knn"; // knn | fimt | arf | soknl
  std::size_t k = 10;
  std::size_t window = 1000;
  std::size_t grace_period = 200;
  double split_confidence = 0.01;
  double tie_threshold = 0.05;
  std::size_t ensemble_size = 30;
  double lambda = 6.0;
  /// SOKNL only; 0 means ensemble size.
  std::size_t k_max = 0;
  std::uint64_t seed = 1;
};

struct IntervalConfig {
  std::string name = "none"; // none | mve | adapi
  double confidence = 0.95;
  double floor = 0.01;
  double rate = 0.02;
};

struct SynthesizeConfig {
  std::filesystem::path input;
  std::string target;
  std::filesystem::path output;
  DriftKind drift = DriftKind::abrupt;
  std::size_t concepts = 4;
  std::size_t concept_length = 50000;
  std::size_t drift_length = 0;
  std::uint64_t seed = 1;
  ConceptOrder order = ConceptOrder::random;
  CorrelationMethod correlation = CorrelationMethod::pearson;
  std::string bandwidth = "silverman"; // silverman | zero
  /// Use pre-generated concept files instead of bootstrapping from `input`.
  std::optional<std::filesystem::path> concepts_manifest;
};

struct RunConfig {
  std::filesystem::path input;
  /// Taken from the stream manifest when absent.
  std::optional<std::string> target;
  std::filesystem::path output;
  LearnerConfig learner;
  IntervalConfig interval;
  std::size_t prequential_window = 1000;
  std::size_t report_every = 0;
  bool debug_state_hash = false;
  std::optional<std::filesystem::path> cumulative_output;
};

struct ReportConfig {
  std::vector<std::filesystem::path> metrics;
  std::vector<std::string> labels;
  std::optional<std::filesystem::path> stream_manifest;
  std::filesystem::path output;
};

Json to_json(const LearnerConfig& config);
Json to_json(const IntervalConfig& config);
Json to_json(const SynthesizeConfig& config);
Json to_json(const RunConfig& config);
Json to_json(const ReportConfig& config);

/// Throws UsageError for an unknown learner name or invalid hyperparameters.
std::unique_ptr<Regressor> make_learner(const LearnerConfig& config, const Schema& schema);
/// nullptr (and `base` is released) for "none"; throws UsageError for an unknown name.
std::unique_ptr<IntervalModel> make_interval_model(const IntervalConfig& config,
                                                   std::unique_ptr<Regressor> base);

struct SynthesizeReport {
  std::size_t rows = 0;
  std::string drifting_feature;
  std::vector<DriftBoundary> boundaries;
};

/// Writes `output` and its manifest.
SynthesizeReport cmd_synthesize(const SynthesizeConfig& config);

/// Writes the metrics CSV at `output`, `<stem>.summary.txt`, the run manifest,
/// and with debug_state_hash `<stem>.statehash.csv`.
ExperimentSummary cmd_run(const RunConfig& config);

/// Writes a long-format `series,index,value` CSV plus its manifest.
void cmd_report(const ReportConfig& config);

/// Sibling path `<dir>/<stem><suffix>` of `path`.
std::filesystem::path sibling_path(const std::filesystem::path& path, std::string_view suffix);

} // namespace streamreg
