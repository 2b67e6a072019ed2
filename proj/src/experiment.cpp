#include "streamreg/experiment.hpp"

#include "streamreg/csv.hpp"
#include "streamreg/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace streamreg {

bool SpanStream::next(Instance& out) {
  if (position_ >= instances_.size()) return false;
  out = instances_[position_++];
  return true;
}

ExperimentSummary run_experiment(InstanceStream& stream, Regressor& learner,
                                 IntervalModel* intervals, const ExperimentOptions& options,
                                 const ExperimentSinks& sinks) {
  const std::size_t report_every =
      options.report_every ? options.report_every : options.prequential_window;
  auto cumulative = MetricState::cumulative(options.num_predictors);
  auto prequential = MetricState::prequential(options.prequential_window, options.num_predictors);
  Regressor& model = intervals ? static_cast<Regressor&>(*intervals) : learner;

  Instance instance;
  std::size_t index = 0;
  std::size_t last_reported = 0;
  while (stream.next(instance)) {
    ++index;
    std::optional<Interval> interval;
    double prediction;
    if (intervals) {
      const auto p = intervals->predict_interval(instance.features);
      prediction = p.point;
      interval = p.interval;
    } else {
      prediction = learner.predict(instance.features);
    }
    cumulative.add(instance.target, prediction, interval);
    prequential.add(instance.target, prediction, interval);
    model.learn(instance.features, instance.target);

    if (report_every && index % report_every == 0) {
      if (sinks.on_record) sinks.on_record({index, prequential.values(), cumulative.values()});
      last_reported = index;
    }
    if (options.state_hash_every && index % options.state_hash_every == 0 && sinks.on_state_hash)
      sinks.on_state_hash({index, model.state_hash()});
  }
  if (index == 0) throw DataError("cannot evaluate an empty stream");

  ExperimentSummary summary{index, cumulative.values(), prequential.values()};
  if (last_reported != index && sinks.on_record)
    sinks.on_record({index, summary.prequential, summary.cumulative});
  return summary;
}

namespace {

ExperimentResult collect(std::span<const Instance> stream, Regressor& learner,
                         IntervalModel* intervals, const ExperimentOptions& options) {
  ExperimentResult result;
  SpanStream source(stream);
  ExperimentSinks sinks{
      [&](const EvaluationRecord& r) { result.records.push_back(r); },
      [&](const StateHashRecord& r) { result.state_hashes.push_back(r); }};
  result.summary = run_experiment(source, learner, intervals, options, sinks);
  return result;
}

std::string cell(const std::optional<double>& value) {
  return value ? format_real(*value) : std::string();
}

std::optional<double> parse_cell(std::string_view text, const std::filesystem::path& path) {
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size())
    throw DataError("malformed metric value '" + std::string(text) + "' in '" + path.string() + "'");
  return value;
}

constexpr std::string_view kMetricsHeader = "index,rmse,adj_r2,coverage,nmpiw";

} // namespace

ExperimentResult run_experiment(std::span<const Instance> stream, Regressor& learner,
                                const ExperimentOptions& options) {
  return collect(stream, learner, nullptr, options);
}

ExperimentResult run_experiment(std::span<const Instance> stream, IntervalModel& model,
                                const ExperimentOptions& options) {
  return collect(stream, model, &model, options);
}

void write_metrics_csv(const std::filesystem::path& path, std::span<const EvaluationRecord> records,
                       SeriesKind series) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << kMetricsHeader << '\n';
  for (const auto& record : records) {
    const auto& v = series == SeriesKind::prequential ? record.prequential : record.cumulative;
    out << record.index << ',' << cell(v.rmse) << ',' << cell(v.adjusted_r2) << ','
        << cell(v.coverage) << ',' << cell(v.nmpiw) << '\n';
  }
  if (!out) throw DataError("write to '" + path.string() + "' failed");
}

std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != kMetricsHeader)
    throw DataError("'" + path.string() + "' is not a metrics file (bad header)");
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 5) throw DataError("malformed metrics row in '" + path.string() + "'");
    MetricsRow row;
    const auto [end, ec] =
        std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), row.index);
    if (ec != std::errc{} || end != fields[0].data() + fields[0].size())
      throw DataError("malformed index in '" + path.string() + "'");
    row.values.rmse = parse_cell(fields[1], path);
    row.values.adjusted_r2 = parse_cell(fields[2], path);
    row.values.coverage = parse_cell(fields[3], path);
    row.values.nmpiw = parse_cell(fields[4], path);
    rows.push_back(row);
  }
  return rows;
}

std::string format_summary(const ExperimentSummary& summary) {
  std::ostringstream out;
  out << "instances=" << summary.instances << '\n'
      << "rmse=" << cell(summary.cumulative.rmse) << '\n'
      << "adj_r2=" << cell(summary.cumulative.adjusted_r2) << '\n'
      << "coverage=" << cell(summary.cumulative.coverage) << '\n'
      << "nmpiw=" << cell(summary.cumulative.nmpiw) << '\n';
  return out.str();
}

} // namespace streamreg
