#include "streamreg/cli.hpp"

#include "streamreg/concept_source.hpp"
#include "streamreg/csv.hpp"
#include "streamreg/error.hpp"
#include "streamreg/fimt.hpp"
#include "streamreg/forest.hpp"
#include "streamreg/knn.hpp"
#include "streamreg/soknl.hpp"

#include <cstdio>
#include <fstream>

namespace streamreg {

std::filesystem::path sibling_path(const std::filesystem::path& path, std::string_view suffix) {
  return path.parent_path() / (path.stem().string() + std::string(suffix));
}

namespace {

Json optional_path(const std::optional<std::filesystem::path>& path) {
  return path ? Json(path->string()) : Json(nullptr);
}

Json metric_json(const MetricValues& v) {
  const auto field = [](const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); };
  return Json{{"rmse", field(v.rmse)},
              {"adj_r2", field(v.adjusted_r2)},
              {"coverage", field(v.coverage)},
              {"nmpiw", field(v.nmpiw)}};
}

FimtOptions tree_options(const LearnerConfig& config) {
  FimtOptions options;
  options.grace_period = config.grace_period;
  options.split_confidence = config.split_confidence;
  options.tie_threshold = config.tie_threshold;
  return options;
}

ForestOptions forest_options(const LearnerConfig& config) {
  ForestOptions options;
  options.ensemble_size = config.ensemble_size;
  options.lambda = config.lambda;
  options.seed = config.seed;
  options.tree = tree_options(config);
  return options;
}

} // namespace

Json to_json(const LearnerConfig& c) {
  return Json{{"name", c.name},
              {"k", c.k},
              {"window", c.window},
              {"grace_period", c.grace_period},
              {"split_confidence", c.split_confidence},
              {"tie_threshold", c.tie_threshold},
              {"ensemble_size", c.ensemble_size},
              {"lambda", c.lambda},
              {"k_max", c.k_max},
              {"seed", c.seed}};
}

Json to_json(const IntervalConfig& c) {
  return Json{{"name", c.name}, {"confidence", c.confidence}, {"floor", c.floor}, {"rate", c.rate}};
}

Json to_json(const SynthesizeConfig& c) {
  return Json{{"subcommand", "synthesize"},
              {"input", c.input.string()},
              {"target", c.target},
              {"output", c.output.string()},
              {"drift", std::string(to_string(c.drift))},
              {"concepts", c.concepts},
              {"concept_length", c.concept_length},
              {"drift_length", c.drift_length},
              {"seed", c.seed},
              {"order", std::string(to_string(c.order))},
              {"correlation", std::string(to_string(c.correlation))},
              {"bandwidth", c.bandwidth},
              {"concepts_manifest", optional_path(c.concepts_manifest)}};
}

Json to_json(const RunConfig& c) {
  return Json{{"subcommand", "run"},
              {"input", c.input.string()},
              {"target", c.target ? Json(*c.target) : Json(nullptr)},
              {"output", c.output.string()},
              {"learner", to_json(c.learner)},
              {"pi", to_json(c.interval)},
              {"prequential_window", c.prequential_window},
              {"report_every", c.report_every ? c.report_every : c.prequential_window},
              {"debug_state_hash", c.debug_state_hash},
              {"cumulative_output", optional_path(c.cumulative_output)}};
}

Json to_json(const ReportConfig& c) {
  Json metrics = Json::array();
  for (const auto& p : c.metrics) metrics.push_back(p.string());
  return Json{{"subcommand", "report"},
              {"metrics", std::move(metrics)},
              {"labels", c.labels},
              {"stream_manifest", optional_path(c.stream_manifest)},
              {"output", c.output.string()}};
}

std::unique_ptr<Regressor> make_learner(const LearnerConfig& config, const Schema& schema) {
  const std::size_t d = schema.num_features();
  if (config.name == "knn")
    return std::make_unique<SlidingWindowKnn>(schema.feature_kinds(), config.k, config.window);
  if (config.name == "fimt") return std::make_unique<FimtTree>(d, tree_options(config));
  if (config.name == "arf") return std::make_unique<OnlineBaggingForest>(d, forest_options(config));
  if (config.name == "soknl") return std::make_unique<Soknl>(d, forest_options(config), config.k_max);
  throw UsageError("unknown learner '" + config.name + "' (expected knn, fimt, arf, soknl)");
}

std::unique_ptr<IntervalModel> make_interval_model(const IntervalConfig& config,
                                                   std::unique_ptr<Regressor> base) {
  if (config.name == "none") return nullptr;
  if (config.name == "mve") return std::make_unique<MveModel>(std::move(base), config.confidence);
  if (config.name == "adapi") {
    AdaPiOptions options;
    options.confidence = config.confidence;
    options.scale_floor = config.floor;
    options.rate = config.rate;
    return std::make_unique<AdaPiModel>(std::move(base), options);
  }
  throw UsageError("unknown prediction interval method '" + config.name +
                   "' (expected none, mve, adapi)");
}

SynthesizeReport cmd_synthesize(const SynthesizeConfig& config) {
  if (config.bandwidth != "silverman" && config.bandwidth != "zero")
    throw UsageError("unknown bandwidth rule '" + config.bandwidth + "' (expected silverman, zero)");

  DriftSpec spec;
  spec.kind = config.drift;
  spec.num_concepts = config.concepts;
  spec.concept_length = config.concept_length;
  spec.drift_length = config.drift_length;
  spec.seed = config.seed;
  spec.order = config.order;
  spec.validate();

  std::vector<std::unique_ptr<ConceptSource>> owned;
  std::string drifting_feature;
  std::string target = config.target;
  Json source_info;
  if (config.concepts_manifest) {
    auto set = load_concept_manifest(*config.concepts_manifest);
    if (set.concepts.size() != config.concepts)
      throw UsageError("concept manifest lists " + std::to_string(set.concepts.size()) +
                       " concepts but --concepts is " + std::to_string(config.concepts));
    drifting_feature = set.drifting_feature;
    target = set.target;
    owned = std::move(set.concepts);
    source_info = {{"kind", "concept-files"}, {"manifest", config.concepts_manifest->string()}};
  } else {
    const auto loaded = load_csv(config.input, config.target);
    drifting_feature = select_drifting_feature(loaded.instances, loaded.schema, config.correlation);
    auto chunks = chunk_by_feature(loaded.instances, loaded.schema, drifting_feature, config.concepts);
    for (auto& chunk : chunks) {
      if (config.bandwidth == "zero") {
        std::vector<double> zeros(loaded.schema.columns().size(), 0.0);
        owned.push_back(std::make_unique<BootstrapSampler>(loaded.schema, std::move(chunk), zeros));
      } else {
        owned.push_back(std::make_unique<BootstrapSampler>(loaded.schema, std::move(chunk)));
      }
    }
    source_info = {{"kind", "bootstrap"},
                   {"input", config.input.string()},
                   {"input_rows", loaded.instances.size()},
                   {"rejected_rows", loaded.rejected_rows},
                   {"bandwidth", config.bandwidth}};
  }

  std::vector<const ConceptSource*> concepts;
  for (const auto& c : owned) concepts.push_back(c.get());
  const auto stream = compose(concepts, spec, drifting_feature);

  write_csv(config.output, stream.schema, stream.instances);
  auto manifest = stream_manifest(stream, spec);
  manifest["target"] = target;
  manifest["source"] = std::move(source_info);
  manifest["config"] = to_json(config);
  write_json(manifest_path_for(config.output), manifest);

  return {stream.instances.size(), stream.drifting_feature, stream.boundaries};
}

ExperimentSummary cmd_run(const RunConfig& config) {
  const auto stream_manifest_path = manifest_path_for(config.input);
  SchemaHints hints;
  std::optional<Schema> declared;
  std::string target;
  if (std::filesystem::exists(stream_manifest_path)) {
    const auto manifest = read_json(stream_manifest_path);
    if (manifest.contains("schema")) {
      declared = schema_from_json(manifest.at("schema"));
      hints = hints_from(*declared);
      target = declared->target().name;
    }
  }
  if (config.target) {
    if (declared && *config.target != target)
      throw DataError("--target '" + *config.target + "' disagrees with the stream manifest ('" +
                      target + "')");
    target = *config.target;
  }
  if (target.empty()) throw UsageError("--target is required when the stream has no manifest");

  const auto loaded = load_csv(config.input, target, hints);
  if (declared && declared->columns().size() != loaded.schema.columns().size())
    throw DataError("stream CSV does not match its manifest schema");

  auto model = make_learner(config.learner, loaded.schema);
  Regressor* learner = model.get();
  std::unique_ptr<IntervalModel> intervals;
  if (config.interval.name != "none")
    intervals = make_interval_model(config.interval, std::move(model));

  ExperimentOptions options;
  options.prequential_window = config.prequential_window;
  options.report_every = config.report_every;
  options.num_predictors = loaded.schema.num_features();
  options.state_hash_every = config.debug_state_hash ? 10000 : 0;

  ExperimentResult result;
  SpanStream source(loaded.instances);
  ExperimentSinks sinks{
      [&](const EvaluationRecord& r) { result.records.push_back(r); },
      [&](const StateHashRecord& r) { result.state_hashes.push_back(r); }};
  result.summary = run_experiment(source, *learner, intervals.get(), options, sinks);

  write_metrics_csv(config.output, result.records, SeriesKind::prequential);
  if (config.cumulative_output)
    write_metrics_csv(*config.cumulative_output, result.records, SeriesKind::cumulative);
  {
    const auto path = sibling_path(config.output, ".summary.txt");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << format_summary(result.summary);
  }
  if (config.debug_state_hash) {
    const auto path = sibling_path(config.output, ".statehash.csv");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << "index,hash\n";
    for (const auto& h : result.state_hashes) {
      char hex[17];
      std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h.hash));
      out << h.index << ',' << hex << '\n';
    }
  }

  Json manifest{{"config", to_json(config)},
                {"target", target},
                {"schema", schema_to_json(loaded.schema)},
                {"instances", loaded.instances.size()},
                {"rejected_rows", loaded.rejected_rows},
                {"stream_manifest", std::filesystem::exists(stream_manifest_path)
                                        ? Json(stream_manifest_path.string())
                                        : Json(nullptr)},
                {"summary",
                 {{"instances", result.summary.instances},
                  {"cumulative", metric_json(result.summary.cumulative)},
                  {"prequential", metric_json(result.summary.prequential)}}}};
  write_json(manifest_path_for(config.output), manifest);
  return result.summary;
}

void cmd_report(const ReportConfig& config) {
  if (config.metrics.empty()) throw UsageError("report needs at least one metrics file");
  if (!config.labels.empty() && config.labels.size() != config.metrics.size())
    throw UsageError("give one --label per metrics file, or none");

  std::vector<DriftBoundary> boundaries;
  if (config.stream_manifest) {
    const auto manifest = read_json(*config.stream_manifest);
    try {
      for (const auto& b : manifest.at("boundaries"))
        boundaries.push_back({b.at(0).get<std::size_t>(), b.at(1).get<std::size_t>()});
    } catch (const Json::exception& e) {
      throw DataError(std::string("malformed boundaries in stream manifest: ") + e.what());
    }
  }

  std::ofstream out(config.output, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + config.output.string() + "'");
  out << "series,index,value\n";
  for (std::size_t i = 0; i < config.metrics.size(); ++i) {
    const auto label = config.labels.empty() ? config.metrics[i].stem().string() : config.labels[i];
    const auto rows = read_metrics_csv(config.metrics[i]);
    const std::pair<const char*, std::optional<double> MetricValues::*> metrics[] = {
        {"rmse", &MetricValues::rmse},
        {"adj_r2", &MetricValues::adjusted_r2},
        {"coverage", &MetricValues::coverage},
        {"nmpiw", &MetricValues::nmpiw}};
    for (const auto& [metric, member] : metrics) {
      for (const auto& row : rows) {
        const auto& value = row.values.*member;
        out << label << ':' << metric << ',' << row.index << ','
            << (value ? format_real(*value) : std::string()) << '\n';
      }
    }
  }
  for (std::size_t b = 0; b < boundaries.size(); ++b) {
    out << "drift_start," << boundaries[b].start << ',' << b + 1 << '\n';
    out << "drift_end," << boundaries[b].end << ',' << b + 1 << '\n';
  }
  if (!out) throw DataError("write to '" + config.output.string() + "' failed");
  out.close();

  write_json(manifest_path_for(config.output), Json{{"config", to_json(config)}});
}

} // namespace streamreg
