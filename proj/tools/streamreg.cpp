#include "streamreg/cli.hpp"
#include "streamreg/error.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

void add_learner_flags(CLI::App& cmd, streamreg::LearnerConfig& c) {
  cmd.add_option("--learner", c.name, "knn | fimt | arf | soknl")->capture_default_str();
  cmd.add_option("--k", c.k, "neighbours for knn")->capture_default_str();
  cmd.add_option("--window", c.window, "knn window size")->capture_default_str();
  cmd.add_option("--grace-period", c.grace_period)->capture_default_str();
  cmd.add_option("--split-confidence", c.split_confidence)->capture_default_str();
  cmd.add_option("--tie-threshold", c.tie_threshold)->capture_default_str();
  cmd.add_option("--ensemble-size", c.ensemble_size)->capture_default_str();
  cmd.add_option("--lambda", c.lambda, "online bagging Poisson rate")->capture_default_str();
  cmd.add_option("--k-max", c.k_max, "soknl: largest k considered (0 = ensemble size)")
      ->capture_default_str();
  cmd.add_option("--seed", c.seed)->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
  using namespace streamreg;

  CLI::App app{"Drifted regression stream synthesis and test-then-train evaluation"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> config_out;
  app.add_option_function<std::string>("--config-out", [&](const std::string& p) { config_out = p; },
                                       "write the resolved settings as JSON");

  SynthesizeConfig synth;
  std::string drift = "abrupt", order = "random", method = "pearson";
  std::string concepts_manifest;
  auto* synthesize = app.add_subcommand("synthesize", "compose a drifted stream from a CSV table");
  synthesize->add_option("--input", synth.input, "source CSV");
  synthesize->add_option("--target", synth.target, "target column");
  synthesize->add_option("--output", synth.output, "stream CSV to write")->required();
  synthesize->add_option("--drift", drift, "abrupt | gradual | incremental")->capture_default_str();
  synthesize->add_option("--concepts", synth.concepts)->capture_default_str();
  synthesize->add_option("--concept-length", synth.concept_length)->capture_default_str();
  synthesize->add_option("--drift-length", synth.drift_length, "width 2n of each drifting period")
      ->capture_default_str();
  synthesize->add_option("--seed", synth.seed)->capture_default_str();
  synthesize->add_option("--order", order, "random | given")->capture_default_str();
  synthesize->add_option("--correlation", method, "pearson | spearman")->capture_default_str();
  synthesize->add_option("--bandwidth", synth.bandwidth, "silverman | zero")->capture_default_str();
  synthesize->add_option("--concepts-manifest", concepts_manifest,
                         "use concept CSVs listed in this manifest instead of --input");

  RunConfig run;
  std::string target;
  std::string cumulative_out;
  auto* run_cmd = app.add_subcommand("run", "evaluate a learner test-then-train over a stream");
  run_cmd->add_option("--input", run.input, "stream CSV")->required();
  run_cmd->add_option("--target", target, "target column (default: from the stream manifest)");
  run_cmd->add_option("--output", run.output, "metrics CSV to write")->required();
  add_learner_flags(*run_cmd, run.learner);
  run_cmd->add_option("--pi", run.interval.name, "none | mve | adapi")->capture_default_str();
  run_cmd->add_option("--confidence", run.interval.confidence)->capture_default_str();
  run_cmd->add_option("--adapi-floor", run.interval.floor)->capture_default_str();
  run_cmd->add_option("--adapi-rate", run.interval.rate)->capture_default_str();
  run_cmd->add_option("--prequential-window", run.prequential_window)->capture_default_str();
  run_cmd->add_option("--report-every", run.report_every, "0 = prequential window")
      ->capture_default_str();
  run_cmd->add_flag("--debug-state-hash", run.debug_state_hash,
                    "write the model state hash every 10k instances");
  run_cmd->add_option("--cumulative-output", cumulative_out, "also write the cumulative series");

  ReportConfig report;
  std::string stream_manifest;
  auto* report_cmd = app.add_subcommand("report", "merge metrics files into long-format plot data");
  report_cmd->add_option("--metrics", report.metrics, "metrics CSVs")->required();
  report_cmd->add_option("--label", report.labels, "series label per metrics file");
  report_cmd->add_option("--manifest", stream_manifest, "stream manifest with drift boundaries");
  report_cmd->add_option("--output", report.output, "long CSV to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    Json resolved;
    if (*synthesize) {
      synth.drift = drift_kind_from_string(drift);
      synth.order = concept_order_from_string(order);
      synth.correlation = correlation_method_from_string(method);
      if (!concepts_manifest.empty()) synth.concepts_manifest = concepts_manifest;
      else if (synth.input.empty() || synth.target.empty())
        throw UsageError("synthesize needs --input and --target (or --concepts-manifest)");
      resolved = to_json(synth);
      if (config_out) write_json(*config_out, resolved);
      const auto result = cmd_synthesize(synth);
      std::cout << "rows=" << result.rows << "\ndrifting_feature=" << result.drifting_feature
                << "\nboundaries=" << result.boundaries.size() << '\n';
    } else if (*run_cmd) {
      if (!target.empty()) run.target = target;
      if (!cumulative_out.empty()) run.cumulative_output = cumulative_out;
      resolved = to_json(run);
      if (config_out) write_json(*config_out, resolved);
      std::cout << format_summary(cmd_run(run));
    } else if (*report_cmd) {
      if (!stream_manifest.empty()) report.stream_manifest = stream_manifest;
      resolved = to_json(report);
      if (config_out) write_json(*config_out, resolved);
      cmd_report(report);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
