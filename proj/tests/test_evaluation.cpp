#include "support.hpp"

#include "streamreg/error.hpp"
#include "streamreg/experiment.hpp"
#include "streamreg/interval.hpp"
#include "streamreg/metrics.hpp"

#include <doctest.h>

using namespace streamreg;
using namespace testing_support;

namespace {

struct Triple {
  double y, yhat, lo, hi;
};

// Two-pass oracles written without the library types.
double rmse_oracle(const std::vector<Triple>& t) {
  double s = 0;
  for (auto& e : t) s += (e.y - e.yhat) * (e.y - e.yhat);
  return std::sqrt(s / t.size());
}
double adj_r2_oracle(const std::vector<Triple>& t, std::size_t p) {
  double m = 0;
  for (auto& e : t) m += e.y;
  m /= t.size();
  double sse = 0, sst = 0;
  for (auto& e : t) sse += (e.y - e.yhat) * (e.y - e.yhat), sst += (e.y - m) * (e.y - m);
  const double n = double(t.size());
  return 1 - (sse / sst) * (n - 1) / (n - p - 1);
}
double coverage_oracle(const std::vector<Triple>& t) {
  int in = 0;
  for (auto& e : t) in += e.lo <= e.y && e.y <= e.hi;
  return double(in) / t.size();
}
double nmpiw_oracle(const std::vector<Triple>& t, double range) {
  double w = 0;
  for (auto& e : t) w += e.hi - e.lo;
  return w / t.size() / range;
}

std::vector<LabelledPrediction> pairs_of(const std::vector<Triple>& t) {
  std::vector<LabelledPrediction> out;
  for (auto& e : t) out.push_back({e.y, e.yhat});
  return out;
}
std::vector<LabelledInterval> intervals_of(const std::vector<Triple>& t) {
  std::vector<LabelledInterval> out;
  for (auto& e : t) out.push_back({e.y, {e.lo, e.hi}});
  return out;
}

bool close(double a, double b, double tol = 1e-9) {
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

/// Returns x[0]. Learning only counts.
class FirstFeature final : public Regressor {
public:
  double predict(std::span<const double> x) const override { return x[0]; }
  void learn(std::span<const double>, double) override { ++n; }
  std::string_view name() const override { return "first"; }
  std::uint64_t state_hash() const override { return n; }
  std::uint64_t n = 0;
};

/// Predicts the number of labels learned so far; records the order of calls.
class Instrumented final : public Regressor {
public:
  double predict(std::span<const double>) const override {
    calls.push_back('p');
    return static_cast<double>(labels.size());
  }
  void learn(std::span<const double>, double y) override {
    calls.push_back('l');
    labels.push_back(y);
  }
  std::string_view name() const override { return "instrumented"; }
  std::uint64_t state_hash() const override { return labels.size(); }
  mutable std::string calls;
  std::vector<double> labels;
};

} // namespace

TEST_CASE("rmse examples") {
  const std::vector<LabelledPrediction> exact{{1, 1}, {2, 2}};
  CHECK(rmse(exact) == 0.0);
  const std::vector<LabelledPrediction> unit{{0, 1}, {0, -1}};
  CHECK(rmse(unit) == 1.0);
  const std::vector<LabelledPrediction> three{{1, 3}, {2, 2}, {3, 5}};
  CHECK(rmse(three) == doctest::Approx(std::sqrt(8.0 / 3.0)).epsilon(1e-15));
  CHECK(std::abs(rmse(three) - 1.632993) < 1e-6);
  CHECK_THROWS_AS(rmse({}), UndefinedStatistic);
}

TEST_CASE("adjusted r2 examples") {
  std::vector<LabelledPrediction> perfect;
  for (int i = 0; i < 5; ++i) perfect.push_back({double(i), double(i)});
  CHECK(adjusted_r2(perfect, 2) == 1.0);

  std::vector<LabelledPrediction> mean_only;
  for (int i = 0; i < 11; ++i) mean_only.push_back({double(i), 5.0});
  CHECK(adjusted_r2(mean_only, 1) == doctest::Approx(1.0 - 10.0 / 9.0).epsilon(1e-14));
  CHECK(adjusted_r2(mean_only, 1) == doctest::Approx(-1.0 / 9.0));

  const std::vector<LabelledPrediction> flat{{2, 1}, {2, 3}, {2, 2}};
  CHECK_THROWS_AS(adjusted_r2(flat, 0), UndefinedStatistic);
  CHECK_THROWS_AS(adjusted_r2(std::span(mean_only).first(3), 2), UndefinedStatistic);
  CHECK_NOTHROW(adjusted_r2(std::span(mean_only).first(4), 2));

  const std::vector<Triple> small{{1, 1.5, 0, 0}, {4, 3, 0, 0}, {2, 2.2, 0, 0}, {7, 6, 0, 0}, {3, 4, 0, 0}};
  CHECK(adjusted_r2(pairs_of(small), 2) == doctest::Approx(adj_r2_oracle(small, 2)).epsilon(1e-13));
}

TEST_CASE("coverage examples") {
  const std::vector<LabelledInterval> all_in{{1, {0, 2}}, {3, {2, 4}}};
  CHECK(coverage(all_in) == 1.0);
  const std::vector<LabelledInterval> half{{1, {0, 2}}, {5, {2, 4}}, {-1, {0, 1}}, {0.5, {0, 1}}};
  CHECK(coverage(half) == 0.5);
  const std::vector<LabelledInterval> on_bound{{2, {0, 2}}, {0, {0, 2}}, {3, {3, 3}}};
  CHECK(coverage(on_bound) == 1.0);
  CHECK_THROWS_AS(coverage({}), UndefinedStatistic);
}

TEST_CASE("nmpiw examples") {
  const std::vector<LabelledInterval> constant{{0, {0, 3}}, {0, {1, 4}}};
  CHECK(nmpiw(constant, 6.0) == 0.5);
  const std::vector<LabelledInterval> widths{{0, {0, 1}}, {0, {0, 3}}};
  CHECK(nmpiw(widths, 2.0) == 1.0);
  const std::vector<LabelledInterval> zero{{1, {1, 1}}, {2, {2, 2}}};
  CHECK(nmpiw(zero, 1.0) == 0.0);
  CHECK_THROWS_AS(nmpiw(widths, 0.0), UndefinedStatistic);
}

TEST_CASE("streaming accumulators equal batch recomputation") {
  SeededRng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(10000);
    const std::size_t window = 1 + rng.uniform_index(2000);
    const std::size_t p = rng.uniform_index(4);
    auto cum = MetricState::cumulative(p);
    auto pre = MetricState::prequential(window, p);
    std::vector<Triple> log;
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i < n; ++i) {
      const double y = rng.normal() * 5 + 100;
      const double yhat = y + rng.normal();
      const double w = rng.uniform() * 3;
      log.push_back({y, yhat, yhat - w, yhat + w});
      cum.add(y, yhat, Interval{yhat - w, yhat + w});
      pre.add(y, yhat, Interval{yhat - w, yhat + w});
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
    const auto c = cum.values();
    CHECK(close(*c.rmse, rmse_oracle(log)));
    if (n >= p + 2) CHECK(close(*c.adjusted_r2, adj_r2_oracle(log, p)));
    CHECK(close(*c.coverage, coverage_oracle(log)));
    CHECK(close(*c.nmpiw, nmpiw_oracle(log, hi - lo)));

    const std::vector<Triple> tail(log.end() - std::min(window, n), log.end());
    const auto w = pre.values();
    CHECK(pre.count() == tail.size());
    CHECK(close(*w.rmse, rmse_oracle(tail)));
    if (tail.size() >= p + 2) CHECK(close(*w.adjusted_r2, adj_r2_oracle(tail, p)));
    else CHECK_FALSE(w.adjusted_r2.has_value());
    CHECK(close(*w.coverage, coverage_oracle(tail)));
    // the range stays global in prequential mode
    CHECK(close(*w.nmpiw, nmpiw_oracle(tail, hi - lo)));
  }
}

TEST_CASE("window covering the whole stream equals cumulative") {
  SeededRng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 5 + rng.uniform_index(3000);
    auto cum = MetricState::cumulative(2);
    auto pre = MetricState::prequential(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
      const double y = rng.normal();
      const double yhat = 0.7 * y + 0.3 * rng.normal();
      const Interval iv{yhat - rng.uniform(), yhat + rng.uniform()};
      cum.add(y, yhat, iv);
      pre.add(y, yhat, iv);
    }
    const auto a = cum.values(), b = pre.values();
    CHECK(close(*a.rmse, *b.rmse));
    CHECK(close(*a.adjusted_r2, *b.adjusted_r2));
    CHECK(close(*a.coverage, *b.coverage));
    CHECK(close(*a.nmpiw, *b.nmpiw));
  }
}

TEST_CASE("missing values are explicit") {
  auto cum = MetricState::cumulative(3);
  CHECK_FALSE(cum.values().rmse.has_value());
  cum.add(1.0, 1.0);
  auto v = cum.values();
  CHECK(v.rmse == 0.0);
  CHECK_FALSE(v.adjusted_r2.has_value());
  CHECK_FALSE(v.coverage.has_value());
  CHECK_FALSE(v.nmpiw.has_value());
  cum.add(1.0, 1.0, Interval{0, 2});
  v = cum.values();
  CHECK(v.coverage == 1.0);
  CHECK_FALSE(v.nmpiw.has_value()); // range 0 so far
  CHECK_FALSE(cum.label_range().has_value());
}

TEST_CASE("perfect oracle learner") {
  std::vector<Instance> stream;
  SeededRng rng(7);
  for (int i = 0; i < 500; ++i) {
    const double y = rng.normal();
    stream.push_back({{y, rng.normal()}, y});
  }
  FirstFeature oracle;
  ExperimentOptions o;
  o.prequential_window = 100;
  o.num_predictors = 2;
  const auto r = run_experiment(stream, oracle, o);
  CHECK(*r.summary.cumulative.rmse == 0.0);
  CHECK(*r.summary.cumulative.adjusted_r2 == 1.0);
  CHECK(oracle.n == 500);
}

TEST_CASE("test-then-train ordering") {
  std::vector<Instance> stream;
  for (int i = 0; i < 50; ++i) stream.push_back({{0.0}, double(i)});
  Instrumented learner;
  ExperimentOptions o;
  o.prequential_window = 10;
  run_experiment(stream, learner, o);
  std::string expect;
  for (int i = 0; i < 50; ++i) expect += "pl";
  CHECK(learner.calls == expect);

  // with an interval model the base still sees predict before learn
  auto base = std::make_unique<Instrumented>();
  auto* raw = base.get();
  MveModel model(std::move(base), 0.9);
  run_experiment(stream, model, o);
  for (std::size_t i = 0; i + 1 < raw->calls.size(); ++i)
    if (raw->calls[i] == 'l') REQUIRE(raw->calls[i - 1] == 'p');
  CHECK(raw->labels.size() == 50);
}

TEST_CASE("each prediction is made before its own label is learned") {
  // Instrumented predicts the number of labels seen: prediction i must be i.
  std::vector<Instance> stream;
  for (int i = 0; i < 30; ++i) stream.push_back({{0.0}, double(i)});
  Instrumented learner;
  ExperimentOptions o;
  o.prequential_window = 30;
  const auto r = run_experiment(stream, learner, o);
  // y_i - yhat_i = i - i = 0 for all i
  CHECK(*r.summary.cumulative.rmse == 0.0);
}

TEST_CASE("record schedule") {
  std::vector<Instance> stream(2500, Instance{{0.0}, 0.0});
  for (std::size_t i = 0; i < stream.size(); ++i) stream[i].target = double(i % 7);
  FirstFeature f;
  ExperimentOptions o;
  o.prequential_window = 1000;
  auto r = run_experiment(stream, f, o);
  REQUIRE(r.records.size() == 3);
  CHECK(r.records[0].index == 1000);
  CHECK(r.records[1].index == 2000);
  CHECK(r.records[2].index == 2500);

  o.report_every = 500;
  o.state_hash_every = 1000;
  r = run_experiment(stream, f, o);
  CHECK(r.records.size() == 5);
  CHECK(r.records.back().index == 2500);
  CHECK(r.state_hashes.size() == 2);

  std::vector<Instance> empty;
  CHECK_THROWS_AS(run_experiment(empty, f, o), DataError);
}

TEST_CASE("metrics csv golden file and round trip") {
  TempDir dir("eval");
  std::vector<EvaluationRecord> records(2);
  records[0].index = 1000;
  records[0].prequential.rmse = 0.5;
  records[0].prequential.adjusted_r2 = -0.25;
  records[1].index = 1500;
  records[1].prequential.rmse = 0.1;
  records[1].prequential.adjusted_r2 = 0.75;
  records[1].prequential.coverage = 0.95;
  records[1].prequential.nmpiw = 0.3381;
  records[1].cumulative.rmse = 2.0;
  write_metrics_csv(dir / "m.csv", records, SeriesKind::prequential);
  CHECK(read_text(dir / "m.csv") ==
        "index,rmse,adj_r2,coverage,nmpiw\n"
        "1000,0.5,-0.25,,\n"
        "1500,0.1,0.75,0.95,0.3381\n");
  write_metrics_csv(dir / "c.csv", records, SeriesKind::cumulative);
  CHECK(read_text(dir / "c.csv") == "index,rmse,adj_r2,coverage,nmpiw\n1000,,,,\n1500,2,,,\n");

  const auto rows = read_metrics_csv(dir / "m.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].index == 1000);
  CHECK_FALSE(rows[0].values.coverage.has_value());
  CHECK(rows[1].values.nmpiw == 0.3381);

  write_text(dir / "bad.csv", "index,rmse\n1,2\n");
  CHECK_THROWS_AS(read_metrics_csv(dir / "bad.csv"), DataError);
  write_text(dir / "bad2.csv", "index,rmse,adj_r2,coverage,nmpiw\n1,x,,,\n");
  CHECK_THROWS_AS(read_metrics_csv(dir / "bad2.csv"), DataError);
}

TEST_CASE("summary block golden") {
  ExperimentSummary s;
  s.instances = 4177;
  s.cumulative.rmse = 2.25;
  s.cumulative.adjusted_r2 = 0.5;
  CHECK(format_summary(s) == "instances=4177\nrmse=2.25\nadj_r2=0.5\ncoverage=\nnmpiw=\n");
}
