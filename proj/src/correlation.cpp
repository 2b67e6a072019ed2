#include "streamreg/correlation.hpp"

#include "streamreg/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace streamreg {

CorrelationMethod correlation_method_from_string(std::string_view text) {
  if (text == "pearson") return CorrelationMethod::pearson;
  if (text == "spearman") return CorrelationMethod::spearman;
  throw UsageError("unknown correlation method '" + std::string(text) + "'");
}

std::string_view to_string(CorrelationMethod method) {
  return method == CorrelationMethod::pearson ? "pearson" : "spearman";
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw UndefinedStatistic("correlation: length mismatch");
  if (x.size() < 2) throw UndefinedStatistic("correlation: need at least two points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedStatistic("correlation: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // positions i..j-1 hold ranks i+1..j
    const double mean_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = mean_rank;
    i = j;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw UndefinedStatistic("correlation: length mismatch");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

double correlation(CorrelationMethod method, std::span<const double> x, std::span<const double> y) {
  return method == CorrelationMethod::pearson ? pearson(x, y) : spearman(x, y);
}

std::string select_drifting_feature(std::span<const Instance> data, const Schema& schema,
                                    CorrelationMethod method) {
  std::vector<double> target;
  target.reserve(data.size());
  for (const auto& instance : data) target.push_back(instance.target);

  std::vector<double> column(data.size());
  std::optional<std::size_t> best;
  double best_strength = -1.0;
  bool any_numeric = false;
  // Feature slots are in column order, so a strict '>' keeps the lowest index on ties.
  for (std::size_t f = 0; f < schema.num_features(); ++f) {
    if (schema.feature_column(f).kind != ColumnKind::numeric) continue;
    any_numeric = true;
    for (std::size_t i = 0; i < data.size(); ++i) column[i] = data[i].features[f];
    double strength;
    try {
      strength = std::abs(correlation(method, column, target));
    } catch (const UndefinedStatistic&) {
      continue;
    }
    if (strength > best_strength) {
      best_strength = strength;
      best = f;
    }
  }
  if (!any_numeric) throw DataError("no numeric feature can serve as the drifting feature");
  if (!best) throw DataError("no numeric feature has a defined correlation with the target");
  return schema.feature_column(*best).name;
}

} // namespace streamreg
