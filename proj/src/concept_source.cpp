#include "streamreg/concept_source.hpp"

#include "streamreg/csv.hpp"
#include "streamreg/error.hpp"

#include <algorithm>
#include <cmath>

namespace streamreg {
namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double position = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(position));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = position - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double column_value(const Schema& schema, const Instance& row, std::size_t column) {
  const auto feature = schema.feature_of_column(column);
  return feature ? row.features[*feature] : row.target;
}

} // namespace

BootstrapSampler::BootstrapSampler(Schema schema, std::vector<Instance> base)
    : BootstrapSampler(schema, base, silverman_bandwidths(schema, base)) {}

BootstrapSampler::BootstrapSampler(Schema schema, std::vector<Instance> base,
                                   std::vector<double> bandwidths)
    : schema_(std::move(schema)), base_(std::move(base)), bandwidths_(std::move(bandwidths)) {
  if (base_.empty()) throw DataError("bootstrap sampler needs a non-empty base chunk");
  if (bandwidths_.size() != schema_.columns().size())
    throw UsageError("one bandwidth per schema column is required");
  for (double h : bandwidths_)
    if (!(h >= 0.0) || !std::isfinite(h)) throw UsageError("bandwidths must be finite and >= 0");
  for (const auto& row : base_)
    if (row.features.size() != schema_.num_features())
      throw DataError("base chunk row does not match schema arity");
}

std::vector<double> BootstrapSampler::silverman_bandwidths(const Schema& schema,
                                                           const std::vector<Instance>& base) {
  const auto& columns = schema.columns();
  std::vector<double> bandwidths(columns.size(), 0.0);
  const std::size_t m = base.size();
  if (m < 2) return bandwidths;
  std::vector<double> values(m);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].kind != ColumnKind::numeric) continue;
    double mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      values[i] = column_value(schema, base[i], c);
      mean += values[i];
    }
    mean /= static_cast<double>(m);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(m - 1));
    std::sort(values.begin(), values.end());
    const double iqr_scale = (quantile_sorted(values, 0.75) - quantile_sorted(values, 0.25)) / 1.34;
    double spread = std::min(sd, iqr_scale);
    if (spread <= 0.0) spread = std::max(sd, iqr_scale);
    bandwidths[c] = 0.9 * spread * std::pow(static_cast<double>(m), -0.2);
  }
  return bandwidths;
}

std::vector<Instance> BootstrapSampler::sample(std::size_t n, SeededRng& rng) const {
  std::vector<Instance> out;
  out.reserve(n);
  const auto& columns = schema_.columns();
  for (std::size_t i = 0; i < n; ++i) {
    Instance row = base_[rng.uniform_index(base_.size())];
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c].kind != ColumnKind::numeric || bandwidths_[c] == 0.0) continue;
      const double jitter = bandwidths_[c] * rng.normal();
      if (const auto f = schema_.feature_of_column(c)) row.features[*f] += jitter;
      else row.target += jitter;
    }
    out.push_back(std::move(row));
  }
  return out;
}

ReplaySource::ReplaySource(Schema schema, std::vector<Instance> rows)
    : schema_(std::move(schema)), rows_(std::move(rows)) {
  if (rows_.empty()) throw DataError("replay source needs at least one row");
}

std::vector<Instance> ReplaySource::sample(std::size_t n, SeededRng&) const {
  std::vector<Instance> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(rows_[i % rows_.size()]);
  return out;
}

ConceptSet load_concept_manifest(const std::filesystem::path& manifest_path) {
  ConceptSet set;
  set.manifest = read_json(manifest_path);
  const auto dir = manifest_path.parent_path();
  std::vector<std::vector<Instance>> tables;
  try {
    set.target = set.manifest.at("target").get<std::string>();
    set.drifting_feature = set.manifest.at("drifting_feature").get<std::string>();
    const auto& entries = set.manifest.at("concepts");
    if (!entries.is_array() || entries.empty())
      throw DataError("concept manifest lists no concepts");
    for (const auto& entry : entries) {
      const auto file = dir / entry.at("file").get<std::string>();
      // Seeding each load with the vocabulary so far keeps category codes consistent.
      auto loaded = load_csv(file, set.target, tables.empty() ? SchemaHints{} : hints_from(set.schema));
      if (loaded.rejected_rows != 0)
        throw DataError("concept file '" + file.string() + "' has " +
                        std::to_string(loaded.rejected_rows) + " rejected rows");
      if (!tables.empty()) {
        const auto& a = set.schema.columns();
        const auto& b = loaded.schema.columns();
        bool same = a.size() == b.size() && set.schema.target_index() == loaded.schema.target_index();
        for (std::size_t c = 0; same && c < a.size(); ++c)
          same = a[c].name == b[c].name && a[c].kind == b[c].kind;
        if (!same) throw DataError("concept file '" + file.string() + "' has a different schema");
      }
      set.schema = std::move(loaded.schema);
      tables.push_back(std::move(loaded.instances));
    }
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed concept manifest: ") + e.what());
  }
  set.schema.feature_index(set.drifting_feature);
  for (auto& rows : tables)
    set.concepts.push_back(std::make_unique<ReplaySource>(set.schema, std::move(rows)));
  return set;
}

} // namespace streamreg
