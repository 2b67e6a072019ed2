#pragma once

#include "streamreg/manifest.hpp"
#include "streamreg/rng.hpp"
#include "streamreg/schema.hpp"

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace streamreg {

/// Sampler for one stationary concept.
class ConceptSource {
public:
  virtual ~ConceptSource() = default;
  virtual const Schema& schema() const = 0;
  /// `n` instances conforming to schema(); deterministic in (rng state, n).
  virtual std::vector<Instance> sample(std::size_t n, SeededRng& rng) const = 0;
};

/// Smoothed bootstrap over a captured chunk: rows are resampled with replacement
/// and each numeric column (target included) gets zero-mean Gaussian jitter with
/// that column's bandwidth. Categorical values are copied from the drawn row.
class BootstrapSampler final : public ConceptSource {
public:
  /// Silverman bandwidths computed from `base`.
  BootstrapSampler(Schema schema, std::vector<Instance> base);
  /// `bandwidths` is indexed by schema column; entries for categorical columns are ignored.
  BootstrapSampler(Schema schema, std::vector<Instance> base, std::vector<double> bandwidths);

  const Schema& schema() const override { return schema_; }
  std::vector<Instance> sample(std::size_t n, SeededRng& rng) const override;

  const std::vector<Instance>& base() const { return base_; }
  const std::vector<double>& bandwidths() const { return bandwidths_; }

  /// 0.9 * min(sd, IQR / 1.34) * m^(-1/5) per numeric column; falls back to
  /// whichever of sd and IQR/1.34 is non-zero, and to 0 when both are.
  static std::vector<double> silverman_bandwidths(const Schema& schema,
                                                  const std::vector<Instance>& base);

private:
  Schema schema_;
  std::vector<Instance> base_;
  std::vector<double> bandwidths_;
};

/// Replays a fixed table (e.g. a concept file written by an external generator)
/// in file order, wrapping around when more rows are requested than it holds.
class ReplaySource final : public ConceptSource {
public:
  ReplaySource(Schema schema, std::vector<Instance> rows);

  const Schema& schema() const override { return schema_; }
  std::vector<Instance> sample(std::size_t n, SeededRng& rng) const override;

private:
  Schema schema_;
  std::vector<Instance> rows_;
};

/// Concept files plus the metadata of the manifest that lists them.
struct ConceptSet {
  Schema schema;
  std::string target;
  std::string drifting_feature;
  std::vector<std::unique_ptr<ConceptSource>> concepts;
  Json manifest;
};

/// Reads a concept manifest:
///
///   { "target": "<name>", "drifting_feature": "<name>",
///     "concepts": [ { "file": "concept_0.csv", ... }, ... ], ... }
///
/// File paths are relative to the manifest. Every concept file must load with
/// zero rejected rows and share one schema. Throws DataError otherwise.
ConceptSet load_concept_manifest(const std::filesystem::path& manifest_path);

} // namespace streamreg
