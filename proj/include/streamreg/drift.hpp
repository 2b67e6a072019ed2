#pragma once

#include "streamreg/concept_source.hpp"
#include "streamreg/manifest.hpp"
#include "streamreg/rng.hpp"
#include "streamreg/schema.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace streamreg {

enum class DriftKind { abrupt, gradual, incremental };
enum class ConceptOrder { random, given };

std::string_view to_string(DriftKind kind);
DriftKind drift_kind_from_string(std::string_view text);
std::string_view to_string(ConceptOrder order);
ConceptOrder concept_order_from_string(std::string_view text);

struct DriftSpec {
  DriftKind kind = DriftKind::abrupt;
  std::size_t num_concepts = 2;
  std::size_t concept_length = 0;
  /// Width 2n of each drifting period; split as n instances from each side.
  /// Ignored for abrupt drift.
  std::size_t drift_length = 0;
  std::uint64_t seed = 0;
  ConceptOrder order = ConceptOrder::random;

  std::size_t num_drifts() const { return num_concepts - 1; }
  std::size_t total_length() const { return num_concepts * concept_length; }
  /// Throws UsageError on an inconsistent spec.
  void validate() const;
};

/// Half-open index range [start, end) of a drifting period. Abrupt switches
/// are recorded with start == end at the first instance of the new concept.
struct DriftBoundary {
  std::size_t start = 0;
  std::size_t end = 0;
  bool operator==(const DriftBoundary&) const = default;
};

struct SynthesizedStream {
  Schema schema;
  std::vector<Instance> instances;
  std::vector<DriftBoundary> boundaries;
  std::string drifting_feature;
  /// Concept index (into the composer's input) placed at each position.
  std::vector<std::size_t> concept_order;
  /// Incremental only: the removed drifting column, one value per instance.
  std::vector<double> drifting_values;
};

/// Stable sort by `feature` then contiguous split. Sizes differ by at most one;
/// earlier chunks take the remainder. Throws UsageError if num_chunks < 2 or
/// exceeds the row count.
std::vector<std::vector<Instance>> chunk_by_feature(std::span<const Instance> data,
                                                    const Schema& schema,
                                                    std::string_view feature,
                                                    std::size_t num_chunks);

using ConceptList = std::span<const ConceptSource* const>;

SynthesizedStream compose_abrupt(ConceptList concepts, const DriftSpec& spec, const SeededRng& rng);

/// Per adjacent pair, the last n of one concept and the first n of the next are
/// pooled, shuffled, and put back between the untouched remainders. n = 0 gives
/// exactly the abrupt stream for the same rng.
SynthesizedStream compose_gradual(ConceptList concepts, const DriftSpec& spec, const SeededRng& rng);

/// As gradual, but each pool is sorted by the drifting feature (ascending when
/// the incoming side has the larger pooled mean) and the feature is removed.
SynthesizedStream compose_incremental(ConceptList concepts, const DriftSpec& spec,
                                      const SeededRng& rng, std::string_view drifting_feature);

/// Dispatch on spec.kind with rng = SeededRng(spec.seed).
SynthesizedStream compose(ConceptList concepts, const DriftSpec& spec,
                          std::string_view drifting_feature);

/// Alternating stable/drift segments covering the whole stream.
Json sector_layout(const SynthesizedStream& stream);

/// Manifest body for a synthesized stream (schema, counts, spec, boundaries).
Json stream_manifest(const SynthesizedStream& stream, const DriftSpec& spec);

} // namespace streamreg
