#include "streamreg/drift.hpp"

#include "streamreg/error.hpp"

#include <algorithm>
#include <numeric>

namespace streamreg {

std::string_view to_string(DriftKind kind) {
  switch (kind) {
  case DriftKind::abrupt: return "abrupt";
  case DriftKind::gradual: return "gradual";
  case DriftKind::incremental: return "incremental";
  }
  return "?";
}

DriftKind drift_kind_from_string(std::string_view text) {
  if (text == "abrupt") return DriftKind::abrupt;
  if (text == "gradual") return DriftKind::gradual;
  if (text == "incremental") return DriftKind::incremental;
  throw UsageError("unknown drift type '" + std::string(text) + "'");
}

std::string_view to_string(ConceptOrder order) {
  return order == ConceptOrder::random ? "random" : "given";
}

ConceptOrder concept_order_from_string(std::string_view text) {
  if (text == "random") return ConceptOrder::random;
  if (text == "given") return ConceptOrder::given;
  throw UsageError("unknown concept order '" + std::string(text) + "'");
}

void DriftSpec::validate() const {
  if (num_concepts < 2) throw UsageError("at least two concepts are required");
  if (concept_length == 0) throw UsageError("concept length must be positive");
  if (kind == DriftKind::abrupt) return;
  if (drift_length % 2 != 0) throw UsageError("drift length must be even (n + n)");
  if (kind == DriftKind::incremental && drift_length == 0)
    throw UsageError("incremental drift needs a positive drift length");
  const std::size_t half = drift_length / 2;
  if (concept_length < half)
    throw UsageError("concept length " + std::to_string(concept_length) +
                     " is shorter than half the drift length " + std::to_string(half));
  if (num_concepts > 2 && concept_length < drift_length)
    throw UsageError("inner concepts must hold both drift halves: concept length " +
                     std::to_string(concept_length) + " < drift length " +
                     std::to_string(drift_length));
}

std::vector<std::vector<Instance>> chunk_by_feature(std::span<const Instance> data,
                                                    const Schema& schema,
                                                    std::string_view feature,
                                                    std::size_t num_chunks) {
  if (num_chunks < 2) throw UsageError("need at least two chunks");
  if (data.size() < num_chunks)
    throw UsageError("cannot split " + std::to_string(data.size()) + " rows into " +
                     std::to_string(num_chunks) + " chunks");
  const std::size_t f = schema.feature_index(feature);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return data[a].features[f] < data[b].features[f];
  });

  std::vector<std::vector<Instance>> chunks(num_chunks);
  const std::size_t base = data.size() / num_chunks;
  const std::size_t extra = data.size() % num_chunks;
  std::size_t next = 0;
  for (std::size_t c = 0; c < num_chunks; ++c) {
    const std::size_t size = base + (c < extra ? 1 : 0);
    chunks[c].reserve(size);
    for (std::size_t i = 0; i < size; ++i) chunks[c].push_back(data[order[next++]]);
  }
  return chunks;
}

namespace {

void check_concepts(ConceptList concepts, const DriftSpec& spec) {
  if (concepts.size() < 2) throw UsageError("at least two concepts are required");
  if (concepts.size() != spec.num_concepts)
    throw UsageError("spec expects " + std::to_string(spec.num_concepts) + " concepts, got " +
                     std::to_string(concepts.size()));
  for (const auto* c : concepts) {
    if (c == nullptr) throw UsageError("null concept source");
    const auto& a = c->schema().columns();
    const auto& b = concepts[0]->schema().columns();
    bool same = a.size() == b.size() &&
                c->schema().target_index() == concepts[0]->schema().target_index();
    for (std::size_t i = 0; same && i < a.size(); ++i)
      same = a[i].name == b[i].name && a[i].kind == b[i].kind;
    if (!same) throw DataError("concept sources disagree on schema");
  }
}

/// Samples every concept from its own labelled sub-stream and lays the blocks
/// out in stream order. Zero-width boundaries at each switch.
SynthesizedStream concatenate(ConceptList concepts, const DriftSpec& spec, const SeededRng& rng) {
  SynthesizedStream out;
  out.schema = concepts[0]->schema();
  out.concept_order.resize(concepts.size());
  std::iota(out.concept_order.begin(), out.concept_order.end(), std::size_t{0});
  if (spec.order == ConceptOrder::random) {
    auto order_rng = rng.substream("concept-order");
    order_rng.shuffle(std::span<std::size_t>(out.concept_order));
  }

  std::vector<std::vector<Instance>> blocks(concepts.size());
  for (std::size_t i = 0; i < concepts.size(); ++i) {
    auto concept_rng = rng.substream("concept", i);
    blocks[i] = concepts[i]->sample(spec.concept_length, concept_rng);
    if (blocks[i].size() != spec.concept_length)
      throw DataError("concept source returned the wrong number of instances");
  }

  out.instances.reserve(spec.total_length());
  for (std::size_t position = 0; position < out.concept_order.size(); ++position) {
    auto& block = blocks[out.concept_order[position]];
    if (position > 0) out.boundaries.push_back({out.instances.size(), out.instances.size()});
    std::move(block.begin(), block.end(), std::back_inserter(out.instances));
  }
  return out;
}

template <typename Arrange>
void mix_drift_windows(SynthesizedStream& stream, const DriftSpec& spec, Arrange&& arrange) {
  const std::size_t half = spec.drift_length / 2;
  if (half == 0) return;
  stream.boundaries.clear();
  for (std::size_t drift = 0; drift < spec.num_drifts(); ++drift) {
    const std::size_t switch_at = (drift + 1) * spec.concept_length;
    const std::size_t start = switch_at - half;
    const std::size_t end = switch_at + half;
    arrange(drift, std::span<Instance>(stream.instances).subspan(start, end - start), half);
    stream.boundaries.push_back({start, end});
  }
}

} // namespace

SynthesizedStream compose_abrupt(ConceptList concepts, const DriftSpec& spec, const SeededRng& rng) {
  if (spec.kind != DriftKind::abrupt) throw UsageError("compose_abrupt needs an abrupt spec");
  spec.validate();
  check_concepts(concepts, spec);
  return concatenate(concepts, spec, rng);
}

SynthesizedStream compose_gradual(ConceptList concepts, const DriftSpec& spec, const SeededRng& rng) {
  if (spec.kind != DriftKind::gradual) throw UsageError("compose_gradual needs a gradual spec");
  spec.validate();
  check_concepts(concepts, spec);
  auto stream = concatenate(concepts, spec, rng);
  mix_drift_windows(stream, spec, [&](std::size_t drift, std::span<Instance> pool, std::size_t) {
    auto mix_rng = rng.substream("drift-mix", drift);
    mix_rng.shuffle(pool);
  });
  return stream;
}

SynthesizedStream compose_incremental(ConceptList concepts, const DriftSpec& spec,
                                      const SeededRng& rng, std::string_view drifting_feature) {
  if (spec.kind != DriftKind::incremental)
    throw UsageError("compose_incremental needs an incremental spec");
  spec.validate();
  check_concepts(concepts, spec);
  const auto& schema = concepts[0]->schema();
  const std::size_t f = schema.feature_index(drifting_feature);
  if (schema.feature_column(f).kind != ColumnKind::numeric)
    throw DataError("drifting feature '" + std::string(drifting_feature) + "' is not numeric");

  auto stream = concatenate(concepts, spec, rng);
  mix_drift_windows(stream, spec, [&](std::size_t, std::span<Instance> pool, std::size_t half) {
    double outgoing = 0.0, incoming = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
      outgoing += pool[i].features[f];
      incoming += pool[half + i].features[f];
    }
    const auto by_feature = [f](const Instance& a, const Instance& b) {
      return a.features[f] < b.features[f];
    };
    if (incoming > outgoing) {
      std::stable_sort(pool.begin(), pool.end(), by_feature);
    } else {
      std::stable_sort(pool.begin(), pool.end(),
                       [&](const Instance& a, const Instance& b) { return by_feature(b, a); });
    }
  });

  stream.drifting_feature = std::string(drifting_feature);
  stream.drifting_values.reserve(stream.instances.size());
  for (auto& instance : stream.instances) {
    stream.drifting_values.push_back(instance.features[f]);
    instance.features.erase(instance.features.begin() + static_cast<std::ptrdiff_t>(f));
  }
  stream.schema = schema.without_feature(f);
  return stream;
}

SynthesizedStream compose(ConceptList concepts, const DriftSpec& spec,
                          std::string_view drifting_feature) {
  const SeededRng rng(spec.seed);
  SynthesizedStream stream;
  switch (spec.kind) {
  case DriftKind::abrupt: stream = compose_abrupt(concepts, spec, rng); break;
  case DriftKind::gradual: stream = compose_gradual(concepts, spec, rng); break;
  case DriftKind::incremental: return compose_incremental(concepts, spec, rng, drifting_feature);
  }
  stream.drifting_feature = std::string(drifting_feature);
  return stream;
}

Json sector_layout(const SynthesizedStream& stream) {
  Json sectors = Json::array();
  std::size_t cursor = 0;
  for (const auto& b : stream.boundaries) {
    if (b.start > cursor) sectors.push_back({{"kind", "stable"}, {"start", cursor}, {"end", b.start}});
    if (b.end > b.start) sectors.push_back({{"kind", "drift"}, {"start", b.start}, {"end", b.end}});
    cursor = b.end;
  }
  if (stream.instances.size() > cursor)
    sectors.push_back({{"kind", "stable"}, {"start", cursor}, {"end", stream.instances.size()}});
  return sectors;
}

Json stream_manifest(const SynthesizedStream& stream, const DriftSpec& spec) {
  Json boundaries = Json::array();
  for (const auto& b : stream.boundaries) boundaries.push_back({b.start, b.end});
  Json drift = {{"drift_type", std::string(to_string(spec.kind))},
                {"num_concepts", spec.num_concepts},
                {"concept_length", spec.concept_length},
                {"drift_length", spec.kind == DriftKind::abrupt ? 0 : spec.drift_length},
                {"num_drifts", spec.num_drifts()},
                {"order", std::string(to_string(spec.order))},
                {"seed", spec.seed}};
  return Json{{"schema", schema_to_json(stream.schema)},
              {"row_count", stream.instances.size()},
              {"seed", spec.seed},
              {"drift_type", std::string(to_string(spec.kind))},
              {"drift_spec", std::move(drift)},
              {"drifting_feature", stream.drifting_feature},
              {"drifting_feature_removed", spec.kind == DriftKind::incremental},
              {"concept_order", stream.concept_order},
              {"boundaries", std::move(boundaries)},
              {"sectors", sector_layout(stream)}};
}

} // namespace streamreg
