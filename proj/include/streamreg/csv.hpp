#pragma once

#include "streamreg/schema.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace streamreg {

/// Optional overrides applied while inferring a schema from a CSV file.
struct SchemaHints {
  std::map<std::string, ColumnKind, std::less<>> kinds;
  /// Pre-seeded category vocabularies, so codes survive a write/load cycle.
  std::map<std::string, std::vector<std::string>, std::less<>> categories;
};

/// Hints that reproduce `schema` exactly when the file was written from it.
SchemaHints hints_from(const Schema& schema);

struct LoadResult {
  Schema schema;
  std::vector<Instance> instances;
  std::size_t rejected_rows = 0;
};

/// Reads a header-first, comma-separated file in row order.
///
/// Column kinds are taken from `hints` when given; otherwise a column is numeric
/// when at least half of its non-empty cells parse as finite reals. The target is
/// always numeric. Rows with a wrong field count, an empty cell, or a non-finite or
/// unparsable value in a numeric column are dropped and counted in `rejected_rows`.
///
/// Throws DataError for a missing file, a missing target column, a file with no
/// data rows, or when every data row is rejected.
LoadResult load_csv(const std::filesystem::path& path, std::string_view target,
                    const SchemaHints& hints = {});

/// Writes header plus rows. Reals use the shortest text that parses back to the
/// same double; categorical codes are written as their category label.
void write_csv(const std::filesystem::path& path, const Schema& schema,
               std::span<const Instance> stream);

/// Shortest round-trip decimal for a double.
std::string format_real(double value);

} // namespace streamreg
