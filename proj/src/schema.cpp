#include "streamreg/schema.hpp"

#include "streamreg/error.hpp"

#include <set>

namespace streamreg {

std::string_view to_string(ColumnKind kind) {
  return kind == ColumnKind::numeric ? "numeric" : "categorical";
}

ColumnKind column_kind_from_string(std::string_view text) {
  if (text == "numeric") return ColumnKind::numeric;
  if (text == "categorical") return ColumnKind::categorical;
  throw DataError("unknown column kind '" + std::string(text) + "'");
}

Schema::Schema(std::vector<Column> columns, std::size_t target_index)
    : columns_(std::move(columns)), target_index_(target_index) {
  if (columns_.empty()) throw DataError("schema has no columns");
  if (target_index_ >= columns_.size()) throw DataError("target index out of range");
  if (columns_[target_index_].kind != ColumnKind::numeric)
    throw DataError("target column '" + columns_[target_index_].name + "' must be numeric");
  std::set<std::string_view> seen;
  for (const auto& column : columns_) {
    if (column.name.empty()) throw DataError("empty column name");
    if (!seen.insert(column.name).second)
      throw DataError("duplicate column name '" + column.name + "'");
  }
}

std::size_t Schema::column_of_feature(std::size_t feature) const {
  return feature < target_index_ ? feature : feature + 1;
}

std::optional<std::size_t> Schema::feature_of_column(std::size_t column) const {
  if (column == target_index_) return std::nullopt;
  return column < target_index_ ? column : column - 1;
}

std::optional<std::size_t> Schema::find_column(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i].name == name) return i;
  return std::nullopt;
}

std::size_t Schema::feature_index(std::string_view name) const {
  const auto column = find_column(name);
  if (!column) throw DataError("no column named '" + std::string(name) + "'");
  const auto feature = feature_of_column(*column);
  if (!feature) throw DataError("'" + std::string(name) + "' is the target, not a feature");
  return *feature;
}

std::vector<ColumnKind> Schema::feature_kinds() const {
  std::vector<ColumnKind> kinds;
  kinds.reserve(num_features());
  for (std::size_t f = 0; f < num_features(); ++f) kinds.push_back(feature_column(f).kind);
  return kinds;
}

Schema Schema::without_feature(std::size_t feature) const {
  const std::size_t column = column_of_feature(feature);
  std::vector<Column> kept;
  kept.reserve(columns_.size() - 1);
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (i != column) kept.push_back(columns_[i]);
  return Schema(std::move(kept), column < target_index_ ? target_index_ - 1 : target_index_);
}

} // namespace streamreg
