#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace streamreg {

enum class ColumnKind { numeric, categorical };

std::string_view to_string(ColumnKind kind);
ColumnKind column_kind_from_string(std::string_view text);

struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::numeric;
  /// Interned category labels, code i <-> categories[i]. Empty for numeric columns.
  std::vector<std::string> categories;

  bool operator==(const Column&) const = default;
};

/// Ordered column layout of a stream. Exactly one column is the (numeric) target;
/// the remaining columns, in order, form the feature vector of every Instance.
class Schema {
public:
  Schema() = default;
  Schema(std::vector<Column> columns, std::size_t target_index);

  const std::vector<Column>& columns() const { return columns_; }
  std::size_t target_index() const { return target_index_; }
  const Column& target() const { return columns_[target_index_]; }
  std::size_t num_features() const { return columns_.empty() ? 0 : columns_.size() - 1; }

  /// Column index of feature slot `feature`.
  std::size_t column_of_feature(std::size_t feature) const;
  /// Feature slot of a non-target column, or nullopt for the target.
  std::optional<std::size_t> feature_of_column(std::size_t column) const;
  std::optional<std::size_t> find_column(std::string_view name) const;
  /// Feature slot for the named column; throws DataError if absent or if it is the target.
  std::size_t feature_index(std::string_view name) const;

  const Column& feature_column(std::size_t feature) const {
    return columns_[column_of_feature(feature)];
  }
  std::vector<ColumnKind> feature_kinds() const;

  /// Copy of this schema without the given feature column.
  Schema without_feature(std::size_t feature) const;

  bool operator==(const Schema&) const = default;

private:
  std::vector<Column> columns_;
  std::size_t target_index_ = 0;
};

/// One labelled observation. Categorical features hold their interned code.
struct Instance {
  std::vector<double> features;
  double target = 0.0;

  bool operator==(const Instance&) const = default;
};

} // namespace streamreg
