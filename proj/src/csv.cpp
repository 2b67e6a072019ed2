#include "streamreg/csv.hpp"

#include "streamreg/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <unordered_map>

namespace streamreg {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      return fields;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

std::optional<double> parse_real(std::string_view cell) {
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || end != cell.data() + cell.size() || !std::isfinite(value))
    return std::nullopt;
  return value;
}

class Interner {
public:
  explicit Interner(std::vector<std::string> seed) : labels_(std::move(seed)) {
    for (std::size_t i = 0; i < labels_.size(); ++i) codes_.emplace(labels_[i], i);
  }
  double code(std::string_view label) {
    const auto it = codes_.find(std::string(label));
    if (it != codes_.end()) return static_cast<double>(it->second);
    labels_.emplace_back(label);
    codes_.emplace(labels_.back(), labels_.size() - 1);
    return static_cast<double>(labels_.size() - 1);
  }
  std::vector<std::string> take() { return std::move(labels_); }

private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> codes_;
};

} // namespace

SchemaHints hints_from(const Schema& schema) {
  SchemaHints hints;
  for (const auto& column : schema.columns()) {
    hints.kinds.emplace(column.name, column.kind);
    if (column.kind == ColumnKind::categorical)
      hints.categories.emplace(column.name, column.categories);
  }
  return hints;
}

std::string format_real(double value) {
  char buffer[32];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc{}) throw DataError("cannot format real");
  return std::string(buffer, end);
}

LoadResult load_csv(const std::filesystem::path& path, std::string_view target,
                    const SchemaHints& hints) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");

  std::string header_line;
  if (!std::getline(in, header_line)) throw DataError("'" + path.string() + "' has no header row");
  std::vector<std::string> names;
  for (auto field : split_fields(header_line)) names.emplace_back(field);

  std::size_t target_column = names.size();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == target) target_column = i;
  if (target_column == names.size())
    throw DataError("target column '" + std::string(target) + "' not found in '" +
                    path.string() + "'");

  // Pass 1: raw cells, so kinds can be inferred before any row is accepted.
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (trim(line).empty()) continue;
    lines.push_back(std::move(line));
  }
  if (lines.empty()) throw DataError("'" + path.string() + "' contains no data rows");

  const std::size_t width = names.size();
  std::vector<ColumnKind> kinds(width, ColumnKind::numeric);
  {
    std::vector<std::size_t> parsable(width, 0), non_empty(width, 0);
    for (const auto& line : lines) {
      const auto fields = split_fields(line);
      if (fields.size() != width) continue;
      for (std::size_t c = 0; c < width; ++c) {
        if (fields[c].empty()) continue;
        ++non_empty[c];
        if (parse_real(fields[c])) ++parsable[c];
      }
    }
    for (std::size_t c = 0; c < width; ++c) {
      if (const auto it = hints.kinds.find(names[c]); it != hints.kinds.end())
        kinds[c] = it->second;
      else
        kinds[c] = 2 * parsable[c] >= non_empty[c] ? ColumnKind::numeric : ColumnKind::categorical;
    }
  }
  if (kinds[target_column] != ColumnKind::numeric)
    throw DataError("target column '" + std::string(target) + "' must be numeric");

  std::vector<Interner> interners;
  std::vector<std::size_t> interner_of(width, width);
  for (std::size_t c = 0; c < width; ++c) {
    if (kinds[c] != ColumnKind::categorical) continue;
    std::vector<std::string> seed;
    if (const auto it = hints.categories.find(names[c]); it != hints.categories.end())
      seed = it->second;
    interner_of[c] = interners.size();
    interners.emplace_back(std::move(seed));
  }

  LoadResult result;
  std::vector<double> row(width);
  for (const auto& line : lines) {
    const auto fields = split_fields(line);
    bool ok = fields.size() == width;
    for (std::size_t c = 0; ok && c < width; ++c) {
      if (fields[c].empty()) {
        ok = false;
      } else if (kinds[c] == ColumnKind::numeric) {
        const auto value = parse_real(fields[c]);
        if (value) row[c] = *value; else ok = false;
      }
    }
    if (!ok) {
      ++result.rejected_rows;
      continue;
    }
    Instance instance;
    instance.features.reserve(width - 1);
    for (std::size_t c = 0; c < width; ++c) {
      const double value =
          kinds[c] == ColumnKind::numeric ? row[c] : interners[interner_of[c]].code(fields[c]);
      if (c == target_column) instance.target = value;
      else instance.features.push_back(value);
    }
    result.instances.push_back(std::move(instance));
  }
  if (result.instances.empty())
    throw DataError("all " + std::to_string(result.rejected_rows) + " rows of '" +
                    path.string() + "' were rejected");

  std::vector<Column> columns(width);
  for (std::size_t c = 0; c < width; ++c) {
    columns[c].name = names[c];
    columns[c].kind = kinds[c];
    if (kinds[c] == ColumnKind::categorical) columns[c].categories = interners[interner_of[c]].take();
  }
  result.schema = Schema(std::move(columns), target_column);
  return result;
}

void write_csv(const std::filesystem::path& path, const Schema& schema,
               std::span<const Instance> stream) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");

  const auto& columns = schema.columns();
  for (const auto& column : columns)
    for (const auto& label : column.categories)
      if (label.empty() || label.find_first_of(",\n\r") != std::string::npos)
        throw DataError("category label '" + label + "' in column '" + column.name +
                        "' cannot be written unquoted");

  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out << ',';
    out << columns[c].name;
  }
  out << '\n';

  const std::size_t arity = schema.num_features();
  for (const auto& instance : stream) {
    if (instance.features.size() != arity)
      throw DataError("instance arity " + std::to_string(instance.features.size()) +
                      " does not match schema (" + std::to_string(arity) + " features)");
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out << ',';
      const auto feature = schema.feature_of_column(c);
      const double value = feature ? instance.features[*feature] : instance.target;
      if (columns[c].kind == ColumnKind::categorical) {
        const auto code = static_cast<std::size_t>(value);
        if (value < 0 || code >= columns[c].categories.size() || static_cast<double>(code) != value)
          throw DataError("invalid category code in column '" + columns[c].name + "'");
        out << columns[c].categories[code];
      } else {
        out << format_real(value);
      }
    }
    out << '\n';
  }
  if (!out) throw DataError("write to '" + path.string() + "' failed");
}

} // namespace streamreg
