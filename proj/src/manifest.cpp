#include "streamreg/manifest.hpp"

#include "streamreg/error.hpp"

#include <fstream>

namespace streamreg {

std::filesystem::path manifest_path_for(const std::filesystem::path& data_path) {
  auto path = data_path;
  path.replace_extension(".manifest.json");
  return path;
}

Json schema_to_json(const Schema& schema) {
  Json columns = Json::array();
  for (const auto& column : schema.columns()) {
    Json entry = {{"name", column.name}, {"kind", std::string(to_string(column.kind))}};
    if (column.kind == ColumnKind::categorical) entry["categories"] = column.categories;
    columns.push_back(std::move(entry));
  }
  return Json{{"columns", std::move(columns)}, {"target", schema.target().name}};
}

Schema schema_from_json(const Json& json) {
  try {
    std::vector<Column> columns;
    std::size_t target = 0;
    const auto target_name = json.at("target").get<std::string>();
    for (const auto& entry : json.at("columns")) {
      Column column;
      column.name = entry.at("name").get<std::string>();
      column.kind = column_kind_from_string(entry.at("kind").get<std::string>());
      if (entry.contains("categories"))
        column.categories = entry.at("categories").get<std::vector<std::string>>();
      if (column.name == target_name) target = columns.size();
      columns.push_back(std::move(column));
    }
    return Schema(std::move(columns), target);
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed schema in manifest: ") + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& json) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << json.dump(2) << '\n';
  if (!out) throw DataError("write to '" + path.string() + "' failed");
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw DataError("malformed JSON in '" + path.string() + "': " + e.what());
  }
}

} // namespace streamreg
