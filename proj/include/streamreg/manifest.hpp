#pragma once

#include "streamreg/schema.hpp"

#include <json.hpp>

#include <filesystem>

namespace streamreg {

using Json = nlohmann::ordered_json;

/// `<dir>/<stem>.manifest.json` for `<dir>/<stem>.<ext>`.
std::filesystem::path manifest_path_for(const std::filesystem::path& data_path);

Json schema_to_json(const Schema& schema);
Schema schema_from_json(const Json& json);

/// Pretty-printed with a trailing newline; output is byte-stable for equal input.
void write_json(const std::filesystem::path& path, const Json& json);
Json read_json(const std::filesystem::path& path);

} // namespace streamreg
