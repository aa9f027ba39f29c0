#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace kpforge::jsonl {

using json = nlohmann::json;

// One JSON object per line; blank lines skipped. Parse errors carry the
// 1-based line number.
std::vector<json> read_file(const std::filesystem::path& path);

void for_each_line(const std::filesystem::path& path, const std::function<void(const json&, size_t)>& fn);

// Serializes each object on its own line. Writes to a temp file in the same
// directory and renames, so an interrupted write never leaves a partial file
// under the canonical name.
void write_file_atomic(const std::filesystem::path& path, const std::vector<json>& rows);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace kpforge::jsonl
