#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

#include "json.hpp"

namespace arena {

using Json = nlohmann::json;

// Calls `fn(object, line_number)` for every non-blank line of a UTF-8
// line-delimited JSON file. Line numbers are 1-based. Throws kIo when the file
// cannot be opened and kParse (citing the line) on malformed input.
void for_each_json_line(const std::filesystem::path& path,
                        const std::function<void(const Json&, std::size_t)>& fn);

// Writes `content` to a sibling temp file and renames it over `path`, so
// readers never observe a partially written output.
void write_file_atomically(const std::filesystem::path& path,
                           std::string_view content);

std::string_view trim(std::string_view s);

// Field accessors used by the loaders. They throw kParse naming the field and
// line when the value is missing or has the wrong type.
std::string required_string(const Json& obj, const char* field,
                            std::size_t line);
std::string optional_string(const Json& obj, const char* field,
                            std::size_t line, bool* present);

}  // namespace arena
