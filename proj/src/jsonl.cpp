#include "arena/jsonl.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include "arena/error.hpp"

namespace arena {

namespace {

std::string where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

}  // namespace

void for_each_json_line(const std::filesystem::path& path,
                        const std::function<void(const Json&, std::size_t)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    Json obj;
    try {
      obj = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw Error(ErrorCode::kParse,
                  where(path, line_no) + ": malformed record: " + e.what());
    }
    if (!obj.is_object()) {
      throw Error(ErrorCode::kParse,
                  where(path, line_no) + ": record is not an object");
    }
    try {
      fn(obj, line_no);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kParse) {
        throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
      }
      throw;
    }
  }
}

void write_file_atomically(const std::filesystem::path& path,
                           std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::kIo, "cannot rename onto " + path.string());
  }
}

std::string_view trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  const auto begin = s.find_first_not_of(kSpace);
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(kSpace);
  return s.substr(begin, end - begin + 1);
}

std::string required_string(const Json& obj, const char* field,
                            std::size_t line) {
  auto it = obj.find(field);
  if (it == obj.end() || !it->is_string()) {
    throw Error(ErrorCode::kParse, "line " + std::to_string(line) +
                                       ": missing string field '" + field + "'");
  }
  return it->get<std::string>();
}

std::string optional_string(const Json& obj, const char* field,
                            std::size_t line, bool* present) {
  *present = false;
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_string()) {
    throw Error(ErrorCode::kParse, "line " + std::to_string(line) +
                                       ": field '" + field +
                                       "' is not a string");
  }
  *present = true;
  return it->get<std::string>();
}

}  // namespace arena
