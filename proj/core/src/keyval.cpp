#include "sgcca/keyval.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sgcca/errors.hpp"

namespace sgcca {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_double_token(std::string_view token, std::string_view what) {
  const std::string_view t = trim(token);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size())
    raise(ErrorCode::ParseError,
          std::string(what) + ": '" + std::string(t) + "' is not a number");
  return value;
}

}  // namespace

std::string format_g9(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.9g", value);
  return buffer;
}

std::string join_g9(const std::vector<double>& values, std::string_view separator) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += separator;
    out += format_g9(values[i]);
  }
  return out;
}

std::string join_g9(const Vector& values, std::string_view separator) {
  std::string out;
  for (Index i = 0; i < values.size(); ++i) {
    if (i > 0) out += separator;
    out += format_g9(values[i]);
  }
  return out;
}

void KeyValueDoc::set(std::string_view key, std::string_view value) {
  for (auto& [k, v] : entries_)
    if (k == key) {
      v = std::string(value);
      return;
    }
  entries_.emplace_back(std::string(key), std::string(value));
}

void KeyValueDoc::set_double(std::string_view key, double value) { set(key, format_g9(value)); }
void KeyValueDoc::set_int(std::string_view key, std::int64_t value) { set(key, std::to_string(value)); }
void KeyValueDoc::set_uint(std::string_view key, std::uint64_t value) { set(key, std::to_string(value)); }
void KeyValueDoc::set_bool(std::string_view key, bool value) { set(key, value ? "true" : "false"); }

bool KeyValueDoc::contains(std::string_view key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return true;
  return false;
}

std::optional<std::string> KeyValueDoc::get(std::string_view key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  return std::nullopt;
}

double KeyValueDoc::get_double(std::string_view key) const {
  const auto value = get(key);
  if (!value) raise(ErrorCode::ParseError, "missing key '" + std::string(key) + "'");
  return parse_double_token(*value, key);
}

std::int64_t KeyValueDoc::get_int(std::string_view key) const {
  const auto value = get(key);
  if (!value) raise(ErrorCode::ParseError, "missing key '" + std::string(key) + "'");
  const std::string_view t = trim(*value);
  std::int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc{} || ptr != t.data() + t.size())
    raise(ErrorCode::ParseError,
          std::string(key) + ": '" + std::string(t) + "' is not an integer");
  return out;
}

bool KeyValueDoc::get_bool(std::string_view key) const {
  const auto value = get(key);
  if (!value) raise(ErrorCode::ParseError, "missing key '" + std::string(key) + "'");
  if (*value == "true" || *value == "1") return true;
  if (*value == "false" || *value == "0") return false;
  raise(ErrorCode::ParseError, std::string(key) + ": '" + *value + "' is not a boolean");
}

std::string KeyValueDoc::to_string() const {
  std::string out;
  for (const auto& [k, v] : entries_) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

void KeyValueDoc::write_file(const std::filesystem::path& path) const {
  std::ofstream stream(path);
  if (!stream) raise(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  stream << to_string();
  if (!stream.good()) raise(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

KeyValueDoc KeyValueDoc::parse(std::string_view text, std::string_view origin) {
  KeyValueDoc doc;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      raise(ErrorCode::ParseError,
            std::string(origin) + ":" + std::to_string(line_no) + ": expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty())
      raise(ErrorCode::ParseError,
            std::string(origin) + ":" + std::to_string(line_no) + ": empty key");
    doc.set(key, value);
  }
  return doc;
}

KeyValueDoc KeyValueDoc::parse_file(const std::filesystem::path& path) {
  std::ifstream stream(path);
  if (!stream) raise(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return parse(buffer.str(), path.string());
}

std::vector<double> parse_double_list(std::string_view text, std::string_view what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string_view token =
        text.substr(pos, comma == std::string_view::npos ? text.size() - pos : comma - pos);
    if (!trim(token).empty()) out.push_back(parse_double_token(token, what));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<std::int64_t> parse_int_list(std::string_view text, std::string_view what) {
  std::vector<std::int64_t> out;
  for (double value : parse_double_list(text, what)) {
    const auto rounded = static_cast<std::int64_t>(value);
    if (static_cast<double>(rounded) != value)
      raise(ErrorCode::ParseError, std::string(what) + ": expected integers");
    out.push_back(rounded);
  }
  return out;
}

}  // namespace sgcca
