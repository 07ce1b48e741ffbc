#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sgcca/types.hpp"

namespace sgcca {

// Floats in reports, tables and config files carry 9 significant digits.
std::string format_g9(double value);

std::string join_g9(const std::vector<double>& values, std::string_view separator = ",");
std::string join_g9(const Vector& values, std::string_view separator = ",");

// Line-oriented `key = value` document: the format of solver reports, run
// manifests and CLI config files. Keys keep insertion order on write; '#'
// starts a comment; blank lines are ignored on parse.
class KeyValueDoc {
 public:
  void set(std::string_view key, std::string_view value);
  void set_double(std::string_view key, double value);
  void set_int(std::string_view key, std::int64_t value);
  void set_uint(std::string_view key, std::uint64_t value);
  void set_bool(std::string_view key, bool value);

  bool contains(std::string_view key) const;
  std::optional<std::string> get(std::string_view key) const;
  double get_double(std::string_view key) const;
  std::int64_t get_int(std::string_view key) const;
  bool get_bool(std::string_view key) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  std::string to_string() const;
  void write_file(const std::filesystem::path& path) const;
  static KeyValueDoc parse(std::string_view text, std::string_view origin = "<string>");
  static KeyValueDoc parse_file(const std::filesystem::path& path);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// Comma-separated doubles / integers, used for vector-valued flags and
// config entries.
std::vector<double> parse_double_list(std::string_view text, std::string_view what);
std::vector<std::int64_t> parse_int_list(std::string_view text, std::string_view what);

}  // namespace sgcca
