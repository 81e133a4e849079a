#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "radialwave/quadrature.hpp"

namespace radialwave {

/// Flat `key = value` configuration. Blank lines and lines starting with '#' are
/// ignored; keys keep their section prefix (`model.alpha`).
class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "<string>");
  static Config load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::optional<std::string> find(const std::string& key) const;
  std::string str(const std::string& key) const;
  std::string str(const std::string& key, const std::string& fallback) const;
  double num(const std::string& key) const;
  double num(const std::string& key, double fallback) const;
  long integer(const std::string& key, long fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  /// Comma or whitespace separated list of numbers.
  std::vector<double> nums(const std::string& key) const;
  std::vector<std::string> words(const std::string& key) const;

  const std::map<std::string, std::string>& values() const { return values_; }
  const std::string& origin() const { return origin_; }
  /// Directory the config was read from (for relative paths).
  const std::filesystem::path& base_dir() const { return base_dir_; }

 private:
  std::map<std::string, std::string> values_;
  std::string origin_;
  std::filesystem::path base_dir_;
};

/// Formats a double with 17 significant digits.
std::string format_double(double x);

/// Writes `header` then `x,re,im` rows.
void write_complex_csv(const std::filesystem::path& path, const std::string& header, std::span<const double> x,
                       std::span<const cd> values);
/// Writes a table of real columns.
void write_table_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& columns);
/// Reads numeric columns from a CSV file, skipping a non-numeric header row.
std::vector<std::vector<double>> read_table_csv(const std::filesystem::path& path);
/// Writes text atomically enough for single-writer use; throws IOError.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace radialwave
