#include "radialwave/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "radialwave/errors.hpp"

namespace radialwave {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) return std::nullopt;
  double value = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string token;
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!token.empty()) out.push_back(token);
      token.clear();
    } else {
      token.push_back(c);
    }
  }
  if (!token.empty()) out.push_back(token);
  return out;
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config", origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config", origin + ":" + std::to_string(lineno) + ": empty key");
    if (cfg.values_.count(key)) {
      throw ConfigError("config", origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    cfg.values_[key] = value;
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IOError("config", "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  Config cfg = parse(buf.str(), path.string());
  cfg.base_dir_ = path.parent_path();
  return cfg;
}

std::optional<std::string> Config::find(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string Config::str(const std::string& key) const {
  const auto v = find(key);
  if (!v) throw ConfigError("config", origin_ + ": missing key '" + key + "'");
  return *v;
}

std::string Config::str(const std::string& key, const std::string& fallback) const {
  return find(key).value_or(fallback);
}

double Config::num(const std::string& key) const {
  const auto v = parse_number(str(key));
  if (!v) throw ConfigError("config", origin_ + ": key '" + key + "' is not a number");
  return *v;
}

double Config::num(const std::string& key, double fallback) const { return has(key) ? num(key) : fallback; }

long Config::integer(const std::string& key, long fallback) const {
  if (!has(key)) return fallback;
  const double v = num(key);
  if (v != static_cast<double>(static_cast<long>(v))) {
    throw ConfigError("config", origin_ + ": key '" + key + "' must be an integer");
  }
  return static_cast<long>(v);
}

bool Config::flag(const std::string& key, bool fallback) const {
  const auto v = find(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
  if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
  throw ConfigError("config", origin_ + ": key '" + key + "' must be a boolean");
}

std::vector<double> Config::nums(const std::string& key) const {
  std::vector<double> out;
  for (const auto& token : split_list(str(key))) {
    const auto v = parse_number(token);
    if (!v) throw ConfigError("config", origin_ + ": key '" + key + "' has a non-numeric entry '" + token + "'");
    out.push_back(*v);
  }
  return out;
}

std::vector<std::string> Config::words(const std::string& key) const {
  if (!has(key)) return {};
  return split_list(str(key));
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IOError("io", "cannot write " + path.string());
  out << text;
  if (!out) throw IOError("io", "write failed for " + path.string());
}

void write_complex_csv(const std::filesystem::path& path, const std::string& header, std::span<const double> x,
                       std::span<const cd> values) {
  std::string text = header + "\n";
  for (std::size_t i = 0; i < x.size(); ++i) {
    text += format_double(x[i]) + "," + format_double(values[i].real()) + "," + format_double(values[i].imag()) + "\n";
  }
  write_text(path, text);
}

void write_table_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& columns) {
  std::string text;
  for (std::size_t j = 0; j < header.size(); ++j) text += (j ? "," : "") + header[j];
  text += "\n";
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) text += (j ? "," : "") + format_double(columns[j][i]);
    text += "\n";
  }
  write_text(path, text);
}

std::vector<std::vector<double>> read_table_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IOError("io", "cannot read " + path.string());
  std::vector<std::vector<double>> columns;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    bool numeric = true;
    for (const auto& token : split_list(line)) {
      const auto v = parse_number(token);
      if (!v) {
        numeric = false;
        break;
      }
      row.push_back(*v);
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      throw IOError("io", path.string() + ": non-numeric row '" + line + "'");
    }
    first = false;
    if (columns.empty()) columns.resize(row.size());
    if (row.size() != columns.size()) throw IOError("io", path.string() + ": ragged row '" + line + "'");
    for (std::size_t j = 0; j < row.size(); ++j) columns[j].push_back(row[j]);
  }
  return columns;
}

}  // namespace radialwave
