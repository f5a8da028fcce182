#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "rfid28560/errors.hpp"

namespace rfid28560 {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

// Decimal or 0x-prefixed hex.
inline std::uint64_t parse_uint(std::string_view value) {
  if (value.empty()) fail(ErrorCode::parse_error, "empty number");
  std::uint64_t out = 0;
  if (value.size() > 2 && value[0] == '0' && (value[1] == 'x' || value[1] == 'X')) {
    for (std::size_t i = 2; i < value.size(); ++i) {
      const char c = value[i];
      int nib;
      if (c >= '0' && c <= '9') nib = c - '0';
      else if (c >= 'a' && c <= 'f') nib = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') nib = c - 'A' + 10;
      else fail(ErrorCode::parse_error, "invalid hex number '" + std::string(value) + "'");
      out = (out << 4) | static_cast<std::uint64_t>(nib);
    }
    return out;
  }
  for (char c : value) {
    if (c < '0' || c > '9')
      fail(ErrorCode::parse_error, "invalid number '" + std::string(value) + "'");
    out = out * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return out;
}

// Key-value text config: one `key = value` per line, '#' starts a comment,
// blank lines ignored. Used for the scheme table, tag profiles, and the
// lifecycle stage AFI assignments.
class ConfigMap {
 public:
  static ConfigMap parse(std::string_view text) {
    ConfigMap cfg;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t eol = text.find('\n', pos);
      std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
      pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
      ++line_no;
      const std::size_t hash = line.find('#');
      if (hash != std::string_view::npos) line = line.substr(0, hash);
      line = detail::trim(line);
      if (line.empty()) continue;
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos)
        fail(ErrorCode::config_error, "line " + std::to_string(line_no) + ": expected key = value");
      const std::string key(detail::trim(line.substr(0, eq)));
      const std::string value(detail::trim(line.substr(eq + 1)));
      if (key.empty())
        fail(ErrorCode::config_error, "line " + std::to_string(line_no) + ": empty key");
      if (cfg.values_.count(key))
        fail(ErrorCode::config_error,
             "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
      cfg.values_[key] = value;
    }
    return cfg;
  }

  static ConfigMap load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io_error, "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
  }

  std::optional<std::string> get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    return parse_uint(key, *v);
  }

  bool contains(const std::string& key) const { return values_.count(key) != 0; }
  std::size_t size() const { return values_.size(); }

  static std::uint64_t parse_uint(const std::string& key, const std::string& value) {
    try {
      return rfid28560::parse_uint(value);
    } catch (const CodecError& e) {
      fail(ErrorCode::config_error, "key '" + key + "': " + e.what());
    }
  }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace rfid28560
