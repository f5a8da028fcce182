#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rfid28560/config.hpp"
#include "rfid28560/errors.hpp"
#include "rfid28560/model.hpp"

namespace rfid28560 {

namespace detail {

inline std::vector<std::string> split_csv_row(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      break;
    }
    fields.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

template <typename RowFn>
void for_each_csv_row(std::string_view text, std::string_view expected_header, RowFn&& fn) {
  std::size_t pos = 0, line_no = 0;
  bool saw_header = false;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != expected_header)
        fail(ErrorCode::parse_error, "csv line 1: expected header '" +
                                         std::string(expected_header) + "', got '" +
                                         std::string(line) + "'");
      saw_header = true;
      continue;
    }
    fn(line_no, split_csv_row(line));
  }
  if (!saw_header) fail(ErrorCode::parse_error, "csv: empty input, header required");
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace detail

struct PublicationTypeEntry {
  std::string system;
  std::string code;
  std::uint64_t numeric_id = 0;

  friend bool operator==(const PublicationTypeEntry&, const PublicationTypeEntry&) = default;
};

// Maps (vocabulary, code) pairs onto the numeric ids carried in the EPC
// object-class field, in both directions. Numeric ids must be unique so the
// reverse direction is a function.
class PublicationTypeRegistry {
 public:
  static PublicationTypeRegistry parse_csv(std::string_view text) {
    PublicationTypeRegistry reg;
    detail::for_each_csv_row(text, "system,code,numeric_id",
                             [&](std::size_t line_no, const std::vector<std::string>& fields) {
                               const std::string where = "csv line " + std::to_string(line_no);
                               if (fields.size() != 3)
                                 fail(ErrorCode::parse_error, where + ": expected 3 fields");
                               if (fields[0].empty() || fields[1].empty())
                                 fail(ErrorCode::parse_error, where + ": empty system or code");
                               PublicationTypeEntry entry{fields[0], fields[1], 0};
                               try {
                                 entry.numeric_id = parse_uint(fields[2]);
                               } catch (const CodecError&) {
                                 fail(ErrorCode::parse_error, where + ": bad numeric_id '" +
                                                                  fields[2] + "'");
                               }
                               reg.add(entry, where);
                             });
    return reg;
  }

  static PublicationTypeRegistry load_csv(const std::string& path) {
    return parse_csv(detail::read_text_file(path));
  }

  void add(const PublicationTypeEntry& entry, const std::string& where = "registry") {
    const auto key = std::make_pair(entry.system, entry.code);
    if (by_key_.count(key))
      fail(ErrorCode::duplicate_key,
           where + ": duplicate publication type " + entry.system + "/" + entry.code);
    if (by_id_.count(entry.numeric_id))
      fail(ErrorCode::duplicate_key,
           where + ": duplicate numeric_id " + std::to_string(entry.numeric_id));
    by_key_[key] = entry;
    by_id_[entry.numeric_id] = entry;
  }

  std::optional<PublicationTypeEntry> lookup(std::string_view system,
                                             std::string_view code) const {
    const auto it = by_key_.find(std::make_pair(std::string(system), std::string(code)));
    if (it == by_key_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<PublicationTypeEntry> reverse_lookup(std::uint64_t numeric_id) const {
    const auto it = by_id_.find(numeric_id);
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const { return by_key_.size(); }
  bool empty() const { return by_key_.empty(); }

  std::vector<PublicationTypeEntry> entries() const {
    std::vector<PublicationTypeEntry> out;
    out.reserve(by_key_.size());
    for (const auto& [key, entry] : by_key_) out.push_back(entry);
    return out;
  }

  // Canonical text: header plus rows sorted by (system, code). parse_csv of
  // this text reproduces the registry exactly.
  std::string to_csv() const {
    std::string out = "system,code,numeric_id\n";
    for (const auto& [key, entry] : by_key_)
      out += entry.system + "," + entry.code + "," + std::to_string(entry.numeric_id) + "\n";
    return out;
  }

  friend bool operator==(const PublicationTypeRegistry& a, const PublicationTypeRegistry& b) {
    return a.by_key_ == b.by_key_;
  }

 private:
  std::map<std::pair<std::string, std::string>, PublicationTypeEntry> by_key_;
  std::map<std::uint64_t, PublicationTypeEntry> by_id_;
};

// Annotates GS1 manager numbers with owner labels; purely informational.
class ManagerDirectory {
 public:
  static ManagerDirectory parse_csv(std::string_view text) {
    ManagerDirectory dir;
    detail::for_each_csv_row(text, "manager_number,label",
                             [&](std::size_t line_no, const std::vector<std::string>& fields) {
                               const std::string where = "csv line " + std::to_string(line_no);
                               if (fields.size() != 2)
                                 fail(ErrorCode::parse_error, where + ": expected 2 fields");
                               if (fields[1].empty())
                                 fail(ErrorCode::parse_error, where + ": empty label");
                               std::uint64_t number = 0;
                               try {
                                 number = parse_uint(fields[0]);
                               } catch (const CodecError&) {
                                 fail(ErrorCode::parse_error, where + ": bad manager_number '" +
                                                                  fields[0] + "'");
                               }
                               if (dir.labels_.count(number))
                                 fail(ErrorCode::duplicate_key,
                                      where + ": duplicate manager_number " +
                                          std::to_string(number));
                               dir.labels_[number] = fields[1];
                             });
    return dir;
  }

  static ManagerDirectory load_csv(const std::string& path) {
    return parse_csv(detail::read_text_file(path));
  }

  std::optional<std::string> lookup(std::uint64_t manager_number) const {
    const auto it = labels_.find(manager_number);
    if (it == labels_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }

  std::string to_csv() const {
    std::string out = "manager_number,label\n";
    for (const auto& [number, label] : labels_)
      out += std::to_string(number) + "," + label + "\n";
    return out;
  }

  friend bool operator==(const ManagerDirectory&, const ManagerDirectory&) = default;

 private:
  std::map<std::uint64_t, std::string> labels_;
};

// AFI byte written at each lifecycle stage. The accessioned value doubles as
// the assumed AFI of a bare fixed block, which never stores one itself.
struct StageAfiConfig {
  std::uint8_t publisher_tagged = 0x00;
  std::uint8_t library_accessioned = 0xc2;
  std::uint8_t external_transit = 0x00;

  std::uint8_t for_stage(LifecycleStage stage) const {
    switch (stage) {
      case LifecycleStage::PUBLISHER_TAGGED: return publisher_tagged;
      case LifecycleStage::LIBRARY_ACCESSIONED: return library_accessioned;
      case LifecycleStage::EXTERNAL_TRANSIT: return external_transit;
    }
    fail(ErrorCode::config_error, "bad lifecycle stage enum");
  }

  static StageAfiConfig from_config(const ConfigMap& cfg) {
    StageAfiConfig stages;
    auto read = [&](const char* key, std::uint8_t fallback) {
      const std::uint64_t value = cfg.get_uint(key, fallback);
      if (value > 0xff)
        fail(ErrorCode::config_error, std::string(key) + ": AFI must fit in one byte");
      return static_cast<std::uint8_t>(value);
    };
    stages.publisher_tagged = read("afi.PUBLISHER_TAGGED", stages.publisher_tagged);
    stages.library_accessioned = read("afi.LIBRARY_ACCESSIONED", stages.library_accessioned);
    stages.external_transit = read("afi.EXTERNAL_TRANSIT", stages.external_transit);
    return stages;
  }

  friend bool operator==(const StageAfiConfig&, const StageAfiConfig&) = default;
};

// Optional on-disk registry directory: publication_types.csv, managers.csv,
// stages.conf. Missing files leave the corresponding member at its default.
struct RegistryBundle {
  PublicationTypeRegistry publications;
  ManagerDirectory managers;
  StageAfiConfig stages;
};

inline RegistryBundle load_registry_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  RegistryBundle bundle;
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    fail(ErrorCode::io_error, "registry dir '" + dir + "' is not a directory");
  const fs::path base{dir};
  if (fs::exists(base / "publication_types.csv", ec))
    bundle.publications = PublicationTypeRegistry::load_csv((base / "publication_types.csv").string());
  if (fs::exists(base / "managers.csv", ec))
    bundle.managers = ManagerDirectory::load_csv((base / "managers.csv").string());
  if (fs::exists(base / "stages.conf", ec))
    bundle.stages = StageAfiConfig::from_config(ConfigMap::load((base / "stages.conf").string()));
  return bundle;
}

}  // namespace rfid28560
