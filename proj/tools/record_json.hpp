#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "rfid28560/rfid28560.hpp"

namespace rfid28560::cli {

using nlohmann::json;

// Record document, schema 1. `record` carries the library fields, `gs1` the
// EPC-side numbers a fixed block cannot hold. Sections are independent so
// the same shape serves fixed, hybrid and pure EPC workflows.
struct RecordDocument {
  bool has_record = false;
  LibraryItemRecord record;
  std::optional<std::uint64_t> manager_number;
  std::optional<std::uint64_t> object_class;
  std::optional<std::string> serial_text;  // "<bits>:<hex>"
  std::optional<std::uint64_t> serial_uint;
  std::optional<SchemeName> scheme;
  std::optional<std::string> profile;
};

inline std::optional<SchemeName> scheme_from_name(std::string_view name) {
  if (name == "EPC64") return SchemeName::EPC64;
  if (name == "EPC96") return SchemeName::EPC96;
  if (name == "EPC198") return SchemeName::EPC198;
  return std::nullopt;
}

namespace detail_json {

[[noreturn]] inline void bad(const std::string& message) {
  fail(ErrorCode::parse_error, "record document: " + message);
}

inline const json& require_field(const json& node, const char* name) {
  if (!node.is_object() || !node.contains(name)) bad(std::string("missing field '") + name + "'");
  return node.at(name);
}

inline std::uint64_t get_uint_field(const json& node, const char* name, std::uint64_t max) {
  const json& v = require_field(node, name);
  if (!v.is_number_unsigned()) bad(std::string("'") + name + "' must be an unsigned number");
  const std::uint64_t value = v.get<std::uint64_t>();
  if (value > max)
    bad(std::string("'") + name + "' value " + std::to_string(value) + " exceeds " +
        std::to_string(max));
  return value;
}

inline std::string get_string_field(const json& node, const char* name) {
  const json& v = require_field(node, name);
  if (!v.is_string()) bad(std::string("'") + name + "' must be a string");
  return v.get<std::string>();
}

}  // namespace detail_json

inline PublicationType parse_publication_type(const json& node, const CodecEnv& env) {
  using detail_json::bad;
  if (!node.is_object()) bad("'publication_type' must be an object");
  const std::string system_name = detail_json::get_string_field(node, "system");
  const auto system = publication_system_from_name(system_name);
  if (!system) bad("unknown publication system '" + system_name + "'");
  PublicationType type;
  type.system = *system;
  type.code = detail_json::get_string_field(node, "code");
  const auto registered =
      env.publications ? env.publications->lookup(system_name, type.code) : std::nullopt;
  if (node.contains("numeric_id")) {
    type.numeric_id = static_cast<std::uint32_t>(
        detail_json::get_uint_field(node, "numeric_id", 0xffffffffu));
    if (registered && registered->numeric_id != type.numeric_id)
      bad("publication_type numeric_id " + std::to_string(type.numeric_id) +
          " disagrees with the registry value " + std::to_string(registered->numeric_id));
  } else {
    if (!registered)
      fail(ErrorCode::not_registered, "publication type " + system_name + "/" + type.code +
                                          " has no numeric_id and is not in the registry");
    type.numeric_id = static_cast<std::uint32_t>(registered->numeric_id);
  }
  return type;
}

inline LibraryItemRecord parse_record_section(const json& node, const CodecEnv& env) {
  using detail_json::bad;
  if (!node.is_object()) bad("'record' must be an object");
  LibraryItemRecord record;
  record.primary_id = PrimaryItemId(detail_json::get_string_field(node, "primary_id"));
  record.isil = Isil(detail_json::get_string_field(node, "isil"));
  if (node.contains("set_info")) {
    const json& si = node.at("set_info");
    if (!si.is_object()) bad("'set_info' must be an object");
    record.set_info.parts_in_item =
        static_cast<std::uint8_t>(detail_json::get_uint_field(si, "parts_in_item", 255));
    record.set_info.part_number =
        static_cast<std::uint8_t>(detail_json::get_uint_field(si, "part_number", 255));
  }
  record.afi = node.contains("afi")
                   ? Afi{static_cast<std::uint8_t>(detail_json::get_uint_field(node, "afi", 255))}
                   : Afi{env.stage_afi.library_accessioned};
  if (node.contains("publication_type"))
    record.publication_type = parse_publication_type(node.at("publication_type"), env);
  return record;
}

inline RecordDocument parse_record_document(const std::string& text, const CodecEnv& env) {
  using detail_json::bad;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::parse_error, std::string("record document: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) bad("top level must be an object");
  if (!doc.contains("schema") || !doc.at("schema").is_number_unsigned() ||
      doc.at("schema").get<std::uint64_t>() != 1)
    bad("'schema' must be 1");
  RecordDocument out;
  if (doc.contains("record")) {
    out.record = parse_record_section(doc.at("record"), env);
    out.has_record = true;
  }
  if (doc.contains("gs1")) {
    const json& gs1 = doc.at("gs1");
    if (!gs1.is_object()) bad("'gs1' must be an object");
    if (gs1.contains("manager_number"))
      out.manager_number = detail_json::get_uint_field(gs1, "manager_number", ~std::uint64_t{0});
    if (gs1.contains("object_class"))
      out.object_class = detail_json::get_uint_field(gs1, "object_class", ~std::uint64_t{0});
    if (gs1.contains("serial")) {
      const json& serial = gs1.at("serial");
      if (serial.is_string()) out.serial_text = serial.get<std::string>();
      else if (serial.is_number_unsigned()) out.serial_uint = serial.get<std::uint64_t>();
      else bad("'serial' must be an unsigned number or a '<bits>:<hex>' string");
    }
  }
  if (doc.contains("scheme")) {
    const std::string name = detail_json::get_string_field(doc, "scheme");
    out.scheme = scheme_from_name(name);
    if (!out.scheme) bad("unknown scheme '" + name + "'");
  }
  if (doc.contains("profile")) out.profile = detail_json::get_string_field(doc, "profile");
  return out;
}

inline BitString resolve_serial(const RecordDocument& doc, const EpcScheme& scheme) {
  if (doc.serial_text) {
    const BitString bits = BitString::parse_hex_prefixed(*doc.serial_text);
    if (bits.size() != scheme.serial_bits)
      fail(ErrorCode::width_mismatch, "serial: expected " + std::to_string(scheme.serial_bits) +
                                          " bits, got " + std::to_string(bits.size()));
    return bits;
  }
  if (doc.serial_uint) return BitString::from_uint(*doc.serial_uint, scheme.serial_bits);
  fail(ErrorCode::missing_params, "gs1.serial is required for a pure EPC encode");
}

inline json record_section_json(const LibraryItemRecord& record) {
  json node;
  node["primary_id"] = record.primary_id.value();
  node["isil"] = record.isil.value();
  node["set_info"] = {{"parts_in_item", record.set_info.parts_in_item},
                      {"part_number", record.set_info.part_number}};
  node["afi"] = record.afi.value;
  if (record.publication_type) {
    node["publication_type"] = {
        {"system", publication_system_name(record.publication_type->system)},
        {"code", record.publication_type->code},
        {"numeric_id", record.publication_type->numeric_id}};
  }
  return node;
}

inline std::string dump_document(const json& doc) { return doc.dump(2) + "\n"; }

inline std::string render_record_json(const LibraryItemRecord& record) {
  json doc;
  doc["schema"] = 1;
  doc["record"] = record_section_json(record);
  return dump_document(doc);
}

inline std::string render_hybrid_json(const HybridDecodeResult& result) {
  json doc;
  doc["schema"] = 1;
  doc["record"] = record_section_json(result.record);
  doc["gs1"] = {{"manager_number", result.gs1.manager_number.to_uint()},
                {"object_class", result.gs1.object_class.to_uint()}};
  doc["scheme"] = scheme_name_str(result.scheme);
  return dump_document(doc);
}

inline std::string render_epc_json(const EpcFields& fields) {
  json doc;
  doc["schema"] = 1;
  doc["epc"] = {{"scheme", scheme_name_str(fields.scheme.name)},
                {"header", fields.header.to_uint()},
                {"manager_number", fields.manager_number.to_uint()},
                {"object_class", fields.object_class.to_uint()},
                {"serial", fields.serial.to_hex_prefixed()}};
  return dump_document(doc);
}

inline std::string render_loss_json(const LossReport& report) {
  json doc;
  doc["direction"] = loss_direction_name(report.direction);
  doc["lossless"] = report.empty();
  json fields = json::array();
  for (const LostField& lf : report.lost_fields)
    fields.push_back({{"field", lf.field}, {"previous_value", lf.previous_value}});
  doc["lost_fields"] = fields;
  return dump_document(doc);
}

inline std::string render_loss_text(const LossReport& report) {
  std::string out = std::string("direction: ") + loss_direction_name(report.direction) + "\n";
  out += std::string("lossless: ") + (report.empty() ? "yes" : "no") + "\n";
  for (const LostField& lf : report.lost_fields)
    out += "lost: " + lf.field + " (was " + lf.previous_value + ")\n";
  return out;
}

// Lifecycle parameter document: `to`, optional `from`, and the move's
// inputs (`record`/`object_class` for accession, `serial`/`scheme` for
// release to transit).
inline TransitionParams parse_transition_params(const std::string& text, const CodecEnv& env) {
  using detail_json::bad;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::parse_error, std::string("params document: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) bad("top level must be an object");
  TransitionParams params;
  if (!doc.contains("to")) bad("'to' stage is required");
  {
    const std::string to = detail_json::get_string_field(doc, "to");
    const auto stage = stage_from_name(to);
    if (!stage) bad("unknown stage '" + to + "'");
    params.to = *stage;
  }
  if (doc.contains("from")) {
    const std::string from = detail_json::get_string_field(doc, "from");
    const auto stage = stage_from_name(from);
    if (!stage) bad("unknown stage '" + from + "'");
    params.from = *stage;
  }
  if (doc.contains("record")) params.record = parse_record_section(doc.at("record"), env);
  if (doc.contains("scheme")) {
    const std::string name = detail_json::get_string_field(doc, "scheme");
    const auto scheme = scheme_from_name(name);
    if (!scheme) bad("unknown scheme '" + name + "'");
    params.scheme = scheme;
  }
  if (doc.contains("object_class")) {
    const EpcScheme& hybrid_scheme = env.scheme_table().by_name(SchemeName::EPC198);
    const std::uint64_t limit = (std::uint64_t{1} << hybrid_scheme.class_bits) - 1;
    params.object_class = BitString::from_uint(
        detail_json::get_uint_field(doc, "object_class", limit), hybrid_scheme.class_bits);
  }
  if (doc.contains("serial")) {
    const EpcScheme& scheme =
        env.scheme_table().by_name(params.scheme.value_or(SchemeName::EPC96));
    const json& serial = doc.at("serial");
    if (serial.is_string()) {
      const BitString bits = BitString::parse_hex_prefixed(serial.get<std::string>());
      if (bits.size() != scheme.serial_bits)
        fail(ErrorCode::width_mismatch, "serial: expected " + std::to_string(scheme.serial_bits) +
                                            " bits, got " + std::to_string(bits.size()));
      params.serial = bits;
    } else if (serial.is_number_unsigned()) {
      params.serial = BitString::from_uint(serial.get<std::uint64_t>(), scheme.serial_bits);
    } else {
      bad("'serial' must be an unsigned number or a '<bits>:<hex>' string");
    }
  }
  return params;
}

}  // namespace rfid28560::cli
