#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rfid28560/bits.hpp"
#include "rfid28560/code40.hpp"
#include "rfid28560/config.hpp"
#include "rfid28560/errors.hpp"

namespace rfid28560 {

constexpr std::size_t kPrimaryIdMaxChars = 16;
constexpr std::size_t kIsilMaxChars = 11;
constexpr std::size_t kSetInfoBytes = 2;

// Library-side primary identifier of one holding item, 1..16 characters from
// the Code 40 repertoire. Stored in canonical lowercase so the compacted and
// uncompacted encodings round-trip to the same text.
class PrimaryItemId {
 public:
  PrimaryItemId() = default;
  explicit PrimaryItemId(std::string_view text) : value_(text) {
    for (char& c : value_)
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  const std::string& value() const { return value_; }
  friend bool operator==(const PrimaryItemId&, const PrimaryItemId&) = default;

 private:
  std::string value_;
};

// Owner institution identifier, up to 11 characters, stored verbatim.
class Isil {
 public:
  Isil() = default;
  explicit Isil(std::string_view text) : value_(text) {}
  const std::string& value() const { return value_; }
  friend bool operator==(const Isil&, const Isil&) = default;

 private:
  std::string value_;
};

// Two bytes: how many physical parts the item has and which one this tag is
// on. part_number 0 means "not part of a multi-part set" and then
// parts_in_item must be 1.
struct SetInfo {
  std::uint8_t parts_in_item = 1;
  std::uint8_t part_number = 0;
  friend bool operator==(const SetInfo&, const SetInfo&) = default;
};

struct Afi {
  std::uint8_t value = 0;
  friend bool operator==(const Afi&, const Afi&) = default;
};

enum class PublicationSystem { UNIMARC, ONIX };

inline const char* publication_system_name(PublicationSystem s) {
  return s == PublicationSystem::UNIMARC ? "UNIMARC" : "ONIX";
}

inline std::optional<PublicationSystem> publication_system_from_name(std::string_view name) {
  if (name == "UNIMARC") return PublicationSystem::UNIMARC;
  if (name == "ONIX") return PublicationSystem::ONIX;
  return std::nullopt;
}

struct PublicationType {
  PublicationSystem system = PublicationSystem::UNIMARC;
  std::string code;
  std::uint32_t numeric_id = 0;
  friend bool operator==(const PublicationType&, const PublicationType&) = default;
};

struct LibraryItemRecord {
  PrimaryItemId primary_id;
  Isil isil;
  SetInfo set_info;
  std::optional<PublicationType> publication_type;
  Afi afi;
  friend bool operator==(const LibraryItemRecord&, const LibraryItemRecord&) = default;
};

enum class SchemeName { EPC64, EPC96, EPC198 };

inline const char* scheme_name_str(SchemeName n) {
  switch (n) {
    case SchemeName::EPC64: return "EPC64";
    case SchemeName::EPC96: return "EPC96";
    case SchemeName::EPC198: return "EPC198";
  }
  return "?";
}

// One EPC code layout: an 8-bit header that names the scheme, then the
// manager number, object class and serial fields at fixed widths.
struct EpcScheme {
  SchemeName name = SchemeName::EPC96;
  unsigned total_bits = 96;
  std::uint8_t header = 0x30;
  unsigned header_bits = 8;
  unsigned manager_bits = 28;
  unsigned class_bits = 24;
  unsigned serial_bits = 36;
  friend bool operator==(const EpcScheme&, const EpcScheme&) = default;
};

// The three shipped schemes. Field widths and header values are table
// configuration, not standards content; only the totals, the EPC198 serial
// width and the serial envelope are fixed.
class SchemeTable {
 public:
  explicit SchemeTable(std::array<EpcScheme, 3> schemes) : schemes_(schemes) { validate(); }

  static const SchemeTable& shipped() {
    static const SchemeTable table{{{
        {SchemeName::EPC64, 64, 0x2f, 8, 28, 8, 20},
        {SchemeName::EPC96, 96, 0x30, 8, 28, 24, 36},
        {SchemeName::EPC198, 198, 0x36, 8, 28, 22, 140},
    }}};
    return table;
  }

  // Overrides shipped widths/headers from keys like
  // `scheme.EPC96.manager_bits = 28` or `scheme.EPC198.header = 0x36`.
  static SchemeTable from_config(const ConfigMap& cfg) {
    std::array<EpcScheme, 3> schemes = shipped().schemes_;
    for (EpcScheme& s : schemes) {
      const std::string prefix = std::string("scheme.") + scheme_name_str(s.name) + ".";
      s.header = static_cast<std::uint8_t>(cfg.get_uint(prefix + "header", s.header));
      s.manager_bits = static_cast<unsigned>(cfg.get_uint(prefix + "manager_bits", s.manager_bits));
      s.class_bits = static_cast<unsigned>(cfg.get_uint(prefix + "class_bits", s.class_bits));
      s.serial_bits = static_cast<unsigned>(cfg.get_uint(prefix + "serial_bits", s.serial_bits));
    }
    return SchemeTable(schemes);
  }

  static SchemeTable load(const std::string& path) { return from_config(ConfigMap::load(path)); }

  const EpcScheme& by_name(SchemeName name) const {
    for (const EpcScheme& s : schemes_)
      if (s.name == name) return s;
    fail(ErrorCode::config_error, "scheme table is missing a name");
  }

  const EpcScheme* by_header(std::uint8_t header) const {
    for (const EpcScheme& s : schemes_)
      if (s.header == header) return &s;
    return nullptr;
  }

  const std::array<EpcScheme, 3>& all() const { return schemes_; }

 private:
  void validate() const {
    const unsigned expected_totals[3] = {64, 96, 198};
    const SchemeName expected_names[3] = {SchemeName::EPC64, SchemeName::EPC96, SchemeName::EPC198};
    for (std::size_t i = 0; i < 3; ++i) {
      const EpcScheme& s = schemes_[i];
      if (s.name != expected_names[i])
        fail(ErrorCode::config_error, "scheme table order must be EPC64, EPC96, EPC198");
      if (s.total_bits != expected_totals[i])
        fail(ErrorCode::config_error, std::string(scheme_name_str(s.name)) + ": total_bits is fixed");
      if (s.header_bits != 8)
        fail(ErrorCode::config_error, std::string(scheme_name_str(s.name)) + ": header is 8 bits");
      if (s.header_bits + s.manager_bits + s.class_bits + s.serial_bits != s.total_bits)
        fail(ErrorCode::config_error,
             std::string(scheme_name_str(s.name)) + ": field widths do not sum to " +
                 std::to_string(s.total_bits));
      if (s.serial_bits > 180)
        fail(ErrorCode::config_error,
             std::string(scheme_name_str(s.name)) + ": serial width exceeds the 180-bit envelope");
      // EPC64 is a documented legacy sub-envelope width; the 36-bit floor
      // applies from the 96-bit point up.
      if (s.name != SchemeName::EPC64 && s.serial_bits < 36)
        fail(ErrorCode::config_error,
             std::string(scheme_name_str(s.name)) + ": serial width below the 36-bit envelope");
      if (s.name == SchemeName::EPC198 && s.serial_bits != 140)
        fail(ErrorCode::config_error, "EPC198 serial width is fixed at 140 bits");
    }
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j)
        if (schemes_[i].header == schemes_[j].header)
          fail(ErrorCode::config_error, "scheme headers must be distinct");
  }

  std::array<EpcScheme, 3> schemes_;
};

inline const std::array<EpcScheme, 3>& scheme_table(const SchemeTable& table = SchemeTable::shipped()) {
  return table.all();
}

// The four EPC fields as bit strings whose widths the scheme fixes.
struct EpcFields {
  EpcScheme scheme;
  BitString header;
  BitString manager_number;
  BitString object_class;
  BitString serial;
  friend bool operator==(const EpcFields&, const EpcFields&) = default;
};

enum class Band { HF_MODE3, UHF_TYPEC };
enum class AfiLocation { IN_EPC_BLOCK, SYSTEM_AREA };

inline const char* band_name(Band b) { return b == Band::HF_MODE3 ? "HF_MODE3" : "UHF_TYPEC"; }
inline const char* afi_location_name(AfiLocation l) {
  return l == AfiLocation::IN_EPC_BLOCK ? "IN_EPC_BLOCK" : "SYSTEM_AREA";
}

// Memory geometry of one physical tag family.
struct TagProfile {
  std::string name;
  Band band = Band::HF_MODE3;
  std::size_t epc_block_bits = 240;
  std::size_t user_memory_bits = 1024;
  AfiLocation afi_location = AfiLocation::SYSTEM_AREA;
  friend bool operator==(const TagProfile&, const TagProfile&) = default;
};

enum class LossDirection { TO_EPC_VIEW, TO_LIBRARY_VIEW };

inline const char* loss_direction_name(LossDirection d) {
  return d == LossDirection::TO_EPC_VIEW ? "TO_EPC_VIEW" : "TO_LIBRARY_VIEW";
}

struct LostField {
  std::string field;
  std::string previous_value;
  friend bool operator==(const LostField&, const LostField&) = default;
};

// Fields destroyed or overwritten by a conversion or lifecycle transition.
// Empty exactly when the step was lossless.
struct LossReport {
  LossDirection direction = LossDirection::TO_EPC_VIEW;
  std::vector<LostField> lost_fields;
  bool empty() const { return lost_fields.empty(); }
  friend bool operator==(const LossReport&, const LossReport&) = default;
};

enum class LifecycleStage { PUBLISHER_TAGGED, LIBRARY_ACCESSIONED, EXTERNAL_TRANSIT };

inline const char* stage_name(LifecycleStage s) {
  switch (s) {
    case LifecycleStage::PUBLISHER_TAGGED: return "PUBLISHER_TAGGED";
    case LifecycleStage::LIBRARY_ACCESSIONED: return "LIBRARY_ACCESSIONED";
    case LifecycleStage::EXTERNAL_TRANSIT: return "EXTERNAL_TRANSIT";
  }
  return "?";
}

inline std::optional<LifecycleStage> stage_from_name(std::string_view name) {
  if (name == "PUBLISHER_TAGGED") return LifecycleStage::PUBLISHER_TAGGED;
  if (name == "LIBRARY_ACCESSIONED") return LifecycleStage::LIBRARY_ACCESSIONED;
  if (name == "EXTERNAL_TRANSIT") return LifecycleStage::EXTERNAL_TRANSIT;
  return std::nullopt;
}

// Returns every violated invariant, never just the first. The violation set
// is a pure function of the record. publication_type ids are sized against
// the scheme whose object class will carry them (EPC198 by default).
inline std::vector<std::string> validate_record(
    const LibraryItemRecord& record,
    const Code40Alphabet& alphabet = Code40Alphabet::default_alphabet(),
    const EpcScheme& class_scheme = SchemeTable::shipped().by_name(SchemeName::EPC198)) {
  std::vector<std::string> violations;
  const std::string& id = record.primary_id.value();
  if (id.empty()) violations.push_back("primary_id empty");
  if (id.size() > kPrimaryIdMaxChars)
    violations.push_back("primary_id length " + std::to_string(id.size()) + " > " +
                         std::to_string(kPrimaryIdMaxChars));
  for (std::size_t i = 0; i < id.size(); ++i) {
    const auto v = alphabet.value_for(id[i]);
    if (!v || *v == 0)
      violations.push_back(std::string("primary_id character '") + id[i] + "' at position " +
                           std::to_string(i) + " not in Code 40 repertoire");
  }
  const std::string& isil = record.isil.value();
  if (isil.empty()) violations.push_back("isil empty");
  if (isil.size() > kIsilMaxChars)
    violations.push_back("isil length " + std::to_string(isil.size()) + " > " +
                         std::to_string(kIsilMaxChars));
  for (std::size_t i = 0; i < isil.size(); ++i) {
    const char c = isil[i];
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == ':';
    if (!ok)
      violations.push_back(std::string("isil character '") + c + "' at position " +
                           std::to_string(i) + " not allowed");
  }
  // Structural sanity of the prefix-suffix shape around the first hyphen;
  // registry-level validity is out of scope.
  const std::size_t hyphen = isil.find('-');
  if (hyphen != std::string::npos) {
    if (hyphen == 0) violations.push_back("isil prefix before first '-' is empty");
    if (hyphen + 1 == isil.size()) violations.push_back("isil suffix after first '-' is empty");
    if (isil.find(':') != std::string::npos && isil.find(':') < hyphen)
      violations.push_back("isil prefix before first '-' contains ':'");
  }
  if (record.set_info.parts_in_item == 0)
    violations.push_back("set_info parts_in_item 0 outside 1..255");
  if (record.set_info.part_number > record.set_info.parts_in_item)
    violations.push_back("set_info part_number " + std::to_string(record.set_info.part_number) +
                         " > parts_in_item " + std::to_string(record.set_info.parts_in_item));
  if (record.set_info.part_number == 0 && record.set_info.parts_in_item != 1)
    violations.push_back("set_info part_number 0 requires parts_in_item 1");
  if (record.publication_type) {
    if (record.publication_type->code.empty()) violations.push_back("publication_type code empty");
    const std::uint64_t limit = (std::uint64_t{1} << class_scheme.class_bits) - 1;
    if (record.publication_type->numeric_id > limit)
      violations.push_back("publication_type numeric_id " +
                           std::to_string(record.publication_type->numeric_id) + " exceeds " +
                           std::to_string(class_scheme.class_bits) + "-bit object class");
  }
  return violations;
}

}  // namespace rfid28560
