#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rfid28560/bits.hpp"
#include "rfid28560/code40.hpp"
#include "rfid28560/epc.hpp"
#include "rfid28560/errors.hpp"
#include "rfid28560/fixed.hpp"
#include "rfid28560/model.hpp"
#include "rfid28560/registry.hpp"
#include "rfid28560/tag.hpp"

namespace rfid28560 {

// Shared context for the hybrid codec and the lifecycle engine. Null members
// fall back to the shipped tables; the struct itself stays cheap to copy.
struct CodecEnv {
  const SchemeTable* schemes = nullptr;
  const Code40Alphabet* alphabet = nullptr;
  const PublicationTypeRegistry* publications = nullptr;
  StageAfiConfig stage_afi;

  const SchemeTable& scheme_table() const { return schemes ? *schemes : SchemeTable::shipped(); }
  const Code40Alphabet& code40_alphabet() const {
    return alphabet ? *alphabet : Code40Alphabet::default_alphabet();
  }
  FixedDecodeOptions fixed_decode_options() const {
    return FixedDecodeOptions{Afi{stage_afi.library_accessioned}};
  }
};

// GS1-side identity supplied to a hybrid encode. The object class is
// optional: when absent it comes from the record's publication type, or
// defaults to zero (no class assigned).
struct Gs1Input {
  BitString manager_number;
  std::optional<BitString> object_class;
};

// GS1-side identity recovered from a hybrid decode.
struct Gs1Fields {
  BitString manager_number;
  BitString object_class;
  friend bool operator==(const Gs1Fields&, const Gs1Fields&) = default;
};

// Serial payload of the hybrid scheme: the Code 40 groups of the primary
// identifier followed by one AFI byte. When the payload rides in a wider
// serial field the encoder fills the gap with leading zeros; the +1 group
// offset guarantees that fill can never be read as text.
inline BitString build_serial_payload(std::string_view primary_id, Afi afi,
                                      const Code40Alphabet& alphabet =
                                          Code40Alphabet::default_alphabet()) {
  BitString payload = BitString::from_bytes(encode_code40(primary_id, alphabet));
  payload.append_byte(afi.value);
  return payload;
}

struct SerialPayload {
  std::string primary_id;
  Afi afi;
  std::size_t group_count = 0;
};

inline SerialPayload parse_serial_payload(const BitString& serial,
                                          const Code40Alphabet& alphabet =
                                              Code40Alphabet::default_alphabet()) {
  if (serial.size() < 24)
    fail(ErrorCode::empty_serial_payload,
         "serial field of " + std::to_string(serial.size()) +
             " bits cannot hold one Code 40 group plus an AFI byte");
  const BitString region = serial.slice(0, serial.size() - 8);
  const std::size_t align = region.size() % 16;
  if (align != 0 && !region.slice(0, align).all_zero())
    fail(ErrorCode::malformed_serial_payload,
         "nonzero bits in the " + std::to_string(align) + "-bit alignment gap");
  std::size_t first = region.size();
  for (std::size_t off = align; off < region.size(); off += 16) {
    if (region.slice(off, 16).to_uint() != 0) {
      first = off;
      break;
    }
  }
  if (first == region.size())
    fail(ErrorCode::empty_serial_payload, "serial payload is all zero");
  const BitString groups = region.slice(first, region.size() - first);
  SerialPayload out;
  out.group_count = groups.size() / 16;
  out.primary_id = decode_code40(groups.to_bytes(), alphabet);
  out.afi = Afi{static_cast<std::uint8_t>(serial.slice(serial.size() - 8, 8).to_uint())};
  return out;
}

// Pure EPC carrier image: code in block 01, optional AFI in the system area
// on profiles that have one, user memory zero filled when asked.
inline TagImage make_epc_tag(const BitString& epc_bits, const TagProfile& profile,
                             std::optional<Afi> afi, bool clear_user_memory) {
  if (profile.epc_block_bits < epc_bits.size())
    fail(ErrorCode::profile_too_small,
         "profile " + profile.name + ": block 01 holds " + std::to_string(profile.epc_block_bits) +
             " bits, code needs " + std::to_string(epc_bits.size()));
  TagImage tag{profile};
  tag = tag.write_bank(Bank::epc01, epc_bits);
  if (clear_user_memory && profile.user_memory_bits > 0)
    tag = tag.write_bank(Bank::user11, BitString::zeros(profile.user_memory_bits));
  if (afi && profile.afi_location == AfiLocation::SYSTEM_AREA)
    tag = tag.write_bank(Bank::system, BitString::from_uint(afi->value, 8));
  return tag;
}

namespace detail {

// Block 11 record: ISIL length byte, ISIL characters, then the two set
// information bytes.
inline BitString user_memory_bits(const LibraryItemRecord& record) {
  const std::string& isil = record.isil.value();
  BitString bits;
  bits.append_byte(static_cast<std::uint8_t>(isil.size()));
  for (char c : isil) bits.append_byte(static_cast<std::uint8_t>(c));
  bits.append_byte(record.set_info.parts_in_item);
  bits.append_byte(record.set_info.part_number);
  return bits;
}

inline void parse_user_memory(const BitString& bits, LibraryItemRecord& record) {
  if (bits.size() % 8 != 0)
    fail(ErrorCode::parse_error,
         "user memory is " + std::to_string(bits.size()) + " bits, not byte aligned");
  const std::vector<std::uint8_t> bytes = bits.to_bytes();
  if (bytes.empty())
    fail(ErrorCode::user_memory_truncated, "user memory holds 0 bytes, record needs at least 4");
  const std::size_t isil_len = bytes[0];
  const std::size_t needed = 1 + isil_len + kSetInfoBytes;
  if (bytes.size() < needed)
    fail(ErrorCode::user_memory_truncated,
         "user memory holds " + std::to_string(bytes.size()) + " bytes, record needs " +
             std::to_string(needed));
  for (std::size_t i = needed; i < bytes.size(); ++i)
    if (bytes[i] != 0)
      fail(ErrorCode::pad_violation,
           "nonzero byte past the record at user memory offset " + std::to_string(i));
  record.isil = Isil(std::string(reinterpret_cast<const char*>(bytes.data()) + 1, isil_len));
  record.set_info = SetInfo{bytes[1 + isil_len], bytes[1 + isil_len + 1]};
}

// Value-preserving width change for the narrow numeric fields. The scheme
// table caps manager and class fields well under 64 bits, so to_uint is safe.
inline BitString resize_value(const BitString& bits, unsigned width, const char* field) {
  if (bits.size() == width) return bits;
  const std::uint64_t value = bits.to_uint();
  if (width < 64 && (value >> width) != 0)
    fail(ErrorCode::width_overflow, std::string(field) + " value " + std::to_string(value) +
                                        " does not fit " + std::to_string(width) + " bits");
  return BitString::from_uint(value, width);
}

}  // namespace detail

struct HybridDecodeResult {
  LibraryItemRecord record;
  Gs1Fields gs1;
  SchemeName scheme = SchemeName::EPC198;
  std::size_t code40_groups = 0;
};

inline TagImage encode_hybrid(const LibraryItemRecord& record, const Gs1Input& gs1,
                              const TagProfile& profile, const CodecEnv& env = {},
                              SchemeName scheme_name = SchemeName::EPC198) {
  const EpcScheme& scheme = env.scheme_table().by_name(scheme_name);
  const Code40Alphabet& alphabet = env.code40_alphabet();
  const std::vector<std::string> violations = validate_record(record, alphabet, scheme);
  if (!violations.empty()) {
    std::string msg = "record invalid:";
    for (const std::string& v : violations) msg += " [" + v + "]";
    fail(ErrorCode::invalid_record, msg);
  }
  detail::check_width("manager_number", gs1.manager_number, scheme.manager_bits);
  BitString object_class;
  if (gs1.object_class) {
    detail::check_width("object_class", *gs1.object_class, scheme.class_bits);
    object_class = *gs1.object_class;
  } else if (record.publication_type) {
    object_class = BitString::from_uint(record.publication_type->numeric_id, scheme.class_bits);
  } else {
    object_class = BitString::zeros(scheme.class_bits);
  }
  const BitString payload = build_serial_payload(record.primary_id.value(), record.afi, alphabet);
  if (payload.size() > scheme.serial_bits)
    fail(ErrorCode::serial_overflow,
         "identifier needs " + std::to_string(payload.size()) + " serial bits (" +
             std::to_string((payload.size() - 8) / 16) + " groups + AFI), " +
             scheme_name_str(scheme.name) + " serial field has " +
             std::to_string(scheme.serial_bits));
  BitString serial = BitString::zeros(scheme.serial_bits - payload.size());
  serial.append(payload);
  const BitString epc = encode_epc(make_epc_fields(scheme, gs1.manager_number, object_class, serial));
  const BitString user = detail::user_memory_bits(record);
  if (user.size() > profile.user_memory_bits)
    fail(ErrorCode::user_memory_truncated,
         "profile " + profile.name + ": user memory holds " +
             std::to_string(profile.user_memory_bits) + " bits, record needs " +
             std::to_string(user.size()));
  TagImage tag = make_epc_tag(epc, profile, record.afi, false);
  return tag.write_bank(Bank::user11, user);
}

inline HybridDecodeResult decode_hybrid(const TagImage& tag, const CodecEnv& env = {}) {
  const EpcFields fields = decode_epc(tag.read_bank(Bank::epc01), env.scheme_table());
  const SerialPayload payload = parse_serial_payload(fields.serial, env.code40_alphabet());
  HybridDecodeResult out;
  out.scheme = fields.scheme.name;
  out.code40_groups = payload.group_count;
  out.record.primary_id = PrimaryItemId(payload.primary_id);
  out.record.afi = payload.afi;
  detail::parse_user_memory(tag.read_bank(Bank::user11), out.record);
  out.gs1 = Gs1Fields{fields.manager_number, fields.object_class};
  if (env.publications) {
    const auto entry = env.publications->reverse_lookup(fields.object_class.to_uint());
    if (entry) {
      const auto system = publication_system_from_name(entry->system);
      if (system)
        out.record.publication_type =
            PublicationType{*system, entry->code, static_cast<std::uint32_t>(entry->numeric_id)};
    }
  }
  const std::vector<std::string> violations =
      validate_record(out.record, env.code40_alphabet(), fields.scheme);
  if (!violations.empty()) {
    std::string msg = "decoded tag violates record invariants:";
    for (const std::string& v : violations) msg += " [" + v + "]";
    fail(ErrorCode::invalid_record, msg);
  }
  return out;
}

namespace detail {

using FieldView = std::map<std::string, std::string>;

inline std::string set_info_text(const SetInfo& s) {
  return "parts=" + std::to_string(s.parts_in_item) + ",part=" + std::to_string(s.part_number);
}

inline FieldView fixed_field_view(const LibraryItemRecord& r) {
  FieldView v;
  v["primary_id"] = r.primary_id.value();
  v["isil"] = r.isil.value();
  v["set_info"] = set_info_text(r.set_info);
  v["afi"] = hex8(r.afi.value);
  return v;
}

inline FieldView hybrid_field_view(const LibraryItemRecord& r, const Gs1Fields& gs1) {
  FieldView v = fixed_field_view(r);
  v["manager_number"] = std::to_string(gs1.manager_number.to_uint());
  v["object_class"] = std::to_string(gs1.object_class.to_uint());
  return v;
}

inline FieldView epc_field_view(const EpcFields& f, std::optional<Afi> afi) {
  FieldView v;
  v["manager_number"] = std::to_string(f.manager_number.to_uint());
  v["object_class"] = std::to_string(f.object_class.to_uint());
  v["serial"] = f.serial.to_hex_prefixed();
  if (afi) v["afi"] = hex8(afi->value);
  return v;
}

// A field is lost when the target view drops it or records a different
// value. Gained fields are not losses.
inline LossReport view_loss(const FieldView& before, const FieldView& after, LossDirection dir) {
  LossReport report{dir, {}};
  for (const auto& [field, value] : before) {
    const auto it = after.find(field);
    if (it == after.end() || it->second != value) report.lost_fields.push_back({field, value});
  }
  return report;
}

}  // namespace detail

struct FixedToHybridResult {
  TagImage tag;
  LossReport loss;
  HybridDecodeResult decoded;
};

struct HybridToFixedResult {
  FixedBlock block;
  LossReport loss;
  LibraryItemRecord record;
};

// Loss accounting always compares decoded views of the real before and
// after images, never assumptions about what the encoders did.
inline FixedToHybridResult convert_fixed_to_hybrid(const FixedBlock& block, const Gs1Input& gs1,
                                                   const TagProfile& profile,
                                                   const CodecEnv& env = {}) {
  const LibraryItemRecord record = decode_fixed(block, env.fixed_decode_options());
  TagImage tag = encode_hybrid(record, gs1, profile, env);
  HybridDecodeResult decoded = decode_hybrid(tag, env);
  LossReport loss =
      detail::view_loss(detail::fixed_field_view(record),
                        detail::hybrid_field_view(decoded.record, decoded.gs1),
                        LossDirection::TO_EPC_VIEW);
  return {std::move(tag), std::move(loss), std::move(decoded)};
}

inline HybridToFixedResult convert_hybrid_to_fixed(const TagImage& tag, const CodecEnv& env = {}) {
  const HybridDecodeResult decoded = decode_hybrid(tag, env);
  const FixedBlock block = encode_fixed(decoded.record, env.code40_alphabet());
  const LibraryItemRecord round = decode_fixed(block, env.fixed_decode_options());
  LossReport loss = detail::view_loss(detail::hybrid_field_view(decoded.record, decoded.gs1),
                                      detail::fixed_field_view(round),
                                      LossDirection::TO_LIBRARY_VIEW);
  return {block, std::move(loss), round};
}

// Lifecycle. Three stages, three legal moves:
//
//   PUBLISHER_TAGGED ──accession──► LIBRARY_ACCESSIONED
//   LIBRARY_ACCESSIONED ──release──► EXTERNAL_TRANSIT
//   EXTERNAL_TRANSIT ──accession──► LIBRARY_ACCESSIONED
//
// Everything else is illegal, including a stage moving to itself. The two
// pure EPC stages carry the same memory shape; when the AFI cannot separate
// them the probe reports PUBLISHER_TAGGED, which never changes which moves
// are legal.

struct StageProbe {
  LifecycleStage stage = LifecycleStage::PUBLISHER_TAGGED;
  bool epc_carrier = true;
  EpcFields epc;
  std::optional<HybridDecodeResult> hybrid;
};

inline StageProbe probe_stage(const TagImage& tag, const CodecEnv& env = {}) {
  StageProbe probe;
  probe.epc = decode_epc(tag.read_bank(Bank::epc01), env.scheme_table());
  try {
    probe.hybrid = decode_hybrid(tag, env);
    probe.stage = LifecycleStage::LIBRARY_ACCESSIONED;
    probe.epc_carrier = false;
    return probe;
  } catch (const CodecError&) {
  }
  probe.epc_carrier = true;
  const std::optional<Afi> afi = tag.afi_mirror();
  probe.stage = (afi && afi->value == env.stage_afi.external_transit &&
                 env.stage_afi.external_transit != env.stage_afi.publisher_tagged)
                    ? LifecycleStage::EXTERNAL_TRANSIT
                    : LifecycleStage::PUBLISHER_TAGGED;
  return probe;
}

struct TransitionParams {
  LifecycleStage to = LifecycleStage::LIBRARY_ACCESSIONED;
  std::optional<LifecycleStage> from;
  // accession
  std::optional<LibraryItemRecord> record;
  std::optional<BitString> object_class;
  // release to transit
  std::optional<BitString> serial;
  std::optional<SchemeName> scheme;
};

struct TransitionResult {
  TagImage tag;
  LifecycleStage from = LifecycleStage::PUBLISHER_TAGGED;
  LifecycleStage to = LifecycleStage::LIBRARY_ACCESSIONED;
  LossReport loss;
};

inline TransitionResult transition(const TagImage& tag, const TransitionParams& params,
                                   const CodecEnv& env = {}) {
  const StageProbe probe = probe_stage(tag, env);
  LifecycleStage from = probe.stage;
  if (params.from) {
    const bool declared_hybrid = *params.from == LifecycleStage::LIBRARY_ACCESSIONED;
    if (declared_hybrid == probe.epc_carrier)
      fail(ErrorCode::illegal_transition,
           std::string("declared stage ") + stage_name(*params.from) +
               " but the tag decodes as " + stage_name(probe.stage));
    from = *params.from;
  }
  const std::string illegal_msg = std::string(stage_name(from)) + " -> " +
                                  stage_name(params.to) + " is not a legal transition";
  switch (params.to) {
    case LifecycleStage::PUBLISHER_TAGGED:
      fail(ErrorCode::illegal_transition, illegal_msg);
    case LifecycleStage::LIBRARY_ACCESSIONED: {
      if (!probe.epc_carrier) fail(ErrorCode::illegal_transition, illegal_msg);
      if (!params.record)
        fail(ErrorCode::missing_params,
             "accession requires the library record (primary_id, isil, set information)");
      const EpcScheme& scheme = env.scheme_table().by_name(SchemeName::EPC198);
      LibraryItemRecord record = *params.record;
      record.afi = Afi{env.stage_afi.library_accessioned};
      Gs1Input gs1;
      gs1.manager_number =
          detail::resize_value(probe.epc.manager_number, scheme.manager_bits, "manager_number");
      if (params.object_class)
        gs1.object_class = *params.object_class;
      else if (!record.publication_type)
        gs1.object_class =
            detail::resize_value(probe.epc.object_class, scheme.class_bits, "object_class");
      TransitionResult result{encode_hybrid(record, gs1, tag.profile(), env), from, params.to, {}};
      const HybridDecodeResult after = decode_hybrid(result.tag, env);
      result.loss = detail::view_loss(detail::epc_field_view(probe.epc, tag.afi_mirror()),
                                      detail::hybrid_field_view(after.record, after.gs1),
                                      LossDirection::TO_LIBRARY_VIEW);
      return result;
    }
    case LifecycleStage::EXTERNAL_TRANSIT: {
      if (probe.epc_carrier) fail(ErrorCode::illegal_transition, illegal_msg);
      if (!params.serial)
        fail(ErrorCode::missing_params, "release to transit requires the outgoing serial");
      const EpcScheme& scheme =
          env.scheme_table().by_name(params.scheme.value_or(SchemeName::EPC96));
      detail::check_width("serial", *params.serial, scheme.serial_bits);
      const HybridDecodeResult& dec = *probe.hybrid;
      const BitString manager =
          detail::resize_value(dec.gs1.manager_number, scheme.manager_bits, "manager_number");
      const BitString object_class =
          detail::resize_value(dec.gs1.object_class, scheme.class_bits, "object_class");
      const BitString epc =
          encode_epc(make_epc_fields(scheme, manager, object_class, *params.serial));
      const Afi afi{env.stage_afi.external_transit};
      TransitionResult result{make_epc_tag(epc, tag.profile(), afi, true), from, params.to, {}};
      const EpcFields after = decode_epc(result.tag.read_bank(Bank::epc01), env.scheme_table());
      result.loss = detail::view_loss(detail::hybrid_field_view(dec.record, dec.gs1),
                                      detail::epc_field_view(after, result.tag.afi_mirror()),
                                      LossDirection::TO_EPC_VIEW);
      return result;
    }
  }
  fail(ErrorCode::illegal_transition, "bad lifecycle stage enum");
}

}  // namespace rfid28560
