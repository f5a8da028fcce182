#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <string_view>

#include "rfid28560/crc16.hpp"
#include "rfid28560/errors.hpp"
#include "rfid28560/model.hpp"

namespace rfid28560 {

// The fixed-length 32-byte library block, the legacy side of every
// conversion. Layout:
//
//   offset 0      version/usage byte (0x11: layout 1, circulating item)
//   offset 1..2   set information (parts_in_item, part_number)
//   offset 3..18  primary identifier, 16 bytes, zero pad filled
//   offset 19..20 CRC-16/CCITT-FALSE over bytes 0..18 and 21..31, big-endian
//   offset 21..31 ISIL, 11 bytes, zero pad filled
//
// Byte-exact interop with any normative fixed-length layout would need that
// layout's text; this table is the repo's documented stand-in and is kept in
// one place so it can be swapped without touching codec logic.

constexpr std::size_t kFixedBlockBytes = 32;
constexpr std::uint8_t kFixedVersionUsage = 0x11;
constexpr std::uint8_t kFixedPadByte = 0x00;

constexpr std::size_t kFixedOffVersion = 0;
constexpr std::size_t kFixedOffSetInfo = 1;
constexpr std::size_t kFixedOffPrimaryId = 3;
constexpr std::size_t kFixedOffCrc = 19;
constexpr std::size_t kFixedOffIsil = 21;

struct FixedBlock {
  std::array<std::uint8_t, kFixedBlockBytes> raw{};

  std::string to_hex() const {
    static const char* digits = "0123456789abcdef";
    std::string hex;
    hex.reserve(kFixedBlockBytes * 2);
    for (std::uint8_t b : raw) {
      hex.push_back(digits[b >> 4]);
      hex.push_back(digits[b & 0xf]);
    }
    return hex;
  }

  static FixedBlock from_hex(std::string_view hex) {
    // Tolerate surrounding whitespace (files usually end in a newline).
    while (!hex.empty() && (hex.back() == '\n' || hex.back() == '\r' || hex.back() == ' '))
      hex.remove_suffix(1);
    while (!hex.empty() && (hex.front() == ' ')) hex.remove_prefix(1);
    if (hex.size() != kFixedBlockBytes * 2)
      fail(ErrorCode::wrong_length, "expected " + std::to_string(kFixedBlockBytes * 2) +
                                        " hex characters, got " + std::to_string(hex.size()));
    FixedBlock block;
    for (std::size_t i = 0; i < hex.size(); ++i) {
      const char c = hex[i];
      int nib;
      if (c >= '0' && c <= '9') nib = c - '0';
      else if (c >= 'a' && c <= 'f') nib = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') nib = c - 'A' + 10;
      else fail(ErrorCode::parse_error, std::string("invalid hex character '") + c + "'");
      block.raw[i / 2] = static_cast<std::uint8_t>((block.raw[i / 2] << 4) | nib);
    }
    return block;
  }

  friend bool operator==(const FixedBlock&, const FixedBlock&) = default;
};

// CRC input: all bytes except the CRC field itself, in block order.
inline std::uint16_t fixed_block_crc(std::span<const std::uint8_t> raw) {
  std::array<std::uint8_t, kFixedBlockBytes - 2> region{};
  std::size_t n = 0;
  for (std::size_t i = 0; i < kFixedBlockBytes; ++i)
    if (i != kFixedOffCrc && i != kFixedOffCrc + 1) region[n++] = raw[i];
  return crc16_ccitt_false(region);
}

inline FixedBlock encode_fixed(const LibraryItemRecord& record,
                               const Code40Alphabet& alphabet = Code40Alphabet::default_alphabet()) {
  const std::vector<std::string> violations = validate_record(record, alphabet);
  if (!violations.empty()) {
    std::string msg = "record invalid:";
    for (const std::string& v : violations) msg += " [" + v + "]";
    fail(ErrorCode::invalid_record, msg);
  }
  FixedBlock block;
  block.raw[kFixedOffVersion] = kFixedVersionUsage;
  block.raw[kFixedOffSetInfo] = record.set_info.parts_in_item;
  block.raw[kFixedOffSetInfo + 1] = record.set_info.part_number;
  const std::string& id = record.primary_id.value();
  for (std::size_t i = 0; i < id.size(); ++i)
    block.raw[kFixedOffPrimaryId + i] = static_cast<std::uint8_t>(id[i]);
  const std::string& isil = record.isil.value();
  for (std::size_t i = 0; i < isil.size(); ++i)
    block.raw[kFixedOffIsil + i] = static_cast<std::uint8_t>(isil[i]);
  const std::uint16_t crc = fixed_block_crc(block.raw);
  block.raw[kFixedOffCrc] = static_cast<std::uint8_t>(crc >> 8);
  block.raw[kFixedOffCrc + 1] = static_cast<std::uint8_t>(crc & 0xff);
  return block;
}

struct FixedDecodeOptions {
  // The fixed block has no home for an AFI; decoding reports this
  // configured value (the circulating-item assignment by default).
  Afi default_afi{0xc2};
};

namespace detail {

inline std::string read_padded_field(std::span<const std::uint8_t> field, const char* name) {
  std::size_t content = 0;
  while (content < field.size() && field[content] != kFixedPadByte) ++content;
  for (std::size_t i = content; i < field.size(); ++i)
    if (field[i] != kFixedPadByte)
      fail(ErrorCode::pad_violation, std::string("pad byte inside ") + name + " at offset " +
                                         std::to_string(content) + " before content at offset " +
                                         std::to_string(i));
  return std::string(reinterpret_cast<const char*>(field.data()), content);
}

}  // namespace detail

inline LibraryItemRecord decode_fixed(std::span<const std::uint8_t> raw,
                                      const FixedDecodeOptions& options = {}) {
  if (raw.size() != kFixedBlockBytes)
    fail(ErrorCode::wrong_length,
         "expected " + std::to_string(kFixedBlockBytes) + " bytes, got " + std::to_string(raw.size()));
  const std::uint16_t stored =
      static_cast<std::uint16_t>((raw[kFixedOffCrc] << 8) | raw[kFixedOffCrc + 1]);
  const std::uint16_t computed = fixed_block_crc(raw);
  if (stored != computed)
    fail(ErrorCode::crc_mismatch,
         "stored=" + detail::hex16(stored) + " computed=" + detail::hex16(computed));
  if (raw[kFixedOffVersion] != kFixedVersionUsage)
    fail(ErrorCode::parse_error,
         "unsupported version/usage byte " + detail::hex8(raw[kFixedOffVersion]));
  LibraryItemRecord record;
  record.set_info = SetInfo{raw[kFixedOffSetInfo], raw[kFixedOffSetInfo + 1]};
  record.primary_id =
      PrimaryItemId(detail::read_padded_field(raw.subspan(kFixedOffPrimaryId, 16), "primary_id"));
  record.isil = Isil(detail::read_padded_field(raw.subspan(kFixedOffIsil, 11), "isil"));
  record.afi = options.default_afi;
  record.publication_type = std::nullopt;
  const std::vector<std::string> violations = validate_record(record);
  if (!violations.empty()) {
    std::string msg = "decoded block violates record invariants:";
    for (const std::string& v : violations) msg += " [" + v + "]";
    fail(ErrorCode::invalid_record, msg);
  }
  return record;
}

inline LibraryItemRecord decode_fixed(const FixedBlock& block,
                                      const FixedDecodeOptions& options = {}) {
  return decode_fixed(std::span<const std::uint8_t>(block.raw), options);
}

}  // namespace rfid28560
