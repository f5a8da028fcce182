#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace rfid28560 {

// Every failure the codecs can raise, as a stable machine-readable code.
// The CLI maps these onto its exit-code classes; tests match on them.
enum class ErrorCode {
  // code 40 compaction
  character_out_of_repertoire,
  input_too_long,
  odd_length_input,
  group_value_out_of_range,
  embedded_pad,
  // records and the fixed block
  invalid_record,
  wrong_length,
  crc_mismatch,
  pad_violation,
  // epc fields
  width_mismatch,
  unknown_header,
  length_scheme_mismatch,
  // hybrid layout
  serial_overflow,
  empty_serial_payload,
  malformed_serial_payload,
  profile_too_small,
  user_memory_truncated,
  illegal_transition,
  missing_params,
  // tag memory
  bank_overflow,
  unknown_bank,
  bank_empty,
  unknown_profile,
  profile_parse_error,
  // registries, config files, I/O
  parse_error,
  duplicate_key,
  width_overflow,
  not_registered,
  config_error,
  io_error,
  usage_error,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::character_out_of_repertoire: return "character_out_of_repertoire";
    case ErrorCode::input_too_long: return "input_too_long";
    case ErrorCode::odd_length_input: return "odd_length_input";
    case ErrorCode::group_value_out_of_range: return "group_value_out_of_range";
    case ErrorCode::embedded_pad: return "embedded_pad";
    case ErrorCode::invalid_record: return "invalid_record";
    case ErrorCode::wrong_length: return "wrong_length";
    case ErrorCode::crc_mismatch: return "crc_mismatch";
    case ErrorCode::pad_violation: return "pad_violation";
    case ErrorCode::width_mismatch: return "width_mismatch";
    case ErrorCode::unknown_header: return "unknown_header";
    case ErrorCode::length_scheme_mismatch: return "length_scheme_mismatch";
    case ErrorCode::serial_overflow: return "serial_overflow";
    case ErrorCode::empty_serial_payload: return "empty_serial_payload";
    case ErrorCode::malformed_serial_payload: return "malformed_serial_payload";
    case ErrorCode::profile_too_small: return "profile_too_small";
    case ErrorCode::user_memory_truncated: return "user_memory_truncated";
    case ErrorCode::illegal_transition: return "illegal_transition";
    case ErrorCode::missing_params: return "missing_params";
    case ErrorCode::bank_overflow: return "bank_overflow";
    case ErrorCode::unknown_bank: return "unknown_bank";
    case ErrorCode::bank_empty: return "bank_empty";
    case ErrorCode::unknown_profile: return "unknown_profile";
    case ErrorCode::profile_parse_error: return "profile_parse_error";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::duplicate_key: return "duplicate_key";
    case ErrorCode::width_overflow: return "width_overflow";
    case ErrorCode::not_registered: return "not_registered";
    case ErrorCode::config_error: return "config_error";
    case ErrorCode::io_error: return "io_error";
    case ErrorCode::usage_error: return "usage_error";
  }
  return "unknown";
}

class CodecError : public std::runtime_error {
 public:
  CodecError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw CodecError(code, message);
}

namespace detail {

inline std::string hex8(std::uint8_t v) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "0x%02x", v);
  return buf;
}

inline std::string hex16(std::uint16_t v) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "0x%04x", v);
  return buf;
}

}  // namespace detail

}  // namespace rfid28560
