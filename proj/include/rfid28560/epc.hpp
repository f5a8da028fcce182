#pragma once

#include <cstdio>
#include <string>

#include "rfid28560/bits.hpp"
#include "rfid28560/errors.hpp"
#include "rfid28560/model.hpp"

namespace rfid28560 {

namespace detail {

inline void check_width(const char* field, const BitString& bits, unsigned expected) {
  if (bits.size() != expected)
    fail(ErrorCode::width_mismatch, std::string(field) + ": expected " + std::to_string(expected) +
                                        " bits, got " + std::to_string(bits.size()));
}

}  // namespace detail

inline EpcFields make_epc_fields(const EpcScheme& scheme, BitString manager_number,
                                 BitString object_class, BitString serial) {
  detail::check_width("manager_number", manager_number, scheme.manager_bits);
  detail::check_width("object_class", object_class, scheme.class_bits);
  detail::check_width("serial", serial, scheme.serial_bits);
  return EpcFields{scheme, BitString::from_uint(scheme.header, 8), std::move(manager_number),
                   std::move(object_class), std::move(serial)};
}

// header ‖ manager_number ‖ object_class ‖ serial, most significant bit
// first; output length is exactly scheme.total_bits.
inline BitString encode_epc(const EpcFields& fields) {
  detail::check_width("header", fields.header, fields.scheme.header_bits);
  detail::check_width("manager_number", fields.manager_number, fields.scheme.manager_bits);
  detail::check_width("object_class", fields.object_class, fields.scheme.class_bits);
  detail::check_width("serial", fields.serial, fields.scheme.serial_bits);
  if (fields.header.to_uint() != fields.scheme.header)
    fail(ErrorCode::width_mismatch,
         "header: value " + detail::hex8(static_cast<std::uint8_t>(fields.header.to_uint())) +
             " does not belong to scheme " + scheme_name_str(fields.scheme.name));
  BitString out;
  out.append(fields.header);
  out.append(fields.manager_number);
  out.append(fields.object_class);
  out.append(fields.serial);
  return out;
}

inline EpcFields decode_epc(const BitString& bits,
                            const SchemeTable& table = SchemeTable::shipped()) {
  if (bits.size() < 8)
    fail(ErrorCode::length_scheme_mismatch,
         "input of " + std::to_string(bits.size()) + " bits is shorter than the 8-bit header");
  const auto header = static_cast<std::uint8_t>(bits.slice(0, 8).to_uint());
  const EpcScheme* scheme = table.by_header(header);
  if (!scheme)
    fail(ErrorCode::unknown_header, "header " + detail::hex8(header) + " is not registered");
  if (bits.size() != scheme->total_bits)
    fail(ErrorCode::length_scheme_mismatch,
         "header " + detail::hex8(header) + " names " + scheme_name_str(scheme->name) + " (" +
             std::to_string(scheme->total_bits) + " bits) but input is " +
             std::to_string(bits.size()) + " bits");
  EpcFields fields;
  fields.scheme = *scheme;
  fields.header = bits.slice(0, 8);
  fields.manager_number = bits.slice(8, scheme->manager_bits);
  fields.object_class = bits.slice(8 + scheme->manager_bits, scheme->class_bits);
  fields.serial = bits.slice(8 + scheme->manager_bits + scheme->class_bits, scheme->serial_bits);
  return fields;
}

inline unsigned serial_capacity(const EpcScheme& scheme) { return scheme.serial_bits; }

}  // namespace rfid28560
