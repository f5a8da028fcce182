#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace rfid28560 {

namespace detail {

constexpr std::array<std::uint16_t, 256> make_crc16_table() {
  std::array<std::uint16_t, 256> table{};
  for (unsigned byte = 0; byte < 256; ++byte) {
    std::uint16_t crc = static_cast<std::uint16_t>(byte << 8);
    for (int i = 0; i < 8; ++i)
      crc = (crc & 0x8000u) ? static_cast<std::uint16_t>((crc << 1) ^ 0x1021u)
                            : static_cast<std::uint16_t>(crc << 1);
    table[byte] = crc;
  }
  return table;
}

inline constexpr std::array<std::uint16_t, 256> crc16_table = make_crc16_table();

}  // namespace detail

// CRC-16/CCITT-FALSE: polynomial 0x1021, initial value 0xffff, no input or
// output reflection, no final xor. Table-driven; the test suite carries an
// independent bit-serial oracle.
inline std::uint16_t crc16_ccitt_false(std::span<const std::uint8_t> data) {
  std::uint16_t crc = 0xffffu;
  for (std::uint8_t byte : data)
    crc = static_cast<std::uint16_t>((crc << 8) ^ detail::crc16_table[((crc >> 8) ^ byte) & 0xffu]);
  return crc;
}

}  // namespace rfid28560
