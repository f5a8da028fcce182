#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rfid28560/errors.hpp"

namespace rfid28560 {

// Bit string with an explicit length, MSB first. Bit 0 is the most
// significant bit of the first byte. Lengths are not rounded to bytes: a
// 198-bit value stays 198 bits, and the hex rendering records the true
// length alongside ("<bitlen>:<hex>", value right-aligned, zero pad bits at
// the MSB end of the hex).
class BitString {
 public:
  BitString() = default;

  static BitString zeros(std::size_t bit_count) {
    BitString b;
    b.size_ = bit_count;
    b.bytes_.assign((bit_count + 7) / 8, 0);
    return b;
  }

  static BitString from_bytes(std::span<const std::uint8_t> bytes) {
    BitString b;
    b.size_ = bytes.size() * 8;
    b.bytes_.assign(bytes.begin(), bytes.end());
    return b;
  }

  static BitString from_uint(std::uint64_t value, std::size_t width) {
    if (width > 64) fail(ErrorCode::width_mismatch, "from_uint: width > 64");
    if (width < 64 && width > 0 && (value >> width) != 0)
      fail(ErrorCode::width_mismatch,
           "from_uint: value does not fit " + std::to_string(width) + " bits");
    if (width == 0 && value != 0)
      fail(ErrorCode::width_mismatch, "from_uint: nonzero value in zero width");
    BitString b = zeros(width);
    for (std::size_t i = 0; i < width; ++i)
      if ((value >> (width - 1 - i)) & 1u) b.set_bit(i, true);
    return b;
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool bit(std::size_t i) const {
    check_index(i);
    return (bytes_[i >> 3] >> (7 - (i & 7))) & 1u;
  }

  void set_bit(std::size_t i, bool value) {
    check_index(i);
    const std::uint8_t mask = static_cast<std::uint8_t>(1u << (7 - (i & 7)));
    if (value)
      bytes_[i >> 3] |= mask;
    else
      bytes_[i >> 3] &= static_cast<std::uint8_t>(~mask);
  }

  void flip_bit(std::size_t i) { set_bit(i, !bit(i)); }

  BitString& append(const BitString& other) {
    const std::size_t base = size_;
    size_ += other.size_;
    bytes_.resize((size_ + 7) / 8, 0);
    for (std::size_t i = 0; i < other.size_; ++i)
      if (other.bit(i)) set_bit(base + i, true);
    return *this;
  }

  BitString& append_byte(std::uint8_t byte) { return append(from_uint(byte, 8)); }

  BitString slice(std::size_t offset, std::size_t length) const {
    if (offset + length > size_)
      fail(ErrorCode::width_mismatch,
           "slice [" + std::to_string(offset) + "," + std::to_string(offset + length) +
               ") out of range for " + std::to_string(size_) + " bits");
    BitString out = zeros(length);
    for (std::size_t i = 0; i < length; ++i)
      if (bit(offset + i)) out.set_bit(i, true);
    return out;
  }

  bool all_zero() const {
    for (std::size_t i = 0; i < size_; ++i)
      if (bit(i)) return false;
    return true;
  }

  std::vector<std::uint8_t> to_bytes() const {
    if (size_ % 8 != 0)
      fail(ErrorCode::width_mismatch,
           "to_bytes: " + std::to_string(size_) + " bits is not byte aligned");
    return std::vector<std::uint8_t>(bytes_.begin(), bytes_.begin() + size_ / 8);
  }

  std::uint64_t to_uint() const {
    if (size_ > 64) fail(ErrorCode::width_mismatch, "to_uint: more than 64 bits");
    std::uint64_t value = 0;
    for (std::size_t i = 0; i < size_; ++i) value = (value << 1) | (bit(i) ? 1u : 0u);
    return value;
  }

  // Hex digits of the right-aligned value, 2*ceil(size/8) characters,
  // lowercase. The (8*bytes - size) leading bits are zero padding.
  std::string hex_digits() const {
    static const char* digits = "0123456789abcdef";
    const std::size_t nbytes = (size_ + 7) / 8;
    const std::size_t pad = nbytes * 8 - size_;
    std::vector<std::uint8_t> out(nbytes, 0);
    for (std::size_t i = 0; i < size_; ++i)
      if (bit(i)) out[(pad + i) >> 3] |= static_cast<std::uint8_t>(1u << (7 - ((pad + i) & 7)));
    std::string hex;
    hex.reserve(nbytes * 2);
    for (std::uint8_t b : out) {
      hex.push_back(digits[b >> 4]);
      hex.push_back(digits[b & 0xf]);
    }
    return hex;
  }

  std::string to_hex_prefixed() const { return std::to_string(size_) + ":" + hex_digits(); }

  static BitString from_hex_digits(std::string_view hex, std::size_t bit_count) {
    const std::size_t nbytes = (bit_count + 7) / 8;
    if (hex.size() != nbytes * 2)
      fail(ErrorCode::parse_error, "hex length " + std::to_string(hex.size()) +
                                       " does not match bit length " + std::to_string(bit_count));
    std::vector<std::uint8_t> bytes(nbytes, 0);
    for (std::size_t i = 0; i < hex.size(); ++i) {
      const int nib = hex_nibble(hex[i]);
      if (nib < 0)
        fail(ErrorCode::parse_error,
             std::string("invalid hex character '") + hex[i] + "' at offset " + std::to_string(i));
      bytes[i / 2] = static_cast<std::uint8_t>((bytes[i / 2] << 4) | nib);
    }
    BitString padded = from_bytes(bytes);
    const std::size_t pad = nbytes * 8 - bit_count;
    for (std::size_t i = 0; i < pad; ++i)
      if (padded.bit(i)) fail(ErrorCode::parse_error, "nonzero padding bits in hex value");
    return padded.slice(pad, bit_count);
  }

  static BitString parse_hex_prefixed(std::string_view text) {
    const std::size_t colon = text.find(':');
    if (colon == std::string_view::npos)
      fail(ErrorCode::parse_error, "expected '<bitlen>:<hex>', got '" + std::string(text) + "'");
    std::size_t bit_count = 0;
    const std::string_view len = text.substr(0, colon);
    if (len.empty()) fail(ErrorCode::parse_error, "missing bit length before ':'");
    for (char c : len) {
      if (c < '0' || c > '9')
        fail(ErrorCode::parse_error, "invalid bit length '" + std::string(len) + "'");
      bit_count = bit_count * 10 + static_cast<std::size_t>(c - '0');
    }
    return from_hex_digits(text.substr(colon + 1), bit_count);
  }

  friend bool operator==(const BitString& a, const BitString& b) {
    return a.size_ == b.size_ && a.bytes_ == b.bytes_;
  }
  friend bool operator!=(const BitString& a, const BitString& b) { return !(a == b); }

 private:
  void check_index(std::size_t i) const {
    if (i >= size_)
      fail(ErrorCode::width_mismatch,
           "bit index " + std::to_string(i) + " out of range for " + std::to_string(size_) + " bits");
  }

  static int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  }

  // Invariant: bits past size_ in the last byte stay zero, so equality can
  // compare the byte vectors directly.
  std::vector<std::uint8_t> bytes_;
  std::size_t size_ = 0;
};

}  // namespace rfid28560
