#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rfid28560/config.hpp"
#include "rfid28560/errors.hpp"

namespace rfid28560 {

// URN Code 40 text compaction. Three symbols from a 40-entry repertoire pack
// into one 16-bit group as (v1*1600 + v2*40 + v3) + 1, stored big-endian, so
// a 16-character identifier compacts to 12 bytes. The +1 offset keeps the
// all-zero group out of the code space; erased memory can never be mistaken
// for encoded text.

constexpr std::size_t kCode40MaxInputChars = 48;
// (39*1600 + 39*40 + 39) + 1 — the largest group an in-range triple can produce.
constexpr unsigned kCode40MaxGroupValue = 64000;

class Code40Alphabet {
 public:
  // Shipped repertoire: pad (rendered as space), a-z, 0-9, '-', ':', '.'.
  // The normative table lives outside this repo; deployments holding it can
  // load a replacement with the same shape.
  static const Code40Alphabet& default_alphabet() {
    static const Code40Alphabet table = make_default();
    return table;
  }

  static Code40Alphabet from_chars(const std::array<char, 40>& chars) {
    Code40Alphabet a;
    a.chars_ = chars;
    a.values_.fill(-1);
    for (std::size_t v = 0; v < 40; ++v) {
      const auto c = static_cast<unsigned char>(chars[v]);
      if (a.values_[c] != -1)
        fail(ErrorCode::config_error,
             std::string("alphabet is not injective: character '") + chars[v] + "' repeats");
      a.values_[c] = static_cast<std::int16_t>(v);
    }
    return a;
  }

  // Override file: exactly 40 lines of `value<TAB>character`.
  static Code40Alphabet parse_table(std::string_view text) {
    std::array<char, 40> chars{};
    std::array<bool, 40> seen{};
    std::size_t line_no = 0, entries = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t eol = text.find('\n', pos);
      std::string_view line =
          text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
      pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.empty()) continue;
      const std::size_t tab = line.find('\t');
      if (tab == std::string_view::npos || tab + 2 != line.size())
        fail(ErrorCode::parse_error,
             "alphabet line " + std::to_string(line_no) + ": expected value<TAB>char");
      unsigned value = 0;
      for (char c : line.substr(0, tab)) {
        if (c < '0' || c > '9')
          fail(ErrorCode::parse_error,
               "alphabet line " + std::to_string(line_no) + ": invalid value");
        value = value * 10 + static_cast<unsigned>(c - '0');
      }
      if (value >= 40)
        fail(ErrorCode::parse_error,
             "alphabet line " + std::to_string(line_no) + ": value " + std::to_string(value) +
                 " out of range 0..39");
      if (seen[value])
        fail(ErrorCode::config_error,
             "alphabet line " + std::to_string(line_no) + ": value " + std::to_string(value) +
                 " assigned twice");
      seen[value] = true;
      chars[value] = line[tab + 1];
      ++entries;
    }
    if (entries != 40)
      fail(ErrorCode::config_error,
           "alphabet has " + std::to_string(entries) + " entries, expected 40");
    return from_chars(chars);
  }

  static Code40Alphabet load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io_error, "cannot open alphabet file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_table(buf.str());
  }

  char char_for(unsigned value) const { return chars_[value]; }
  char pad_char() const { return chars_[0]; }

  // Exact lookup first, then ASCII case-folded; pad (value 0) counts as
  // out of the encodable repertoire.
  std::optional<unsigned> value_for(char c) const {
    std::int16_t v = values_[static_cast<unsigned char>(c)];
    if (v < 0 && c >= 'A' && c <= 'Z')
      v = values_[static_cast<unsigned char>(c - 'A' + 'a')];
    if (v < 0) return std::nullopt;
    return static_cast<unsigned>(v);
  }

 private:
  static Code40Alphabet make_default() {
    std::array<char, 40> chars{};
    chars[0] = ' ';
    for (int i = 0; i < 26; ++i) chars[1 + i] = static_cast<char>('a' + i);
    for (int i = 0; i < 10; ++i) chars[27 + i] = static_cast<char>('0' + i);
    chars[37] = '-';
    chars[38] = ':';
    chars[39] = '.';
    return from_chars(chars);
  }

  std::array<char, 40> chars_{};
  std::array<std::int16_t, 256> values_{};
};

inline std::vector<std::uint8_t> encode_code40(
    std::string_view text, const Code40Alphabet& alphabet = Code40Alphabet::default_alphabet()) {
  if (text.size() > kCode40MaxInputChars)
    fail(ErrorCode::input_too_long, "input is " + std::to_string(text.size()) +
                                        " characters, limit " + std::to_string(kCode40MaxInputChars));
  std::vector<unsigned> symbols;
  symbols.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto value = alphabet.value_for(text[i]);
    if (!value)
      fail(ErrorCode::character_out_of_repertoire,
           std::string("character '") + text[i] + "' at position " + std::to_string(i) +
               " is not in the Code 40 repertoire");
    if (*value == 0)
      fail(ErrorCode::character_out_of_repertoire,
           "pad character at position " + std::to_string(i) + " cannot be encoded");
    symbols.push_back(*value);
  }
  while (symbols.size() % 3 != 0) symbols.push_back(0);
  std::vector<std::uint8_t> out;
  out.reserve(symbols.size() / 3 * 2);
  for (std::size_t i = 0; i < symbols.size(); i += 3) {
    const unsigned group = symbols[i] * 1600 + symbols[i + 1] * 40 + symbols[i + 2] + 1;
    out.push_back(static_cast<std::uint8_t>(group >> 8));
    out.push_back(static_cast<std::uint8_t>(group & 0xff));
  }
  return out;
}

inline std::string decode_code40(
    std::span<const std::uint8_t> bytes,
    const Code40Alphabet& alphabet = Code40Alphabet::default_alphabet()) {
  if (bytes.size() % 2 != 0)
    fail(ErrorCode::odd_length_input,
         std::to_string(bytes.size()) + " bytes; Code 40 groups are 16-bit");
  std::vector<unsigned> symbols;
  symbols.reserve(bytes.size() / 2 * 3);
  for (std::size_t i = 0; i < bytes.size(); i += 2) {
    const unsigned group = (static_cast<unsigned>(bytes[i]) << 8) | bytes[i + 1];
    if (group == 0 || group > kCode40MaxGroupValue)
      fail(ErrorCode::group_value_out_of_range,
           "group " + std::to_string(i / 2) + " value " + std::to_string(group) +
               " outside 1.." + std::to_string(kCode40MaxGroupValue));
    const unsigned packed = group - 1;
    symbols.push_back(packed / 1600);
    symbols.push_back((packed / 40) % 40);
    symbols.push_back(packed % 40);
  }
  // Pads may only trail the text.
  std::size_t text_len = symbols.size();
  while (text_len > 0 && symbols[text_len - 1] == 0) --text_len;
  for (std::size_t i = 0; i < text_len; ++i)
    if (symbols[i] == 0)
      fail(ErrorCode::embedded_pad, "pad symbol at position " + std::to_string(i) +
                                        " before non-pad symbol at position " + std::to_string(text_len - 1));
  std::string text;
  text.reserve(text_len);
  for (std::size_t i = 0; i < text_len; ++i) text.push_back(alphabet.char_for(symbols[i]));
  return text;
}

}  // namespace rfid28560
