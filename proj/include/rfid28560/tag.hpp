#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rfid28560/bits.hpp"
#include "rfid28560/config.hpp"
#include "rfid28560/errors.hpp"
#include "rfid28560/model.hpp"

namespace rfid28560 {

// Bank ids follow the block naming of partitioned tag memory: block 01 holds
// the EPC/UII, block 11 is user memory. The system bank is the 8-bit home of
// the AFI mirror on profiles that keep the AFI outside block 01.
enum class Bank { epc01, user11, system };

constexpr std::size_t kSystemBankBits = 8;

inline const char* bank_id(Bank b) {
  switch (b) {
    case Bank::epc01: return "01";
    case Bank::user11: return "11";
    case Bank::system: return "system";
  }
  return "?";
}

inline std::optional<Bank> bank_from_id(std::string_view id) {
  if (id == "01") return Bank::epc01;
  if (id == "11") return Bank::user11;
  if (id == "system") return Bank::system;
  return std::nullopt;
}

// Bank-addressed memory image of one physical tag. Images are values:
// writes return a new image and never touch the ancestor, and no image can
// exist whose banks exceed the profile's capacities.
class TagImage {
 public:
  explicit TagImage(TagProfile profile) : profile_(std::move(profile)) {}

  const TagProfile& profile() const { return profile_; }

  std::size_t bank_capacity(Bank bank) const {
    switch (bank) {
      case Bank::epc01: return profile_.epc_block_bits;
      case Bank::user11: return profile_.user_memory_bits;
      case Bank::system: return kSystemBankBits;
    }
    fail(ErrorCode::unknown_bank, "bad bank enum");
  }

  bool has_bank(Bank bank) const { return banks_[index(bank)].has_value(); }

  TagImage write_bank(Bank bank, BitString bits) const {
    const std::size_t capacity = bank_capacity(bank);
    if (bits.size() > capacity)
      fail(ErrorCode::bank_overflow, std::string("bank ") + bank_id(bank) + ": capacity " +
                                         std::to_string(capacity) + " bits, attempted " +
                                         std::to_string(bits.size()));
    TagImage out = *this;
    out.banks_[index(bank)] = std::move(bits);
    return out;
  }

  const BitString& read_bank(Bank bank) const {
    const auto& slot = banks_[index(bank)];
    if (!slot)
      fail(ErrorCode::bank_empty, std::string("bank ") + bank_id(bank) + " was never written");
    return *slot;
  }

  std::optional<Afi> afi_mirror() const {
    const auto& slot = banks_[index(Bank::system)];
    if (!slot || slot->size() != kSystemBankBits) return std::nullopt;
    return Afi{static_cast<std::uint8_t>(slot->to_uint())};
  }

  // One line per written bank: `bank:<id> len:<bits> hex:<data>`.
  std::string dump() const {
    std::string out;
    for (Bank bank : {Bank::epc01, Bank::user11, Bank::system}) {
      if (!has_bank(bank)) continue;
      const BitString& bits = read_bank(bank);
      out += std::string("bank:") + bank_id(bank) + " len:" + std::to_string(bits.size()) +
             " hex:" + bits.hex_digits() + "\n";
    }
    return out;
  }

  static TagImage parse_dump(std::string_view text, TagProfile profile) {
    TagImage image{std::move(profile)};
    std::size_t line_no = 0, banks_seen = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t eol = text.find('\n', pos);
      std::string_view line =
          text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
      pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.empty()) continue;
      const std::string where = "dump line " + std::to_string(line_no);
      if (!line.starts_with("bank:"))
        fail(ErrorCode::parse_error, where + ": expected 'bank:<id> len:<bits> hex:<data>'");
      const std::size_t sp1 = line.find(' ');
      if (sp1 == std::string_view::npos || !line.substr(sp1 + 1).starts_with("len:"))
        fail(ErrorCode::parse_error, where + ": missing len field");
      const std::size_t sp2 = line.find(' ', sp1 + 1);
      if (sp2 == std::string_view::npos || !line.substr(sp2 + 1).starts_with("hex:"))
        fail(ErrorCode::parse_error, where + ": missing hex field");
      const std::string_view id = line.substr(5, sp1 - 5);
      const std::string_view len_text = line.substr(sp1 + 5, sp2 - sp1 - 5);
      const std::string_view hex = line.substr(sp2 + 5);
      const std::optional<Bank> bank = bank_from_id(id);
      if (!bank)
        fail(ErrorCode::unknown_bank, where + ": unknown bank '" + std::string(id) + "'");
      if (image.has_bank(*bank))
        fail(ErrorCode::parse_error, where + ": bank '" + std::string(id) + "' appears twice");
      std::size_t bit_count = 0;
      if (len_text.empty()) fail(ErrorCode::parse_error, where + ": empty len field");
      for (char c : len_text) {
        if (c < '0' || c > '9') fail(ErrorCode::parse_error, where + ": invalid len field");
        bit_count = bit_count * 10 + static_cast<std::size_t>(c - '0');
      }
      try {
        image = image.write_bank(*bank, BitString::from_hex_digits(hex, bit_count));
      } catch (const CodecError& e) {
        if (e.code() == ErrorCode::bank_overflow) throw;
        fail(e.code(), where + ": " + e.what());
      }
      ++banks_seen;
    }
    if (banks_seen == 0) fail(ErrorCode::parse_error, "dump contains no bank lines");
    return image;
  }

  friend bool operator==(const TagImage&, const TagImage&) = default;

 private:
  static std::size_t index(Bank bank) { return static_cast<std::size_t>(bank); }

  TagProfile profile_;
  std::array<std::optional<BitString>, 3> banks_;
};

// Free-function spellings of the guarded accessors.
inline TagImage write_bank(const TagImage& tag, Bank bank, BitString bits) {
  return tag.write_bank(bank, std::move(bits));
}
inline const BitString& read_bank(const TagImage& tag, Bank bank) { return tag.read_bank(bank); }

inline const std::vector<TagProfile>& shipped_profiles() {
  static const std::vector<TagProfile> profiles = {
      {"ICODE_ILT", Band::HF_MODE3, 240, 1024, AfiLocation::SYSTEM_AREA},
      {"GENERIC_UHF_TYPEC", Band::UHF_TYPEC, 96, 512, AfiLocation::IN_EPC_BLOCK},
  };
  return profiles;
}

// Single-profile file: flat keys name, band, epc_block_bits,
// user_memory_bits, afi_location.
inline TagProfile profile_from_config(const ConfigMap& cfg) {
  TagProfile profile;
  const auto name = cfg.get("name");
  if (!name || name->empty())
    fail(ErrorCode::profile_parse_error, "profile file: missing 'name'");
  profile.name = *name;
  const auto band = cfg.get("band");
  if (!band) fail(ErrorCode::profile_parse_error, "profile file: missing 'band'");
  if (*band == "HF_MODE3") profile.band = Band::HF_MODE3;
  else if (*band == "UHF_TYPEC") profile.band = Band::UHF_TYPEC;
  else fail(ErrorCode::profile_parse_error, "profile file: unknown band '" + *band + "'");
  if (!cfg.contains("epc_block_bits"))
    fail(ErrorCode::profile_parse_error, "profile file: missing 'epc_block_bits'");
  profile.epc_block_bits = cfg.get_uint("epc_block_bits", 0);
  profile.user_memory_bits = cfg.get_uint("user_memory_bits", 0);
  const auto loc = cfg.get("afi_location");
  if (!loc) fail(ErrorCode::profile_parse_error, "profile file: missing 'afi_location'");
  if (*loc == "IN_EPC_BLOCK") profile.afi_location = AfiLocation::IN_EPC_BLOCK;
  else if (*loc == "SYSTEM_AREA") profile.afi_location = AfiLocation::SYSTEM_AREA;
  else fail(ErrorCode::profile_parse_error, "profile file: unknown afi_location '" + *loc + "'");
  return profile;
}

inline TagProfile load_profile(const std::string& name_or_path) {
  for (const TagProfile& p : shipped_profiles())
    if (p.name == name_or_path) return p;
  std::error_code ec;
  if (std::filesystem::exists(name_or_path, ec)) {
    try {
      return profile_from_config(ConfigMap::load(name_or_path));
    } catch (const CodecError& e) {
      if (e.code() == ErrorCode::profile_parse_error || e.code() == ErrorCode::io_error) throw;
      fail(ErrorCode::profile_parse_error, std::string("profile file: ") + e.what());
    }
  }
  fail(ErrorCode::unknown_profile, "unknown profile '" + name_or_path + "'");
}

}  // namespace rfid28560
