#include <catch2/catch_amalgamated.hpp>

#include "rfid28560/bits.hpp"
#include "testutil.hpp"

using rfid28560::BitString;
using rfid28560::CodecError;
using rfid28560::ErrorCode;

TEST_CASE("zeros and size") {
  const BitString b = BitString::zeros(13);
  REQUIRE(b.size() == 13);
  REQUIRE(b.all_zero());
  REQUIRE(BitString::zeros(0).empty());
}

TEST_CASE("from_uint is MSB first") {
  const BitString b = BitString::from_uint(0b1011, 4);
  REQUIRE(b.bit(0));
  REQUIRE_FALSE(b.bit(1));
  REQUIRE(b.bit(2));
  REQUIRE(b.bit(3));
  REQUIRE(b.to_uint() == 0b1011);
}

TEST_CASE("from_uint range checks") {
  REQUIRE_THROWS_AS(BitString::from_uint(16, 4), CodecError);
  REQUIRE_THROWS_AS(BitString::from_uint(1, 0), CodecError);
  REQUIRE_NOTHROW(BitString::from_uint(0, 0));
  REQUIRE(BitString::from_uint(~std::uint64_t{0}, 64).to_uint() == ~std::uint64_t{0});
}

TEST_CASE("append concatenates bit-exactly") {
  BitString a = BitString::from_uint(0b101, 3);
  a.append(BitString::from_uint(0b01, 2));
  REQUIRE(a.size() == 5);
  REQUIRE(a.to_uint() == 0b10101);
}

TEST_CASE("slice round-trips appended pieces") {
  auto rng = testutil::make_rng(41);
  for (int i = 0; i < 200; ++i) {
    const BitString left = testutil::random_bits(rng, testutil::pick(rng, 0, 40));
    const BitString right = testutil::random_bits(rng, testutil::pick(rng, 0, 40));
    BitString joined = left;
    joined.append(right);
    REQUIRE(joined.size() == left.size() + right.size());
    REQUIRE(joined.slice(0, left.size()) == left);
    REQUIRE(joined.slice(left.size(), right.size()) == right);
  }
}

TEST_CASE("slice bounds") {
  const BitString b = BitString::zeros(10);
  REQUIRE_THROWS_AS(b.slice(4, 7), CodecError);
  REQUIRE_NOTHROW(b.slice(10, 0));
}

TEST_CASE("tail bits stay zero so equality is structural") {
  BitString a = BitString::zeros(3);
  BitString b = BitString::zeros(3);
  a.set_bit(1, true);
  a.set_bit(1, false);
  REQUIRE(a == b);
  b.set_bit(2, true);
  REQUIRE(a != b);
  REQUIRE(BitString::zeros(3) != BitString::zeros(4));
}

TEST_CASE("hex rendering right-aligns the value") {
  // 10 bits: 2 pad bits at the MSB end of the hex
  const BitString b = BitString::from_uint(0x2ff, 10);
  REQUIRE(b.hex_digits() == "02ff");
  REQUIRE(b.to_hex_prefixed() == "10:02ff");
  REQUIRE(BitString::zeros(0).hex_digits().empty());
  REQUIRE(BitString::from_uint(0xab, 8).hex_digits() == "ab");
}

TEST_CASE("hex round trip with explicit length") {
  auto rng = testutil::make_rng(42);
  for (int i = 0; i < 300; ++i) {
    const BitString b = testutil::random_bits(rng, testutil::pick(rng, 0, 200));
    REQUIRE(BitString::parse_hex_prefixed(b.to_hex_prefixed()) == b);
  }
}

TEST_CASE("hex parse rejects bad input") {
  REQUIRE_THROWS_AS(BitString::from_hex_digits("zz", 8), CodecError);
  REQUIRE_THROWS_AS(BitString::from_hex_digits("ff", 4), CodecError);   // wrong digit count
  REQUIRE_THROWS_AS(BitString::from_hex_digits("ff", 7), CodecError);   // nonzero pad bit
  REQUIRE_NOTHROW(BitString::from_hex_digits("7f", 7));
  REQUIRE_THROWS_AS(BitString::parse_hex_prefixed("0xff"), CodecError);
  REQUIRE_THROWS_AS(BitString::parse_hex_prefixed("ff"), CodecError);
  try {
    BitString::from_hex_digits("ff", 7);
    FAIL("expected throw");
  } catch (const CodecError& e) {
    REQUIRE(e.code() == ErrorCode::parse_error);
  }
}

TEST_CASE("to_bytes requires byte alignment") {
  REQUIRE(BitString::from_uint(0xbeef, 16).to_bytes() == std::vector<std::uint8_t>{0xbe, 0xef});
  REQUIRE_THROWS_AS(BitString::zeros(12).to_bytes(), CodecError);
}

TEST_CASE("from_bytes preserves order") {
  const std::uint8_t raw[] = {0x80, 0x01};
  const BitString b = BitString::from_bytes(raw);
  REQUIRE(b.size() == 16);
  REQUIRE(b.bit(0));
  REQUIRE(b.bit(15));
  REQUIRE_FALSE(b.bit(1));
}

TEST_CASE("flip_bit is an involution") {
  auto rng = testutil::make_rng(43);
  BitString b = testutil::random_bits(rng, 64);
  const BitString before = b;
  b.flip_bit(17);
  REQUIRE(b != before);
  b.flip_bit(17);
  REQUIRE(b == before);
}
