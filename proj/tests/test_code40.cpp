#include <catch2/catch_amalgamated.hpp>

#include "rfid28560/code40.hpp"
#include "testutil.hpp"

using namespace rfid28560;

TEST_CASE("frozen group values") {
  // 'a'=1,'b'=2,'c'=3: 1*1600 + 2*40 + 3 + 1 = 1684 = 0x0694
  REQUIRE(encode_code40("abc") == std::vector<std::uint8_t>{0x06, 0x94});
  // 'a' + two pads: 1*1600 + 0 + 0 + 1 = 1601 = 0x0641
  REQUIRE(encode_code40("a") == std::vector<std::uint8_t>{0x06, 0x41});
  // 'a','b' + pad: 1*1600 + 2*40 + 0 + 1 = 1681 = 0x0691
  REQUIRE(encode_code40("ab") == std::vector<std::uint8_t>{0x06, 0x91});
  REQUIRE(encode_code40("").empty());
}

TEST_CASE("sixteen characters produce twelve bytes") {
  REQUIRE(encode_code40("ab-123:x.yz04567").size() == 12);
  REQUIRE(encode_code40("aaaaaaaaaaaaaaaa").size() == 12);
}

TEST_CASE("uppercase folds to the lowercase repertoire") {
  REQUIRE(encode_code40("ABC") == encode_code40("abc"));
  REQUIRE(decode_code40(encode_code40("XyZ")) == "xyz");
}

TEST_CASE("group values stay in 1..64000") {
  // '.','.','.' = 39,39,39 is the largest triple
  const auto top = encode_code40("...");
  REQUIRE(((static_cast<unsigned>(top[0]) << 8) | top[1]) == 64000);
  const auto bottom = encode_code40("a");  // smallest nonzero start?
  REQUIRE(((static_cast<unsigned>(bottom[0]) << 8) | bottom[1]) == 1601);
}

TEST_CASE("decode rejects out-of-range and zero groups") {
  const std::vector<std::uint8_t> zero = {0x00, 0x00};
  REQUIRE_THROWS_MATCHES(decode_code40(zero), CodecError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("group 0 value 0")));
  const std::vector<std::uint8_t> high = {0xfa, 0x01};  // 64001
  REQUIRE_THROWS_AS(decode_code40(high), CodecError);
  const std::vector<std::uint8_t> odd = {0x06};
  try {
    decode_code40(odd);
    FAIL("expected throw");
  } catch (const CodecError& e) {
    REQUIRE(e.code() == ErrorCode::odd_length_input);
  }
}

TEST_CASE("embedded pad is rejected, trailing pad stripped") {
  // "a" padded group followed by "abc": pad sits before text
  std::vector<std::uint8_t> bytes = encode_code40("a");
  const auto more = encode_code40("abc");
  bytes.insert(bytes.end(), more.begin(), more.end());
  try {
    decode_code40(bytes);
    FAIL("expected throw");
  } catch (const CodecError& e) {
    REQUIRE(e.code() == ErrorCode::embedded_pad);
  }
  REQUIRE(decode_code40(encode_code40("ab")) == "ab");
}

TEST_CASE("encode rejects characters outside the repertoire") {
  try {
    encode_code40("ab c");
    FAIL("expected throw");
  } catch (const CodecError& e) {
    REQUIRE(e.code() == ErrorCode::character_out_of_repertoire);
    REQUIRE(std::string(e.what()).find("position 2") != std::string::npos);
  }
  REQUIRE_THROWS_AS(encode_code40("a_b"), CodecError);
  REQUIRE_THROWS_AS(encode_code40("\x80"), CodecError);
}

TEST_CASE("encode rejects over-long input") {
  const std::string longest(48, 'a');
  REQUIRE(encode_code40(longest).size() == 32);
  try {
    encode_code40(longest + "a");
    FAIL("expected throw");
  } catch (const CodecError& e) {
    REQUIRE(e.code() == ErrorCode::input_too_long);
  }
}

TEST_CASE("round trip matches the enumeration oracle") {
  const testutil::OracleCode40 oracle;
  auto rng = testutil::make_rng(5150);
  for (int i = 0; i < 3000; ++i) {
    const std::string text = testutil::random_primary_id(rng, 0, 48);
    const auto encoded = encode_code40(text);
    REQUIRE(encoded == oracle.encode(text));
    REQUIRE(decode_code40(encoded) == text);
    REQUIRE(oracle.decode(encoded) == text);
  }
}

TEST_CASE("every group value decodes consistently with the oracle") {
  const testutil::OracleCode40 oracle;
  for (unsigned g = 1; g <= 64000; ++g) {
    const std::vector<std::uint8_t> bytes = {static_cast<std::uint8_t>(g >> 8),
                                             static_cast<std::uint8_t>(g & 0xff)};
    std::string ours, theirs;
    bool our_throw = false, their_throw = false;
    try {
      ours = decode_code40(bytes);
    } catch (const CodecError&) {
      our_throw = true;
    }
    try {
      theirs = oracle.decode(bytes);
    } catch (const std::runtime_error&) {
      their_throw = true;
    }
    REQUIRE(our_throw == their_throw);
    if (!our_throw) REQUIRE(ours == theirs);
  }
}

TEST_CASE("alphabet override file") {
  // swap '-' and '.' relative to the shipped table
  std::string table;
  table += "0\t \n";
  for (int i = 0; i < 26; ++i)
    table += std::to_string(1 + i) + "\t" + static_cast<char>('a' + i) + "\n";
  for (int i = 0; i < 10; ++i)
    table += std::to_string(27 + i) + "\t" + static_cast<char>('0' + i) + "\n";
  table += "37\t.\n38\t:\n39\t-\n";
  const Code40Alphabet alt = Code40Alphabet::parse_table(table);
  REQUIRE(alt.value_for('.') == 37u);
  REQUIRE(alt.value_for('-') == 39u);
  REQUIRE(encode_code40("a.b", alt) == encode_code40("a-b"));
  REQUIRE(decode_code40(encode_code40("a.b", alt), alt) == "a.b");
}

TEST_CASE("alphabet table rejects duplicates and short tables") {
  REQUIRE_THROWS_AS(Code40Alphabet::parse_table("0\t \n1\ta\n"), CodecError);
  std::array<char, 40> chars{};
  chars[0] = ' ';
  for (int i = 1; i < 40; ++i) chars[i] = static_cast<char>('a' + (i % 20));
  REQUIRE_THROWS_AS(Code40Alphabet::from_chars(chars), CodecError);
}
