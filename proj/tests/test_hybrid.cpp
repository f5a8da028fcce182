#include <catch2/catch_amalgamated.hpp>

#include "rfid28560/hybrid.hpp"
#include "testutil.hpp"

using namespace rfid28560;

namespace {

const TagProfile& icode() {
  static const TagProfile p = load_profile("ICODE_ILT");
  return p;
}

Gs1Input random_gs1(std::mt19937_64& rng, const EpcScheme& scheme) {
  Gs1Input gs1;
  gs1.manager_number = testutil::random_bits(rng, scheme.manager_bits);
  gs1.object_class = testutil::random_bits(rng, scheme.class_bits);
  return gs1;
}

}  // namespace

TEST_CASE("serial payload arithmetic") {
  const BitString payload = build_serial_payload("ab-123:x.yz04567", Afi{0xc2});
  REQUIRE(payload.size() == 104);  // 6 groups of 16 bits + afi byte
  REQUIRE(payload.slice(96, 8).to_uint() == 0xc2);
  REQUIRE(build_serial_payload("abc", Afi{0}).size() == 24);
  REQUIRE(build_serial_payload("abcd", Afi{0}).size() == 40);
}

TEST_CASE("serial payload round trip at every identifier length") {
  for (std::size_t len = 1; len <= kPrimaryIdMaxChars; ++len) {
    const std::string id(len, 'q');
    const BitString payload = build_serial_payload(id, Afi{0xc2});
    // embed in a 140-bit serial the way the encoder does
    BitString serial = BitString::zeros(140 - payload.size());
    serial.append(payload);
    const SerialPayload back = parse_serial_payload(serial);
    REQUIRE(back.primary_id == id);
    REQUIRE(back.afi.value == 0xc2);
    REQUIRE(back.group_count == (len + 2) / 3);
  }
}

TEST_CASE("payload parsing rejects noise") {
  // all-zero serial: erased memory
  try {
    parse_serial_payload(BitString::zeros(140));
    FAIL("expected throw");
  } catch (const CodecError& e) {
    REQUIRE(e.code() == ErrorCode::empty_serial_payload);
  }
  // too narrow for even one group
  REQUIRE_THROWS_AS(parse_serial_payload(BitString::zeros(20)), CodecError);
  // nonzero alignment gap (140-8 = 132 -> 4 gap bits)
  BitString gap = BitString::zeros(140);
  gap.set_bit(0, true);
  try {
    parse_serial_payload(gap);
    FAIL("expected throw");
  } catch (const CodecError& e) {
    REQUIRE(e.code() == ErrorCode::malformed_serial_payload);
  }
  // zero group between text groups
  const BitString payload = build_serial_payload("abc", Afi{0xc2});  // 24 bits
  BitString serial = BitString::zeros(140 - 16 - 16 - payload.size());
  serial.append(BitString::from_uint(0x0694, 16));
  serial.append(BitString::zeros(16));
  serial.append(payload);
  REQUIRE(serial.size() == 140);
  REQUIRE_THROWS_AS(parse_serial_payload(serial), CodecError);
}

TEST_CASE("hybrid encode writes all three banks on an hf profile") {
  const LibraryItemRecord record = testutil::boundary_record();
  auto rng = testutil::make_rng(7);
  const EpcScheme& scheme = SchemeTable::shipped().by_name(SchemeName::EPC198);
  const TagImage tag = encode_hybrid(record, random_gs1(rng, scheme), icode());
  REQUIRE(tag.read_bank(Bank::epc01).size() == 198);
  // 1 length byte + 11 isil chars + 2 set bytes
  REQUIRE(tag.read_bank(Bank::user11).size() == 112);
  REQUIRE(tag.afi_mirror() == Afi{0xc2});
}

TEST_CASE("hybrid round trip on random records") {
  auto rng = testutil::make_rng(2024);
  const EpcScheme& scheme = SchemeTable::shipped().by_name(SchemeName::EPC198);
  for (int i = 0; i < 1500; ++i) {
    const LibraryItemRecord record = testutil::random_record(rng, true);
    const Gs1Input gs1 = random_gs1(rng, scheme);
    const TagImage tag = encode_hybrid(record, gs1, icode());
    const HybridDecodeResult back = decode_hybrid(tag);
    REQUIRE(back.record == record);
    REQUIRE(back.gs1.manager_number == gs1.manager_number);
    REQUIRE(back.gs1.object_class == *gs1.object_class);
    REQUIRE(back.scheme == SchemeName::EPC198);
  }
}

TEST_CASE("object class falls back to publication type then zero") {
  LibraryItemRecord record = testutil::boundary_record();
  auto rng = testutil::make_rng(8);
  Gs1Input gs1;
  gs1.manager_number = testutil::random_bits(rng, 28);
  const TagImage plain = encode_hybrid(record, gs1, icode());
  REQUIRE(decode_hybrid(plain).gs1.object_class.all_zero());
  record.publication_type = PublicationType{PublicationSystem::ONIX, "BB", 12};
  const TagImage typed = encode_hybrid(record, gs1, icode());
  REQUIRE(decode_hybrid(typed).gs1.object_class.to_uint() == 12);
}

TEST_CASE("publication type resolves through the registry on decode") {
  const auto registry = PublicationTypeRegistry::parse_csv(
      "system,code,numeric_id\nONIX,BB,12\n");
  CodecEnv env;
  env.publications = &registry;
  LibraryItemRecord record = testutil::boundary_record();
  record.publication_type = PublicationType{PublicationSystem::ONIX, "BB", 12};
  auto rng = testutil::make_rng(9);
  Gs1Input gs1;
  gs1.manager_number = testutil::random_bits(rng, 28);
  const HybridDecodeResult back = decode_hybrid(encode_hybrid(record, gs1, icode(), env), env);
  REQUIRE(back.record.publication_type == record.publication_type);
}

TEST_CASE("profile too small and user memory limits") {
  const LibraryItemRecord record = testutil::boundary_record();
  auto rng = testutil::make_rng(10);
  const EpcScheme& scheme = SchemeTable::shipped().by_name(SchemeName::EPC198);
  const Gs1Input gs1 = random_gs1(rng, scheme);
  try {
    encode_hybrid(record, gs1, load_profile("GENERIC_UHF_TYPEC"));
    FAIL("expected throw");
  } catch (const CodecError& e) {
    REQUIRE(e.code() == ErrorCode::profile_too_small);
  }
  TagProfile tiny = icode();
  tiny.user_memory_bits = 64;
  try {
    encode_hybrid(record, gs1, tiny);
    FAIL("expected throw");
  } catch (const CodecError& e) {
    REQUIRE(e.code() == ErrorCode::user_memory_truncated);
  }
}

TEST_CASE("identifier too long for a narrow serial field") {
  const LibraryItemRecord record = testutil::boundary_record();  // 16 chars, 104 bits
  auto rng = testutil::make_rng(11);
  const EpcScheme& e96 = SchemeTable::shipped().by_name(SchemeName::EPC96);
  const Gs1Input gs1 = random_gs1(rng, e96);
  try {
    encode_hybrid(record, gs1, icode(), {}, SchemeName::EPC96);  // 36-bit serial
    FAIL("expected throw");
  } catch (const CodecError& e) {
    REQUIRE(e.code() == ErrorCode::serial_overflow);
  }
  // a 3-char id fits an EPC96 serial: 24 bits of payload in 36
  LibraryItemRecord small = record;
  small.primary_id = PrimaryItemId("abc");
  const TagImage tag = encode_hybrid(small, gs1, icode(), {}, SchemeName::EPC96);
  const HybridDecodeResult back = decode_hybrid(tag);
  REQUIRE(back.scheme == SchemeName::EPC96);
  REQUIRE(back.record.primary_id.value() == "abc");
}

TEST_CASE("tampered user memory is rejected") {
  auto rng = testutil::make_rng(12);
  const EpcScheme& scheme = SchemeTable::shipped().by_name(SchemeName::EPC198);
  const TagImage tag =
      encode_hybrid(testutil::boundary_record(), random_gs1(rng, scheme), icode());
  // truncate below the declared isil length
  BitString user = tag.read_bank(Bank::user11).slice(0, 40);
  try {
    decode_hybrid(tag.write_bank(Bank::user11, user));
    FAIL("expected throw");
  } catch (const CodecError& e) {
    REQUIRE(e.code() == ErrorCode::user_memory_truncated);
  }
  // nonzero trailing byte past the record
  BitString padded = tag.read_bank(Bank::user11);
  padded.append_byte(0x00);
  REQUIRE_NOTHROW(decode_hybrid(tag.write_bank(Bank::user11, padded)));
  BitString dirty = tag.read_bank(Bank::user11);
  dirty.append_byte(0x5a);
  try {
    decode_hybrid(tag.write_bank(Bank::user11, dirty));
    FAIL("expected throw");
  } catch (const CodecError& e) {
    REQUIRE(e.code() == ErrorCode::pad_violation);
  }
}

TEST_CASE("fixed to hybrid is lossless, back drops the gs1 fields") {
  auto rng = testutil::make_rng(13);
  const EpcScheme& scheme = SchemeTable::shipped().by_name(SchemeName::EPC198);
  for (int i = 0; i < 500; ++i) {
    const LibraryItemRecord record = testutil::random_record(rng);  // default afi
    const FixedBlock block = encode_fixed(record);
    const Gs1Input gs1 = random_gs1(rng, scheme);
    const FixedToHybridResult to = convert_fixed_to_hybrid(block, gs1, icode());
    REQUIRE(to.loss.empty());
    REQUIRE(to.loss.direction == LossDirection::TO_EPC_VIEW);
    const HybridToFixedResult back = convert_hybrid_to_fixed(to.tag);
    REQUIRE(back.block == block);
    REQUIRE(back.loss.direction == LossDirection::TO_LIBRARY_VIEW);
    REQUIRE(back.loss.lost_fields.size() == 2);
    REQUIRE(back.loss.lost_fields[0].field == "manager_number");
    REQUIRE(back.loss.lost_fields[0].previous_value ==
            std::to_string(gs1.manager_number.to_uint()));
    REQUIRE(back.loss.lost_fields[1].field == "object_class");
    REQUIRE(back.loss.lost_fields[1].previous_value ==
            std::to_string(gs1.object_class->to_uint()));
  }
}

TEST_CASE("non-default afi is reported lost when flattened to fixed") {
  LibraryItemRecord record = testutil::boundary_record();
  record.afi = Afi{0x9d};
  auto rng = testutil::make_rng(14);
  const EpcScheme& scheme = SchemeTable::shipped().by_name(SchemeName::EPC198);
  const TagImage tag = encode_hybrid(record, random_gs1(rng, scheme), icode());
  const HybridToFixedResult back = convert_hybrid_to_fixed(tag);
  bool afi_lost = false;
  for (const LostField& lf : back.loss.lost_fields)
    if (lf.field == "afi") {
      afi_lost = true;
      REQUIRE(lf.previous_value == "0x9d");
    }
  REQUIRE(afi_lost);
  REQUIRE(back.loss.lost_fields.size() == 3);
}

TEST_CASE("loss report equals an independent decoded-field diff") {
  auto rng = testutil::make_rng(15);
  const EpcScheme& scheme = SchemeTable::shipped().by_name(SchemeName::EPC198);
  for (int i = 0; i < 300; ++i) {
    const LibraryItemRecord record = testutil::random_record(rng, true);
    const TagImage tag = encode_hybrid(record, random_gs1(rng, scheme), icode());
    const HybridToFixedResult result = convert_hybrid_to_fixed(tag);
    // oracle: decode both artifacts independently and diff semantic fields
    const HybridDecodeResult before = decode_hybrid(tag);
    const LibraryItemRecord after = decode_fixed(result.block);
    std::vector<std::string> expected;
    if (before.record.afi != after.afi) expected.push_back("afi");
    if (before.record.isil != after.isil) expected.push_back("isil");
    expected.push_back("manager_number");
    expected.push_back("object_class");
    if (before.record.primary_id != after.primary_id) expected.push_back("primary_id");
    if (before.record.set_info != after.set_info) expected.push_back("set_info");
    std::vector<std::string> got;
    for (const LostField& lf : result.loss.lost_fields) got.push_back(lf.field);
    REQUIRE(got == expected);
  }
}
