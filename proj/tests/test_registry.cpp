#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "rfid28560/registry.hpp"
#include "testutil.hpp"

using namespace rfid28560;

static const char* kTypesCsv =
    "system,code,numeric_id\n"
    "ONIX,BB,12\n"
    "ONIX,BC,13\n"
    "UNIMARC,am,101\n";

TEST_CASE("publication registry lookups both ways") {
  const auto reg = PublicationTypeRegistry::parse_csv(kTypesCsv);
  REQUIRE(reg.size() == 3);
  const auto bb = reg.lookup("ONIX", "BB");
  REQUIRE(bb.has_value());
  REQUIRE(bb->numeric_id == 12);
  REQUIRE_FALSE(reg.lookup("ONIX", "ZZ").has_value());
  const auto back = reg.reverse_lookup(101);
  REQUIRE(back.has_value());
  REQUIRE(back->system == "UNIMARC");
  REQUIRE(back->code == "am");
  REQUIRE_FALSE(reg.reverse_lookup(999).has_value());
}

TEST_CASE("registry csv fixpoint") {
  const auto reg = PublicationTypeRegistry::parse_csv(kTypesCsv);
  const std::string canonical = reg.to_csv();
  REQUIRE(PublicationTypeRegistry::parse_csv(canonical) == reg);
  REQUIRE(PublicationTypeRegistry::parse_csv(canonical).to_csv() == canonical);
}

TEST_CASE("registry rejects duplicates and malformed rows") {
  REQUIRE_THROWS_AS(PublicationTypeRegistry::parse_csv(
                        "system,code,numeric_id\nONIX,BB,12\nONIX,BB,14\n"),
                    CodecError);
  try {
    PublicationTypeRegistry::parse_csv("system,code,numeric_id\nONIX,BB,12\nUNIMARC,am,12\n");
    FAIL("expected throw");
  } catch (const CodecError& e) {
    REQUIRE(e.code() == ErrorCode::duplicate_key);
  }
  REQUIRE_THROWS_AS(PublicationTypeRegistry::parse_csv("system,code\nONIX,BB\n"), CodecError);
  REQUIRE_THROWS_AS(PublicationTypeRegistry::parse_csv("system,code,numeric_id\nONIX,BB\n"),
                    CodecError);
  REQUIRE_THROWS_AS(PublicationTypeRegistry::parse_csv("system,code,numeric_id\nONIX,BB,x\n"),
                    CodecError);
  REQUIRE_THROWS_AS(PublicationTypeRegistry::parse_csv(""), CodecError);
}

TEST_CASE("manager directory") {
  const auto dir = ManagerDirectory::parse_csv(
      "manager_number,label\n248351,Meridian City Library Network\n0x10,Hex Street Press\n");
  REQUIRE(dir.lookup(248351) == "Meridian City Library Network");
  REQUIRE(dir.lookup(16) == "Hex Street Press");
  REQUIRE_FALSE(dir.lookup(17).has_value());
  REQUIRE(ManagerDirectory::parse_csv(dir.to_csv()) == dir);
}

TEST_CASE("stage afi config defaults and overrides") {
  const StageAfiConfig defaults;
  REQUIRE(defaults.for_stage(LifecycleStage::PUBLISHER_TAGGED) == 0x00);
  REQUIRE(defaults.for_stage(LifecycleStage::LIBRARY_ACCESSIONED) == 0xc2);
  REQUIRE(defaults.for_stage(LifecycleStage::EXTERNAL_TRANSIT) == 0x00);
  const auto cfg = StageAfiConfig::from_config(
      ConfigMap::parse("afi.LIBRARY_ACCESSIONED = 0xc1\nafi.EXTERNAL_TRANSIT = 0x9d\n"));
  REQUIRE(cfg.publisher_tagged == 0x00);
  REQUIRE(cfg.library_accessioned == 0xc1);
  REQUIRE(cfg.external_transit == 0x9d);
  REQUIRE_THROWS_AS(
      StageAfiConfig::from_config(ConfigMap::parse("afi.EXTERNAL_TRANSIT = 0x100\n")),
      CodecError);
}

TEST_CASE("registry directory loading") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "rfid28560_test_registry";
  fs::create_directories(dir);
  { std::ofstream(dir / "publication_types.csv") << kTypesCsv; }
  { std::ofstream(dir / "stages.conf") << "afi.EXTERNAL_TRANSIT = 0x9d\n"; }
  const RegistryBundle bundle = load_registry_dir(dir.string());
  REQUIRE(bundle.publications.size() == 3);
  REQUIRE(bundle.managers.empty());  // managers.csv absent: defaults
  REQUIRE(bundle.stages.external_transit == 0x9d);
  REQUIRE(bundle.stages.library_accessioned == 0xc2);
  try {
    load_registry_dir((dir / "nope").string());
    FAIL("expected throw");
  } catch (const CodecError& e) {
    REQUIRE(e.code() == ErrorCode::io_error);
  }
  fs::remove_all(dir);
}

TEST_CASE("config map parsing") {
  const ConfigMap cfg = ConfigMap::parse("a = 1\n# comment\nb = 0x10 # trailing\n\nc=text\n");
  REQUIRE(cfg.get_uint("a", 0) == 1);
  REQUIRE(cfg.get_uint("b", 0) == 16);
  REQUIRE(cfg.get("c") == "text");
  REQUIRE(cfg.get_uint("missing", 7) == 7);
  REQUIRE_THROWS_AS(ConfigMap::parse("a = 1\na = 2\n"), CodecError);
  REQUIRE_THROWS_AS(ConfigMap::parse("just text\n"), CodecError);
  REQUIRE_THROWS_AS(ConfigMap::parse("= 1\n"), CodecError);
}
