#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "record_json.hpp"
#include "rfid28560/rfid28560.hpp"

namespace {

using namespace rfid28560;

// 0 ok, 2 validation/usage/config, 3 decode/integrity, 4 lifecycle, 5 I/O.
int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_record:
    case ErrorCode::width_mismatch:
    case ErrorCode::width_overflow:
    case ErrorCode::input_too_long:
    case ErrorCode::character_out_of_repertoire:
    case ErrorCode::serial_overflow:
    case ErrorCode::profile_too_small:
    case ErrorCode::missing_params:
    case ErrorCode::unknown_profile:
    case ErrorCode::profile_parse_error:
    case ErrorCode::duplicate_key:
    case ErrorCode::not_registered:
    case ErrorCode::config_error:
    case ErrorCode::usage_error:
      return 2;
    case ErrorCode::illegal_transition:
      return 4;
    case ErrorCode::io_error:
      return 5;
    default:
      return 3;
  }
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot open input '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io_error, "cannot open output '" + path + "'");
  out << data;
  if (!out) fail(ErrorCode::io_error, "write to '" + path + "' failed");
}

std::uint64_t flag_uint(const std::string& flag, const std::string& text) {
  try {
    return parse_uint(text);
  } catch (const CodecError&) {
    fail(ErrorCode::usage_error, flag + ": invalid number '" + text + "'");
  }
}

// Everything the subcommands share: tables, alphabet, registries, stage
// AFI assignments. Owns the storage the CodecEnv points into.
struct Session {
  std::optional<SchemeTable> schemes;
  std::optional<Code40Alphabet> alphabet;
  RegistryBundle registries;

  CodecEnv env() const {
    CodecEnv e;
    if (schemes) e.schemes = &*schemes;
    if (alphabet) e.alphabet = &*alphabet;
    e.publications = &registries.publications;
    e.stage_afi = registries.stages;
    return e;
  }
};

Session load_session(const std::string& registry_dir, const std::string& schemes_file,
                     const std::string& alphabet_file) {
  Session session;
  std::string dir = registry_dir;
  if (dir.empty()) {
    if (const char* env_dir = std::getenv("RFID28560_REGISTRY_DIR")) dir = env_dir;
  }
  if (!dir.empty()) session.registries = load_registry_dir(dir);
  if (!schemes_file.empty()) session.schemes = SchemeTable::load(schemes_file);
  if (!alphabet_file.empty()) session.alphabet = Code40Alphabet::load(alphabet_file);
  return session;
}

SchemeName flag_scheme(const std::string& name, SchemeName fallback) {
  if (name.empty()) return fallback;
  const auto scheme = cli::scheme_from_name(name);
  if (!scheme) fail(ErrorCode::usage_error, "--scheme: unknown scheme '" + name + "'");
  return *scheme;
}

struct EncodeArgs {
  std::string to, record_file, profile, scheme, stage, out;
};

int run_encode(const EncodeArgs& args, const Session& session) {
  const CodecEnv env = session.env();
  const cli::RecordDocument doc = cli::parse_record_document(read_input(args.record_file), env);
  if (args.to == "fixed") {
    if (!doc.has_record)
      fail(ErrorCode::missing_params, "record document has no 'record' section");
    write_output(args.out, encode_fixed(doc.record, env.code40_alphabet()).to_hex() + "\n");
    return 0;
  }
  const std::string profile_name =
      !args.profile.empty() ? args.profile : doc.profile.value_or("");
  if (args.to == "hybrid") {
    if (!doc.has_record)
      fail(ErrorCode::missing_params, "record document has no 'record' section");
    if (!doc.manager_number)
      fail(ErrorCode::missing_params, "hybrid encode requires gs1.manager_number");
    if (profile_name.empty())
      fail(ErrorCode::missing_params, "hybrid encode requires --profile");
    const SchemeName name =
        flag_scheme(args.scheme, doc.scheme.value_or(SchemeName::EPC198));
    const EpcScheme& scheme = env.scheme_table().by_name(name);
    Gs1Input gs1;
    gs1.manager_number = BitString::from_uint(*doc.manager_number, scheme.manager_bits);
    if (doc.object_class)
      gs1.object_class = BitString::from_uint(*doc.object_class, scheme.class_bits);
    const TagImage tag =
        encode_hybrid(doc.record, gs1, load_profile(profile_name), env, name);
    write_output(args.out, tag.dump());
    return 0;
  }
  if (args.to == "epc") {
    if (!doc.manager_number)
      fail(ErrorCode::missing_params, "pure EPC encode requires gs1.manager_number");
    const SchemeName name = flag_scheme(args.scheme, doc.scheme.value_or(SchemeName::EPC96));
    const EpcScheme& scheme = env.scheme_table().by_name(name);
    const BitString manager = BitString::from_uint(*doc.manager_number, scheme.manager_bits);
    const BitString object_class =
        BitString::from_uint(doc.object_class.value_or(0), scheme.class_bits);
    const BitString epc =
        encode_epc(make_epc_fields(scheme, manager, object_class, cli::resolve_serial(doc, scheme)));
    if (profile_name.empty()) {
      write_output(args.out, epc.to_hex_prefixed() + "\n");
      return 0;
    }
    LifecycleStage stage = LifecycleStage::PUBLISHER_TAGGED;
    if (!args.stage.empty()) {
      const auto parsed = stage_from_name(args.stage);
      if (!parsed) fail(ErrorCode::usage_error, "--stage: unknown stage '" + args.stage + "'");
      stage = *parsed;
    }
    const TagImage tag = make_epc_tag(epc, load_profile(profile_name),
                                      Afi{env.stage_afi.for_stage(stage)}, false);
    write_output(args.out, tag.dump());
    return 0;
  }
  fail(ErrorCode::usage_error, "--to must be fixed, hybrid or epc");
}

struct DecodeArgs {
  std::string from, in, profile, out;
};

int run_decode(const DecodeArgs& args, const Session& session) {
  const CodecEnv env = session.env();
  if (args.from == "fixed") {
    const FixedBlock block = FixedBlock::from_hex(read_input(args.in));
    write_output(args.out, cli::render_record_json(decode_fixed(block, env.fixed_decode_options())));
    return 0;
  }
  if (args.from == "hybrid") {
    if (args.profile.empty())
      fail(ErrorCode::missing_params, "hybrid decode requires --profile");
    const TagImage tag = TagImage::parse_dump(read_input(args.in), load_profile(args.profile));
    write_output(args.out, cli::render_hybrid_json(decode_hybrid(tag, env)));
    return 0;
  }
  if (args.from == "epc") {
    std::string text = read_input(args.in);
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r' || text.back() == ' '))
      text.pop_back();
    const EpcFields fields = decode_epc(BitString::parse_hex_prefixed(text), env.scheme_table());
    write_output(args.out, cli::render_epc_json(fields));
    return 0;
  }
  fail(ErrorCode::usage_error, "--from must be fixed, hybrid or epc");
}

struct ConvertArgs {
  std::string from, to, in, profile, manager, object_class, loss_file, out;
};

void emit_loss(const LossReport& loss, const std::string& loss_file) {
  std::cerr << cli::render_loss_text(loss);
  if (!loss_file.empty()) write_output(loss_file, cli::render_loss_json(loss));
}

int run_convert(const ConvertArgs& args, const Session& session) {
  const CodecEnv env = session.env();
  if (args.from == "fixed" && args.to == "hybrid") {
    if (args.manager.empty())
      fail(ErrorCode::missing_params, "fixed to hybrid conversion requires --manager");
    if (args.profile.empty())
      fail(ErrorCode::missing_params, "fixed to hybrid conversion requires --profile");
    const EpcScheme& scheme = env.scheme_table().by_name(SchemeName::EPC198);
    Gs1Input gs1;
    gs1.manager_number =
        BitString::from_uint(flag_uint("--manager", args.manager), scheme.manager_bits);
    if (!args.object_class.empty())
      gs1.object_class =
          BitString::from_uint(flag_uint("--class", args.object_class), scheme.class_bits);
    const FixedBlock block = FixedBlock::from_hex(read_input(args.in));
    const FixedToHybridResult result =
        convert_fixed_to_hybrid(block, gs1, load_profile(args.profile), env);
    emit_loss(result.loss, args.loss_file);
    write_output(args.out, result.tag.dump());
    return 0;
  }
  if (args.from == "hybrid" && args.to == "fixed") {
    if (args.profile.empty())
      fail(ErrorCode::missing_params, "hybrid to fixed conversion requires --profile");
    const TagImage tag = TagImage::parse_dump(read_input(args.in), load_profile(args.profile));
    const HybridToFixedResult result = convert_hybrid_to_fixed(tag, env);
    emit_loss(result.loss, args.loss_file);
    write_output(args.out, result.block.to_hex() + "\n");
    return 0;
  }
  fail(ErrorCode::usage_error, "supported conversions: --from fixed --to hybrid, --from hybrid --to fixed");
}

struct InspectArgs {
  std::string in, profile, out;
};

int run_inspect(const InspectArgs& args, const Session& session) {
  const CodecEnv env = session.env();
  if (args.profile.empty()) fail(ErrorCode::missing_params, "inspect requires --profile");
  const TagProfile profile = load_profile(args.profile);
  const TagImage tag = TagImage::parse_dump(read_input(args.in), profile);
  const StageProbe probe = probe_stage(tag, env);

  std::ostringstream out;
  out << "profile: " << profile.name << " (" << band_name(profile.band) << ", epc block "
      << profile.epc_block_bits << " bits, user memory " << profile.user_memory_bits
      << " bits, afi " << afi_location_name(profile.afi_location) << ")\n";
  out << "stage: " << stage_name(probe.stage) << "\n";
  out << "bank 01: " << tag.read_bank(Bank::epc01).size() << " bits\n";
  out << "  scheme: " << scheme_name_str(probe.epc.scheme.name) << " (header "
      << detail::hex8(probe.epc.scheme.header) << ")\n";
  const std::uint64_t manager = probe.epc.manager_number.to_uint();
  out << "  manager_number: " << manager;
  if (const auto label = session.registries.managers.lookup(manager)) out << " (" << *label << ")";
  out << "\n";
  const std::uint64_t object_class = probe.epc.object_class.to_uint();
  out << "  object_class: " << object_class;
  if (const auto entry = session.registries.publications.reverse_lookup(object_class))
    out << " (" << entry->system << " " << entry->code << ")";
  out << "\n";
  out << "  serial: " << probe.epc.serial.to_hex_prefixed() << "\n";
  if (probe.hybrid) {
    out << "  payload: " << probe.hybrid->code40_groups << " code40 groups, afi "
        << detail::hex8(probe.hybrid->record.afi.value) << "\n";
    out << "  primary_id: " << probe.hybrid->record.primary_id.value() << "\n";
  }
  if (tag.has_bank(Bank::user11)) {
    const BitString& user = tag.read_bank(Bank::user11);
    out << "bank 11: " << user.size() << " bits";
    if (probe.hybrid) {
      out << "\n";
      out << "  isil: " << probe.hybrid->record.isil.value() << "\n";
      out << "  set_info: " << detail::set_info_text(probe.hybrid->record.set_info) << "\n";
    } else {
      out << (user.all_zero() ? ", zero filled\n" : ", no record\n");
    }
  }
  if (const auto afi = tag.afi_mirror())
    out << "system afi: " << detail::hex8(afi->value) << "\n";
  write_output(args.out, out.str());
  return 0;
}

struct LifecycleArgs {
  std::string in, profile, params_file, loss_file, out;
  bool probe = false;
};

int run_lifecycle(const LifecycleArgs& args, const Session& session) {
  const CodecEnv env = session.env();
  if (args.profile.empty()) fail(ErrorCode::missing_params, "lifecycle requires --profile");
  const TagImage tag = TagImage::parse_dump(read_input(args.in), load_profile(args.profile));
  if (args.probe) {
    write_output(args.out, std::string(stage_name(probe_stage(tag, env).stage)) + "\n");
    return 0;
  }
  if (args.params_file.empty())
    fail(ErrorCode::missing_params, "lifecycle requires --params (or --probe)");
  const TransitionParams params =
      cli::parse_transition_params(read_input(args.params_file), env);
  const TransitionResult result = transition(tag, params, env);
  std::cerr << stage_name(result.from) << " -> " << stage_name(result.to) << "\n";
  emit_loss(result.loss, args.loss_file);
  write_output(args.out, result.tag.dump());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bit-exact codec for library RFID tag images: the fixed-length "
               "library block, EPC binary codes, and the hybrid code that "
               "embeds a library identifier in the EPC serial field"};
  app.require_subcommand(1);

  std::string registry_dir, schemes_file, alphabet_file;
  app.add_option("--registry-dir", registry_dir,
                 "Directory with publication_types.csv, managers.csv, stages.conf "
                 "(default: $RFID28560_REGISTRY_DIR)");
  app.add_option("--schemes", schemes_file, "Scheme table override file");
  app.add_option("--alphabet", alphabet_file, "Code 40 alphabet override file");

  EncodeArgs encode_args;
  CLI::App* encode = app.add_subcommand("encode", "Record document to fixed block, hybrid tag or EPC code");
  encode->add_option("--to", encode_args.to, "Target: fixed, hybrid, epc")->required();
  encode->add_option("--record", encode_args.record_file, "Record document (JSON), '-' for stdin")->required();
  encode->add_option("--profile", encode_args.profile, "Tag profile name or file");
  encode->add_option("--scheme", encode_args.scheme, "EPC scheme: EPC64, EPC96, EPC198");
  encode->add_option("--stage", encode_args.stage, "Lifecycle stage for the AFI of a pure EPC tag");
  encode->add_option("-o,--out", encode_args.out, "Output file (default stdout)");

  DecodeArgs decode_args;
  CLI::App* decode = app.add_subcommand("decode", "Fixed block, tag dump or EPC code to a document");
  decode->add_option("--from", decode_args.from, "Source: fixed, hybrid, epc")->required();
  decode->add_option("--in", decode_args.in, "Input file, '-' for stdin")->required();
  decode->add_option("--profile", decode_args.profile, "Tag profile name or file");
  decode->add_option("-o,--out", decode_args.out, "Output file (default stdout)");

  ConvertArgs convert_args;
  CLI::App* convert = app.add_subcommand("convert", "Convert between the fixed block and a hybrid tag");
  convert->add_option("--from", convert_args.from, "Source: fixed, hybrid")->required();
  convert->add_option("--to", convert_args.to, "Target: hybrid, fixed")->required();
  convert->add_option("--in", convert_args.in, "Input file, '-' for stdin")->required();
  convert->add_option("--profile", convert_args.profile, "Tag profile name or file");
  convert->add_option("--manager", convert_args.manager, "GS1 manager number (decimal or 0x hex)");
  convert->add_option("--class", convert_args.object_class, "Object class value (decimal or 0x hex)");
  convert->add_option("--loss", convert_args.loss_file, "Write the loss report (JSON) here");
  convert->add_option("-o,--out", convert_args.out, "Output file (default stdout)");

  InspectArgs inspect_args;
  CLI::App* inspect = app.add_subcommand("inspect", "Human-readable report of a tag dump");
  inspect->add_option("--in", inspect_args.in, "Tag dump file, '-' for stdin")->required();
  inspect->add_option("--profile", inspect_args.profile, "Tag profile name or file");
  inspect->add_option("-o,--out", inspect_args.out, "Output file (default stdout)");

  LifecycleArgs lifecycle_args;
  CLI::App* lifecycle = app.add_subcommand("lifecycle", "Apply a lifecycle transition to a tag dump");
  lifecycle->add_option("--in", lifecycle_args.in, "Tag dump file, '-' for stdin")->required();
  lifecycle->add_option("--profile", lifecycle_args.profile, "Tag profile name or file");
  lifecycle->add_option("--params", lifecycle_args.params_file, "Transition parameters (JSON)");
  lifecycle->add_option("--loss", lifecycle_args.loss_file, "Write the loss report (JSON) here");
  lifecycle->add_flag("--probe", lifecycle_args.probe, "Only print the inferred lifecycle stage");
  lifecycle->add_option("-o,--out", lifecycle_args.out, "Output file (default stdout)");

  // lets the registry/schemes/alphabet options appear after the subcommand
  for (CLI::App* sub : {encode, decode, convert, inspect, lifecycle}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const Session session = load_session(registry_dir, schemes_file, alphabet_file);
    if (encode->parsed()) return run_encode(encode_args, session);
    if (decode->parsed()) return run_decode(decode_args, session);
    if (convert->parsed()) return run_convert(convert_args, session);
    if (inspect->parsed()) return run_inspect(inspect_args, session);
    if (lifecycle->parsed()) return run_lifecycle(lifecycle_args, session);
    fail(ErrorCode::usage_error, "no subcommand given");
  } catch (const CodecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
