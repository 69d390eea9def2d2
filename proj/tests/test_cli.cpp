#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "seqiso/cli.hpp"

using namespace seqiso;
namespace fs = std::filesystem;

namespace {

const std::string kData = SEQISO_DATA_DIR;

ErrorCode error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvariantError;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("seqiso_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name, const std::string& contents = {}) const {
    const fs::path p = path_ / name;
    if (!contents.empty()) std::ofstream(p) << contents;
    return p.string();
  }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

RunConfig config(Command c, std::string spec = {}, std::string map = {}) {
  RunConfig rc;
  rc.command = c;
  rc.spec_path = std::move(spec);
  rc.map_path = std::move(map);
  return rc;
}

int run_quiet(const RunConfig& rc, std::string* stdout_text = nullptr) {
  std::ostringstream out, err;
  const int code = run(rc, out, err);
  if (stdout_text) *stdout_text = out.str();
  return code;
}

Json without_timestamp(Json j) {
  j.erase("generated_at");
  return j;
}

}  // namespace

TEST(Io, ElementRoundTripIsBitExact) {
  const AlgebraSpec s({1, 2, 3});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const AlgebraElement x = random_element(s, seed);
    const AlgebraElement y = element_from_json(Json::parse(to_json(x).dump()));
    EXPECT_EQ(distance(x, y), 0.0);
  }
}

TEST(Io, DescriptorRoundTrip) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const AlgebraSpec s = random_spec(seed);
    const MapDescriptor d = random_sequential_descriptor(s, seed);
    const Json j = to_json(d);
    const MapDescriptor back = descriptor_from_json(Json::parse(j.dump()));
    EXPECT_EQ(to_json(back), j);
    const SequentialMapOracle a = build_map(d), b = build_map(back);
    const Effect e = random_effect(s, seed);
    EXPECT_EQ(distance(a.eval(e), b.eval(e)), 0.0);
  }
}

TEST(Io, SchemaErrorsCarryFieldPath) {
  EXPECT_NE(message_of([] { spec_from_json(Json::parse(R"({"blocks":[2,0]})")); }).find("spec.blocks[1]"),
            std::string::npos);
  EXPECT_NE(message_of([] { descriptor_from_json(Json::parse(R"({"kind":"power","exponents":[1,"x"]})")); })
                .find("map.exponents[1]"),
            std::string::npos);
  EXPECT_NE(message_of([] { descriptor_from_json(Json::parse(R"({"kind":"bogus"})")); }).find("map.kind"),
            std::string::npos);
  EXPECT_EQ(error_of([] { descriptor_from_json(Json::parse(R"({"exponents":[1]})")); }), ErrorCode::SchemaError);
  EXPECT_EQ(error_of([] { element_from_json(Json::parse(R"({"spec":{"blocks":[2]},"parts":[[[[1,0]]]]})")); }),
            ErrorCode::SchemaError);
}

TEST(Io, ParseErrorsCarryLine) {
  TempDir dir;
  const std::string path = dir.file("broken.json", "{\n  \"blocks\": [1,\n  2\n");
  EXPECT_EQ(error_of([&] { parse_spec_file(path); }), ErrorCode::SchemaError);
  EXPECT_NE(message_of([&] { parse_spec_file(path); }).find("line"), std::string::npos);
  EXPECT_EQ(error_of([&] { parse_spec_file(dir.file("missing.json")); }), ErrorCode::SchemaError);
}

TEST(Io, DescriptorFileInvariants) {
  TempDir dir;
  EXPECT_EQ(error_of([&] { parse_descriptor_file(dir.file("neg.json", R"({"kind":"power","exponents":[-1.0]})")); }),
            ErrorCode::InvariantError);
  // unitarity defect 0.1
  const std::string skewed = R"({"kind":"unitary","unitaries":[[[[1.1,0],[0,0]],[[0,0],[1,0]]]]})";
  EXPECT_EQ(error_of([&] { parse_descriptor_file(dir.file("skew.json", skewed)); }), ErrorCode::InvariantError);
  EXPECT_NE(message_of([&] { parse_descriptor_file(dir.file("skew2.json", skewed)); }).find("unitarity"),
            std::string::npos);

  const auto [spec, d] = parse_descriptor_file(dir.file("one.json", R"({"kind":"power","exponents":[1.0]})"));
  EXPECT_EQ(spec, AlgebraSpec({1}));
  EXPECT_TRUE(std::holds_alternative<PowerMap>(d.node));

  const std::string mismatch = R"({"spec":{"blocks":[2]},"map":{"kind":"power","exponents":[1.0]}})";
  EXPECT_EQ(error_of([&] { parse_descriptor_file(dir.file("mm.json", mismatch)); }), ErrorCode::InvariantError);
}

TEST(Run, UsageErrors) {
  EXPECT_EQ(run_quiet(config(Command::Decompose)), kExitUsage);
  EXPECT_EQ(run_quiet(config(Command::Check, kData + "/identity_spec.json")), kExitUsage);
  EXPECT_EQ(run_quiet(config(Command::Gen)), kExitUsage);
  RunConfig bad_tol = config(Command::Check, kData + "/identity_spec.json", kData + "/identity_map.json");
  bad_tol.tol = -1.0;
  EXPECT_EQ(run_quiet(bad_tol), kExitUsage);
  RunConfig bad_trials = bad_tol;
  bad_trials.tol = 1e-9;
  bad_trials.trials = 0;
  EXPECT_EQ(run_quiet(bad_trials), kExitUsage);
  // spec and map disagree
  EXPECT_EQ(run_quiet(config(Command::Check, kData + "/identity_spec.json", kData + "/power_map.json")), kExitUsage);
  EXPECT_EQ(run_quiet(config(Command::Check, kData + "/nonexistent.json", kData + "/power_map.json")), kExitUsage);
}

TEST(Run, SampleInputs) {
  std::string text;
  EXPECT_EQ(run_quiet(config(Command::Decompose, kData + "/canonical_spec.json", kData + "/canonical_map.json"), &text),
            kExitPass);
  const Json report = Json::parse(text);
  EXPECT_EQ(report["verdict"], "decomposed");
  EXPECT_EQ(report["kinds"], Json::array({"scalar", "scalar", "antimultiplicative", "multiplicative"}));
  EXPECT_NEAR(report["exponents"][0].get<double>(), 0.5, 1e-9);
  EXPECT_NEAR(report["exponents"][1].get<double>(), 2.0, 1e-9);
  EXPECT_TRUE(report.contains("generated_at"));

  EXPECT_EQ(run_quiet(config(Command::Check, kData + "/identity_spec.json", kData + "/identity_map.json"), &text),
            kExitPass);
  EXPECT_TRUE(Json::parse(text)["all_pass"].get<bool>());

  EXPECT_EQ(run_quiet(config(Command::Extend, kData + "/power_spec.json", kData + "/power_map.json"), &text), kExitFail);
  const Json ext = Json::parse(text);
  EXPECT_EQ(ext["status"], "NotEIsomorphism");
  EXPECT_NEAR(ext["diagnostics"]["additivity_residual"].get<double>(), 0.5, 1e-12);

  EXPECT_EQ(run_quiet(config(Command::Extend, kData + "/identity_spec.json", kData + "/identity_map.json"), &text),
            kExitPass);
  EXPECT_EQ(Json::parse(text)["status"], "extended");
}

TEST(Run, ReportsAreDeterministic) {
  const RunConfig rc = config(Command::Decompose, kData + "/canonical_spec.json", kData + "/canonical_map.json");
  std::string a, b;
  run_quiet(rc, &a);
  run_quiet(rc, &b);
  EXPECT_EQ(without_timestamp(Json::parse(a)).dump(), without_timestamp(Json::parse(b)).dump());
}

// gen -> file -> decompose recovers the generating kinds, permutation and exponents.
TEST(Run, GenDecomposeRoundTrip) {
  TempDir dir;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RunConfig gen = config(Command::Gen);
    gen.seed = seed;
    gen.out_path = dir.file("case" + std::to_string(seed) + ".json");
    ASSERT_EQ(run_quiet(gen), kExitPass);

    std::string text;
    ASSERT_EQ(run_quiet(config(Command::Decompose, gen.out_path, gen.out_path), &text), kExitPass) << seed;
    const Json report = Json::parse(text);
    const auto [spec, d] = parse_descriptor_file(gen.out_path);

    const std::vector<std::size_t> comm = commutative_blocks(spec);
    for (const auto& part : std::get<DirectSum>(d.node).parts) {
      if (const auto* c = std::get_if<Composition>(&part.map->node)) {
        const auto& move = std::get<UnitaryConjugation>(c->outer->node);
        const auto& power = std::get<PowerMap>(c->inner->node);
        ASSERT_EQ(report["perm"].size(), comm.size());
        for (std::size_t i = 0; i < comm.size(); ++i) {
          const std::size_t j = move.perm[i];
          EXPECT_EQ(report["perm"][j].get<std::size_t>(), comm[i] + 1) << seed;
          EXPECT_NEAR(report["exponents"][j].get<double>(), power.exponents[i], 1e-9) << seed;
        }
      } else {
        const std::size_t src = part.source_blocks[0];
        const char* kind = std::holds_alternative<UnitaryConjugation>(part.map->node) ? "multiplicative"
                                                                                        : "antimultiplicative";
        EXPECT_EQ(report["kinds"][src], kind) << seed;
        EXPECT_EQ(report["correspondence"][src].get<std::size_t>(), part.target_blocks[0] + 1) << seed;
      }
    }
  }
}

TEST(Binary, ExitCodes) {
  const std::string cli = SEQISO_CLI_PATH;
  auto status = [&](const std::string& args) {
    const int raw = std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(raw);
  };
  EXPECT_EQ(status("decompose --spec " + kData + "/canonical_spec.json --map " + kData + "/canonical_map.json"), 0);
  EXPECT_EQ(status("extend --spec " + kData + "/power_spec.json --map " + kData + "/power_map.json"), 1);
  EXPECT_EQ(status("decompose --spec " + kData + "/canonical_spec.json"), 2);
  EXPECT_EQ(status("frobnicate"), 2);
  EXPECT_EQ(status("check --spec x --map y --trials notanumber"), 2);
  EXPECT_EQ(status("--help"), 0);
}
