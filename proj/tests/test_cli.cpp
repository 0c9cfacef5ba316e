#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "choi/io.hpp"
#include "choi/cones.hpp"
#include "choi/mapcones.hpp"
#include "choi/states.hpp"

using namespace choi;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_tool(const std::string& args) {
  const char* tool = std::getenv("CHOITOOL");
  REQUIRE_MESSAGE(tool != nullptr, "CHOITOOL must point at the built binary");
  const std::string cmd = std::string(tool) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  RunResult r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  while (std::size_t got = std::fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), got);
  const int rc = pclose(p);
  r.exit_code = WEXITSTATUS(rc);
  return r;
}

std::filesystem::path fixture_dir() {
  static std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() / "choitool_cli_fixtures";
    std::filesystem::create_directories(d);
    save_json_file((d / "transpose2.json").string(), map_to_json(transpose_map(2)));
    save_json_file((d / "trace2.json").string(), map_to_json(trace_map(2)));
    save_json_file((d / "identity2.json").string(), map_to_json(identity_map(2)));
    std::ofstream((d / "garbage.json").string()) << "{ definitely not json";

    CVec bell = CVec::Zero(4);
    bell(0) = 1.0 / std::sqrt(2.0);
    bell(3) = 1.0 / std::sqrt(2.0);
    save_json_file((d / "bell.json").string(),
                   state_to_json(BipartiteState::make(2, 2, bell * bell.adjoint())));
    CVec e00 = CVec::Zero(4);
    e00(0) = 1.0;
    save_json_file((d / "product.json").string(),
                   state_to_json(BipartiteState::make(2, 2, e00 * e00.adjoint())));
    save_json_file((d / "tiles.json").string(), state_to_json(tiles_upb_state()));
    return d;
  }();
  return dir;
}

std::string fx(const char* name) { return (fixture_dir() / name).string(); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("analyze reports the transpose as non-cp and honors expectations") {
  RunResult info = run_tool("analyze " + fx("transpose2.json") + " --tests cp");
  CHECK(info.exit_code == 0);
  CHECK(info.out.find("non_member") != std::string::npos);

  CHECK(run_tool("analyze " + fx("transpose2.json") + " --tests cp --expect non_member")
            .exit_code == 0);
  CHECK(run_tool("analyze " + fx("transpose2.json") + " --tests cp --expect member").exit_code ==
        1);
}

TEST_CASE("analyze certifies the trace map as superpositive") {
  RunResult r = run_tool("analyze " + fx("trace2.json") + " --tests sp --expect member");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"status\": \"member\"") != std::string::npos);
}

TEST_CASE("analyze runs several tests in one invocation") {
  RunResult r = run_tool("analyze " + fx("identity2.json") + " --tests cp,cocp,sp");
  CHECK(r.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j.at("outcomes").at("cp").at("status") == "member");
  CHECK(j.at("outcomes").at("cocp").at("status") == "non_member");
  CHECK(j.at("outcomes").at("sp").at("status") == "non_member");
}

TEST_CASE("io failures exit with code 3") {
  CHECK(run_tool("analyze " + fx("garbage.json")).exit_code == 3);
  CHECK(run_tool("analyze " + fx("missing_file.json")).exit_code == 3);
}

TEST_CASE("undetermined clauses exit 2 only under strict") {
  // The positivity test cannot certify membership, so p on the identity map
  // stays undetermined.
  CHECK(run_tool("analyze " + fx("identity2.json") + " --tests p --expect member").exit_code ==
        0);
  CHECK(run_tool("analyze " + fx("identity2.json") +
                 " --tests p --expect member --strict").exit_code == 2);
}

TEST_CASE("verify exits by agreement and serializes the report schema") {
  RunResult r = run_tool("verify lemma12 --n 3 --samples 4 --seed 42");
  CHECK(r.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j.at("outcomes").at("agreement") == true);
  CHECK(j.at("outcomes").at("theorem") == "lemma12");
  CHECK(j.at("outcomes").at("table_digest").get<std::string>().size() == 64);
}

TEST_CASE("verify strict mode distinguishes undetermined evidence") {
  RunResult r = run_tool("verify thm2 --n 2 --samples 3 --seed 7 --strict");
  CHECK(r.exit_code == 2);
  RunResult lax = run_tool("verify thm2 --n 2 --samples 3 --seed 7");
  CHECK(lax.exit_code == 0);
}

TEST_CASE("verify output is byte-identical across repeated seeded runs") {
  const std::string args = "verify ppt2x2 --samples 2 --seed 11 --no-timing";
  RunResult a = run_tool(args);
  RunResult b = run_tool(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());
}

TEST_CASE("sample writes reloadable members of the requested cone") {
  const auto dir = fixture_dir() / "sampled_cp";
  RunResult r = run_tool("sample --cone cp --n 2 --count 3 --seed 5 -o " + dir.string());
  CHECK(r.exit_code == 0);
  TestConfig cfg;
  cfg.seed = 5;
  for (int k = 0; k < 3; ++k) {
    const auto f = dir / ("CP_n2_" + std::to_string(k) + ".json");
    REQUIRE(std::filesystem::exists(f));
    MatMap phi = map_from_json(load_json_file(f.string()));
    CHECK(test_cp(phi, cfg).status == Status::member);
  }
  CHECK(std::filesystem::exists(dir / "manifest.json"));
}

TEST_CASE("sampled superpositive maps re-analyze as members") {
  const auto dir = fixture_dir() / "sampled_sp";
  RunResult r = run_tool("sample --cone sp --n 3 --count 2 --seed 6 -o " + dir.string());
  CHECK(r.exit_code == 0);
  RunResult a = run_tool("analyze " + (dir / "SP_n3_0.json").string() +
                         " --tests sp --expect member");
  CHECK(a.exit_code == 0);
}

TEST_CASE("distance matches the known values on fixture states") {
  RunResult bell = run_tool("distance " + fx("bell.json") + " --samples 30000");
  CHECK(bell.exit_code == 0);
  nlohmann::json jb = nlohmann::json::parse(bell.out);
  CHECK(std::abs(jb.at("outcomes").at("distance").get<double>() - 0.5773502691896258) <= 5e-3);

  RunResult prod = run_tool("distance " + fx("product.json"));
  nlohmann::json jp = nlohmann::json::parse(prod.out);
  CHECK(jp.at("outcomes").at("distance").get<double>() <= 1e-12);

  RunResult tiles = run_tool("distance " + fx("tiles.json") + " --samples 5000");
  nlohmann::json jt = nlohmann::json::parse(tiles.out);
  CHECK(jt.at("outcomes").at("distance").get<double>() > 1e-2);
}

TEST_CASE("text format renders without json syntax") {
  RunResult r = run_tool("analyze " + fx("trace2.json") + " --tests cp --format text");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("status") != std::string::npos);
  CHECK(r.out.find('{') == std::string::npos);
}

TEST_CASE("unknown theorem names fail argument parsing") {
  CHECK(run_tool("verify thm99").exit_code != 0);
}

}  // TEST_SUITE
