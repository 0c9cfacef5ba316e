#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "choi/cones.hpp"
#include "choi/io.hpp"
#include "choi/mapcones.hpp"
#include "choi/rng.hpp"

using namespace choi;

TEST_SUITE("io") {

TEST_CASE("matrix and vector json round trips preserve complex entries") {
  Rng rng(700);
  CMat m = rng.ginibre(3, 4);
  CMat back = matrix_from_json(matrix_to_json(m));
  CHECK((m - back).norm() == 0.0);

  CVec v = rng.complex_vector(5);
  CVec vb = vector_from_json(vector_to_json(v));
  CHECK((v - vb).norm() == 0.0);
}

TEST_CASE("map json round trip and kraus loading") {
  Rng rng(701);
  MatMap phi = trace_normalized(random_cp_map(rng, 3));
  MatMap back = map_from_json(map_to_json(phi));
  CHECK(back.d_in == 3);
  CHECK((back.choi - phi.choi).norm() == 0.0);

  CMat v1 = rng.ginibre(3, 2), v2 = rng.ginibre(3, 2);
  nlohmann::json kj = {{"kraus", {matrix_to_json(v1), matrix_to_json(v2)}}};
  MatMap k = map_from_json(kj);
  MatMap direct = map_from_kraus({v1, v2});
  CHECK((k.choi - direct.choi).norm() <= 1e-14);

  nlohmann::json kt = kj;
  kt["pre_transpose"] = true;
  MatMap ktm = map_from_json(kt);
  MatMap expected = compose(direct, transpose_map(3));
  CHECK((ktm.choi - expected.choi).norm() <= 1e-12);
}

TEST_CASE("malformed inputs raise structured errors") {
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json{{"rows", 2}}), IoError);
  CHECK_THROWS_AS(map_from_json(nlohmann::json{{"d_in", 2}}), IoError);
  nlohmann::json bad_shape = {{"d_in", 2},
                              {"d_out", 2},
                              {"choi", matrix_to_json(CMat::Identity(3, 3))}};
  CHECK_THROWS(map_from_json(bad_shape));
  CHECK_THROWS_AS(load_json_file("/nonexistent/path/x.json"), IoError);
}

TEST_CASE("parse errors carry position diagnostics") {
  const auto dir = std::filesystem::temp_directory_path() / "choi_io_tests";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "garbage.json").string();
  std::ofstream(path) << "{ not json";
  try {
    load_json_file(path);
    FAIL("expected a parse failure");
  } catch (const IoError& e) {
    CHECK(e.message.find(path) != std::string::npos);
  } catch (const nlohmann::json::parse_error& e) {
    CHECK(std::string(e.what()).find("parse") != std::string::npos);
  }
}

TEST_CASE("file round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "choi_io_tests";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "map.json").string();
  MatMap phi = d2_generator(3);
  save_json_file(path, map_to_json(phi));
  MatMap back = map_from_json(load_json_file(path));
  CHECK((back.choi - phi.choi).norm() == 0.0);
}

TEST_CASE("verdict serialization keeps all three branches distinguishable") {
  TestConfig cfg;
  cfg.seed = 702;
  Verdict member = test_cp(trace_map(2), cfg);
  nlohmann::json jm = verdict_to_json(member);
  CHECK(jm.at("status") == "member");
  CHECK(jm.contains("certificate"));

  Verdict non = test_cp(transpose_map(2), cfg);
  nlohmann::json jn = verdict_to_json(non);
  CHECK(jn.at("status") == "non_member");
  CHECK(jn.contains("witness"));

  Verdict und = test_positive(identity_map(2), cfg);
  nlohmann::json ju = verdict_to_json(und);
  CHECK(ju.at("status") == "undetermined");
  CHECK(ju.at("evidence").contains("min_value"));
  CHECK(ju.at("evidence").contains("seed"));
}

}  // TEST_SUITE
