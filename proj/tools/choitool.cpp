#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "choi/cones.hpp"
#include "choi/gilbert.hpp"
#include "choi/io.hpp"
#include "choi/mapcones.hpp"
#include "choi/states.hpp"
#include "choi/verify.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

struct GlobalOpts {
  std::uint64_t seed = 20260822ULL;
  int samples = 100;
  bool samples_set = false;
  double tol = 1e-6;
  double psd_tol = 1e-9;
  bool strict = false;
  std::string format = "json";
  bool no_timing = false;
  std::string out_dir;
};

choi::TestConfig config_of(const GlobalOpts& g) {
  choi::TestConfig cfg;
  cfg.seed = g.seed;
  cfg.sep_tol = g.tol;
  cfg.psd_tol = g.psd_tol;
  return cfg;
}

nlohmann::json make_manifest(const std::string& command, const GlobalOpts& g,
                             nlohmann::json outcomes, double wall_ms) {
  nlohmann::json m = {{"command", command},
                      {"seed", g.seed},
                      {"config",
                       {{"samples", g.samples},
                        {"tol", g.tol},
                        {"psd_tol", g.psd_tol},
                        {"strict", g.strict}}},
                      {"version", kVersion},
                      {"outcomes", std::move(outcomes)}};
  if (!g.no_timing) m["wall_ms"] = wall_ms;
  return m;
}

void render_text(const nlohmann::json& j, std::ostream& os, int indent) {
  const std::string pad(2 * indent, ' ');
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.value().is_object() || it.value().is_array()) {
        os << pad << it.key() << ":\n";
        render_text(it.value(), os, indent + 1);
      } else {
        os << pad << it.key() << ": " << it.value().dump() << "\n";
      }
    }
  } else if (j.is_array()) {
    if (j.size() > 8) {
      os << pad << "[" << j.size() << " entries]\n";
      return;
    }
    for (const auto& el : j) {
      if (el.is_object() || el.is_array()) {
        os << pad << "-\n";
        render_text(el, os, indent + 1);
      } else {
        os << pad << "- " << el.dump() << "\n";
      }
    }
  } else {
    os << pad << j.dump() << "\n";
  }
}

void emit(const nlohmann::json& manifest, const GlobalOpts& g) {
  if (g.format == "text")
    render_text(manifest, std::cout, 0);
  else
    std::cout << manifest.dump(2) << "\n";
}

int run_analyze(const std::string& map_file, const std::vector<std::string>& tests,
                const std::vector<std::string>& expects, const GlobalOpts& g) {
  const auto t0 = std::chrono::steady_clock::now();
  choi::MatMap phi = choi::map_from_json(choi::load_json_file(map_file));
  choi::TestConfig cfg = config_of(g);

  nlohmann::json outcomes = nlohmann::json::object();
  int exit_code = 0;
  bool any_undetermined = false;
  for (std::size_t i = 0; i < tests.size(); ++i) {
    const std::string& t = tests[i];
    choi::Verdict v;
    if (t == "p")
      v = choi::test_positive(phi, cfg);
    else if (t == "cp")
      v = choi::test_cp(phi, cfg);
    else if (t == "cocp")
      v = choi::test_cocp(phi, cfg);
    else if (t == "ppt")
      v = choi::test_ppt_map(phi, cfg);
    else if (t == "dec")
      v = choi::test_decomposable(phi, cfg);
    else if (t == "sp")
      v = choi::test_superpositive(phi, cfg);
    else
      throw choi::IoError{"unknown test \"" + t + "\" (choose from p,cp,cocp,ppt,dec,sp)"};
    outcomes[t] = choi::verdict_to_json(v);
    if (v.status == choi::Status::undetermined) any_undetermined = true;
    if (i < expects.size() && !expects[i].empty()) {
      const std::string got = choi::to_string(v.status);
      outcomes[t]["expected"] = expects[i];
      if (got != expects[i]) {
        if (v.status == choi::Status::undetermined) {
          any_undetermined = true;
        } else {
          exit_code = 1;
        }
      }
    }
  }
  if (exit_code == 0 && any_undetermined && g.strict) exit_code = 2;
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  nlohmann::json m = make_manifest("analyze " + map_file, g, std::move(outcomes), ms);
  m["exit"] = exit_code;
  emit(m, g);
  return exit_code;
}

int run_verify(const std::string& theorem, int n, const GlobalOpts& g) {
  const auto t0 = std::chrono::steady_clock::now();
  choi::TestConfig cfg = config_of(g);
  choi::VerificationReport rep = choi::run_verifier(theorem, n, g.samples, g.seed, cfg);
  int exit_code = 0;
  if (!rep.agreement)
    exit_code = 1;
  else if (rep.undetermined > 0 && g.strict)
    exit_code = 2;
  nlohmann::json outcomes = choi::report_to_json(rep);
  outcomes["undetermined"] = rep.undetermined;
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  nlohmann::json m = make_manifest("verify " + theorem, g, std::move(outcomes), ms);
  m["exit"] = exit_code;
  emit(m, g);
  if (!g.out_dir.empty()) {
    std::filesystem::create_directories(g.out_dir);
    nlohmann::json full = choi::report_to_json(rep);
    full["table"] = rep.table;
    choi::save_json_file((std::filesystem::path(g.out_dir) / (theorem + "_report.json")).string(),
                         full);
  }
  return exit_code;
}

int run_sample(const std::string& cone_name, int n, int count, const GlobalOpts& g) {
  const auto t0 = std::chrono::steady_clock::now();
  choi::ConeSpec cone = choi::builtin_cone(cone_name, n);
  const std::string dir = g.out_dir.empty() ? "." : g.out_dir;
  std::filesystem::create_directories(dir);

  nlohmann::json files = nlohmann::json::array();
  for (int k = 0; k < count; ++k) {
    const std::uint64_t s = choi::derive_seed(g.seed, "sample/" + cone.name, k);
    choi::MatMap phi = choi::sample(cone, s);
    const std::string fname =
        cone.name + "_n" + std::to_string(n) + "_" + std::to_string(k) + ".json";
    choi::save_json_file((std::filesystem::path(dir) / fname).string(), choi::map_to_json(phi));
    files.push_back({{"file", fname}, {"seed", s}});
  }
  nlohmann::json outcomes = {{"cone", cone.name}, {"n", n}, {"count", count}, {"files", files}};
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  nlohmann::json m = make_manifest("sample " + cone.name, g, outcomes, ms);
  m["exit"] = 0;
  choi::save_json_file((std::filesystem::path(dir) / "manifest.json").string(), m);
  emit(m, g);
  return 0;
}

int run_distance(const std::string& state_file, const GlobalOpts& g) {
  const auto t0 = std::chrono::steady_clock::now();
  choi::BipartiteState s = choi::state_from_json(choi::load_json_file(state_file));
  choi::TestConfig cfg = config_of(g);
  if (g.samples_set) cfg.gilbert_max_iters = g.samples;
  choi::GilbertResult res =
      choi::gilbert_separable_distance(s.rho, s.d_a, s.d_b, cfg);
  nlohmann::json outcomes = {{"distance", res.distance},
                             {"iterations", res.iterations},
                             {"converged", res.converged},
                             {"final_gap", res.final_gap},
                             {"ensemble_size", res.ensemble.size()},
                             {"separable_at_tol", res.distance <= cfg.sep_tol}};
  if (!g.out_dir.empty()) {
    std::filesystem::create_directories(g.out_dir);
    nlohmann::json atoms = nlohmann::json::array();
    for (const auto& atom : res.ensemble)
      atoms.push_back({{"weight", atom.weight},
                       {"a", choi::vector_to_json(atom.a)},
                       {"b", choi::vector_to_json(atom.b)}});
    choi::save_json_file(
        (std::filesystem::path(g.out_dir) / "ensemble.json").string(),
        {{"state", state_file}, {"distance", res.distance}, {"ensemble", atoms}});
  }
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  nlohmann::json m = make_manifest("distance " + state_file, g, outcomes, ms);
  m["exit"] = 0;
  emit(m, g);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positive-map and separability analyzer"};
  app.require_subcommand(1);
  // Global options may appear after the subcommand name.
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--seed", g.seed, "Root seed for all randomized procedures");
  auto* samples_opt = app.add_option("--samples", g.samples, "Sample count / iteration budget");
  app.add_option("--tol", g.tol, "Separability tolerance");
  app.add_option("--psd-tol", g.psd_tol, "PSD tolerance");
  app.add_flag("--strict", g.strict, "Exit 2 when evidence-only clauses stay undetermined");
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"json", "text"}));
  app.add_flag("--no-timing", g.no_timing, "Omit wall time for byte-identical output");
  app.add_option("-o,--out", g.out_dir, "Output directory for generated files");

  auto* analyze = app.add_subcommand("analyze", "Run membership tests on a map file");
  std::string map_file;
  std::vector<std::string> tests{"p", "cp", "cocp", "ppt", "dec", "sp"};
  std::vector<std::string> expects;
  analyze->add_option("map_file", map_file, "Map JSON file")->required();
  analyze->add_option("--tests", tests, "Tests to run (p cp cocp ppt dec sp)")
      ->delimiter(',');
  analyze->add_option("--expect", expects,
                      "Expected status per test, in --tests order (member|non_member|undetermined)")
      ->delimiter(',');

  auto* verify = app.add_subcommand("verify", "Run a randomized theorem verifier");
  std::string theorem;
  int n = 3;
  verify->add_option("theorem", theorem, "Theorem id")
      ->required()
      ->check(CLI::IsMember({"lemma1", "thm2", "cor3", "cor4", "thm5", "cor7", "prop10", "prop11",
                             "lemma12", "prop13", "ppt2x2", "ppt2x3"}));
  verify->add_option("--n", n, "Matrix dimension");

  auto* sampler = app.add_subcommand("sample", "Draw maps from a cone sampler");
  std::string cone_name = "cp";
  int sample_n = 3;
  int count = 10;
  sampler->add_option("--cone", cone_name, "Cone name (p cp cocp sp ppt dec d2)")->required();
  sampler->add_option("--n", sample_n, "Matrix dimension");
  sampler->add_option("--count", count, "Number of maps to draw");

  auto* distance = app.add_subcommand("distance", "Gilbert distance from a state to the separable set");
  std::string state_file;
  distance->add_option("state_file", state_file, "State JSON file")->required();

  CLI11_PARSE(app, argc, argv);
  g.samples_set = samples_opt->count() > 0;

  try {
    if (*analyze) return run_analyze(map_file, tests, expects, g);
    if (*verify) return run_verify(theorem, n, g);
    if (*sampler) return run_sample(cone_name, sample_n, count, g);
    if (*distance) return run_distance(state_file, g);
  } catch (const choi::IoError& e) {
    std::cerr << "error: " << e.message << "\n";
    return 3;
  } catch (const choi::LinalgError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
