#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "choi/cones.hpp"
#include "choi/mapcones.hpp"
#include "choi/verdict.hpp"

namespace choi {

// Randomized falsification harness for the structural statements the library
// implements. Each verifier builds a per-sample condition table; a
// counterexample is recorded only when one clause's sound verdict contradicts
// another clause's sound verdict (undetermined never counts). agreement is
// true iff the counterexample list is empty.
struct VerificationReport {
  std::string theorem;
  int n = 0;
  long samples = 0;
  std::uint64_t seed = 0;
  bool agreement = true;
  nlohmann::json table = nlohmann::json::array();
  nlohmann::json counterexamples = nlohmann::json::array();
  long undetermined = 0;  // rows with evidence-only clauses, for --strict
  std::string table_digest;
};

// Fills table_digest (sha256 of the canonical table serialization) and sets
// agreement from the counterexample list.
void finalize_report(VerificationReport& report);

// {"theorem","n","samples","seed","agreement","counterexamples","table_digest"}.
nlohmann::json report_to_json(const VerificationReport& report);

// Scalar-functional compositions: omega o phi and phi o omega are separable
// atom maps for every positive phi.
VerificationReport verify_lemma1(int n, int samples, std::uint64_t seed, const TestConfig& cfg);

// Clause-agreement table for the dual-cone characterization: membership in
// the dual versus CP-ness of both compositions versus positivity of the
// amplified Choi matrix, on one map against one sampled cone.
VerificationReport verify_thm2(const ConeSpec& j, const MatMap& phi, int samples,
                               std::uint64_t seed, const TestConfig& cfg);

// Super-positivity of both compositions with samples from an invariant cone,
// cross-checked against the sampled dual test.
VerificationReport verify_cor3(const ConeSpec& j, const MatMap& phi, int samples,
                               std::uint64_t seed, const TestConfig& cfg);

// Dual-of-intersection identity instantiated at CP and coCP: constructed
// CP + coCP sums pass the PPT-sampled dual test, and dual-test survivors are
// never soundly rejected by the decomposition search.
VerificationReport verify_cor4(int n, int samples, std::uint64_t seed, const TestConfig& cfg);

// Rank-2-range PPT maps on M_3 are separability-certified (the compressed
// exact decision), with rank-1 and Ad-e control rows.
VerificationReport verify_thm5(int n, int samples, std::uint64_t seed, const TestConfig& cfg);

// Witness search certifying Ad e with rank-2 e lies outside the dual of the
// rank-2 Ad cone; rank-1 targets are negative controls.
VerificationReport verify_cor7(int n, int budget, std::uint64_t seed, const TestConfig& cfg);

// PPT-map characterization: CP and coCP jointly versus CP-stability under
// decomposable compositions versus the transposed-spectra route.
VerificationReport verify_prop10(const MatMap& phi, int samples, std::uint64_t seed,
                                 const TestConfig& cfg);

// Decomposability versus PPT-stability of compositions versus nonnegative
// pairing against PPT maps.
VerificationReport verify_prop11(const MatMap& phi, int samples, std::uint64_t seed,
                                 const TestConfig& cfg);

// Rank-2 compressed cone on M_3 decomposes: alternating-projection residuals.
VerificationReport verify_lemma12(int samples, std::uint64_t seed, const TestConfig& cfg);

// PPT maps on M_3 against the rank-2 Ad cone: dual membership, separability
// of both compositions, and the rank-2 range/support shortcut. Throws if the
// input map is not PPT.
VerificationReport verify_prop13(const MatMap& phi, int samples, std::uint64_t seed,
                                 const TestConfig& cfg);

// Every sampled PPT state in the given small dimensions has Gilbert distance
// at most 1e-4 from the separable set.
VerificationReport verify_ppt_small(int d_a, int d_b, int samples, std::uint64_t seed,
                                    const TestConfig& cfg);

// CLI dispatch: name in {lemma1, thm2, cor3, cor4, thm5, cor7, prop10,
// prop11, lemma12, prop13, ppt2x2, ppt2x3}. For verifiers parameterized by a
// single map, runs the suite over a mixed deterministic pool of `samples`
// maps and merges the tables.
VerificationReport run_verifier(const std::string& name, int n, int samples, std::uint64_t seed,
                                const TestConfig& cfg);

}  // namespace choi
