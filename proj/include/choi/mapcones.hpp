#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "choi/matmap.hpp"
#include "choi/rng.hpp"

namespace choi {

enum class Closure { cp_closure, positive_closure };

enum class ConeName { P, CP, coCP, SP, PPT, DEC, D2, custom };

// A mapping cone described by generators plus a closure class. cp_closure
// dresses generators with random completely positive maps, positive_closure
// with random decomposable positive maps. extreme_fixtures sharpen the
// sampled dual tests with deterministic boundary elements.
struct ConeSpec {
  ConeName id = ConeName::custom;
  std::string name;
  int dim_in = 0;
  int dim_out = 0;
  std::vector<MatMap> generators;
  Closure closure = Closure::cp_closure;
  bool symmetric = true;
  std::vector<MatMap> extreme_fixtures;
};

struct ConeAnalysis {
  int k_rank = 1;
  std::string notes;
};

ConeSpec builtin_cone(ConeName name, int n);
ConeSpec builtin_cone(const std::string& name, int n);

// Draws one map from the cone's sampler; deterministic in seed. Samples are
// trace-normalized (Tr C = n).
MatMap sample(const ConeSpec& cone, std::uint64_t seed);

// Ad e with e the range projection of a a*; preserves rank.
MatMap normalize_ad(const CMat& a);

// The rank statistic k = max rank(e) with Ad e in the cone, computed from the
// generator list and closure class, never estimated numerically.
ConeAnalysis k_rank(const ConeSpec& cone);

// Deterministic fixture maps (classical constructions used as plumbing).
MatMap reduction_map(int n);          // a |-> Tr(a) 1 - a, positive for n >= 2
MatMap choi_map();                    // the nondecomposable positive map on M_3
MatMap singlet_map(int n);            // Choi = singlet projector on indices 0,1
MatMap tiles_map();                   // map of the tiles UPB state, PPT on M_3
MatMap d2_generator(int n);           // Ad e, e = diagonal projection of rank min(2, n)

// Shared sampler pieces, exposed for the verifiers.
MatMap random_cp_map(Rng& rng, int n);
MatMap random_decomposable_map(Rng& rng, int n);

}  // namespace choi
