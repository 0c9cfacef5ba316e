#pragma once

#include <cstdint>

#include "choi/linalg.hpp"
#include "choi/matmap.hpp"
#include "choi/rng.hpp"
#include "choi/verdict.hpp"

namespace choi {

// Density matrix on a d_A (x) d_B system: PSD within relative 1e-9 and
// unit trace within 1e-10, validated at construction.
struct BipartiteState {
  int d_a = 0;
  int d_b = 0;
  CMat rho;

  static BipartiteState make(int d_a, int d_b, const CMat& rho);
};

// The density matrix of the functional a (x) b |-> Tr(phi(a) b^t), which is
// C_phi^t normalized. Requires a CP input with positive trace.
BipartiteState state_of_map(const MatMap& phi, double psd_tol = kDefaultPsdTol);

// Inverse direction: Choi = rho^T, so state_of_map(map_of_state(rho)) = rho.
MatMap map_of_state(const BipartiteState& rho);

// Member iff the partial transpose on the second factor is PSD within tol.
Verdict is_ppt_state(const BipartiteState& rho, double tol = kDefaultPsdTol);

// Rejection-samples Wishart densities (d*d Ginibre factors of width 2*d*d)
// until the partial transpose is PSD with a small margin.
BipartiteState random_ppt_state(int d_a, int d_b, std::uint64_t seed);

// PPT map on M_3 of the form Ad e o psi with e a random rank-2 projection and
// psi a random PPT map, so range_projection has rank <= 2.
MatMap random_ppt_map_rank2_range(std::uint64_t seed);

// The tiles UPB state on 3 (x) 3: rho = (I - sum |w_k><w_k|)/4 over the five
// tiles product vectors. PPT but entangled.
BipartiteState tiles_upb_state();

// p |Phi+><Phi+| + (1-p) I/4 on 2 (x) 2; PPT iff p <= 1/3.
BipartiteState werner_state(double p);

}  // namespace choi
