#pragma once

#include <vector>

#include "choi/linalg.hpp"

namespace choi {

// A hermiticity-preserving linear map phi: M_{d_in} -> M_{d_out}, stored as
// its Choi matrix C = sum_{ij} e_ij (x) phi(e_ij). The first tensor factor is
// the slow index: C(i*d_out + s, j*d_out + t) = phi(e_ij)(s, t).
struct MatMap {
  int d_in = 0;
  int d_out = 0;
  CMat choi;

  // phi(e_ij) as a d_out x d_out block.
  CMat block(int i, int j) const {
    return choi.block(i * d_out, j * d_out, d_out, d_out);
  }
};

// Validates dimensions and hermiticity (the Choi matrix of a
// hermiticity-preserving map is Hermitian); symmetrizes small defects.
MatMap map_from_choi(int d_in, int d_out, const CMat& choi);

// a |-> v^* a v with v of shape d_in x d_out.
MatMap ad(const CMat& v);

// a |-> sum_k v_k^* a v_k.
MatMap map_from_kraus(const std::vector<CMat>& kraus);

MatMap identity_map(int n);

// a |-> a^T. Its Choi matrix is the swap operator on C^n (x) C^n.
MatMap transpose_map(int n);

// a |-> Tr(a) 1. Its Choi matrix is the identity on C^n (x) C^n.
MatMap trace_map(int n);

CMat apply(const MatMap& phi, const CMat& a);

// phi after psi (requires psi.d_out == phi.d_in).
MatMap compose(const MatMap& phi, const MatMap& psi);

// Adjoint phi^* for <phi^*(a), b> = <a, phi(b)> in Hilbert-Schmidt pairing.
MatMap adjoint_star(const MatMap& phi);

// phi^t = t after phi after t; its Choi matrix is C^T.
MatMap transpose_conj(const MatMap& phi);

// Tr(C_phi C_psi), real for Hermitian Choi matrices.
double pairing(const MatMap& phi, const MatMap& psi);

// Applies alpha to the second tensor factor of x in M_{d_a} (x) M_{alpha.d_in}:
// blockwise (i, j) |-> alpha(block_ij). For x = C_phi this yields C_{alpha o phi}.
CMat amplify(const MatMap& alpha, const CMat& x, int d_a);

// Projection onto the range of phi(1).
Projection range_projection(const MatMap& phi);

// Projection onto the range of phi^*(1).
Projection support_projection(const MatMap& phi);

// psi(a) = Tr(a) phi(1) + phi(a); C_psi = 1 (x) phi(1) + C_phi.
MatMap sp_trace_padding(const MatMap& phi);

// Rescales so that Tr C = d_in (the Choi trace of a unital channel); maps with
// nonpositive trace are returned unchanged.
MatMap trace_normalized(const MatMap& phi);

}  // namespace choi
