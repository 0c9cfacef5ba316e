#pragma once

#include "choi/gilbert.hpp"
#include "choi/mapcones.hpp"
#include "choi/matmap.hpp"
#include "choi/verdict.hpp"

namespace choi {

// Membership tests for the standard cones of positive maps. All tests are
// three-valued: member verdicts carry an independently re-checkable
// certificate, non_member verdicts a re-checkable witness, undetermined
// verdicts only the search evidence. Exact spectral tests (CP, coCP, PPT)
// never return undetermined.

// Member iff the Choi matrix is PSD within cfg.psd_tol (relative to the
// spectral norm). Witness: eigenvector at the most negative eigenvalue.
Verdict test_cp(const MatMap& phi, const TestConfig& cfg);

// Member iff the partial transpose (second factor) of the Choi matrix is PSD,
// equivalently t o phi is completely positive.
Verdict test_cocp(const MatMap& phi, const TestConfig& cfg);

// Conjunction of test_cp and test_cocp; the certificate records both spectra.
Verdict test_ppt_map(const MatMap& phi, const TestConfig& cfg);

// Alternating eigenvector minimization of q(x, y) = <x (x) y, C (x (x) y)>
// over unit product vectors, with cfg.multistarts restarts. Sound for
// rejection only; block positivity has no finite certificate here, so the
// test never returns member.
Verdict test_positive(const MatMap& phi, const TestConfig& cfg);

// Projection splitting looks for C = P + Gamma(Q) with P, Q PSD
// (member, certificate (P, Q)); otherwise a PPT witness pool is searched for
// pairing(phi, rho) < 0 (non_member); else undetermined.
Verdict test_decomposable(const MatMap& phi, const TestConfig& cfg);

// Decision ladder for separability of the Choi matrix: NPT rejection, the
// exact PPT decision in dimension products <= 6 (directly or after
// compression onto the marginal supports), Gilbert distance, and finally a
// witness search over non-decomposable positive maps.
Verdict test_superpositive(const MatMap& phi, const TestConfig& cfg);

// Samples maps from the cone (plus its extreme fixtures) and checks
// pairing(phi, psi) >= 0. Sound for rejection only; membership in a dual cone
// is never certified from finitely many samples.
Verdict test_dual_membership(const MatMap& phi, const ConeSpec& cone, const TestConfig& cfg,
                             int samples = 200);

// The projection-splitting decomposition behind test_decomposable, exposed so
// its residuals can be inspected directly. Gamma is the partial transpose on
// the second factor; tol is an absolute residual target in Frobenius norm.
struct SplitResult {
  CMat p;  // PSD part
  CMat q;  // PSD part with c ~ p + Gamma(q)
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};
SplitResult decompose_cp_cocp(const CMat& c, int d_in, int d_out, double tol, int max_iters);

}  // namespace choi
