#include "choi/states.hpp"

#include <cmath>
#include <stdexcept>

#include "choi/io.hpp"

namespace choi {

BipartiteState BipartiteState::make(int d_a, int d_b, const CMat& rho) {
  if (d_a <= 0 || d_b <= 0) throw LinalgError("BipartiteState: dimensions must be positive");
  const int d = d_a * d_b;
  if (rho.rows() != d || rho.cols() != d)
    throw LinalgError("BipartiteState: matrix has wrong shape");
  HermitianMatrix h = HermitianMatrix::make(rho);
  const double tr = h.mat().trace().real();
  if (std::abs(tr - 1.0) > 1e-10)
    throw LinalgError("BipartiteState: trace must be 1, got " + std::to_string(tr));
  PsdResult psd = is_psd(h, 1e-9);
  if (!psd.psd)
    throw LinalgError("BipartiteState: matrix is not PSD, min eigenvalue " +
                      std::to_string(psd.min_eigenvalue));
  return BipartiteState{d_a, d_b, h.mat()};
}

BipartiteState state_of_map(const MatMap& phi, double psd_tol) {
  HermitianMatrix h = HermitianMatrix::make(phi.choi);
  PsdResult psd = is_psd(h, psd_tol);
  if (!psd.psd)
    throw LinalgError("state_of_map: map is not CP (min Choi eigenvalue " +
                      std::to_string(psd.min_eigenvalue) + "), no state exists");
  const double tr = phi.choi.trace().real();
  if (tr <= 1e-12) throw LinalgError("state_of_map: Choi trace is not positive");
  CMat rho = phi.choi.transpose() / tr;
  // Clip the tiny negative eigenvalues a tolerance-passing Choi may carry, so
  // the state type's own PSD invariant holds exactly.
  EighResult eig = eigh(HermitianMatrix::make(rho));
  RVec clipped = eig.eigenvalues.cwiseMax(0.0);
  rho = eig.eigenvectors * clipped.asDiagonal() * eig.eigenvectors.adjoint();
  rho /= rho.trace().real();
  return BipartiteState{phi.d_in, phi.d_out, 0.5 * (rho + rho.adjoint())};
}

MatMap map_of_state(const BipartiteState& rho) {
  return MatMap{rho.d_a, rho.d_b, rho.rho.transpose()};
}

Verdict is_ppt_state(const BipartiteState& rho, double tol) {
  CMat pt = partial_transpose(rho.rho, rho.d_a, rho.d_b, Side::second);
  PsdResult psd = is_psd(HermitianMatrix::make(pt), tol);
  Verdict v;
  v.evidence.min_value_seen = psd.min_eigenvalue;
  if (psd.psd) {
    v.status = Status::member;
    v.certificate = {{"kind", "ppt_spectrum"},
                     {"min_pt_eigenvalue", psd.min_eigenvalue}};
  } else {
    v.status = Status::non_member;
    v.witness = {{"kind", "npt_eigenvector"},
                 {"eigenvalue", psd.min_eigenvalue},
                 {"vector", vector_to_json(*psd.witness)}};
  }
  return v;
}

BipartiteState random_ppt_state(int d_a, int d_b, std::uint64_t seed) {
  const int d = d_a * d_b;
  Rng rng(seed);
  const int cap = 2000;
  for (int attempt = 0; attempt < cap; ++attempt) {
    CMat rho = rng.density(d, 2 * d);
    CMat pt = partial_transpose(rho, d_a, d_b, Side::second);
    PsdResult psd = is_psd(HermitianMatrix::make(pt), 0.0);
    // Strict margin so downstream PPT checks pass robustly.
    if (psd.min_eigenvalue >= 1e-10) return BipartiteState::make(d_a, d_b, rho);
  }
  throw LinalgError("random_ppt_state: rejection cap (" + std::to_string(cap) +
                    ") exceeded at " + std::to_string(d_a) + "x" + std::to_string(d_b));
}

MatMap random_ppt_map_rank2_range(std::uint64_t seed) {
  Rng rng(derive_seed(seed, "ppt_map_rank2/projection", 0));
  CMat e = rng.projection(3, 2);
  BipartiteState s = random_ppt_state(3, 3, derive_seed(seed, "ppt_map_rank2/state", 0));
  MatMap psi = trace_normalized(map_of_state(s));
  MatMap phi = compose(ad(e), psi);
  return trace_normalized(phi);
}

BipartiteState tiles_upb_state() {
  auto ket = [](int i) {
    CVec v = CVec::Zero(3);
    v(i) = 1.0;
    return v;
  };
  const double s = 1.0 / std::sqrt(2.0);
  CVec minus01 = s * (ket(0) - ket(1));
  CVec minus12 = s * (ket(1) - ket(2));
  CVec uniform = (ket(0) + ket(1) + ket(2)) / std::sqrt(3.0);

  std::vector<CVec> w;
  w.push_back(tensor(ket(0), minus01));
  w.push_back(tensor(ket(2), minus12));
  w.push_back(tensor(minus01, ket(2)));
  w.push_back(tensor(minus12, ket(0)));
  w.push_back(tensor(uniform, uniform));

  CMat rho = CMat::Identity(9, 9);
  for (const CVec& v : w) rho -= v * v.adjoint();
  rho /= 4.0;
  return BipartiteState::make(3, 3, rho);
}

BipartiteState werner_state(double p) {
  CVec phi_plus = CVec::Zero(4);
  phi_plus(0) = 1.0 / std::sqrt(2.0);
  phi_plus(3) = 1.0 / std::sqrt(2.0);
  CMat rho = p * (phi_plus * phi_plus.adjoint()) + (1.0 - p) * 0.25 * CMat::Identity(4, 4);
  return BipartiteState::make(2, 2, rho);
}

}  // namespace choi
