#include "doctest.h"

#include "choi/linalg.hpp"
#include "choi/mapcones.hpp"
#include "choi/matmap.hpp"
#include "choi/rng.hpp"

using namespace choi;

namespace {

MatMap random_herm_map(Rng& rng, int d_in, int d_out) {
  CMat h = rng.hermitian(d_in * d_out);
  return map_from_choi(d_in, d_out, h);
}

CMat rebuild_choi(const MatMap& phi) {
  CMat c = CMat::Zero(phi.d_in * phi.d_out, phi.d_in * phi.d_out);
  for (int i = 0; i < phi.d_in; ++i)
    for (int j = 0; j < phi.d_in; ++j) {
      CMat eij = CMat::Zero(phi.d_in, phi.d_in);
      eij(i, j) = 1.0;
      CMat img = choi::apply(phi, eij);
      for (int s = 0; s < phi.d_out; ++s)
        for (int t = 0; t < phi.d_out; ++t)
          c(i * phi.d_out + s, j * phi.d_out + t) = img(s, t);
    }
  return c;
}

}  // namespace

TEST_SUITE("matmap") {

TEST_CASE("apply and the Choi matrix determine each other") {
  Rng rng(101);
  for (auto [di, dd] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{2, 4}, std::pair{3, 3}}) {
    MatMap phi = random_herm_map(rng, di, dd);
    CHECK((rebuild_choi(phi) - phi.choi).norm() <= 1e-12 * std::max(1.0, phi.choi.norm()));
  }
}

TEST_CASE("ad implements conjugation and has a rank-1 Choi matrix") {
  Rng rng(103);
  CMat v = rng.ginibre(3, 2);
  MatMap m = ad(v);
  REQUIRE(m.d_in == 3);
  REQUIRE(m.d_out == 2);
  CMat a = rng.hermitian(3);
  CHECK((choi::apply(m, a) - v.adjoint() * a * v).norm() <= 1e-12);
  EighResult e = eigh(HermitianMatrix::make(m.choi));
  int rank = 0;
  for (int k = 0; k < e.eigenvalues.size(); ++k)
    if (std::abs(e.eigenvalues(k)) > 1e-10) ++rank;
  CHECK(rank == 1);
}

TEST_CASE("kraus sums agree with summed conjugations") {
  Rng rng(107);
  std::vector<CMat> ks = {rng.ginibre(3, 3), rng.ginibre(3, 3)};
  MatMap m = map_from_kraus(ks);
  CMat a = rng.hermitian(3);
  CMat expected = ks[0].adjoint() * a * ks[0] + ks[1].adjoint() * a * ks[1];
  CHECK((choi::apply(m, a) - expected).norm() <= 1e-12);
}

TEST_CASE("classic maps act as advertised") {
  Rng rng(109);
  CMat a = rng.hermitian(3);
  CHECK((choi::apply(identity_map(3), a) - a).norm() <= 1e-13);
  CHECK((choi::apply(transpose_map(3), a) - a.transpose()).norm() <= 1e-13);
  CHECK((choi::apply(trace_map(3), a) - a.trace() * CMat::Identity(3, 3)).norm() <= 1e-13);
  CHECK((trace_map(3).choi - CMat::Identity(9, 9)).norm() <= 1e-14);
  CHECK((choi::apply(reduction_map(3), a) - (a.trace() * CMat::Identity(3, 3) - a)).norm() <= 1e-13);
}

TEST_CASE("composition matches pointwise application and is associative") {
  Rng rng(113);
  for (int trial = 0; trial < 50; ++trial) {
    MatMap f = random_herm_map(rng, 2, 3);
    MatMap g = random_herm_map(rng, 3, 2);
    MatMap h = random_herm_map(rng, 2, 2);
    CMat a = rng.hermitian(2);
    CHECK((choi::apply(compose(g, f), a) - choi::apply(g, choi::apply(f, a))).norm() <= 1e-10);
    MatMap left = compose(compose(h, g), f);
    MatMap right = compose(h, compose(g, f));
    CHECK((left.choi - right.choi).norm() <= 1e-10);
  }
}

TEST_CASE("adjoint_star satisfies the Hilbert-Schmidt adjoint identity") {
  Rng rng(127);
  MatMap phi = random_herm_map(rng, 3, 2);
  MatMap star = adjoint_star(phi);
  REQUIRE(star.d_in == 2);
  REQUIRE(star.d_out == 3);
  for (int trial = 0; trial < 20; ++trial) {
    CMat a = rng.hermitian(2);
    CMat b = rng.hermitian(3);
    const double lhs = (choi::apply(star, a).adjoint() * b).trace().real();
    const double rhs = (a.adjoint() * choi::apply(phi, b)).trace().real();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
  // Involution.
  CHECK((adjoint_star(star).choi - phi.choi).norm() <= 1e-12);
}

TEST_CASE("transpose_conj has the transposed Choi matrix") {
  Rng rng(131);
  MatMap phi = random_herm_map(rng, 3, 3);
  MatMap pt = transpose_conj(phi);
  CHECK((pt.choi - phi.choi.transpose()).norm() <= 1e-13);
  CMat a = rng.hermitian(3);
  // phi^t = t o phi o t pointwise.
  CHECK((choi::apply(pt, a) - choi::apply(phi, a.transpose()).transpose()).norm() <= 1e-11);
}

TEST_CASE("pairing reproduces the dictionary values at n = 2") {
  MatMap id2 = identity_map(2);
  MatMap t2 = transpose_map(2);
  MatMap tr2 = trace_map(2);
  MatMap red2 = reduction_map(2);
  MatMap sing = singlet_map(2);
  CHECK(pairing(id2, id2) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(pairing(id2, t2) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(pairing(id2, tr2) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(pairing(id2, red2) == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(pairing(t2, sing) == doctest::Approx(-1.0).epsilon(1e-12));
  // Symmetry.
  Rng rng(137);
  CMat h1 = rng.hermitian(4), h2 = rng.hermitian(4);
  MatMap a = map_from_choi(2, 2, h1), b = map_from_choi(2, 2, h2);
  CHECK(pairing(a, b) == doctest::Approx(pairing(b, a)).epsilon(1e-12));
}

TEST_CASE("amplify on a Choi matrix composes the maps") {
  Rng rng(139);
  for (int trial = 0; trial < 20; ++trial) {
    MatMap phi = random_herm_map(rng, 3, 3);
    MatMap alpha = random_herm_map(rng, 3, 3);
    CHECK((amplify(alpha, phi.choi, 3) - compose(alpha, phi).choi).norm() <= 1e-11);
  }
}

TEST_CASE("amplify commutes with transposition through the transposed map") {
  Rng rng(149);
  for (int trial = 0; trial < 20; ++trial) {
    MatMap beta = random_herm_map(rng, 3, 3);
    CMat x = rng.hermitian(9);
    CMat lhs = amplify(beta, x.transpose(), 3);
    CMat rhs = amplify(transpose_conj(beta), x, 3).transpose();
    CHECK((lhs - rhs).norm() <= 1e-11);
  }
}

TEST_CASE("trace pairing moves a map across the product") {
  Rng rng(151);
  for (int trial = 0; trial < 200; ++trial) {
    MatMap phi = random_herm_map(rng, 3, 3);
    MatMap psi = random_herm_map(rng, 3, 3);
    MatMap alpha = random_herm_map(rng, 3, 3);
    const double lhs = pairing(compose(alpha, phi), psi);
    const double rhs = pairing(phi, compose(adjoint_star(alpha), psi));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("marginals of the Choi matrix are the unit images") {
  Rng rng(157);
  MatMap phi = random_herm_map(rng, 3, 3);
  CMat m2 = CMat::Zero(3, 3);  // second-factor marginal: sum of diagonal blocks
  CMat m1 = CMat::Zero(3, 3);  // first-factor marginal: block traces
  for (int i = 0; i < 3; ++i) {
    m2 += phi.block(i, i);
    for (int j = 0; j < 3; ++j) m1(i, j) = phi.block(i, j).trace();
  }
  CHECK((m2 - choi::apply(phi, CMat::Identity(3, 3))).norm() <= 1e-12);
  CHECK((m1 - choi::apply(adjoint_star(phi), CMat::Identity(3, 3)).transpose()).norm() <= 1e-11);
}

TEST_CASE("sp_trace_padding of the identity is the boundary isotropic state") {
  for (int n : {2, 3}) {
    MatMap psi = sp_trace_padding(identity_map(n));
    CMat rho = psi.choi / psi.choi.trace().real();
    CMat pt = partial_transpose(rho, n, n, Side::second);
    EighResult e = eigh(HermitianMatrix::make(pt));
    CHECK(std::abs(e.eigenvalues(0)) <= 1e-12);  // exactly on the PPT boundary
  }
}

TEST_CASE("range and support projections see through compressions") {
  Rng rng(163);
  CMat e = rng.projection(3, 2);
  MatMap phi = compose(ad(e), trace_normalized(random_cp_map(rng, 3)));
  CHECK(range_projection(phi).rank() <= 2);
  MatMap psi = compose(trace_normalized(random_cp_map(rng, 3)), ad(e));
  CHECK(support_projection(psi).rank() <= 2);
}

TEST_CASE("map_from_choi validates shape and hermiticity") {
  Rng rng(167);
  CMat g = rng.ginibre(4, 4);
  CHECK_THROWS_AS(map_from_choi(2, 2, g), LinalgError);  // badly non-Hermitian
  CHECK_THROWS_AS(map_from_choi(3, 2, rng.hermitian(4)), LinalgError);
}

}  // TEST_SUITE
