#include "doctest.h"

#include "choi/linalg.hpp"
#include "choi/rng.hpp"
#include "choi/sha256.hpp"

using namespace choi;

TEST_SUITE("linalg") {

TEST_CASE("hermitian wrapper symmetrizes small defects and rejects large ones") {
  Rng rng(11);
  CMat h = rng.hermitian(4);
  h(0, 1) += Complex(0.0, 1e-10);
  HermitianMatrix m = HermitianMatrix::make(h);
  CHECK(hermiticity_defect(m.mat()) <= 1e-14);

  CMat bad = h;
  bad(0, 1) += Complex(0.5, 0.5);
  CHECK_THROWS_AS(HermitianMatrix::make(bad), LinalgError);
}

TEST_CASE("eigh reconstructs and sorts ascending") {
  Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    CMat h = rng.hermitian(8);
    EighResult e = eigh(HermitianMatrix::make(h));
    CMat rebuilt = e.eigenvectors * e.eigenvalues.asDiagonal() * e.eigenvectors.adjoint();
    CHECK((rebuilt - h).norm() <= 1e-10 * std::max(1.0, h.norm()));
    for (int k = 1; k < 8; ++k) CHECK(e.eigenvalues(k) >= e.eigenvalues(k - 1));
  }
}

TEST_CASE("is_psd accepts PSD matrices and produces checkable witnesses") {
  Rng rng(13);
  CMat p = rng.psd(5);
  PsdResult ok = is_psd(HermitianMatrix::make(p), 1e-9);
  CHECK(ok.psd);

  CMat h = rng.hermitian(5);
  h -= 10.0 * CMat::Identity(5, 5);
  PsdResult bad = is_psd(HermitianMatrix::make(h), 1e-9);
  CHECK_FALSE(bad.psd);
  REQUIRE(bad.witness.has_value());
  const CVec& v = *bad.witness;
  const double rayleigh = (v.adjoint() * h * v)(0, 0).real();
  CHECK(rayleigh == doctest::Approx(bad.min_eigenvalue).epsilon(1e-9));
}

TEST_CASE("partial transpose is an involution and acts factor-wise on products") {
  Rng rng(17);
  for (auto [da, db] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 3}}) {
    CMat x = rng.hermitian(da * db);
    CHECK((partial_transpose(partial_transpose(x, da, db, Side::second), da, db, Side::second) -
           x).norm() <= 1e-14);
    CHECK((partial_transpose(partial_transpose(x, da, db, Side::first), da, db, Side::first) -
           x).norm() <= 1e-14);

    CMat a = rng.hermitian(da);
    CMat b = rng.hermitian(db);
    CMat prod = tensor(a, b);
    CHECK((partial_transpose(prod, da, db, Side::second) - tensor(a, b.transpose())).norm() <=
          1e-13);
    CHECK((partial_transpose(prod, da, db, Side::first) - tensor(a.transpose(), b)).norm() <=
          1e-13);
    // Full transpose = both sides.
    CHECK((partial_transpose(partial_transpose(x, da, db, Side::first), da, db, Side::second) -
           x.transpose()).norm() <= 1e-14);
  }
}

TEST_CASE("partial transpose of the maximally entangled projector is the swap") {
  const int n = 2;
  CVec m = CVec::Zero(n * n);
  for (int i = 0; i < n; ++i) m(i * n + i) = 1.0;
  CMat proj = m * m.adjoint();  // unnormalized, eigenvalues {2, 0, 0, 0}
  CMat swap = partial_transpose(proj, n, n, Side::second);
  EighResult e = eigh(HermitianMatrix::make(swap));
  CHECK(e.eigenvalues(0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(e.eigenvalues(1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.eigenvalues(3) == doctest::Approx(1.0).epsilon(1e-12));
  // Swap acts by exchanging tensor factors.
  Rng rng(3);
  CVec a = rng.complex_vector(n), b = rng.complex_vector(n);
  CHECK((swap * tensor(a, b) - tensor(b, a)).norm() <= 1e-12);
}

TEST_CASE("tensor handles rectangular factors") {
  Rng rng(23);
  CMat a(2, 3), b(3, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) {
      a(i, j) = rng.complex_normal();
      b(j, i) = rng.complex_normal();
    }
  CMat t = tensor(a, b);
  REQUIRE(t.rows() == 6);
  REQUIRE(t.cols() == 6);
  CHECK(std::abs(t(0 * 3 + 1, 2 * 2 + 0) - a(0, 2) * b(1, 0)) <= 1e-15);
}

TEST_CASE("range projection has the right rank and fixes the range") {
  Rng rng(29);
  CMat v = rng.complex_vector(4) * rng.complex_vector(4).adjoint();  // rank 1
  Projection p = range_projection_of(HermitianMatrix::make(v + v.adjoint()));
  CHECK(p.rank() <= 2);
  CMat pm = p.mat();
  CHECK((pm * pm - pm).norm() <= 1e-10);
}

TEST_CASE("rng streams are deterministic and constructions are well-formed") {
  Rng a(424242), b(424242);
  for (int k = 0; k < 16; ++k) CHECK(a.bits() == b.bits());

  Rng rng(5);
  CMat u = rng.unitary(4);
  CHECK((u.adjoint() * u - CMat::Identity(4, 4)).norm() <= 1e-12);
  CMat d = rng.density(4);
  CHECK(d.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(is_psd(HermitianMatrix::make(d), 1e-9).psd);
  CMat e = rng.projection(4, 2);
  CHECK((e * e - e).norm() <= 1e-12);
  CHECK(e.trace().real() == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("derive_seed separates labels and counters") {
  const std::uint64_t root = 99;
  CHECK(derive_seed(root, "a", 0) != derive_seed(root, "a", 1));
  CHECK(derive_seed(root, "a", 0) != derive_seed(root, "b", 0));
  CHECK(derive_seed(root, "a", 3) == derive_seed(root, "a", 3));
}

TEST_CASE("sha256 matches published vectors") {
  CHECK(Sha256::of("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(Sha256::of("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(Sha256::of("The quick brown fox jumps over the lazy dog") ==
        "d7a8fbb307d7809469ca9abcb0082e4f8d5651e46d3cdb762d02d0bf37c9e592");
}

}  // TEST_SUITE
