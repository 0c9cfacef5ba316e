#include "doctest.h"

#include <cmath>

#include "choi/gilbert.hpp"
#include "choi/rng.hpp"
#include "choi/states.hpp"

using namespace choi;

namespace {

TestConfig gcfg(std::uint64_t seed, int iters, double sep_tol) {
  TestConfig cfg;
  cfg.seed = seed;
  cfg.gilbert_max_iters = iters;
  cfg.sep_tol = sep_tol;
  return cfg;
}

CMat ensemble_density(const GilbertResult& g, int d) {
  CMat y = CMat::Zero(d, d);
  for (const GilbertAtom& atom : g.ensemble) {
    CVec ab = tensor(atom.a, atom.b);
    y += atom.weight * (ab * ab.adjoint());
  }
  return y;
}

}  // namespace

TEST_SUITE("gilbert") {

TEST_CASE("bell state distance matches the closed form") {
  CVec bell = CVec::Zero(4);
  bell(0) = 1.0 / std::sqrt(2.0);
  bell(3) = 1.0 / std::sqrt(2.0);
  CMat rho = bell * bell.adjoint();
  GilbertResult g = gilbert_separable_distance(rho, 2, 2, gcfg(900, 30000, 1e-9));
  CHECK(std::abs(g.distance - 1.0 / std::sqrt(3.0)) <= 2e-3);
  // The reported distance is realized by the reported ensemble.
  CMat y = ensemble_density(g, 4);
  CHECK(std::abs((rho - y).norm() - g.distance) <= 1e-9);
}

TEST_CASE("pure product states have zero distance immediately") {
  Rng rng(901);
  CVec a = rng.unit_vector(2), b = rng.unit_vector(3);
  CVec ab = tensor(a, b);
  CMat rho = ab * ab.adjoint();
  GilbertResult g = gilbert_separable_distance(rho, 2, 3, gcfg(902, 2000, 1e-9));
  CHECK(g.distance <= 1e-12);
}

TEST_CASE("the maximally mixed state is reached to high accuracy") {
  CMat rho = CMat::Identity(4, 4) / 4.0;
  GilbertResult g = gilbert_separable_distance(rho, 2, 2, gcfg(903, 50000, 2e-12));
  CHECK(g.distance <= 1e-12);
}

TEST_CASE("separable mixtures are recognized at tolerance") {
  Rng rng(904);
  CMat rho = CMat::Zero(6, 6);
  double wsum = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double w = rng.uniform(0.2, 1.0);
    CVec a = rng.unit_vector(2), b = rng.unit_vector(3);
    CVec ab = tensor(a, b);
    rho += w * (ab * ab.adjoint());
    wsum += w;
  }
  // A maximally mixed product component keeps the mixture full rank, so the
  // iteration converges linearly instead of stalling on a face.
  const double w_iso = rng.uniform(0.2, 1.0);
  rho += w_iso * CMat::Identity(6, 6) / 6.0;
  wsum += w_iso;
  rho /= wsum;
  GilbertResult g = gilbert_separable_distance(rho, 2, 3, gcfg(905, 30000, 1e-6));
  CHECK(g.distance <= 1e-6);
}

TEST_CASE("an NPT state keeps a distance bounded below by its PT defect") {
  BipartiteState w = werner_state(0.5);
  // dist_F to separable >= dist_F to PPT = |min PT eigenvalue| = 0.125 here.
  GilbertResult g = gilbert_separable_distance(w.rho, 2, 2, gcfg(906, 8000, 1e-9));
  CHECK(g.distance >= 0.12);
  CHECK(g.distance <= 0.30);
}

TEST_CASE("the trace of iterates never increases") {
  BipartiteState w = werner_state(0.45);
  GilbertResult g = gilbert_separable_distance(w.rho, 2, 2, gcfg(907, 4000, 1e-9));
  REQUIRE(g.trace.size() > 2);
  for (std::size_t k = 1; k < g.trace.size(); ++k) CHECK(g.trace[k] <= g.trace[k - 1] + 1e-15);
}

TEST_CASE("runs are deterministic in the seed") {
  BipartiteState s = random_ppt_state(2, 2, 908);
  GilbertResult a = gilbert_separable_distance(s.rho, 2, 2, gcfg(909, 3000, 1e-6));
  GilbertResult b = gilbert_separable_distance(s.rho, 2, 2, gcfg(909, 3000, 1e-6));
  CHECK(a.distance == b.distance);
  CHECK(a.iterations == b.iterations);
  GilbertResult c = gilbert_separable_distance(s.rho, 2, 2, gcfg(910, 3000, 1e-6));
  CHECK(c.distance <= a.distance + 1e-4);  // different seed, same target
}

TEST_CASE("input validation rejects non-states") {
  CMat bad = CMat::Identity(4, 4);  // trace 4
  CHECK_THROWS_AS(gilbert_separable_distance(bad, 2, 2, gcfg(911, 100, 1e-6)), LinalgError);
  CHECK_THROWS_AS(gilbert_separable_distance(CMat::Identity(4, 4) / 4.0, 2, 3,
                                             gcfg(912, 100, 1e-6)),
                  LinalgError);
}

}  // TEST_SUITE
