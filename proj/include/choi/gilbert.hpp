#pragma once

#include <vector>

#include "choi/linalg.hpp"
#include "choi/verdict.hpp"

namespace choi {

struct GilbertAtom {
  double weight;
  CVec a;  // unit vector on the first factor
  CVec b;  // unit vector on the second factor
};

struct GilbertResult {
  double distance = 0.0;
  std::vector<GilbertAtom> ensemble;
  int iterations = 0;
  bool converged = false;
  double final_gap = 0.0;
  // Frobenius distance recorded per iteration, clamped to be non-increasing
  // against float noise in the incremental update.
  std::vector<double> trace;
};

// Frank-Wolfe iteration with away steps toward the separable set: the inner
// oracle maximizes <G, aa* (x) bb*> by alternating top-eigenvector passes.
// X must be PSD with unit trace. The returned ensemble reconstructs a
// separable Y with ||X - Y||_F equal to the reported distance.
GilbertResult gilbert_separable_distance(const CMat& x, int d_a, int d_b,
                                         const TestConfig& cfg);

}  // namespace choi
