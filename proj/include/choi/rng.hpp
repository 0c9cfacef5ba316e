#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "choi/linalg.hpp"

namespace choi {

/// Labeled sub-seed derivation. All randomness in the library flows from a
/// single root seed; independent streams are derived as
///   splitmix64(root ^ fnv1a64(label) ^ (counter+1)*0x9E3779B97F4A7C15)
/// so a run is reproducible regardless of execution order.
std::uint64_t fnv1a64(std::string_view s);
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t root, std::string_view label, std::uint64_t counter);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  /// Standard normal via Box-Muller (platform-independent given the engine).
  double normal();
  int uniform_int(int lo, int hi);  // inclusive bounds

  Complex complex_normal();  // entries with variance 1 total

  CVec complex_vector(int n);        // iid complex normal
  CVec unit_vector(int n);           // normalized complex normal
  CMat ginibre(int rows, int cols);  // iid complex normal entries
  CMat hermitian(int n);             // (G + G*)/2
  CMat unitary(int n);               // Haar via QR with phase fix
  CMat psd(int n, int k = 0);        // G G^*, G is n x k (k = n by default)
  CMat density(int n, int k = 0);    // psd normalized to trace 1
  /// Random rank-r orthogonal projection (span of r Haar-orthonormal columns).
  CMat projection(int n, int r);

 private:
  std::mt19937_64 engine_;
};

}  // namespace choi
