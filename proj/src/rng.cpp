#include "choi/rng.hpp"

#include <cmath>
#include <numbers>

namespace choi {

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::string_view label, std::uint64_t counter) {
  return splitmix64(root ^ fnv1a64(label) ^ ((counter + 1) * 0x9E3779B97F4A7C15ULL));
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int Rng::uniform_int(int lo, int hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(engine_() % span);
}

Complex Rng::complex_normal() {
  const double inv_sqrt2 = 0.7071067811865475244;
  return Complex(normal() * inv_sqrt2, normal() * inv_sqrt2);
}

CVec Rng::complex_vector(int n) {
  CVec v(n);
  for (int i = 0; i < n; ++i) v(i) = complex_normal();
  return v;
}

CVec Rng::unit_vector(int n) {
  CVec v = complex_vector(n);
  double norm = v.norm();
  while (norm < 1e-12) {
    v = complex_vector(n);
    norm = v.norm();
  }
  return v / norm;
}

CMat Rng::ginibre(int rows, int cols) {
  CMat g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = complex_normal();
  return g;
}

CMat Rng::hermitian(int n) {
  CMat g = ginibre(n, n);
  return 0.5 * (g + g.adjoint());
}

CMat Rng::unitary(int n) {
  CMat g = ginibre(n, n);
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    Complex d = r(i, i);
    const double mag = std::abs(d);
    q.col(i) *= (mag > 1e-300) ? d / mag : Complex(1.0, 0.0);
  }
  return q;
}

CMat Rng::psd(int n, int k) {
  if (k <= 0) k = n;
  CMat g = ginibre(n, k);
  return g * g.adjoint();
}

CMat Rng::density(int n, int k) {
  CMat p = psd(n, k);
  const double tr = p.trace().real();
  return p / tr;
}

CMat Rng::projection(int n, int r) {
  CMat u = unitary(n);
  CMat cols = u.leftCols(r);
  return cols * cols.adjoint();
}

}  // namespace choi
