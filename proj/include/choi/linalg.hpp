#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

namespace choi {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

struct LinalgError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Tolerances shared by the whole library. PSD decisions are relative to the
/// spectral norm; Hermitian symmetrization beyond kHermDefectMax is an error,
/// below it the defect is repaired and recorded.
inline constexpr double kDefaultPsdTol = 1e-9;
inline constexpr double kHermDefectMax = 1e-8;

bool all_finite(const CMat& m);

/// ||X - X^*||_F for square X.
double hermiticity_defect(const CMat& x);

double frobenius_norm(const CMat& x);

/// Hermitian matrix with enforced symmetry. Construction symmetrizes the
/// input via (X + X^*)/2 and records the pre-symmetrization defect; a defect
/// above kHermDefectMax throws instead of silently repairing.
class HermitianMatrix {
 public:
  static HermitianMatrix make(const CMat& x, double defect_cap = kHermDefectMax);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const CMat& mat() const { return mat_; }
  double defect() const { return defect_; }

 private:
  HermitianMatrix(CMat m, double defect) : mat_(std::move(m)), defect_(defect) {}
  CMat mat_;
  double defect_;
};

/// Orthogonal projection with integer rank. Checks ||E^2 - E||_F <= 1e-10,
/// ||E - E^*||_F <= 1e-12 and |trace(E) - rank| <= 1e-10.
class Projection {
 public:
  static Projection make(const CMat& e);

  int dim() const { return static_cast<int>(mat_.rows()); }
  int rank() const { return rank_; }
  const CMat& mat() const { return mat_; }

 private:
  Projection(CMat m, int rank) : mat_(std::move(m)), rank_(rank) {}
  CMat mat_;
  int rank_;
};

struct EighResult {
  RVec eigenvalues;   // ascending
  CMat eigenvectors;  // columns, unitary
};

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized first;
/// throws LinalgError (with the residual in the message) if the solver fails
/// or the reconstruction residual exceeds 1e-10 * max(1, ||H||_F).
EighResult eigh(const CMat& h);
EighResult eigh(const HermitianMatrix& h);

struct PsdResult {
  bool psd = false;
  double min_eigenvalue = 0.0;
  double spectral_norm = 0.0;
  std::optional<CVec> witness;  // unit vector with x^* H x = min_eigenvalue
};

/// PSD test with relative tolerance: psd iff min eig >= -tol * max(1, ||H||_2).
PsdResult is_psd(const CMat& h, double tol = kDefaultPsdTol);

enum class Side { first, second };

/// Partial transpose on a (dA*dB)x(dA*dB) matrix. Block convention: index
/// (i*dB + s, j*dB + t) is entry (s,t) of block (i,j); the first tensor
/// factor is the slow index.
CMat partial_transpose(const CMat& x, int d_a, int d_b, Side side);

/// Kronecker product with first-factor-slow block convention.
CMat tensor(const CMat& a, const CMat& b);

/// Spectral projection of Hermitian h onto eigenvalues > tol * max(1, ||h||_2).
Projection range_projection_of(const CMat& h, double tol = kDefaultPsdTol);

inline PsdResult is_psd(const HermitianMatrix& h, double tol = kDefaultPsdTol) {
  return is_psd(h.mat(), tol);
}

inline Projection range_projection_of(const HermitianMatrix& h, double tol = kDefaultPsdTol) {
  return range_projection_of(h.mat(), tol);
}

}  // namespace choi
