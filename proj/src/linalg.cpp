#include "choi/linalg.hpp"

#include <cmath>

namespace choi {

bool all_finite(const CMat& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const Complex& z = m(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
  }
  return true;
}

double hermiticity_defect(const CMat& x) {
  if (x.rows() != x.cols()) throw LinalgError("hermiticity_defect: matrix not square");
  return (x - x.adjoint()).norm();
}

double frobenius_norm(const CMat& x) { return x.norm(); }

HermitianMatrix HermitianMatrix::make(const CMat& x, double defect_cap) {
  if (x.rows() != x.cols()) throw LinalgError("HermitianMatrix: matrix not square");
  if (!all_finite(x)) throw LinalgError("HermitianMatrix: non-finite entries");
  const double defect = hermiticity_defect(x);
  if (defect > defect_cap) {
    throw LinalgError("HermitianMatrix: hermiticity defect " + std::to_string(defect) +
                      " exceeds cap " + std::to_string(defect_cap));
  }
  CMat sym = 0.5 * (x + x.adjoint());
  return HermitianMatrix(std::move(sym), defect);
}

Projection Projection::make(const CMat& e) {
  if (e.rows() != e.cols()) throw LinalgError("Projection: matrix not square");
  const double herm = hermiticity_defect(e);
  if (herm > 1e-12) {
    throw LinalgError("Projection: hermiticity defect " + std::to_string(herm));
  }
  const double idem = (e * e - e).norm();
  if (idem > 1e-10) {
    throw LinalgError("Projection: idempotency defect " + std::to_string(idem));
  }
  const double tr = e.trace().real();
  const int rank = static_cast<int>(std::lround(tr));
  if (std::abs(tr - rank) > 1e-10) {
    throw LinalgError("Projection: trace " + std::to_string(tr) + " is not near an integer");
  }
  CMat sym = 0.5 * (e + e.adjoint());
  return Projection(std::move(sym), rank);
}

EighResult eigh(const CMat& h) {
  if (h.rows() != h.cols()) throw LinalgError("eigh: matrix not square");
  if (!all_finite(h)) throw LinalgError("eigh: non-finite entries");
  CMat sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw LinalgError("eigh: eigensolver failed to converge (dim " +
                      std::to_string(h.rows()) + ")");
  }
  EighResult result{solver.eigenvalues(), solver.eigenvectors()};
  const double scale = std::max(1.0, sym.norm());
  const double residual =
      (result.eigenvectors * result.eigenvalues.asDiagonal() * result.eigenvectors.adjoint() - sym)
          .norm();
  if (residual > 1e-10 * scale) {
    throw LinalgError("eigh: reconstruction residual " + std::to_string(residual) +
                      " exceeds 1e-10 * " + std::to_string(scale));
  }
  return result;
}

EighResult eigh(const HermitianMatrix& h) { return eigh(h.mat()); }

PsdResult is_psd(const CMat& h, double tol) {
  if (tol < 0) throw LinalgError("is_psd: negative tolerance");
  EighResult eig = eigh(h);
  PsdResult result;
  const Eigen::Index n = eig.eigenvalues.size();
  result.min_eigenvalue = eig.eigenvalues(0);
  result.spectral_norm =
      std::max(std::abs(eig.eigenvalues(0)), std::abs(eig.eigenvalues(n - 1)));
  result.psd = result.min_eigenvalue >= -tol * std::max(1.0, result.spectral_norm);
  if (!result.psd) result.witness = eig.eigenvectors.col(0);
  return result;
}

CMat partial_transpose(const CMat& x, int d_a, int d_b, Side side) {
  const Eigen::Index d = static_cast<Eigen::Index>(d_a) * d_b;
  if (x.rows() != d || x.cols() != d) {
    throw LinalgError("partial_transpose: expected " + std::to_string(d) + "x" +
                      std::to_string(d) + " matrix, got " + std::to_string(x.rows()) + "x" +
                      std::to_string(x.cols()));
  }
  CMat out(d, d);
  for (int i = 0; i < d_a; ++i) {
    for (int j = 0; j < d_a; ++j) {
      auto block = x.block(i * d_b, j * d_b, d_b, d_b);
      if (side == Side::second) {
        out.block(i * d_b, j * d_b, d_b, d_b) = block.transpose();
      } else {
        out.block(j * d_b, i * d_b, d_b, d_b) = block;
      }
    }
  }
  return out;
}

CMat tensor(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Projection range_projection_of(const CMat& h, double tol) {
  EighResult eig = eigh(h);
  const Eigen::Index n = eig.eigenvalues.size();
  const double scale =
      std::max(std::abs(eig.eigenvalues(0)), std::abs(eig.eigenvalues(n - 1)));
  const double cut = tol * std::max(1.0, scale);
  CMat proj = CMat::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (eig.eigenvalues(k) > cut) {
      proj += eig.eigenvectors.col(k) * eig.eigenvectors.col(k).adjoint();
    }
  }
  return Projection::make(proj);
}

}  // namespace choi
