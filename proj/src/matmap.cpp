#include "choi/matmap.hpp"

#include <stdexcept>

namespace choi {

MatMap map_from_choi(int d_in, int d_out, const CMat& choi) {
  if (d_in <= 0 || d_out <= 0) throw LinalgError("map_from_choi: dimensions must be positive");
  const int d = d_in * d_out;
  if (choi.rows() != d || choi.cols() != d)
    throw LinalgError("map_from_choi: Choi matrix has wrong shape");
  HermitianMatrix h = HermitianMatrix::make(choi);
  return MatMap{d_in, d_out, h.mat()};
}

MatMap ad(const CMat& v) {
  const int d_in = static_cast<int>(v.rows());
  const int d_out = static_cast<int>(v.cols());
  CMat choi = CMat::Zero(d_in * d_out, d_in * d_out);
  for (int i = 0; i < d_in; ++i)
    for (int j = 0; j < d_in; ++j)
      choi.block(i * d_out, j * d_out, d_out, d_out) = v.row(i).adjoint() * v.row(j);
  return MatMap{d_in, d_out, choi};
}

MatMap map_from_kraus(const std::vector<CMat>& kraus) {
  if (kraus.empty()) throw LinalgError("map_from_kraus: empty Kraus list");
  MatMap out = ad(kraus[0]);
  for (std::size_t k = 1; k < kraus.size(); ++k) {
    const CMat& v = kraus[k];
    if (v.rows() != kraus[0].rows() || v.cols() != kraus[0].cols())
      throw LinalgError("map_from_kraus: Kraus operators must share a shape");
    out.choi += ad(v).choi;
  }
  return out;
}

MatMap identity_map(int n) {
  CMat choi = CMat::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) choi(i * n + i, j * n + j) = 1.0;
  return MatMap{n, n, choi};
}

MatMap transpose_map(int n) {
  CMat choi = CMat::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) choi(i * n + j, j * n + i) = 1.0;
  return MatMap{n, n, choi};
}

MatMap trace_map(int n) {
  return MatMap{n, n, CMat::Identity(n * n, n * n)};
}

CMat apply(const MatMap& phi, const CMat& a) {
  if (a.rows() != phi.d_in || a.cols() != phi.d_in)
    throw LinalgError("apply: argument has wrong shape");
  CMat out = CMat::Zero(phi.d_out, phi.d_out);
  for (int i = 0; i < phi.d_in; ++i)
    for (int j = 0; j < phi.d_in; ++j) out.noalias() += a(i, j) * phi.block(i, j);
  return out;
}

MatMap compose(const MatMap& phi, const MatMap& psi) {
  if (psi.d_out != phi.d_in) throw LinalgError("compose: dimension mismatch");
  const int d_in = psi.d_in;
  const int d_out = phi.d_out;
  CMat choi = CMat::Zero(d_in * d_out, d_in * d_out);
  for (int i = 0; i < d_in; ++i)
    for (int j = 0; j < d_in; ++j)
      choi.block(i * d_out, j * d_out, d_out, d_out) = choi::apply(phi, psi.block(i, j));
  return MatMap{d_in, d_out, choi};
}

MatMap adjoint_star(const MatMap& phi) {
  const int d_in = phi.d_out;
  const int d_out = phi.d_in;
  CMat choi(d_in * d_out, d_in * d_out);
  for (int s = 0; s < d_in; ++s)
    for (int p = 0; p < d_out; ++p)
      for (int t = 0; t < d_in; ++t)
        for (int q = 0; q < d_out; ++q)
          choi(s * d_out + p, t * d_out + q) = phi.choi(q * phi.d_out + t, p * phi.d_out + s);
  return MatMap{d_in, d_out, choi};
}

MatMap transpose_conj(const MatMap& phi) {
  return MatMap{phi.d_in, phi.d_out, phi.choi.transpose()};
}

double pairing(const MatMap& phi, const MatMap& psi) {
  if (phi.d_in != psi.d_in || phi.d_out != psi.d_out)
    throw LinalgError("pairing: dimension mismatch");
  return (phi.choi * psi.choi).trace().real();
}

CMat amplify(const MatMap& alpha, const CMat& x, int d_a) {
  const int d_b = alpha.d_in;
  if (x.rows() != d_a * d_b || x.cols() != d_a * d_b)
    throw LinalgError("amplify: argument has wrong shape");
  const int d_c = alpha.d_out;
  CMat out(d_a * d_c, d_a * d_c);
  for (int i = 0; i < d_a; ++i)
    for (int j = 0; j < d_a; ++j)
      out.block(i * d_c, j * d_c, d_c, d_c) =
          choi::apply(alpha, x.block(i * d_b, j * d_b, d_b, d_b));
  return out;
}

Projection range_projection(const MatMap& phi) {
  const CMat one = CMat::Identity(phi.d_in, phi.d_in);
  return range_projection_of(HermitianMatrix::make(choi::apply(phi, one)));
}

Projection support_projection(const MatMap& phi) {
  return range_projection(adjoint_star(phi));
}

MatMap sp_trace_padding(const MatMap& phi) {
  const CMat one = CMat::Identity(phi.d_in, phi.d_in);
  const CMat phi_of_one = choi::apply(phi, one);
  CMat choi = tensor(one, phi_of_one) + phi.choi;
  return MatMap{phi.d_in, phi.d_out, choi};
}

MatMap trace_normalized(const MatMap& phi) {
  const double tr = phi.choi.trace().real();
  if (tr <= 1e-12) return phi;
  return MatMap{phi.d_in, phi.d_out, phi.choi * (static_cast<double>(phi.d_in) / tr)};
}

}  // namespace choi
