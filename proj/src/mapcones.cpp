#include "choi/mapcones.hpp"

#include <cmath>
#include <stdexcept>

#include "choi/states.hpp"

namespace choi {

namespace {

MatMap scaled(const MatMap& phi, double w) {
  return MatMap{phi.d_in, phi.d_out, w * phi.choi};
}

MatMap sum(const MatMap& a, const MatMap& b) {
  return MatMap{a.d_in, a.d_out, a.choi + b.choi};
}

}  // namespace

MatMap random_cp_map(Rng& rng, int n) {
  const int k = 1 + rng.uniform_int(0, 2);
  std::vector<CMat> kraus;
  kraus.reserve(k);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n * k));
  for (int i = 0; i < k; ++i) kraus.push_back(scale * rng.ginibre(n, n));
  return map_from_kraus(kraus);
}

MatMap random_decomposable_map(Rng& rng, int n) {
  MatMap cp = random_cp_map(rng, n);
  MatMap co = random_cp_map(rng, n);
  MatMap t = transpose_map(n);
  const bool pre = rng.uniform() < 0.5;
  MatMap co_dressed = pre ? compose(co, t) : compose(t, co);
  const double lambda = rng.uniform(0.15, 0.85);
  return sum(scaled(cp, lambda), scaled(co_dressed, 1.0 - lambda));
}

ConeSpec builtin_cone(ConeName name, int n) {
  if (n < 2) throw LinalgError("builtin_cone: n must be at least 2");
  ConeSpec spec;
  spec.id = name;
  spec.dim_in = n;
  spec.dim_out = n;
  spec.symmetric = true;
  switch (name) {
    case ConeName::P:
      spec.name = "P";
      spec.closure = Closure::positive_closure;
      spec.generators = {identity_map(n), transpose_map(n)};
      spec.extreme_fixtures = {reduction_map(n)};
      if (n == 3) spec.extreme_fixtures.push_back(choi_map());
      break;
    case ConeName::CP:
      spec.name = "CP";
      spec.closure = Closure::cp_closure;
      spec.generators = {identity_map(n)};
      spec.extreme_fixtures = {singlet_map(n), identity_map(n)};
      break;
    case ConeName::coCP:
      spec.name = "coCP";
      spec.closure = Closure::cp_closure;
      spec.generators = {transpose_map(n)};
      spec.extreme_fixtures = {compose(transpose_map(n), singlet_map(n)), transpose_map(n)};
      break;
    case ConeName::SP: {
      spec.name = "SP";
      spec.closure = Closure::cp_closure;
      spec.generators = {trace_map(n)};
      CMat e11 = CMat::Zero(n, n);
      e11(0, 0) = 1.0;
      spec.extreme_fixtures = {trace_map(n), map_from_choi(n, n, tensor(e11, e11))};
      break;
    }
    case ConeName::PPT:
      spec.name = "PPT";
      spec.closure = Closure::cp_closure;
      spec.generators = {trace_map(n)};
      spec.extreme_fixtures = {trace_map(n)};
      if (n == 3) spec.extreme_fixtures.push_back(tiles_map());
      break;
    case ConeName::DEC:
      spec.name = "DEC";
      spec.closure = Closure::cp_closure;
      spec.generators = {identity_map(n), transpose_map(n)};
      spec.extreme_fixtures = {identity_map(n), transpose_map(n), singlet_map(n),
                               compose(transpose_map(n), singlet_map(n))};
      break;
    case ConeName::D2:
      spec.name = "D2";
      spec.closure = Closure::positive_closure;
      spec.generators = {d2_generator(n)};
      spec.extreme_fixtures = {d2_generator(n), compose(reduction_map(n), d2_generator(n))};
      break;
    default:
      throw LinalgError("builtin_cone: unknown cone");
  }
  return spec;
}

ConeSpec builtin_cone(const std::string& name, int n) {
  if (name == "P" || name == "p") return builtin_cone(ConeName::P, n);
  if (name == "CP" || name == "cp") return builtin_cone(ConeName::CP, n);
  if (name == "coCP" || name == "cocp") return builtin_cone(ConeName::coCP, n);
  if (name == "SP" || name == "sp") return builtin_cone(ConeName::SP, n);
  if (name == "PPT" || name == "ppt") return builtin_cone(ConeName::PPT, n);
  if (name == "DEC" || name == "dec") return builtin_cone(ConeName::DEC, n);
  if (name == "D2" || name == "d2") return builtin_cone(ConeName::D2, n);
  throw LinalgError("builtin_cone: unknown cone name \"" + name + "\"");
}

MatMap sample(const ConeSpec& cone, std::uint64_t seed) {
  Rng rng(seed);
  const int n = cone.dim_in;
  switch (cone.id) {
    case ConeName::P:
      return trace_normalized(random_decomposable_map(rng, n));
    case ConeName::CP:
      return trace_normalized(random_cp_map(rng, n));
    case ConeName::coCP:
      return trace_normalized(compose(transpose_map(n), random_cp_map(rng, n)));
    case ConeName::SP: {
      const int k = 1 + rng.uniform_int(0, 2);
      CMat choi = CMat::Zero(n * n, n * n);
      for (int i = 0; i < k; ++i) {
        CMat rho = rng.density(n, n);
        CMat b = rng.psd(n, n);
        choi += tensor(rho.transpose(), b / b.trace().real());
      }
      return trace_normalized(MatMap{n, n, choi});
    }
    case ConeName::PPT: {
      BipartiteState s = random_ppt_state(n, n, rng.bits());
      return trace_normalized(map_of_state(s));
    }
    case ConeName::DEC: {
      MatMap cp = random_cp_map(rng, n);
      MatMap co = compose(transpose_map(n), random_cp_map(rng, n));
      const double lambda = rng.uniform(0.2, 0.8);
      return trace_normalized(sum(scaled(trace_normalized(cp), lambda),
                                  scaled(trace_normalized(co), 1.0 - lambda)));
    }
    case ConeName::D2: {
      // One shared compression pair (e, f) per sample keeps the Choi rank of
      // the whole convex combination at most 2n.
      const int r = std::min(2, n);
      CMat e = rng.projection(n, r);
      CMat f = rng.projection(n, r);
      const int k = 1 + rng.uniform_int(0, 1);
      CMat choi = CMat::Zero(n * n, n * n);
      for (int i = 0; i < k; ++i) {
        MatMap beta = random_decomposable_map(rng, n);
        MatMap term = compose(ad(e), compose(beta, ad(f)));
        choi += rng.uniform(0.3, 1.0) * term.choi;
      }
      return trace_normalized(MatMap{n, n, choi});
    }
    default: {
      if (cone.generators.empty())
        throw LinalgError("sample: custom cone has no generators");
      CMat choi = CMat::Zero(cone.dim_in * cone.dim_out, cone.dim_in * cone.dim_out);
      for (const MatMap& g : cone.generators) {
        MatMap alpha = cone.closure == Closure::cp_closure
                           ? random_cp_map(rng, g.d_out)
                           : random_decomposable_map(rng, g.d_out);
        MatMap beta = cone.closure == Closure::cp_closure
                          ? random_cp_map(rng, g.d_in)
                          : random_decomposable_map(rng, g.d_in);
        MatMap term = compose(alpha, compose(g, beta));
        choi += rng.uniform(0.2, 1.0) * term.choi;
      }
      return trace_normalized(MatMap{cone.dim_in, cone.dim_out, choi});
    }
  }
}

MatMap normalize_ad(const CMat& a) {
  if (a.norm() < 1e-14) throw LinalgError("normalize_ad: zero matrix");
  CMat aa = a * a.adjoint();
  Projection e = range_projection_of(HermitianMatrix::make(aa));
  return ad(e.mat());
}

ConeAnalysis k_rank(const ConeSpec& cone) {
  const int n = cone.dim_in;
  ConeAnalysis out;
  switch (cone.id) {
    case ConeName::P:
      out.k_rank = n;
      out.notes = "identity map is positive, so Ad e for full-rank e lies in the cone";
      return out;
    case ConeName::CP:
      out.k_rank = n;
      out.notes = "identity map is completely positive";
      return out;
    case ConeName::coCP:
      out.k_rank = 1;
      out.notes = "t o Ad v is completely positive only for rank-1 v";
      return out;
    case ConeName::SP:
      out.k_rank = 1;
      out.notes = "Ad v has separable Choi matrix only for rank-1 v";
      return out;
    case ConeName::PPT:
      out.k_rank = 1;
      out.notes = "contained in coCP, which admits only rank-1 Ad maps";
      return out;
    case ConeName::DEC:
      out.k_rank = n;
      out.notes = "contains CP";
      return out;
    case ConeName::D2:
      out.k_rank = std::min(2, n);
      out.notes = "generated by Ad e with rank(e) = min(2, n)";
      return out;
    default:
      break;
  }
  // Custom cone: scan generators for Ad-type maps (PSD rank-1 Choi); the rank
  // of the underlying operator is the Schmidt rank of the Choi vector.
  int best = 0;
  for (const MatMap& g : cone.generators) {
    EighResult eig = eigh(HermitianMatrix::make(g.choi));
    const double top = eig.eigenvalues(eig.eigenvalues.size() - 1);
    if (top <= 0) continue;
    bool rank_one = true;
    for (Eigen::Index i = 0; i + 1 < eig.eigenvalues.size(); ++i)
      if (std::abs(eig.eigenvalues(i)) > 1e-9 * top) rank_one = false;
    if (!rank_one) continue;
    CVec v = eig.eigenvectors.col(eig.eigenvalues.size() - 1);
    CMat reshaped(g.d_in, g.d_out);
    for (int i = 0; i < g.d_in; ++i)
      for (int s = 0; s < g.d_out; ++s) reshaped(i, s) = v(i * g.d_out + s);
    Eigen::JacobiSVD<CMat> svd(reshaped);
    int r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > 1e-9 * svd.singularValues()(0)) ++r;
    best = std::max(best, r);
  }
  if (best == 0) {
    out.k_rank = 1;
    out.notes = "no Ad-type generator found; rank-1 Ad maps are super-positive and lie in "
                "every mapping cone";
  } else {
    out.k_rank = best;
    out.notes = "largest Ad-type generator rank";
  }
  return out;
}

MatMap reduction_map(int n) {
  MatMap out = trace_map(n);
  out.choi -= identity_map(n).choi;
  return out;
}

MatMap choi_map() {
  CMat choi = CMat::Zero(9, 9);
  auto block = [&choi](int i, int j) { return choi.block(3 * i, 3 * j, 3, 3); };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CMat b = CMat::Zero(3, 3);
      if (i == j) {
        b(i, i) = 1.0;
        b((i + 1) % 3, (i + 1) % 3) = 1.0;
      } else {
        b(i, j) = -1.0;
      }
      block(i, j) = b;
    }
  return MatMap{3, 3, choi};
}

MatMap singlet_map(int n) {
  CVec v = CVec::Zero(n * n);
  const double s = 1.0 / std::sqrt(2.0);
  v(0 * n + 1) = s;
  v(1 * n + 0) = -s;
  return MatMap{n, n, v * v.adjoint()};
}

MatMap tiles_map() {
  return trace_normalized(map_of_state(tiles_upb_state()));
}

MatMap d2_generator(int n) {
  CMat e = CMat::Zero(n, n);
  const int r = std::min(2, n);
  for (int i = 0; i < r; ++i) e(i, i) = 1.0;
  return ad(e);
}

}  // namespace choi
