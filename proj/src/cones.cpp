#include "choi/cones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "choi/io.hpp"
#include "choi/rng.hpp"

namespace choi {

namespace {

double scale_of(const CMat& c) { return std::max(1.0, c.norm()); }

CMat choi_gamma(const MatMap& phi) {
  return partial_transpose(phi.choi, phi.d_in, phi.d_out, Side::second);
}

nlohmann::json eigen_witness(const char* kind, double eigenvalue, const CVec& vec) {
  return {{"kind", kind}, {"eigenvalue", eigenvalue}, {"vector", vector_to_json(vec)}};
}

nlohmann::json spectrum_json(const CMat& h) {
  EighResult e = eigh(h);
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < e.eigenvalues.size(); ++i) out.push_back(e.eigenvalues(i));
  return out;
}

CMat psd_clip(const CMat& h) {
  EighResult e = eigh(h);
  CMat out = CMat::Zero(h.rows(), h.cols());
  for (Eigen::Index k = 0; k < e.eigenvalues.size(); ++k) {
    if (e.eigenvalues(k) > 0.0)
      out += e.eigenvalues(k) * (e.eigenvectors.col(k) * e.eigenvectors.col(k).adjoint());
  }
  return out;
}

}  // namespace

Verdict test_cp(const MatMap& phi, const TestConfig& cfg) {
  Verdict v;
  v.evidence.seed = cfg.seed;
  v.evidence.samples_tested = 1;
  PsdResult r = is_psd(phi.choi, cfg.psd_tol);
  v.evidence.min_value_seen = r.min_eigenvalue;
  if (r.psd) {
    v.status = Status::member;
    v.certificate = {{"kind", "choi_psd"},
                     {"min_eigenvalue", r.min_eigenvalue},
                     {"spectral_norm", r.spectral_norm}};
  } else {
    v.status = Status::non_member;
    v.witness = eigen_witness("choi_negative_eigenvector", r.min_eigenvalue, *r.witness);
  }
  return v;
}

Verdict test_cocp(const MatMap& phi, const TestConfig& cfg) {
  Verdict v;
  v.evidence.seed = cfg.seed;
  v.evidence.samples_tested = 1;
  PsdResult r = is_psd(choi_gamma(phi), cfg.psd_tol);
  v.evidence.min_value_seen = r.min_eigenvalue;
  if (r.psd) {
    v.status = Status::member;
    v.certificate = {{"kind", "choi_partial_transpose_psd"},
                     {"min_eigenvalue", r.min_eigenvalue},
                     {"spectral_norm", r.spectral_norm}};
  } else {
    v.status = Status::non_member;
    v.witness = eigen_witness("npt_eigenvector", r.min_eigenvalue, *r.witness);
  }
  return v;
}

Verdict test_ppt_map(const MatMap& phi, const TestConfig& cfg) {
  Verdict v;
  v.evidence.seed = cfg.seed;
  v.evidence.samples_tested = 2;
  PsdResult rc = is_psd(phi.choi, cfg.psd_tol);
  PsdResult rg = is_psd(choi_gamma(phi), cfg.psd_tol);
  v.evidence.min_value_seen = std::min(rc.min_eigenvalue, rg.min_eigenvalue);
  if (rc.psd && rg.psd) {
    v.status = Status::member;
    v.certificate = {{"kind", "ppt_spectra"},
                     {"choi_spectrum", spectrum_json(phi.choi)},
                     {"partial_transpose_spectrum", spectrum_json(choi_gamma(phi))}};
  } else {
    v.status = Status::non_member;
    if (!rc.psd) {
      v.witness = eigen_witness("choi_negative_eigenvector", rc.min_eigenvalue, *rc.witness);
    } else {
      v.witness = eigen_witness("npt_eigenvector", rg.min_eigenvalue, *rg.witness);
    }
  }
  return v;
}

namespace {

struct BlockMin {
  double value = 0.0;
  CVec x;  // first-factor vector: <x (x) y, C (x (x) y)> = value
  CVec y;
};

// Alternating minimization of q(x, y) from one start. Internally z = conj(x)
// so that q = y^* phi(z z^*) y; each half-step is exact (bottom eigenvector).
BlockMin block_descend(const MatMap& phi, CVec z, CVec y) {
  double value = std::numeric_limits<double>::infinity();
  for (int round = 0; round < 80; ++round) {
    EighResult my = eigh(choi::apply(phi, z * z.adjoint()));
    y = my.eigenvectors.col(0);
    CMat b(phi.d_in, phi.d_in);
    for (int i = 0; i < phi.d_in; ++i)
      for (int j = 0; j < phi.d_in; ++j)
        b(i, j) = (y.adjoint() * phi.block(i, j) * y)(0, 0);
    EighResult bz = eigh(b);
    z = bz.eigenvectors.col(0).conjugate();
    const double q = bz.eigenvalues(0);
    if (value - q <= 1e-14 * std::max(1.0, std::abs(q))) {
      value = std::min(value, q);
      break;
    }
    value = q;
  }
  return BlockMin{value, z.conjugate(), y};
}

}  // namespace

Verdict test_positive(const MatMap& phi, const TestConfig& cfg) {
  Verdict v;
  v.evidence.seed = cfg.seed;
  Rng rng(derive_seed(cfg.seed, "positive", 0));
  const int starts = std::max(1, cfg.multistarts);

  std::optional<BlockMin> best;
  for (int s = 0; s < starts; ++s) {
    CVec z, y;
    if (s == 0) {
      // Schmidt-seeded start: the product pair closest to the bottom
      // eigenvector of the Choi matrix.
      EighResult e = eigh(phi.choi);
      CVec bottom = e.eigenvectors.col(0);
      CMat reshaped(phi.d_in, phi.d_out);
      for (int i = 0; i < phi.d_in; ++i)
        for (int t = 0; t < phi.d_out; ++t) reshaped(i, t) = bottom(i * phi.d_out + t);
      Eigen::JacobiSVD<CMat> svd(reshaped, Eigen::ComputeThinU | Eigen::ComputeThinV);
      CVec x0 = svd.matrixU().col(0);
      z = x0.conjugate();
      y = svd.matrixV().col(0).conjugate();
    } else {
      z = rng.unit_vector(phi.d_in);
      y = rng.unit_vector(phi.d_out);
    }
    BlockMin m = block_descend(phi, z, y);
    if (!best || m.value < best->value) best = m;
  }

  v.evidence.samples_tested = starts;
  v.evidence.min_value_seen = best->value;
  if (best->value < -cfg.psd_tol * scale_of(phi.choi)) {
    v.status = Status::non_member;
    v.witness = {{"kind", "negative_block_value"},
                 {"value", best->value},
                 {"x", vector_to_json(best->x)},
                 {"y", vector_to_json(best->y)}};
  } else {
    v.status = Status::undetermined;
  }
  return v;
}

SplitResult decompose_cp_cocp(const CMat& c, int d_in, int d_out, double tol, int max_iters) {
  auto gamma = [&](const CMat& x) { return partial_transpose(x, d_in, d_out, Side::second); };
  SplitResult r;
  r.p = psd_clip(0.5 * (c + c.adjoint()));
  r.q = CMat::Zero(c.rows(), c.cols());
  r.residual = (c - r.p).norm();
  if (r.residual <= tol) {
    r.converged = true;
    return r;
  }
  // Douglas-Rachford between the affine set {P + Gamma(Q) = C} and the cone
  // PSD x PSD. Projecting onto the affine set shifts both blocks by half the
  // split defect (Gamma is a self-adjoint involution).
  CMat xp = r.p;
  CMat xq = r.q;
  while (r.iterations < max_iters) {
    ++r.iterations;
    CMat delta = 0.5 * (c - xp - gamma(xq));
    CMat ap = xp + delta;
    CMat aq = xq + gamma(delta);
    CMat bp = psd_clip(2.0 * ap - xp);
    CMat bq = psd_clip(2.0 * aq - xq);
    xp += bp - ap;
    xq += bq - aq;
    // Affine-feasible candidate; its distance to the cone is the residual.
    CMat d2 = 0.5 * (c - xp - gamma(xq));
    CMat cp = xp + d2;
    CMat cq = xq + gamma(d2);
    CMat pp = psd_clip(cp);
    CMat qq = psd_clip(cq);
    r.p = pp;
    r.q = qq;
    r.residual = std::sqrt((pp - cp).squaredNorm() + (qq - cq).squaredNorm());
    if (r.residual <= tol) {
      r.converged = true;
      break;
    }
  }
  return r;
}

Verdict test_decomposable(const MatMap& phi, const TestConfig& cfg) {
  Verdict v;
  v.evidence.seed = cfg.seed;
  const CMat& c = phi.choi;
  if (c.norm() <= 1e-14) {
    v.status = Status::member;
    v.certificate = {{"kind", "cp_cocp_decomposition"},
                     {"p", matrix_to_json(CMat::Zero(c.rows(), c.cols()))},
                     {"q", matrix_to_json(CMat::Zero(c.rows(), c.cols()))},
                     {"residual", 0.0},
                     {"iterations", 0}};
    return v;
  }

  SplitResult d = decompose_cp_cocp(c, phi.d_in, phi.d_out, cfg.sep_tol * c.norm(), 2000);
  v.evidence.samples_tested = d.iterations;
  v.evidence.min_value_seen = d.residual;
  if (d.converged) {
    v.status = Status::member;
    v.certificate = {{"kind", "cp_cocp_decomposition"},
                     {"p", matrix_to_json(d.p)},
                     {"q", matrix_to_json(d.q)},
                     {"residual", d.residual},
                     {"iterations", d.iterations}};
    return v;
  }

  // The splitter stalled: search the PPT witness pool. A strictly negative pairing
  // against a PPT map refutes decomposability.
  double best = std::numeric_limits<double>::infinity();
  std::optional<MatMap> best_map;
  std::string source;
  long probes = 0;
  if (phi.d_in == phi.d_out) {
    ConeSpec ppt = builtin_cone(ConeName::PPT, phi.d_in);
    const int pool = std::max(64, cfg.multistarts);
    for (int k = 0; k < pool; ++k) {
      MatMap psi = sample(ppt, derive_seed(cfg.seed, "decomposable/witness", k));
      const double val = pairing(phi, psi);
      ++probes;
      if (val < best) {
        best = val;
        best_map = psi;
        source = "sample:" + std::to_string(k);
      }
    }
    for (std::size_t i = 0; i < ppt.extreme_fixtures.size(); ++i) {
      const double val = pairing(phi, ppt.extreme_fixtures[i]);
      ++probes;
      if (val < best) {
        best = val;
        best_map = ppt.extreme_fixtures[i];
        source = "fixture:" + std::to_string(i);
      }
    }
  }

  v.evidence.samples_tested = d.iterations + probes;
  if (best_map && best < -cfg.psd_tol * scale_of(c)) {
    v.status = Status::non_member;
    v.evidence.min_value_seen = best;
    v.witness = {{"kind", "dual_violation"},
                 {"cone", "PPT"},
                 {"pairing", best},
                 {"source", source},
                 {"map", map_to_json(*best_map)}};
  } else {
    v.status = Status::undetermined;
    v.evidence.min_value_seen = probes > 0 ? best : d.residual;
  }
  return v;
}

namespace {

// Gilbert run (possibly in a compressed subspace) turned into a lifted
// separable-ensemble certificate; nothing when the budget misses sep_tol.
std::optional<nlohmann::json> separable_ensemble_certificate(const CMat& rho, int d_a, int d_b,
                                                             const CMat& v_iso, const CMat& w_iso,
                                                             double trace_scale,
                                                             const TestConfig& cfg, int budget) {
  const int ra = static_cast<int>(v_iso.cols());
  const int rb = static_cast<int>(w_iso.cols());
  CMat iso = tensor(v_iso, w_iso);
  CMat rho_c = iso.adjoint() * rho * iso;
  const double trc = rho_c.trace().real();
  if (trc <= 0.5) return std::nullopt;
  rho_c /= trc;

  TestConfig sub = cfg;
  sub.gilbert_max_iters = budget;
  sub.seed = derive_seed(cfg.seed, "superpositive/ensemble", 0);
  GilbertResult g = gilbert_separable_distance(rho_c, ra, rb, sub);

  CMat y = CMat::Zero(rho.rows(), rho.cols());
  nlohmann::json atoms = nlohmann::json::array();
  for (const GilbertAtom& atom : g.ensemble) {
    CVec a = v_iso * atom.a;
    CVec b = w_iso * atom.b;
    CVec ab = tensor(a, b);
    y += atom.weight * (ab * ab.adjoint());
    atoms.push_back(
        {{"weight", atom.weight}, {"a", vector_to_json(a)}, {"b", vector_to_json(b)}});
  }
  const double dist = (rho - y).norm();
  if (dist > cfg.sep_tol) return std::nullopt;
  (void)d_a;
  (void)d_b;
  return nlohmann::json{{"kind", "separable_ensemble"},
                        {"distance", dist},
                        {"iterations", g.iterations},
                        {"trace_scale", trace_scale},
                        {"ensemble", atoms}};
}

// Isometry onto the eigenvalue-support of a PSD marginal.
CMat support_isometry(const CMat& marginal) {
  EighResult e = eigh(marginal);
  const Eigen::Index n = e.eigenvalues.size();
  const double cut = 1e-11 * std::max(1.0, e.eigenvalues(n - 1));
  int rank = 0;
  for (Eigen::Index k = 0; k < n; ++k)
    if (e.eigenvalues(k) > cut) ++rank;
  CMat iso(n, std::max(rank, 1));
  if (rank == 0) {
    iso.setZero();
    iso(0, 0) = 1.0;
    return iso;
  }
  for (int k = 0; k < rank; ++k) iso.col(k) = e.eigenvectors.col(n - 1 - k);
  return iso;
}

}  // namespace

Verdict test_superpositive(const MatMap& phi, const TestConfig& cfg) {
  Verdict v;
  v.evidence.seed = cfg.seed;
  v.evidence.samples_tested = 1;
  const CMat& c = phi.choi;
  const int da = phi.d_in;
  const int db = phi.d_out;

  if (c.norm() <= 1e-14) {
    v.status = Status::member;
    v.certificate = {{"kind", "zero_map"}};
    return v;
  }

  PsdResult cp = is_psd(c, cfg.psd_tol);
  v.evidence.min_value_seen = cp.min_eigenvalue;
  if (!cp.psd) {
    v.status = Status::non_member;
    v.witness = eigen_witness("choi_negative_eigenvector", cp.min_eigenvalue, *cp.witness);
    return v;
  }
  PsdResult pt = is_psd(partial_transpose(c, da, db, Side::second), cfg.psd_tol);
  if (!pt.psd) {
    v.status = Status::non_member;
    v.evidence.min_value_seen = pt.min_eigenvalue;
    v.witness = eigen_witness("npt_eigenvector", pt.min_eigenvalue, *pt.witness);
    return v;
  }

  const double tr = c.trace().real();
  CMat rho = c / tr;
  const int ensemble_budget = std::min(cfg.gilbert_max_iters, 4000);

  auto shortcut_member = [&](const CMat& v_iso, const CMat& w_iso, const char* fallback_kind,
                             nlohmann::json fallback_extra) {
    Verdict out = v;
    out.status = Status::member;
    auto cert =
        separable_ensemble_certificate(rho, da, db, v_iso, w_iso, tr, cfg, ensemble_budget);
    if (cert) {
      (*cert)["route"] = fallback_kind;
      if (fallback_extra.contains("compressed_dims"))
        (*cert)["compressed_dims"] = fallback_extra["compressed_dims"];
      out.certificate = std::move(*cert);
    } else {
      fallback_extra["kind"] = fallback_kind;
      fallback_extra["min_choi_eigenvalue"] = cp.min_eigenvalue;
      fallback_extra["min_pt_eigenvalue"] = pt.min_eigenvalue;
      out.certificate = std::move(fallback_extra);
    }
    return out;
  };

  CMat m1 = CMat::Zero(da, da);
  CMat m2 = CMat::Zero(db, db);
  for (int i = 0; i < da; ++i) {
    for (int j = 0; j < da; ++j) m1(i, j) = rho.block(i * db, j * db, db, db).trace();
    m2 += rho.block(i * db, i * db, db, db);
  }

  // A state equal to the product of its marginals gets an explicit
  // eigen-ensemble without any search.
  const double product_resid = (rho - tensor(m1, m2)).norm();
  if (product_resid <= 1e-10 * scale_of(rho)) {
    EighResult e1 = eigh(m1);
    EighResult e2 = eigh(m2);
    nlohmann::json atoms = nlohmann::json::array();
    for (Eigen::Index k = 0; k < e1.eigenvalues.size(); ++k) {
      for (Eigen::Index l = 0; l < e2.eigenvalues.size(); ++l) {
        const double w = e1.eigenvalues(k) * e2.eigenvalues(l);
        if (w <= 1e-14) continue;
        atoms.push_back({{"weight", w},
                         {"a", vector_to_json(e1.eigenvectors.col(k))},
                         {"b", vector_to_json(e2.eigenvectors.col(l))}});
      }
    }
    v.status = Status::member;
    v.certificate = {{"kind", "separable_ensemble"},
                     {"distance", product_resid},
                     {"iterations", 0},
                     {"trace_scale", tr},
                     {"ensemble", atoms}};
    return v;
  }

  // Exact decision in small dimension products: PSD + PPT implies separable
  // when d_in * d_out <= 6, and both spectra were just checked.
  if (da * db <= 6) {
    return shortcut_member(CMat::Identity(da, da), CMat::Identity(db, db),
                           "ppt_dimension_shortcut", nlohmann::json::object());
  }

  // Compression onto the marginal supports: a PSD state lives inside
  // supp(Tr_2) (x) supp(Tr_1), and the compressed state inherits PSD and PPT.
  // When the compressed dimensions fit the exact regime the decision lifts.
  CMat viso = support_isometry(m1);
  CMat wiso = support_isometry(m2);
  const int ra = static_cast<int>(viso.cols());
  const int rb = static_cast<int>(wiso.cols());
  if ((ra < da || rb < db) && ra * rb <= 6) {
    CMat proj = tensor(viso * viso.adjoint(), wiso * wiso.adjoint());
    const double resid = (rho - proj * rho * proj).norm();
    if (resid <= 1e-8 * scale_of(rho)) {
      nlohmann::json extra = {{"compressed_dims", nlohmann::json::array({ra, rb})},
                              {"isometry_in", matrix_to_json(viso)},
                              {"isometry_out", matrix_to_json(wiso)},
                              {"compression_residual", resid}};
      return shortcut_member(viso, wiso, "compressed_ppt_shortcut", std::move(extra));
    }
  }

  // General case: distance to the separable set.
  GilbertResult g = gilbert_separable_distance(rho, da, db, cfg);
  v.evidence.samples_tested = g.iterations;
  v.evidence.min_value_seen = g.distance;
  if (g.distance <= cfg.sep_tol) {
    nlohmann::json atoms = nlohmann::json::array();
    for (const GilbertAtom& atom : g.ensemble) {
      atoms.push_back(
          {{"weight", atom.weight}, {"a", vector_to_json(atom.a)}, {"b", vector_to_json(atom.b)}});
    }
    v.status = Status::member;
    v.certificate = {{"kind", "separable_ensemble"},
                     {"distance", g.distance},
                     {"iterations", g.iterations},
                     {"trace_scale", tr},
                     {"ensemble", atoms}};
    return v;
  }

  // Witness search. The map is PPT at this point, so decomposable witnesses
  // cannot pair negatively; only non-decomposable positive maps can. The pool
  // rotates the known non-decomposable fixtures on M_3 by local unitaries and
  // polishes the best rotation with Cayley steps.
  double best = std::numeric_limits<double>::infinity();
  std::optional<MatMap> best_map;
  std::string best_source;
  long probes = 0;
  if (da == 3 && db == 3) {
    std::vector<std::pair<std::string, MatMap>> bases;
    bases.emplace_back("choi_map", choi_map());
    bases.emplace_back("choi_map_pre_t", compose(choi_map(), transpose_map(3)));
    bases.emplace_back("choi_map_post_t", compose(transpose_map(3), choi_map()));
    bases.emplace_back("choi_map_conj", transpose_conj(choi_map()));

    Rng rng(derive_seed(cfg.seed, "superpositive/witness", 0));
    const CMat id3 = CMat::Identity(3, 3);
    int best_base = -1;
    CMat best_a = id3, best_b = id3;
    auto probe = [&](int base_index, const CMat& a_rot, const CMat& b_rot,
                     const std::string& src) {
      const auto& base = bases[static_cast<std::size_t>(base_index)].second;
      MatMap rotated = compose(ad(a_rot), compose(base, ad(b_rot)));
      const double val = pairing(phi, rotated);
      ++probes;
      if (val < best) {
        best = val;
        best_map = rotated;
        best_source = src;
        best_base = base_index;
        best_a = a_rot;
        best_b = b_rot;
      }
    };

    for (std::size_t i = 0; i < bases.size(); ++i)
      probe(static_cast<int>(i), id3, id3, bases[i].first);
    const int rotations = std::max(8, cfg.multistarts / 2);
    for (int k = 0; k < rotations; ++k) {
      CMat a_rot = rng.unitary(3);
      CMat b_rot = rng.unitary(3);
      for (std::size_t i = 0; i < bases.size(); ++i)
        probe(static_cast<int>(i), a_rot, b_rot,
              bases[i].first + ":rotation" + std::to_string(k));
    }

    // Cayley polish of the best rotation found.
    double eps = 0.25;
    for (int step = 0; step < 60 && best_base >= 0; ++step) {
      CMat h = rng.hermitian(3);
      CMat s = Complex(0.0, 0.5 * eps) * h;
      CMat cay = (id3 - s).inverse() * (id3 + s);
      CMat a_try = (step % 2 == 0) ? CMat(best_a * cay) : best_a;
      CMat b_try = (step % 2 == 0) ? best_b : CMat(cay * best_b);
      const double before = best;
      probe(best_base, a_try, b_try, best_source + ":polish" + std::to_string(step));
      if (best >= before) {
        eps *= 0.7;
        if (eps < 1e-3) eps = 0.25;
      }
    }
  }

  v.evidence.samples_tested = g.iterations + probes;
  if (best_map && best < -cfg.psd_tol * scale_of(c)) {
    v.status = Status::non_member;
    v.evidence.min_value_seen = best;
    v.witness = {{"kind", "dual_violation"},
                 {"cone", "P"},
                 {"pairing", best},
                 {"source", best_source},
                 {"map", map_to_json(*best_map)}};
  } else {
    v.status = Status::undetermined;
    v.evidence.min_value_seen = probes > 0 ? std::min(best, g.distance) : g.distance;
  }
  return v;
}

Verdict test_dual_membership(const MatMap& phi, const ConeSpec& cone, const TestConfig& cfg,
                             int samples) {
  if (cone.dim_in != phi.d_in || cone.dim_out != phi.d_out) {
    throw LinalgError("test_dual_membership: cone is " + std::to_string(cone.dim_in) + "x" +
                      std::to_string(cone.dim_out) + ", map is " + std::to_string(phi.d_in) +
                      "x" + std::to_string(phi.d_out));
  }
  Verdict v;
  v.evidence.seed = cfg.seed;
  double best = std::numeric_limits<double>::infinity();
  std::optional<MatMap> best_map;
  std::string source;
  long tested = 0;

  for (int k = 0; k < samples; ++k) {
    MatMap psi = sample(cone, derive_seed(cfg.seed, "dual/" + cone.name, k));
    const double val = pairing(phi, psi);
    ++tested;
    if (val < best) {
      best = val;
      best_map = psi;
      source = "sample:" + std::to_string(k);
    }
  }
  for (std::size_t i = 0; i < cone.extreme_fixtures.size(); ++i) {
    const double val = pairing(phi, cone.extreme_fixtures[i]);
    ++tested;
    if (val < best) {
      best = val;
      best_map = cone.extreme_fixtures[i];
      source = "fixture:" + std::to_string(i);
    }
  }

  v.evidence.samples_tested = tested;
  v.evidence.min_value_seen = tested > 0 ? best : 0.0;
  if (best_map && best < -cfg.psd_tol * scale_of(phi.choi)) {
    v.status = Status::non_member;
    v.witness = {{"kind", "dual_violation"},
                 {"cone", cone.name},
                 {"pairing", best},
                 {"source", source},
                 {"map", map_to_json(*best_map)}};
  } else {
    v.status = Status::undetermined;
  }
  return v;
}

}  // namespace choi
