#include "choi/gilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "choi/rng.hpp"

namespace choi {

namespace {

double real_inner(const CMat& a, const CMat& b) {
  return (a.adjoint() * b).trace().real();
}

CVec top_eigenvector(const CMat& h) {
  Eigen::SelfAdjointEigenSolver<CMat> solver;
  // computeDirect has closed forms for the 2x2 and 3x3 cases in the hot path.
  if (h.rows() <= 3)
    solver.computeDirect(CMat(0.5 * (h + h.adjoint())));
  else
    solver.compute(0.5 * (h + h.adjoint()));
  return solver.eigenvectors().col(h.rows() - 1);
}

struct Oracle {
  const CMat* g;
  int d_a, d_b;

  // <G, aa* (x) bb*> = (a (x) b)^* G (a (x) b)
  double value(const CVec& a, const CVec& b) const {
    CVec ab = tensor_vec(a, b);
    return (ab.adjoint() * (*g) * ab)(0, 0).real();
  }

  static CVec tensor_vec(const CVec& a, const CVec& b) {
    CVec out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
      out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
  }

  // For fixed a, the quadratic form in b is b^* M b with
  // M = sum_ij conj(a_i) a_j G_ij.
  CMat contract_first(const CVec& a) const {
    CMat m = CMat::Zero(d_b, d_b);
    for (int i = 0; i < d_a; ++i)
      for (int j = 0; j < d_a; ++j)
        m.noalias() += std::conj(a(i)) * a(j) * g->block(i * d_b, j * d_b, d_b, d_b);
    return m;
  }

  // For fixed b, the form in a is a^* N a with N_ij = b^* G_ij b.
  CMat contract_second(const CVec& b) const {
    CMat n = CMat::Zero(d_a, d_a);
    for (int i = 0; i < d_a; ++i)
      for (int j = 0; j < d_a; ++j)
        n(i, j) = (b.adjoint() * g->block(i * d_b, j * d_b, d_b, d_b) * b)(0, 0);
    return n;
  }

  // Alternating maximization from one start pair.
  double ascend(CVec& a, CVec& b, int rounds = 12) const {
    double value_prev = value(a, b);
    for (int round = 0; round < rounds; ++round) {
      b = top_eigenvector(contract_first(a));
      a = top_eigenvector(contract_second(b));
      const double v = value(a, b);
      if (v - value_prev <= 1e-14 * std::max(1.0, std::abs(v))) return v;
      value_prev = v;
    }
    return value_prev;
  }

  // Best product pair over the warm start plus `fresh` random restarts.
  double best(CVec& a, CVec& b, int fresh, Rng& rng, int rounds = 12) const {
    double best_value = ascend(a, b, rounds);
    for (int s = 0; s < fresh; ++s) {
      CVec a2 = rng.unit_vector(d_a);
      CVec b2 = rng.unit_vector(d_b);
      const double v = ascend(a2, b2, rounds);
      if (v > best_value) {
        best_value = v;
        a = a2;
        b = b2;
      }
    }
    return best_value;
  }
};

// Exact product decomposition of a separable two-qubit state. The spin-flip
// form tau_jm = x_j^T (sy (x) sy) x_m over subnormalized eigenvectors x_j is
// complex symmetric; diagonalizing it, closing the resulting phase
// quadrilateral, and mixing with a real Hadamard yields four pure states with
// vanishing spin-flip overlap, i.e. product states. Returns an empty list for
// entangled input or when the construction loses accuracy; the caller falls
// back to the iterative loop.
std::vector<GilbertAtom> two_qubit_product_decomposition(const CMat& rho) {
  Eigen::SelfAdjointEigenSolver<CMat> es(rho);
  CMat xcols(4, 4);
  for (int j = 0; j < 4; ++j)
    xcols.col(j) = std::sqrt(std::max(0.0, es.eigenvalues()(j))) * es.eigenvectors().col(j);

  CMat flip = CMat::Zero(4, 4);
  flip(0, 3) = -1.0;
  flip(1, 2) = 1.0;
  flip(2, 1) = 1.0;
  flip(3, 0) = -1.0;
  CMat tau = xcols.transpose() * flip * xcols;

  // Takagi tau = W diag(c) W^T through the real symmetric embedding
  // [[Re, Im], [Im, -Re]]: a +c eigenvector (p, q) gives a column w = p + iq
  // with tau conj(w) = c w, while i w lands in the -c eigenspace. Complex
  // Gram-Schmidt dedupes the w / i w ambiguity inside the zero block.
  Eigen::MatrixXd embed(8, 8);
  embed.topLeftCorner(4, 4) = tau.real();
  embed.topRightCorner(4, 4) = tau.imag();
  embed.bottomLeftCorner(4, 4) = tau.imag();
  embed.bottomRightCorner(4, 4) = -tau.real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> et(embed);
  CMat w = CMat::Zero(4, 4);
  Eigen::Vector4d c = Eigen::Vector4d::Zero();
  int found = 0;
  for (int r = 7; r >= 0 && found < 4; --r) {
    CVec cand = et.eigenvectors().col(r).head<4>() +
                std::complex<double>(0.0, 1.0) * et.eigenvectors().col(r).tail<4>();
    for (int j = 0; j < found; ++j) cand -= w.col(j) * w.col(j).dot(cand);
    const double norm = cand.norm();
    if (norm < 1e-3) continue;
    w.col(found) = cand / norm;
    c(found) = std::max(0.0, et.eigenvalues()(r));
    ++found;
  }
  if (found < 4) return {};

  // No closed phase polygon exists when one side dominates: entangled input.
  if (c(0) > c(1) + c(2) + c(3) + 1e-9) return {};
  const double s = c(2) + c(3);
  double phi1 = 0.0, phi23 = 0.0;
  if (c(0) > 1e-14) {
    if (c(1) > 1e-14) {
      const double cosphi =
          std::clamp((s * s - c(0) * c(0) - c(1) * c(1)) / (2.0 * c(0) * c(1)), -1.0, 1.0);
      phi1 = std::acos(cosphi);
    }
    const std::complex<double> rem =
        -(c(0) + c(1) * std::exp(std::complex<double>(0.0, phi1)));
    if (std::abs(rem) > 1e-14) phi23 = std::arg(rem);
  }
  const Eigen::Vector4d phi(0.0, phi1, phi23, phi23);

  // Rows of the Hadamard square to 1/4, so each mixed state's spin-flip
  // overlap is the closed quadrilateral sum.
  Eigen::Matrix4d had;
  had << 1, 1, 1, 1, 1, 1, -1, -1, 1, -1, 1, -1, 1, -1, -1, 1;
  had *= 0.5;
  CMat z = xcols * w.conjugate();
  CMat mix = CMat::Zero(4, 4);
  for (int k = 0; k < 4; ++k)
    for (int j = 0; j < 4; ++j)
      mix.col(k) += had(k, j) * std::exp(std::complex<double>(0.0, 0.5 * phi(j))) * z.col(j);

  std::vector<GilbertAtom> out;
  for (int k = 0; k < 4; ++k) {
    if (mix.col(k).squaredNorm() < 1e-12) continue;
    Eigen::Matrix2cd m;
    m << mix(0, k), mix(1, k), mix(2, k), mix(3, k);
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    CVec a = svd.matrixU().col(0);
    CVec b = svd.matrixV().col(0).conjugate();
    const double sv = svd.singularValues()(0);
    out.push_back({sv * sv, a, b});
  }
  if (out.empty()) return {};
  double wsum = 0.0;
  for (const GilbertAtom& at : out) wsum += at.weight;
  CMat approx = CMat::Zero(4, 4);
  for (GilbertAtom& at : out) {
    at.weight /= wsum;
    CVec ab = Oracle::tensor_vec(at.a, at.b);
    approx.noalias() += at.weight * (ab * ab.adjoint());
  }
  if ((rho - approx).norm() > 1e-7) return {};
  return out;
}

}  // namespace

GilbertResult gilbert_separable_distance(const CMat& x, int d_a, int d_b,
                                         const TestConfig& cfg) {
  const int d = d_a * d_b;
  if (x.rows() != d || x.cols() != d)
    throw LinalgError("gilbert_separable_distance: matrix has wrong shape");
  if (hermiticity_defect(x) > 1e-8)
    throw LinalgError("gilbert_separable_distance: input is not Hermitian");
  if (std::abs(x.trace().real() - 1.0) > 1e-8)
    throw LinalgError("gilbert_separable_distance: input must have unit trace");
  {
    PsdResult psd = is_psd(HermitianMatrix::make(x), 1e-7);
    if (!psd.psd)
      throw LinalgError("gilbert_separable_distance: input is not PSD (min eigenvalue " +
                        std::to_string(psd.min_eigenvalue) + ")");
  }

  Rng rng(derive_seed(cfg.seed, "gilbert", 0));
  const double dist_stop = std::max(1e-13, 0.45 * cfg.sep_tol);
  const double gap_stop = 1e-12;

  struct AtomState {
    double weight;
    CVec a, b;
    CVec ab;  // cached tensor product of a and b
    CMat density;
  };
  std::vector<AtomState> atoms;

  auto make_atom = [&](double weight, const CVec& a, const CVec& b) {
    CVec ab = Oracle::tensor_vec(a, b);
    CMat density = ab * ab.adjoint();
    return AtomState{weight, a, b, std::move(ab), std::move(density)};
  };
  auto rebuild = [&]() {
    CMat y = CMat::Zero(d, d);
    double total = 0.0;
    for (const AtomState& at : atoms) total += at.weight;
    for (AtomState& at : atoms) {
      at.weight /= total;
      y += at.weight * at.density;
    }
    return y;
  };

  // Fully corrective step: re-solve the weights over the current atoms by
  // projected gradient on the simplex. This removes the slow tail that plain
  // conditional-gradient weight updates leave behind.
  auto project_simplex = [](Eigen::VectorXd v) {
    const Eigen::Index m = v.size();
    std::vector<double> u(v.data(), v.data() + m);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cum = 0.0, tau = 0.0;
    int support = 0;
    for (int i = 0; i < m; ++i) {
      cum += u[i];
      const double t = (cum - 1.0) / (i + 1);
      if (u[i] - t > 0.0) {
        tau = t;
        support = i + 1;
      }
    }
    if (support == 0) tau = (cum - 1.0) / m;
    for (Eigen::Index i = 0; i < m; ++i) v(i) = std::max(0.0, v(i) - tau);
    return v;
  };
  auto fista_simplex = [&](const Eigen::MatrixXd& gram, const Eigen::VectorXd& lin,
                           Eigen::VectorXd w, int steps) {
    // Spectral-norm step size via a few power iterations; the Frobenius norm
    // overestimates by sqrt(m) and stalls the updates.
    Eigen::VectorXd pv = Eigen::VectorXd::Ones(w.size()).normalized();
    for (int i = 0; i < 20; ++i) pv = (gram * pv).normalized();
    const double lipschitz = std::max(1e-12, pv.dot(gram * pv));
    Eigen::VectorXd z = w, w_prev = w;
    double t_prev = 1.0;
    for (int step = 0; step < steps; ++step) {
      Eigen::VectorXd grad = gram * z - lin;
      Eigen::VectorXd w_next = project_simplex(z - grad / lipschitz);
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_prev * t_prev));
      z = w_next + ((t_prev - 1.0) / t_next) * (w_next - w_prev);
      if ((w_next - w_prev).norm() <= 1e-15) {
        w_prev = w_next;
        break;
      }
      w_prev = w_next;
      t_prev = t_next;
    }
    return w_prev;
  };
  // Re-fit each atom's product vectors against its own residual. Conditional
  // gradient alone cannot move an existing atom, and the endgame is limited by
  // atom placement rather than by the weights.
  auto polish_atoms = [&](const CMat& target, const CMat& y_now, int rounds) {
    CMat y_run = y_now;
    for (AtomState& at : atoms) {
      if (at.weight < 1e-8) continue;
      CMat residual = target - (y_run - at.weight * at.density);
      Oracle res_oracle{&residual, d_a, d_b};
      CVec pa = at.a, pb = at.b;
      res_oracle.ascend(pa, pb, rounds);
      CVec pab = Oracle::tensor_vec(pa, pb);
      CMat refit = pab * pab.adjoint();
      const CMat cand = y_run + at.weight * (refit - at.density);
      if ((target - cand).squaredNorm() < (target - y_run).squaredNorm()) {
        y_run = cand;
        at.a = pa;
        at.b = pb;
        at.ab = std::move(pab);
        at.density = std::move(refit);
      }
    }
    return y_run;
  };
  auto correct_weights = [&](const CMat& target) {
    if (atoms.size() < 2) return;
    // Keep the problem small: only the heaviest atoms enter the solve.
    if (atoms.size() > 256) {
      std::sort(atoms.begin(), atoms.end(),
                [](const AtomState& l, const AtomState& r) { return l.weight > r.weight; });
      atoms.resize(256);
    }
    for (int pass = 0; pass < 2; ++pass) {
      const std::size_t m = atoms.size();
      if (m < 2) return;
      Eigen::MatrixXd gram(m, m);
      Eigen::VectorXd lin(m), w(m);
      for (std::size_t i = 0; i < m; ++i) {
        const CVec abi = Oracle::tensor_vec(atoms[i].a, atoms[i].b);
        lin(i) = (abi.adjoint() * target * abi)(0, 0).real();
        w(i) = atoms[i].weight;
        for (std::size_t j = 0; j <= i; ++j) {
          // Rank-1 product atoms: <D_i, D_j> factors over the two sites.
          gram(i, j) = std::norm(atoms[i].a.dot(atoms[j].a)) *
                       std::norm(atoms[i].b.dot(atoms[j].b));
          gram(j, i) = gram(i, j);
        }
      }
      w = fista_simplex(gram, lin, w, pass == 0 ? 300 : 150);
      for (std::size_t i = 0; i < m; ++i) atoms[i].weight = w(i);
      const double cut = pass == 0 ? 1e-9 : 1e-12;
      atoms.erase(std::remove_if(atoms.begin(), atoms.end(),
                                 [&](const AtomState& at) { return at.weight < cut; }),
                  atoms.end());
    }
  };

  GilbertResult result;
  CVec scratch(d);

  // Seed with the best product state for X itself; a separable two-qubit
  // target instead gets its exact four-product decomposition, which boundary
  // states cannot be expected to reach iteratively.
  CMat g0 = x;
  Oracle seed_oracle{&g0, d_a, d_b};
  CVec wa = rng.unit_vector(d_a);
  CVec wb = rng.unit_vector(d_b);
  seed_oracle.best(wa, wb, 8, rng);
  if (d_a == 2 && d_b == 2) {
    for (const GilbertAtom& at : two_qubit_product_decomposition(x))
      atoms.push_back(make_atom(at.weight, at.a, at.b));
  }
  if (atoms.empty()) atoms.push_back(make_atom(1.0, wa, wb));
  CMat y = rebuild();

  double dist = (x - y).norm();
  result.trace.push_back(dist);

  int it = 0;
  int correction_step = 32;
  int next_correction = 32;
  int lmo_rounds = 12;
  double dist_at_correction = dist;
  std::vector<std::size_t> away_order;
  for (; it < cfg.gilbert_max_iters; ++it) {
    if (dist <= dist_stop) {
      result.converged = true;
      break;
    }
    CMat g = x - y;
    Oracle oracle{&g, d_a, d_b};

    const int fresh = (it == 0) ? 8 : (it % 64 == 0 ? 2 : (it % 8 == 0 ? 1 : 0));
    CVec fa = wa, fb = wb;
    const double fw_value = oracle.best(fa, fb, fresh, rng, lmo_rounds);
    wa = fa;
    wb = fb;
    const double fw_gap = fw_value - real_inner(g, y);
    result.final_gap = fw_gap;

    // Away atom: the active atom with the smallest gradient alignment. Large
    // ensembles are scanned through their heaviest members only; a light atom
    // cannot supply a useful away step because the step is capped by its
    // weight.
    int away_index = -1;
    double away_value = 0.0;
    scratch.resize(d);
    away_order.resize(atoms.size());
    std::iota(away_order.begin(), away_order.end(), std::size_t{0});
    if (atoms.size() > 320) {
      std::nth_element(
          away_order.begin(), away_order.begin() + 256, away_order.end(),
          [&](std::size_t l, std::size_t r) { return atoms[l].weight > atoms[r].weight; });
      away_order.resize(256);
    }
    for (const std::size_t k : away_order) {
      scratch.noalias() = g * atoms[k].ab;
      const double v = atoms[k].ab.dot(scratch).real();
      if (away_index < 0 || v < away_value) {
        away_index = static_cast<int>(k);
        away_value = v;
      }
    }
    const double away_gap = real_inner(g, y) - away_value;

    if (fw_gap <= gap_stop && away_gap <= gap_stop) {
      // Confirm the stall with a heavier multistart before stopping.
      CVec ca = wa, cb = wb;
      const double confirmed =
          oracle.best(ca, cb, std::max(8, cfg.multistarts / 8), rng, std::max(60, lmo_rounds));
      if (confirmed - real_inner(g, y) <= gap_stop) {
        result.converged = true;
        break;
      }
      wa = ca;
      wb = cb;
      continue;
    }

    const bool take_away = away_index >= 0 && atoms.size() > 1 && away_gap > fw_gap;
    if (take_away) {
      AtomState& at = atoms[away_index];
      const double gamma_max = at.weight / (1.0 - at.weight);
      CMat dir = y - at.density;
      const double denom = dir.squaredNorm();
      if (denom < 1e-30) break;
      double gamma = real_inner(g, dir) / denom;
      gamma = std::clamp(gamma, 0.0, gamma_max);
      y += gamma * dir;
      for (AtomState& other : atoms) other.weight *= (1.0 + gamma);
      at.weight -= gamma;
    } else {
      AtomState fw_atom = make_atom(0.0, fa, fb);
      CMat dir = fw_atom.density - y;
      const double denom = dir.squaredNorm();
      if (denom < 1e-30) break;
      double gamma = real_inner(g, dir) / denom;
      gamma = std::clamp(gamma, 0.0, 1.0);
      y += gamma * dir;
      for (AtomState& at : atoms) at.weight *= (1.0 - gamma);
      // Merge with an existing atom when the oracle returned a duplicate.
      bool merged = false;
      for (AtomState& at : atoms) {
        if (std::abs(1.0 - std::norm(at.a.dot(fa))) < 1e-9 &&
            std::abs(1.0 - std::norm(at.b.dot(fb))) < 1e-9) {
          at.weight += gamma;
          merged = true;
          break;
        }
      }
      if (!merged && gamma > 0.0) {
        fw_atom.weight = gamma;
        atoms.push_back(std::move(fw_atom));
      }
    }

    // Drop dead weight and periodically rebuild Y to kill drift.
    atoms.erase(std::remove_if(atoms.begin(), atoms.end(),
                               [](const AtomState& at) { return at.weight < 1e-12; }),
                atoms.end());
    if (atoms.empty()) {
      atoms.push_back(make_atom(1.0, fa, fb));
      y = atoms[0].density;
    }
    if (it + 1 == next_correction) {
      y = polish_atoms(x, y, std::max(6, lmo_rounds));
      correct_weights(x);
      y = rebuild();
      // Back off when a correction stopped paying for itself: a target outside
      // the set stalls at its true distance and further solves are wasted.
      const double now = (x - y).norm();
      if (now > 0.995 * dist_at_correction) {
        correction_step = std::min(correction_step * 2, 1024);
        // A stall within reach of the tolerance is a placement-precision
        // problem: the alternating ascent crawls along near-degenerate
        // ridges, so give it more rounds rather than more atoms.
        if (now <= 50.0 * dist_stop) lmo_rounds = std::min(lmo_rounds * 2, 400);
      } else {
        correction_step = 32;
      }
      dist_at_correction = now;
      next_correction += correction_step;
    }

    const double measured = (x - y).norm();
    dist = std::min(measured, result.trace.back());
    result.trace.push_back(dist);
  }

  polish_atoms(x, rebuild(), std::max(6, lmo_rounds));
  correct_weights(x);
  y = rebuild();
  result.distance = (x - y).norm();
  result.iterations = it;
  result.ensemble.reserve(atoms.size());
  for (const AtomState& at : atoms)
    result.ensemble.push_back({at.weight, at.a, at.b});
  return result;
}

}  // namespace choi
