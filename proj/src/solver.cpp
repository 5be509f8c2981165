#include "lgt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

#include "lgt/csv.hpp"

namespace lgt {

namespace {

using BondEnv = std::vector<Mat>;  // one (bra x ket) matrix per MPO bond state

BondEnv left_env_step(const BondEnv& env, const Mpo::Tensor& w,
                      const MpsTensor& bra, const MpsTensor& ket) {
  BondEnv next(w.wr, Mat::Zero(bra.right(), ket.right()));
  for (const auto& [key, op] : w.blocks) {
    const auto [a, b] = key;
    if (env[a].size() == 0) continue;
    for (int po = 0; po < bra.phys(); ++po) {
      if (op.row(po).cwiseAbs().maxCoeff() < 1e-300) continue;
      const Mat tmp = bra.m[po].adjoint() * env[a];
      for (int pi = 0; pi < ket.phys(); ++pi) {
        const cplx c = op(po, pi);
        if (std::norm(c) < 1e-300) continue;
        next[b].noalias() += c * (tmp * ket.m[pi]);
      }
    }
  }
  return next;
}

BondEnv right_env_step(const BondEnv& env, const Mpo::Tensor& w,
                       const MpsTensor& bra, const MpsTensor& ket) {
  BondEnv next(w.wl, Mat::Zero(bra.left(), ket.left()));
  for (const auto& [key, op] : w.blocks) {
    const auto [a, b] = key;
    if (env[b].size() == 0) continue;
    for (int po = 0; po < bra.phys(); ++po) {
      if (op.row(po).cwiseAbs().maxCoeff() < 1e-300) continue;
      const Mat tmp = bra.m[po].conjugate() * env[b];
      for (int pi = 0; pi < ket.phys(); ++pi) {
        const cplx c = op(po, pi);
        if (std::norm(c) < 1e-300) continue;
        next[a].noalias() += c * (tmp * ket.m[pi].transpose());
      }
    }
  }
  return next;
}

/// Two-site effective problem at bond (i, i+1) plus an optional rank-one
/// orthogonality penalty w |vg><vg|.
struct LocalProblem {
  const BondEnv* left;
  const BondEnv* right;
  const Mpo::Tensor* w1;
  const Mpo::Tensor* w2;
  int dl, p1, p2, dr;
  double orth_weight = 0.0;
  std::vector<Mat> vg;  // per (p1*p2), dl x dr; empty if no penalty

  Eigen::Index dim() const {
    return static_cast<Eigen::Index>(dl) * p1 * p2 * dr;
  }

  void apply(const Vec& v, Vec& y) const {
    const auto block = [&](const Vec& vec, int b) {
      return Eigen::Map<const Mat>(vec.data() + static_cast<Eigen::Index>(b) * dl * dr, dl, dr);
    };
    y.setZero();

    // T1[a][p1 p2] = L[a] * theta[p1 p2]
    const int nl = static_cast<int>(left->size());
    std::vector<std::vector<Mat>> t1(nl);
    for (int a = 0; a < nl; ++a) {
      bool used = false;
      for (const auto& [key, op] : w1->blocks)
        if (key.first == a) { used = true; break; }
      if (!used) continue;
      t1[a].resize(p1 * p2);
      for (int b = 0; b < p1 * p2; ++b) t1[a][b].noalias() = (*left)[a] * block(v, b);
    }

    // T2[w][q1][p2] after absorbing the first MPO tensor.
    std::vector<std::vector<Mat>> t2(w1->wr);
    for (const auto& [key, op] : w1->blocks) {
      const auto [a, b] = key;
      if (t1[a].empty()) continue;
      if (t2[b].empty()) t2[b].assign(p1 * p2, Mat());
      for (int q1 = 0; q1 < p1; ++q1)
        for (int pi = 0; pi < p1; ++pi) {
          const cplx c = op(q1, pi);
          if (std::norm(c) < 1e-300) continue;
          for (int x2 = 0; x2 < p2; ++x2) {
            Mat& dst = t2[b][q1 * p2 + x2];
            if (dst.size() == 0) dst = Mat::Zero(dl, dr);
            dst.noalias() += c * t1[a][pi * p2 + x2];
          }
        }
    }

    // T3[w][q1][q2] after the second MPO tensor.
    std::vector<std::vector<Mat>> t3(w2->wr);
    for (const auto& [key, op] : w2->blocks) {
      const auto [a, b] = key;
      if (t2.size() <= static_cast<std::size_t>(a) || t2[a].empty()) continue;
      if (t3[b].empty()) t3[b].assign(p1 * p2, Mat());
      for (int q2 = 0; q2 < p2; ++q2)
        for (int pi = 0; pi < p2; ++pi) {
          const cplx c = op(q2, pi);
          if (std::norm(c) < 1e-300) continue;
          for (int q1 = 0; q1 < p1; ++q1) {
            if (t2[a][q1 * p2 + pi].size() == 0) continue;
            Mat& dst = t3[b][q1 * p2 + q2];
            if (dst.size() == 0) dst = Mat::Zero(dl, dr);
            dst.noalias() += c * t2[a][q1 * p2 + pi];
          }
        }
    }

    // out[q1 q2] = sum_w T3[w] * R[w]^T
    for (int b = 0; b < static_cast<int>(t3.size()); ++b) {
      if (t3[b].empty()) continue;
      for (int blk = 0; blk < p1 * p2; ++blk) {
        if (t3[b][blk].size() == 0) continue;
        Eigen::Map<Mat>(y.data() + static_cast<Eigen::Index>(blk) * dl * dr, dl, dr)
            .noalias() += t3[b][blk] * (*right)[b].transpose();
      }
    }

    if (orth_weight > 0.0 && !vg.empty()) {
      cplx amp = 0.0;
      for (int blk = 0; blk < p1 * p2; ++blk)
        amp += (vg[blk].conjugate().cwiseProduct(block(v, blk))).sum();
      for (int blk = 0; blk < p1 * p2; ++blk)
        Eigen::Map<Mat>(y.data() + static_cast<Eigen::Index>(blk) * dl * dr, dl, dr)
            .noalias() += (orth_weight * amp) * vg[blk];
    }
  }
};

struct SweepContext {
  const Mpo* mpo = nullptr;
  MpsState* psi = nullptr;
  std::vector<BondEnv> left, right;

  // Orthogonality penalty against a fixed reference state.
  const MpsState* ortho = nullptr;
  double orth_weight = 0.0;
  std::vector<Mat> og_left, og_right;  // overlap transfer matrices (e|g)

  void init(const Mpo& op, MpsState& state, const MpsState* orth_state, double weight) {
    mpo = &op;
    psi = &state;
    ortho = orth_state;
    orth_weight = weight;
    const int L = state.length();
    state.canonicalize_at(0);
    left.assign(L + 1, BondEnv());
    right.assign(L + 1, BondEnv());
    left[0] = BondEnv(1, Mat::Ones(1, 1));
    right[L] = BondEnv(1, Mat::Ones(1, 1));
    for (int i = L - 1; i >= 1; --i)
      right[i] = right_env_step(right[i + 1], op.tensors[i], state.tensors[i],
                                state.tensors[i]);
    if (ortho) {
      og_left.assign(L + 1, Mat());
      og_right.assign(L + 1, Mat());
      og_left[0] = Mat::Ones(1, 1);
      og_right[L] = Mat::Ones(1, 1);
      for (int i = L - 1; i >= 1; --i) {
        const MpsTensor& e = state.tensors[i];
        const MpsTensor& g = ortho->tensors[i];
        Mat next = Mat::Zero(e.left(), g.left());
        for (int p = 0; p < e.phys(); ++p)
          next.noalias() += e.m[p].conjugate() * og_right[i + 1] * g.m[p].transpose();
        og_right[i] = next;
      }
    }
  }

  void refresh_left(int i) {
    left[i + 1] = left_env_step(left[i], mpo->tensors[i], psi->tensors[i],
                                psi->tensors[i]);
    if (ortho) {
      const MpsTensor& e = psi->tensors[i];
      const MpsTensor& g = ortho->tensors[i];
      Mat next = Mat::Zero(e.right(), g.right());
      for (int p = 0; p < e.phys(); ++p)
        next.noalias() += e.m[p].adjoint() * og_left[i] * g.m[p];
      og_left[i + 1] = next;
    }
  }

  void refresh_right(int i) {
    right[i] = right_env_step(right[i + 1], mpo->tensors[i], psi->tensors[i],
                              psi->tensors[i]);
    if (ortho) {
      const MpsTensor& e = psi->tensors[i];
      const MpsTensor& g = ortho->tensors[i];
      Mat next = Mat::Zero(e.left(), g.left());
      for (int p = 0; p < e.phys(); ++p)
        next.noalias() += e.m[p].conjugate() * og_right[i + 1] * g.m[p].transpose();
      og_right[i] = next;
    }
  }

  /// Optimize the pair (i, i+1); returns the local eigenvalue. The center
  /// moves to i+1 when sweeping right, to i otherwise.
  double update_bond(int i, bool to_right, const SolverOptions& opts, double local_tol) {
    MpsState& state = *psi;
    state.move_center_to(to_right ? i : i + 1);
    const MpsTensor& ta = state.tensors[i];
    const MpsTensor& tb = state.tensors[i + 1];
    LocalProblem prob;
    prob.left = &left[i];
    prob.right = &right[i + 2];
    prob.w1 = &mpo->tensors[i];
    prob.w2 = &mpo->tensors[i + 1];
    prob.dl = ta.left();
    prob.p1 = ta.phys();
    prob.p2 = tb.phys();
    prob.dr = tb.right();
    prob.orth_weight = orth_weight;
    if (ortho) {
      prob.vg.resize(prob.p1 * prob.p2);
      const MpsTensor& ga = ortho->tensors[i];
      const MpsTensor& gb = ortho->tensors[i + 1];
      for (int a = 0; a < prob.p1; ++a)
        for (int b = 0; b < prob.p2; ++b)
          prob.vg[a * prob.p2 + b] =
              og_left[i] * ga.m[a] * gb.m[b] * og_right[i + 2].transpose();
    }

    Vec start(prob.dim());
    for (int a = 0; a < prob.p1; ++a)
      for (int b = 0; b < prob.p2; ++b)
        Eigen::Map<Mat>(start.data() +
                            static_cast<Eigen::Index>(a * prob.p2 + b) * prob.dl * prob.dr,
                        prob.dl, prob.dr)
            .noalias() = ta.m[a] * tb.m[b];

    auto apply = [&prob](const Vec& v, Vec& y) { prob.apply(v, y); };
    LanczosResult res = lanczos_lowest(apply, start, 100, local_tol);

    // Split the optimized pair and truncate.
    Mat m(static_cast<Eigen::Index>(prob.p1) * prob.dl,
          static_cast<Eigen::Index>(prob.p2) * prob.dr);
    for (int a = 0; a < prob.p1; ++a)
      for (int b = 0; b < prob.p2; ++b)
        m.block(a * prob.dl, b * prob.dr, prob.dl, prob.dr) =
            Eigen::Map<const Mat>(res.eigenvector.data() +
                                      static_cast<Eigen::Index>(a * prob.p2 + b) *
                                          prob.dl * prob.dr,
                                  prob.dl, prob.dr);
    TruncatedSvd svd = svd_truncated(m, opts.max_bond, opts.svd_cutoff);
    state.cumulative_truncation += svd.discarded_weight;
    RVec s = svd.singular;
    s /= s.norm();  // keep the state normalized
    MpsTensor left_t, right_t;
    const int k = svd.kept;
    left_t.m.resize(prob.p1);
    right_t.m.resize(prob.p2);
    if (to_right) {
      for (int a = 0; a < prob.p1; ++a)
        left_t.m[a] = svd.u.middleRows(a * prob.dl, prob.dl);
      const Mat sv = s.cast<cplx>().asDiagonal() * svd.vh;
      for (int b = 0; b < prob.p2; ++b)
        right_t.m[b] = sv.middleCols(b * prob.dr, prob.dr);
      state.tensors[i] = std::move(left_t);
      state.tensors[i + 1] = std::move(right_t);
      state.center = i + 1;
      refresh_left(i);
    } else {
      const Mat us = svd.u * s.cast<cplx>().asDiagonal();
      for (int a = 0; a < prob.p1; ++a)
        left_t.m[a] = us.middleRows(a * prob.dl, prob.dl);
      for (int b = 0; b < prob.p2; ++b)
        right_t.m[b] = svd.vh.middleCols(b * prob.dr, prob.dr);
      state.tensors[i] = std::move(left_t);
      state.tensors[i + 1] = std::move(right_t);
      state.center = i;
      refresh_right(i + 1);
    }
    (void)k;
    return res.eigenvalue;
  }
};

/// Bond-2 perturbation of a product state. The three-body Hamiltonian terms
/// have zero gradient within a two-site update window on an exact product
/// configuration, so the sweeps need a seed admixture to couple to.
MpsState perturbed_product_start(const MpsState& product, double epsilon,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  MpsState out;
  out.phys_dims = product.phys_dims;
  const int n = product.length();
  out.tensors.resize(n);
  for (int i = 0; i < n; ++i) {
    const int dl = (i == 0) ? 1 : 2;
    const int dr = (i == n - 1) ? 1 : 2;
    const int p = product.phys_dims[i];
    out.tensors[i].m.assign(p, Mat::Zero(dl, dr));
    for (int k = 0; k < p; ++k) {
      for (int a = 0; a < dl; ++a)
        for (int b = 0; b < dr; ++b)
          out.tensors[i].m[k](a, b) = epsilon * cplx(gauss(rng), gauss(rng));
      out.tensors[i].m[k](0, 0) += product.tensors[i].m[k](0, 0);
    }
  }
  out.canonicalize_at(0);
  out.normalize();
  return out;
}

GroundStateResult sweep_to_convergence(const Mpo& mpo, MpsState psi,
                                       const SolverOptions& opts,
                                       const MpsState* ortho, double orth_weight) {
  SweepContext ctx;
  ctx.init(mpo, psi, ortho, orth_weight);
  const int L = psi.length();

  GroundStateResult result;
  double last_energy = 0.0;
  double rel_change = 1.0;
  bool have_last = false;

  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    const double local_tol =
        std::max(1e-3 * opts.rel_tol, std::min(1e-5, 1e-2 * rel_change));
    double energy = 0.0;
    for (int i = 0; i < L - 1; ++i) energy = ctx.update_bond(i, true, opts, local_tol);
    for (int i = L - 2; i >= 0; --i) energy = ctx.update_bond(i, false, opts, local_tol);

    result.trace.energies.push_back(energy);
    result.trace.sweeps = sweep;
    if (have_last) {
      rel_change = std::abs(energy - last_energy) / std::max(1.0, std::abs(energy));
      result.trace.final_relative_change = rel_change;
      if (sweep >= opts.min_sweeps && rel_change < opts.rel_tol) {
        result.converged = true;
        break;
      }
    }
    last_energy = energy;
    have_last = true;
  }

  psi.move_center_to(0);
  psi.normalize();
  result.state = std::move(psi);
  result.bond_dim = result.state.max_bond_dim();
  result.energy = result.trace.energies.back();
  return result;
}

}  // namespace

void write_trace_csv(const ConvergenceTrace& trace, const std::string& path) {
  CsvWriter csv(path, {"sweep", "energy", "rel_change"});
  double prev = 0.0;
  for (std::size_t i = 0; i < trace.energies.size(); ++i) {
    const double e = trace.energies[i];
    const double rel = i == 0 ? 0.0 : std::abs(e - prev) / std::max(1.0, std::abs(e));
    csv.row({static_cast<double>(i + 1), e, rel});
    prev = e;
  }
}

GroundStateResult find_ground_state(const HamiltonianRep& h, const SolverOptions& opts) {
  MpsState psi;
  if (opts.warm_start) {
    psi = *opts.warm_start;
    if (psi.max_bond_dim() > opts.max_bond) {
      TruncOptions t;
      t.max_bond = opts.max_bond;
      t.rel_cutoff = opts.svd_cutoff;
      compress(psi, t);
      psi.normalize();
    } else if (psi.max_bond_dim() == 1) {
      // a pure product warm start is a two-site saddle, same as the cold start
      psi = perturbed_product_start(psi, 1e-2,
                                    restart_seed(h.spec, h.x, opts.max_bond, 0) ^ opts.seed);
    }
  } else {
    psi = perturbed_product_start(strong_coupling_state(h.spec), 1e-2,
                                  restart_seed(h.spec, h.x, opts.max_bond, 0) ^ opts.seed);
  }
  GroundStateResult res = sweep_to_convergence(h.mpo, std::move(psi), opts, nullptr, 0.0);
  // Exact final energy from the full contraction (the sweep value carries
  // truncation bias of the last local solve).
  res.energy = expectation(res.state, h.mpo);
  return res;
}

double default_orth_weight(const ModelSpec& spec, double x, double ground_energy) {
  const double j = 0.5 * (spec.link_dim - 1);
  const double bound = (spec.num_sites - 1) * j * j +
                       std::abs(spec.mass_mu) * spec.num_sites +
                       2.0 * x * (spec.num_sites - 1);
  return 100.0 * (bound + std::abs(ground_energy) + 1.0);
}

GroundStateResult find_first_excited(const HamiltonianRep& h,
                                     const GroundStateResult& ground,
                                     const SolverOptions& opts, double orth_weight) {
  if (orth_weight <= 0.0)
    orth_weight = default_orth_weight(h.spec, h.x, ground.energy);
  const ObservableRep penalty = penalty_observable(h.spec);

  std::string last_failure;
  for (int attempt = 0; attempt < 3; ++attempt) {
    MpsState start;
    if (attempt == 0 && opts.warm_start) {
      start = *opts.warm_start;
    } else {
      start = MpsState::random_state(h.spec.phys_dims(),
                                     std::min(8, std::max(2, opts.max_bond)),
                                     restart_seed(h.spec, h.x, opts.max_bond, attempt));
    }
    GroundStateResult res =
        sweep_to_convergence(h.mpo, std::move(start), opts, &ground.state, orth_weight);
    res.energy = expectation(res.state, h.mpo);

    const double g_overlap = std::abs(overlap(ground.state, res.state));
    if (g_overlap >= 1e-6) {
      last_failure = "orthogonality check failed, |<g|e>| = " + std::to_string(g_overlap);
      continue;
    }
    const double pen = expectation(res.state, penalty);
    if (pen >= 1e-8) {
      last_failure = "sector check failed, <P> = " + std::to_string(pen);
      continue;
    }
    return res;
  }
  throw std::runtime_error("excited-state search failed after 3 restarts: " + last_failure);
}

std::vector<GapPoint> compute_gap_curve(const ModelSpec& spec,
                                        const std::vector<double>& x_values,
                                        const SolverOptions& opts) {
  std::vector<GapPoint> out;
  GroundStateResult g_prev, e_prev;
  bool warm = false;
  for (double x : x_values) {
    HamiltonianRep h = build_hamiltonian(spec, x);
    SolverOptions gopts = opts;
    if (warm) gopts.warm_start = &g_prev.state;
    GroundStateResult g = find_ground_state(h, gopts);
    SolverOptions eopts = opts;
    if (warm) eopts.warm_start = &e_prev.state;
    GroundStateResult e = find_first_excited(h, g, eopts);
    out.push_back({x, e.energy - g.energy, g.energy, e.energy});
    g_prev = std::move(g);
    e_prev = std::move(e);
    warm = true;
  }
  return out;
}

std::pair<double, double> extrapolate_bond_dimension(
    const std::vector<std::pair<int, double>>& d_energy_points) {
  if (d_energy_points.size() < 2)
    throw std::invalid_argument("extrapolation needs at least two bond dimensions");
  auto pts = d_energy_points;
  std::sort(pts.begin(), pts.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  const auto [d1, e1] = pts[pts.size() - 2];
  const auto [d2, e2] = pts[pts.size() - 1];
  if (d1 == d2) throw std::invalid_argument("bond dimensions must be distinct");
  const double u1 = 1.0 / d1, u2 = 1.0 / d2;
  const double slope = (e1 - e2) / (u1 - u2);
  const double e_inf = e2 - slope * u2;
  return {e_inf, std::abs(e_inf - e2)};
}

std::uint64_t restart_seed(const ModelSpec& spec, double x, int max_bond, int attempt) {
  // FNV-1a over the instance signature.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  mix(static_cast<std::uint64_t>(spec.variant));
  mix(static_cast<std::uint64_t>(spec.num_sites));
  mix(static_cast<std::uint64_t>(spec.link_dim));
  std::uint64_t xb;
  static_assert(sizeof(double) == 8);
  std::memcpy(&xb, &x, 8);
  mix(xb);
  mix(static_cast<std::uint64_t>(max_bond));
  mix(static_cast<std::uint64_t>(attempt));
  return h;
}

}  // namespace lgt
