#include "lgt/ed.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <Eigen/Eigenvalues>

namespace lgt {

DenseModel::DenseModel(const ModelSpec& spec, double x, std::int64_t dim_cap)
    : spec_(spec), x_(x) {
  spec_.validate();
  if (x < 0) throw std::invalid_argument("coupling x must be >= 0");
  const int L = spec_.chain_length();
  const auto dims = spec_.phys_dims();

  dim_ = 1;
  for (int d : dims) {
    dim_ *= d;
    if (dim_ > dim_cap)
      throw std::invalid_argument("exact model dimension exceeds the cap");
  }
  strides_.assign(L, 1);
  for (int i = L - 2; i >= 0; --i) strides_[i] = strides_[i + 1] * dims[i + 1];

  const LinkOperatorSet ops = build_link_operators(spec_.variant, spec_.link_dim);
  const int d = spec_.link_dim;
  const int j2 = (d - 1) / 2;

  // Diagonal pieces: electric energy, mass term, Gauss penalty, charge.
  static_diag_ = RVec::Zero(dim_);
  penalty_diag_ = RVec::Zero(dim_);
  charge_diag_ = RVec::Zero(dim_);
  const double theta = 2.0 * M_PI / d;
  for (std::int64_t i = 0; i < dim_; ++i) {
    const auto cfg = decode(i);
    double elec = 0.0, mass = 0.0, charge = 0.0, pen = 0.0;
    for (int n = 1; n < spec_.num_sites; ++n) {
      const double lz = cfg[ModelSpec::link_pos(n)] - j2;
      elec += lz * lz;
    }
    for (int n = 1; n <= spec_.num_sites; ++n) {
      const int occ = cfg[ModelSpec::site_pos(n)];
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      mass += 0.5 * spec_.mass_mu * sign * 2.0 * occ;
      charge += occ - ModelSpec::stagger(n);
      const double lz_left = (n > 1) ? cfg[ModelSpec::link_pos(n - 1)] - j2 : 0.0;
      const double lz_right = (n < spec_.num_sites) ? cfg[ModelSpec::link_pos(n)] - j2 : 0.0;
      const double g = lz_right - lz_left - (occ - ModelSpec::stagger(n));
      if (spec_.variant == Variant::TruncatedCQED) {
        pen += g * g;
      } else {
        pen += 2.0 - 2.0 * std::cos(theta * g);
      }
    }
    static_diag_(i) = elec + mass;
    penalty_diag_(i) = pen;
    charge_diag_(i) = charge;
  }

  // Hopping windows (site n, link n, site n+1) at unit coupling.
  for (int n = 1; n < spec_.num_sites; ++n) {
    WindowTerm term;
    const int q = ModelSpec::site_pos(n);
    term.wdim = static_cast<std::int64_t>(2) * d * 2;
    term.sdim = strides_[q + 2];
    term.pdim = dim_ / (term.wdim * term.sdim);
    // sp (x) l_plus (x) sm and the conjugate, expanded entrywise.
    for (int ko = 0; ko < d; ++ko)
      for (int ki = 0; ki < d; ++ki) {
        const cplx c = ops.l_plus(ko, ki);
        if (std::norm(c) < 1e-300) continue;
        // |occ=1, ko, occ=0> <occ=0, ki, occ=1|
        const int wo = (1 * d + ko) * 2 + 0;
        const int wi = (0 * d + ki) * 2 + 1;
        term.entries.emplace_back(wo, wi, c);
        term.entries.emplace_back(wi, wo, std::conj(c));
      }
    hop_terms_.push_back(std::move(term));
  }

  // Noise windows: single link, unit strength.
  const Mat noise = noise_link_matrix(spec_);
  for (int n = 1; n < spec_.num_sites; ++n) {
    WindowTerm term;
    const int q = ModelSpec::link_pos(n);
    term.wdim = d;
    term.sdim = strides_[q];
    term.pdim = dim_ / (term.wdim * term.sdim);
    for (int ko = 0; ko < d; ++ko)
      for (int ki = 0; ki < d; ++ki) {
        const cplx c = noise(ko, ki);
        if (std::norm(c) > 1e-300) term.entries.emplace_back(ko, ki, c);
      }
    noise_terms_.push_back(std::move(term));
  }

  // Physical zero-charge sector: occupations with zero staggered charge and
  // Gauss-determined link fluxes (exact for cQED, modulo d for Zd).
  for (std::int64_t mask = 0; mask < (std::int64_t(1) << spec_.num_sites); ++mask) {
    int charge = 0;
    for (int n = 1; n <= spec_.num_sites; ++n)
      charge += ((mask >> (n - 1)) & 1) - ModelSpec::stagger(n);
    if (charge != 0) continue;
    std::vector<int> link_val(spec_.num_sites - 1, 0);
    int lz = 0;
    bool ok = true;
    for (int n = 1; n < spec_.num_sites && ok; ++n) {
      const int rho = static_cast<int>((mask >> (n - 1)) & 1) - ModelSpec::stagger(n);
      lz += rho;
      if (spec_.variant == Variant::Zd) {
        while (lz > j2) lz -= d;
        while (lz < -j2) lz += d;
      } else if (lz > j2 || lz < -j2) {
        ok = false;
      }
      link_val[n - 1] = lz;
    }
    if (!ok) continue;
    std::int64_t idx = 0;
    for (int n = 1; n <= spec_.num_sites; ++n)
      idx += static_cast<std::int64_t>((mask >> (n - 1)) & 1) * strides_[ModelSpec::site_pos(n)];
    for (int n = 1; n < spec_.num_sites; ++n)
      idx += static_cast<std::int64_t>(link_val[n - 1] + j2) * strides_[ModelSpec::link_pos(n)];
    sector_.states.push_back(idx);
  }
  std::sort(sector_.states.begin(), sector_.states.end());
}

std::vector<int> DenseModel::decode(std::int64_t index) const {
  const int L = spec_.chain_length();
  std::vector<int> cfg(L);
  for (int i = 0; i < L; ++i) {
    cfg[i] = static_cast<int>(index / strides_[i]);
    index %= strides_[i];
  }
  return cfg;
}

void DenseModel::apply_window(const WindowTerm& term, cplx scale, const Vec& v,
                              Vec& y) const {
  for (const auto& [wo, wi, c] : term.entries) {
    const cplx cc = scale * c;
    for (std::int64_t p = 0; p < term.pdim; ++p) {
      const std::int64_t base_o = (p * term.wdim + wo) * term.sdim;
      const std::int64_t base_i = (p * term.wdim + wi) * term.sdim;
      y.segment(base_o, term.sdim).noalias() += cc * v.segment(base_i, term.sdim);
    }
  }
}

void DenseModel::apply(const Vec& v, Vec& y, double x_eff, double noise_strength,
                       bool include_penalties) const {
  y = static_diag_.cast<cplx>().cwiseProduct(v);
  if (include_penalties) {
    if (spec_.gauss_penalty > 0.0)
      y += spec_.gauss_penalty * penalty_diag_.cast<cplx>().cwiseProduct(v);
    if (spec_.charge_penalty > 0.0)
      y += spec_.charge_penalty *
           charge_diag_.cwiseProduct(charge_diag_).cast<cplx>().cwiseProduct(v);
  }
  if (x_eff != 0.0)
    for (const auto& t : hop_terms_) apply_window(t, x_eff, v, y);
  if (noise_strength != 0.0)
    for (const auto& t : noise_terms_) apply_window(t, noise_strength, v, y);
}

Mat DenseModel::dense_matrix(bool include_penalties, std::int64_t max_dim) const {
  if (dim_ > max_dim) throw std::invalid_argument("dense matrix exceeds cap");
  Mat h = Mat::Zero(dim_, dim_);
  Vec e = Vec::Zero(dim_), col(dim_);
  for (std::int64_t j = 0; j < dim_; ++j) {
    e(j) = 1.0;
    apply(e, col, x_, 0.0, include_penalties);
    h.col(j) = col;
    e(j) = 0.0;
  }
  return h;
}

Mat DenseModel::dense_noise_matrix(std::int64_t max_dim) const {
  if (dim_ > max_dim) throw std::invalid_argument("dense matrix exceeds cap");
  Mat h = Mat::Zero(dim_, dim_);
  Vec e = Vec::Zero(dim_), col(dim_);
  for (std::int64_t j = 0; j < dim_; ++j) {
    e(j) = 1.0;
    col.setZero();
    for (const auto& t : noise_terms_) apply_window(t, 1.0, e, col);
    h.col(j) = col;
    e(j) = 0.0;
  }
  return h;
}

Mat DenseModel::dense_gauss_matrix(int n, std::int64_t max_dim) const {
  if (dim_ > max_dim) throw std::invalid_argument("dense matrix exceeds cap");
  const int d = spec_.link_dim;
  const int j2 = (d - 1) / 2;
  const double theta = 2.0 * M_PI / d;
  Mat g = Mat::Zero(dim_, dim_);
  for (std::int64_t i = 0; i < dim_; ++i) {
    const auto cfg = decode(i);
    const int occ = cfg[ModelSpec::site_pos(n)];
    const double lz_left = (n > 1) ? cfg[ModelSpec::link_pos(n - 1)] - j2 : 0.0;
    const double lz_right = (n < spec_.num_sites) ? cfg[ModelSpec::link_pos(n)] - j2 : 0.0;
    const double val = lz_right - lz_left - (occ - ModelSpec::stagger(n));
    g(i, i) = spec_.variant == Variant::TruncatedCQED ? cplx(val, 0.0)
                                                      : std::exp(iu * theta * val);
  }
  return g;
}

Mat DenseModel::sector_matrix(double x_eff) const {
  const int s = sector_.dimension();
  std::unordered_map<std::int64_t, int> lookup;
  lookup.reserve(s * 2);
  for (int i = 0; i < s; ++i) lookup.emplace(sector_.states[i], i);

  Mat h = Mat::Zero(s, s);
  for (int j = 0; j < s; ++j) {
    const std::int64_t gj = sector_.states[j];
    h(j, j) += static_diag_(gj);
    // Hopping images: apply each window entry to the basis configuration.
    for (std::size_t t = 0; t < hop_terms_.size(); ++t) {
      const WindowTerm& term = hop_terms_[t];
      const std::int64_t block = term.wdim * term.sdim;
      const std::int64_t p = gj / block;
      const std::int64_t w = (gj % block) / term.sdim;
      const std::int64_t sfx = gj % term.sdim;
      for (const auto& [wo, wi, c] : term.entries) {
        if (wi != w) continue;
        const std::int64_t gi = (p * term.wdim + wo) * term.sdim + sfx;
        auto it = lookup.find(gi);
        if (it == lookup.end())
          throw std::logic_error("hopping left the physical sector");
        h(it->second, j) += x_eff * c;
      }
    }
  }
  return h;
}

Vec DenseModel::sector_to_full(const Vec& sector_vec) const {
  if (sector_vec.size() != sector_.dimension())
    throw std::invalid_argument("sector vector size mismatch");
  Vec full = Vec::Zero(dim_);
  for (int i = 0; i < sector_.dimension(); ++i)
    full(sector_.states[i]) = sector_vec(i);
  return full;
}

std::int64_t DenseModel::strong_coupling_index() const {
  std::int64_t idx = 0;
  const int j2 = (spec_.link_dim - 1) / 2;
  for (int n = 1; n <= spec_.num_sites; ++n)
    if (n % 2 == 1) idx += strides_[ModelSpec::site_pos(n)];
  for (int n = 1; n < spec_.num_sites; ++n)
    idx += static_cast<std::int64_t>(j2) * strides_[ModelSpec::link_pos(n)];
  return idx;
}

double DenseModel::energy_expectation(const Vec& v, double x_eff) const {
  Vec y(dim_);
  apply(v, y, x_eff, 0.0, false);
  const cplx e = v.dot(y);
  return e.real() / v.squaredNorm();
}

DenseModel build_dense(const ModelSpec& spec, double x) { return DenseModel(spec, x); }

std::pair<RVec, std::vector<Vec>> exact_eigs(const DenseModel& model, int k, bool sector) {
  if (k < 1) throw std::invalid_argument("need k >= 1 eigenpairs");
  if (sector) {
    const Mat h = model.sector_matrix(model.x());
    Eigen::SelfAdjointEigenSolver<Mat> eig(h);
    if (eig.info() != Eigen::Success) throw std::runtime_error("sector eig failed");
    k = std::min<int>(k, static_cast<int>(h.rows()));
    RVec vals = eig.eigenvalues().head(k);
    std::vector<Vec> vecs;
    for (int i = 0; i < k; ++i) vecs.push_back(model.sector_to_full(eig.eigenvectors().col(i)));
    return {vals, vecs};
  }

  if (model.dim() <= 4096) {
    const Mat h = model.dense_matrix(true);
    Eigen::SelfAdjointEigenSolver<Mat> eig(h);
    if (eig.info() != Eigen::Success) throw std::runtime_error("dense eig failed");
    k = std::min<int>(k, static_cast<int>(model.dim()));
    RVec vals = eig.eigenvalues().head(k);
    std::vector<Vec> vecs;
    for (int i = 0; i < k; ++i) vecs.push_back(eig.eigenvectors().col(i));
    return {vals, vecs};
  }

  // Sparse path: Lanczos with deflation against already-found vectors.
  RVec vals(k);
  std::vector<Vec> vecs;
  const double shift = 1e6;
  for (int m = 0; m < k; ++m) {
    auto apply = [&](const Vec& v, Vec& y) {
      model.apply(v, y, model.x(), 0.0, true);
      for (const Vec& u : vecs) y += shift * u.dot(v) * u;
    };
    Vec start = Vec::Ones(model.dim());
    start(model.strong_coupling_index()) += 1.0;
    for (const Vec& u : vecs) start -= u.dot(start) * u;
    LanczosResult res = lanczos_lowest(apply, start, 400, 1e-10);
    if (!res.converged)
      throw std::runtime_error("sparse eigensolver did not converge");
    vals(m) = res.eigenvalue;
    vecs.push_back(res.eigenvector);
  }
  return {vals, vecs};
}

TrajectoryRecord exact_evolve(const DenseModel& model, const RampSchedule& schedule,
                              double dt, int sample_every, const Vec* reference) {
  if (dt <= 0) throw std::invalid_argument("dt must be positive");
  const std::int64_t dim = model.dim();
  Vec psi = Vec::Zero(dim);
  psi(model.strong_coupling_index()) = 1.0;

  Vec ref;
  if (reference) {
    ref = *reference;
  } else {
    auto [vals, vecs] = exact_eigs(DenseModel(model.spec(), schedule.x_final), 1, true);
    ref = vecs[0];
  }
  ref.normalize();

  const int steps = static_cast<int>(std::llround(schedule.total_time / dt));
  TrajectoryRecord rec;
  const int n_sites = model.spec().num_sites;
  auto record = [&](double t) {
    const double xv = schedule.value(std::min(t, schedule.total_time));
    const double energy = model.energy_expectation(psi, xv);
    const double pen =
        model.penalty_diagonal().cast<cplx>().cwiseProduct(psi).dot(psi).real();
    const double q =
        model.charge_diagonal().cast<cplx>().cwiseProduct(psi).dot(psi).real();
    rec.append(t, xv, energy, std::abs(ref.dot(psi)), pen / n_sites, q, 0.0,
               psi.norm());
  };
  record(0.0);

  const int krylov_cap = static_cast<int>(std::min<std::int64_t>(60, dim));
  for (int s = 0; s < steps; ++s) {
    const double t_mid = (s + 0.5) * dt;
    const double x_mid = schedule.value(std::min(t_mid, schedule.total_time));
    const double noise = schedule.lambda * x_mid;
    auto apply = [&](const Vec& v, Vec& y) { model.apply(v, y, x_mid, noise, false); };
    psi = lanczos_expm_apply(apply, psi, -iu * dt, krylov_cap, 1e-13);
    if ((s + 1) % sample_every == 0 || s + 1 == steps) record((s + 1) * dt);
  }
  return rec;
}

Vec mps_to_dense(const MpsState& state) { return to_dense_vector(state); }

}  // namespace lgt
