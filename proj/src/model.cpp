#include "lgt/model.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

namespace lgt {

Mat site_identity() { return Mat::Identity(2, 2); }

Mat site_sz() {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = -1.0;
  m(1, 1) = 1.0;
  return m;
}

Mat site_sp() {
  // |occupied><empty|, basis {0 = empty, 1 = occupied}
  Mat m = Mat::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}

Mat site_sm() { return site_sp().adjoint(); }

Mat site_occupation() {
  Mat m = Mat::Zero(2, 2);
  m(1, 1) = 1.0;
  return m;
}

Mat site_charge(int n) {
  return site_occupation() - static_cast<double>(ModelSpec::stagger(n)) * site_identity();
}

LinkOperatorSet build_link_operators(Variant variant, int d) {
  if (d < 3 || d % 2 == 0)
    throw std::invalid_argument("link dimension must be odd and >= 3");
  LinkOperatorSet ops;
  ops.variant = variant;
  ops.dim = d;
  const int j2 = (d - 1) / 2;  // J = (d-1)/2, basis index k = m + J
  ops.l_z = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k) ops.l_z(k, k) = static_cast<double>(k - j2);

  ops.l_plus = Mat::Zero(d, d);
  if (variant == Variant::TruncatedCQED) {
    const double l = 0.5 * (d - 1);
    const double norm = std::sqrt(l * (l + 1.0));
    for (int k = 0; k + 1 < d; ++k) {
      const double m = k - j2;
      ops.l_plus(k + 1, k) = iu * std::sqrt(l * (l + 1.0) - m * (m + 1.0)) / norm;
    }
  } else {
    // Cyclic raising with the top state wrapping to the bottom. All
    // transition amplitudes carry phase +1.
    for (int k = 0; k + 1 < d; ++k) ops.l_plus(k + 1, k) = 1.0;
    ops.l_plus(0, d - 1) = 1.0;
  }
  ops.l_minus = ops.l_plus.adjoint();
  return ops;
}

namespace {

/// Phase operator exp(i phi lz) for a link (diagonal).
Mat link_phase(const LinkOperatorSet& ops, double phi) {
  Mat m = Mat::Zero(ops.dim, ops.dim);
  for (int k = 0; k < ops.dim; ++k)
    m(k, k) = std::exp(iu * phi * ops.l_z(k, k).real());
  return m;
}

/// Phase operator exp(i phi c_n) for a site.
Mat site_phase(int n, double phi) {
  const Mat c = site_charge(n);
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = std::exp(iu * phi * c(0, 0).real());
  m(1, 1) = std::exp(iu * phi * c(1, 1).real());
  return m;
}

Mpo bare_w_mpo(const ModelSpec& spec, double x) {
  const LinkOperatorSet ops = build_link_operators(spec.variant, spec.link_dim);
  const Mat lz2 = ops.l_z * ops.l_z;
  // States: 0 ready, 1 carrying sp L+, 2 carrying sm L-, 3 finished.
  MpoBuilder b(spec.phys_dims(), 4);
  const int fin = 3;
  for (int n = 1; n <= spec.num_sites; ++n) {
    const int pos = ModelSpec::site_pos(n);
    b.add(pos, 0, 0, site_identity());
    b.add(pos, fin, fin, site_identity());
    if (spec.mass_mu != 0.0) {
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      b.add(pos, 0, fin, 0.5 * spec.mass_mu * sign * (site_sz() + site_identity()));
    }
    if (n < spec.num_sites && x != 0.0) {
      b.add(pos, 0, 1, x * site_sp());
      b.add(pos, 0, 2, x * site_sm());
    }
    if (n > 1) {
      b.add(pos, 1, fin, site_sm());
      b.add(pos, 2, fin, site_sp());
    }
  }
  for (int n = 1; n < spec.num_sites; ++n) {
    const int pos = ModelSpec::link_pos(n);
    b.add(pos, 0, 0, Mat::Identity(spec.link_dim, spec.link_dim));
    b.add(pos, fin, fin, Mat::Identity(spec.link_dim, spec.link_dim));
    b.add(pos, 0, fin, lz2);
    b.add(pos, 1, 1, ops.l_plus);
    b.add(pos, 2, 2, ops.l_minus);
  }
  return b.build();
}

Mpo gauss_penalty_mpo_cqed(const ModelSpec& spec) {
  const LinkOperatorSet ops = build_link_operators(spec.variant, spec.link_dim);
  const Mat lz = ops.l_z;
  const Mat lz2 = ops.l_z * ops.l_z;
  const Mat idl = Mat::Identity(spec.link_dim, spec.link_dim);
  // P = sum_n G_n^2 with G_n = lz_n - lz_{n-1} - charge_n. States: 0 ready,
  // 1 placed -2 lz at the left link, 2 waiting for lz at the right link,
  // 3 placed 2 c at the site, 4 finished.
  MpoBuilder b(spec.phys_dims(), 5);
  const int fin = 4;
  for (int n = 1; n <= spec.num_sites; ++n) {
    const int pos = ModelSpec::site_pos(n);
    const Mat c = -site_charge(n);  // site factor of G_n
    b.add(pos, 0, 0, site_identity());
    b.add(pos, fin, fin, site_identity());
    b.add(pos, 0, fin, Mat(c * c));
    if (n < spec.num_sites) b.add(pos, 0, 3, Mat(2.0 * c));
    if (n > 1) {
      b.add(pos, 1, fin, c);
      if (n < spec.num_sites) b.add(pos, 1, 2, site_identity());
    }
  }
  for (int n = 1; n < spec.num_sites; ++n) {
    const int pos = ModelSpec::link_pos(n);
    b.add(pos, 0, 0, idl);
    b.add(pos, fin, fin, idl);
    b.add(pos, 0, fin, Mat(2.0 * lz2));  // squares from G_n and G_{n+1}
    b.add(pos, 0, 1, Mat(-2.0 * lz));
    b.add(pos, 2, fin, lz);
    b.add(pos, 3, fin, lz);
  }
  return b.build();
}

Mpo gauss_penalty_mpo_zd(const ModelSpec& spec) {
  const LinkOperatorSet ops = build_link_operators(spec.variant, spec.link_dim);
  const double theta = 2.0 * M_PI / spec.link_dim;
  const Mat idl = Mat::Identity(spec.link_dim, spec.link_dim);
  const Mat plp = link_phase(ops, theta);   // exp(+i theta lz)
  const Mat plm = link_phase(ops, -theta);  // exp(-i theta lz)
  // P = sum_n (2 - U_n - U_n^H); U_n = exp(i theta G_n) factorizes into
  // exp(-i theta lz) on link n-1, exp(-i theta charge_n) on the site and
  // exp(+i theta lz) on link n.
  // States: 0 ready, 1/2 building U, 3/4 building U^H, 5 finished.
  MpoBuilder b(spec.phys_dims(), 6);
  const int fin = 5;
  const int N = spec.num_sites;
  for (int n = 1; n <= N; ++n) {
    const int pos = ModelSpec::site_pos(n);
    const Mat psp = site_phase(n, -theta);  // U_n site factor
    const Mat psm = site_phase(n, theta);   // U_n^H site factor
    b.add(pos, 0, 0, site_identity());
    b.add(pos, fin, fin, site_identity());
    b.add(pos, 0, fin, Mat(2.0 * site_identity()));  // constant per generator
    if (n == 1) {
      b.add(pos, 0, 2, Mat(-psp));
      b.add(pos, 0, 4, Mat(-psm));
    } else if (n == N) {
      b.add(pos, 1, fin, psp);
      b.add(pos, 3, fin, psm);
    } else {
      b.add(pos, 1, 2, psp);
      b.add(pos, 3, 4, psm);
    }
  }
  for (int n = 1; n < N; ++n) {
    const int pos = ModelSpec::link_pos(n);
    b.add(pos, 0, 0, idl);
    b.add(pos, fin, fin, idl);
    b.add(pos, 0, 1, Mat(-plm));  // starts U_{n+1}
    b.add(pos, 0, 3, Mat(-plp));  // starts U^H_{n+1}
    b.add(pos, 2, fin, plp);      // finishes U_n
    b.add(pos, 4, fin, plm);      // finishes U^H_n
  }
  return b.build();
}

Mpo charge_squared_mpo(const ModelSpec& spec) {
  const Mat idl = Mat::Identity(spec.link_dim, spec.link_dim);
  // (sum_n rho_n)^2; states: 0 ready, 1 one factor placed, 2 finished.
  MpoBuilder b(spec.phys_dims(), 3);
  for (int n = 1; n <= spec.num_sites; ++n) {
    const int pos = ModelSpec::site_pos(n);
    const Mat rho = site_charge(n);
    b.add(pos, 0, 0, site_identity());
    b.add(pos, 1, 1, site_identity());
    b.add(pos, 2, 2, site_identity());
    b.add(pos, 0, 2, Mat(rho * rho));
    b.add(pos, 0, 1, Mat(2.0 * rho));
    b.add(pos, 1, 2, rho);
  }
  for (int n = 1; n < spec.num_sites; ++n) {
    const int pos = ModelSpec::link_pos(n);
    b.add(pos, 0, 0, idl);
    b.add(pos, 1, 1, idl);
    b.add(pos, 2, 2, idl);
  }
  return b.build();
}

Mpo charge_mpo(const ModelSpec& spec) {
  const Mat idl = Mat::Identity(spec.link_dim, spec.link_dim);
  MpoBuilder b(spec.phys_dims(), 2);
  for (int n = 1; n <= spec.num_sites; ++n) {
    const int pos = ModelSpec::site_pos(n);
    b.add(pos, 0, 0, site_identity());
    b.add(pos, 1, 1, site_identity());
    b.add(pos, 0, 1, site_charge(n));
  }
  for (int n = 1; n < spec.num_sites; ++n) {
    const int pos = ModelSpec::link_pos(n);
    b.add(pos, 0, 0, idl);
    b.add(pos, 1, 1, idl);
  }
  return b.build();
}

}  // namespace

Mpo hamiltonian_mpo(const ModelSpec& spec, double x, bool include_penalties) {
  spec.validate();
  if (x < 0) throw std::invalid_argument("coupling x must be >= 0");
  Mpo h = bare_w_mpo(spec, x);
  if (include_penalties && spec.gauss_penalty > 0.0) {
    Mpo p = spec.variant == Variant::TruncatedCQED ? gauss_penalty_mpo_cqed(spec)
                                                   : gauss_penalty_mpo_zd(spec);
    p *= spec.gauss_penalty;
    h = h + p;
  }
  if (include_penalties && spec.charge_penalty > 0.0) {
    Mpo q2 = charge_squared_mpo(spec);
    q2 *= spec.charge_penalty;
    h = h + q2;
  }
  return h;
}

std::vector<GateBlock> gate_blocks(const ModelSpec& spec, double x, double lambda) {
  spec.validate();
  const LinkOperatorSet ops = build_link_operators(spec.variant, spec.link_dim);
  const int d = spec.link_dim;
  const Mat id2 = site_identity();
  const Mat idl = Mat::Identity(d, d);
  const Mat lz2 = ops.l_z * ops.l_z;
  const Mat noise = lambda != 0.0 ? Mat(lambda * x * noise_link_matrix(spec))
                                  : Mat(Mat::Zero(d, d));

  auto kron3 = [](const Mat& a, const Mat& b, const Mat& c) {
    return Mat(Eigen::kroneckerProduct(a, Eigen::kroneckerProduct(b, c).eval()).eval());
  };

  std::vector<GateBlock> blocks;
  for (int n = 1; n < spec.num_sites; ++n) {
    GateBlock blk;
    blk.index = n;
    Mat h = x * kron3(site_sp(), ops.l_plus, site_sm());
    h += h.adjoint().eval();
    h += kron3(id2, lz2, id2);
    if (lambda != 0.0) h += kron3(id2, noise, id2);
    if (spec.mass_mu != 0.0) {
      // Mass terms split evenly between the two blocks adjacent to a site;
      // chain-end sites belong to a single block.
      const double wl = (n == 1) ? 1.0 : 0.5;
      const double wr = (n + 1 == spec.num_sites) ? 1.0 : 0.5;
      const double sl = (n % 2 == 0) ? 1.0 : -1.0;
      const double sr = ((n + 1) % 2 == 0) ? 1.0 : -1.0;
      h += 0.5 * spec.mass_mu * sl * wl * kron3(site_sz() + id2, idl, id2);
      h += 0.5 * spec.mass_mu * sr * wr * kron3(id2, idl, site_sz() + id2);
    }
    blk.h = h;
    blocks.push_back(std::move(blk));
  }
  return blocks;
}

HamiltonianRep build_hamiltonian(const ModelSpec& spec, double x) {
  HamiltonianRep rep;
  rep.spec = spec;
  rep.x = x;
  rep.mpo = hamiltonian_mpo(spec, x, true);
  rep.blocks = gate_blocks(spec, x, 0.0);
  return rep;
}

std::vector<GaussOperator> gauss_operators(const ModelSpec& spec) {
  spec.validate();
  const LinkOperatorSet ops = build_link_operators(spec.variant, spec.link_dim);
  const int d = spec.link_dim;
  const int N = spec.num_sites;
  std::vector<GaussOperator> out;
  for (int n = 1; n <= N; ++n) {
    GaussOperator g;
    g.site = n;
    const bool has_left = n > 1;
    const bool has_right = n < N;
    g.window_start = has_left ? ModelSpec::link_pos(n - 1) : ModelSpec::site_pos(n);
    if (has_left) g.window_dims.push_back(d);
    g.window_dims.push_back(2);
    if (has_right) g.window_dims.push_back(d);

    // G_n = lz_n - lz_{n-1} - charge_n on the window (left link, site, right link).
    auto kron_list = [](const std::vector<Mat>& ms) {
      Mat out = Mat::Ones(1, 1);
      for (const Mat& m : ms) out = Eigen::kroneckerProduct(out, m).eval();
      return out;
    };
    const Mat idl = Mat::Identity(d, d);
    std::vector<Mat> factors;
    Mat gen = Mat::Zero(1, 1);
    {
      std::vector<std::vector<Mat>> terms;
      if (has_left) {
        std::vector<Mat> t{Mat(-ops.l_z), site_identity()};
        if (has_right) t.push_back(idl);
        terms.push_back(t);
      }
      {
        std::vector<Mat> t;
        if (has_left) t.push_back(idl);
        t.push_back(Mat(-site_charge(n)));
        if (has_right) t.push_back(idl);
        terms.push_back(t);
      }
      if (has_right) {
        std::vector<Mat> t;
        if (has_left) t.push_back(idl);
        t.push_back(site_identity());
        t.push_back(ops.l_z);
        terms.push_back(t);
      }
      gen = kron_list(terms[0]);
      for (std::size_t i = 1; i < terms.size(); ++i) gen += kron_list(terms[i]);
    }

    if (spec.variant == Variant::TruncatedCQED) {
      g.op = gen;
    } else {
      // U_n = exp(i 2pi/d G_n); the generator is diagonal, so exponentiate
      // entrywise.
      const double theta = 2.0 * M_PI / d;
      g.op = Mat::Zero(gen.rows(), gen.cols());
      for (Eigen::Index k = 0; k < gen.rows(); ++k)
        g.op(k, k) = std::exp(iu * theta * gen(k, k).real());
    }
    out.push_back(std::move(g));
  }
  return out;
}

ObservableRep penalty_observable(const ModelSpec& spec) {
  spec.validate();
  ObservableRep obs;
  obs.kind = ObservableKind::GaussPenalty;
  obs.mpo = spec.variant == Variant::TruncatedCQED ? gauss_penalty_mpo_cqed(spec)
                                                   : gauss_penalty_mpo_zd(spec);
  return obs;
}

ObservableRep total_charge_observable(const ModelSpec& spec) {
  spec.validate();
  ObservableRep obs;
  obs.kind = ObservableKind::TotalCharge;
  obs.mpo = charge_mpo(spec);
  return obs;
}

ObservableRep energy_observable(const ModelSpec& spec, double x) {
  ObservableRep obs;
  obs.kind = ObservableKind::Energy;
  obs.mpo = hamiltonian_mpo(spec, x, false);
  return obs;
}

ObservableRep observable(const ModelSpec& spec, ObservableKind kind, double x) {
  switch (kind) {
    case ObservableKind::Energy:
      return energy_observable(spec, x);
    case ObservableKind::GaussPenalty:
      return penalty_observable(spec);
    case ObservableKind::TotalCharge:
      return total_charge_observable(spec);
    case ObservableKind::LinkFluxProfile: {
      ObservableRep obs;
      obs.kind = kind;
      const LinkOperatorSet ops = build_link_operators(spec.variant, spec.link_dim);
      obs.site_ops.assign(spec.num_sites - 1, ops.l_z);
      return obs;
    }
    case ObservableKind::SiteOccupationProfile: {
      ObservableRep obs;
      obs.kind = kind;
      obs.site_ops.assign(spec.num_sites, site_occupation());
      return obs;
    }
  }
  throw std::logic_error("unknown observable kind");
}

double expectation(const MpsState& state, const ObservableRep& obs) {
  if (obs.kind == ObservableKind::LinkFluxProfile ||
      obs.kind == ObservableKind::SiteOccupationProfile)
    throw std::invalid_argument("profile observables have vector expectations");
  return expectation(state, obs.mpo);
}

std::vector<double> expectation_profile(const MpsState& state, const ObservableRep& obs) {
  if (obs.site_ops.empty())
    throw std::invalid_argument("not a profile observable");
  const bool links = obs.kind == ObservableKind::LinkFluxProfile;
  std::vector<double> vals;
  MpsState work = state;
  work.canonicalize_at(0);
  const int count = static_cast<int>(obs.site_ops.size());
  for (int n = 1; n <= count; ++n) {
    const int pos = links ? ModelSpec::link_pos(n) : ModelSpec::site_pos(n);
    work.move_center_to(pos);
    const MpsTensor& t = work.tensors[pos];
    cplx v = 0.0;
    for (int po = 0; po < t.phys(); ++po)
      for (int pi = 0; pi < t.phys(); ++pi) {
        const cplx c = obs.site_ops[n - 1](po, pi);
        if (std::norm(c) < 1e-300) continue;
        v += c * (t.m[po].adjoint() * t.m[pi]).trace();
      }
    vals.push_back(v.real());
  }
  return vals;
}

Mat noise_link_matrix(const ModelSpec& spec) {
  const LinkOperatorSet ops = build_link_operators(spec.variant, spec.link_dim);
  if (spec.variant == Variant::Zd) return Mat(ops.l_plus + ops.l_minus);
  // Bare boson exchange a^H b + b^H a = sqrt(l(l+1)) (-i L+ + i L-).
  const double l = 0.5 * (spec.link_dim - 1);
  return Mat(std::sqrt(l * (l + 1.0)) * (-iu * ops.l_plus + iu * ops.l_minus));
}

NoiseTerm noise_term(const ModelSpec& spec, double lambda, double x) {
  spec.validate();
  if (lambda < 0) throw std::invalid_argument("noise strength must be >= 0");
  NoiseTerm t;
  t.lambda = lambda;
  t.x = x;
  t.link_op = lambda * x * noise_link_matrix(spec);
  const Mat idl = Mat::Identity(spec.link_dim, spec.link_dim);
  MpoBuilder b(spec.phys_dims(), 2);
  for (int n = 1; n <= spec.num_sites; ++n) {
    const int pos = ModelSpec::site_pos(n);
    b.add(pos, 0, 0, site_identity());
    b.add(pos, 1, 1, site_identity());
  }
  for (int n = 1; n < spec.num_sites; ++n) {
    const int pos = ModelSpec::link_pos(n);
    b.add(pos, 0, 0, idl);
    b.add(pos, 1, 1, idl);
    b.add(pos, 0, 1, t.link_op);
  }
  t.mpo = b.build();
  return t;
}

MpsState strong_coupling_state(const ModelSpec& spec) {
  spec.validate();
  std::vector<int> basis(spec.chain_length());
  const int zero_flux = (spec.link_dim - 1) / 2;
  for (int n = 1; n <= spec.num_sites; ++n)
    basis[ModelSpec::site_pos(n)] = (n % 2 == 1) ? 1 : 0;
  for (int n = 1; n < spec.num_sites; ++n) basis[ModelSpec::link_pos(n)] = zero_flux;
  return MpsState::product_state(spec.phys_dims(), basis);
}

}  // namespace lgt
