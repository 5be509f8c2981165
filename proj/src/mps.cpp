#include "lgt/mps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>

#include <Eigen/QR>

namespace lgt {

namespace {

// Stack the per-phys matrices vertically: combined row index p*Dl + l.
Mat fuse_left(const MpsTensor& t) {
  Mat out(static_cast<Eigen::Index>(t.phys()) * t.left(), t.right());
  for (int p = 0; p < t.phys(); ++p) out.middleRows(p * t.left(), t.left()) = t.m[p];
  return out;
}

// Concatenate horizontally: combined column index p*Dr + r.
Mat fuse_right(const MpsTensor& t) {
  Mat out(t.left(), static_cast<Eigen::Index>(t.phys()) * t.right());
  for (int p = 0; p < t.phys(); ++p) out.middleCols(p * t.right(), t.right()) = t.m[p];
  return out;
}

MpsTensor split_left(const Mat& fused, int phys, int right) {
  MpsTensor t;
  const int left = static_cast<int>(fused.rows()) / phys;
  t.m.resize(phys);
  for (int p = 0; p < phys; ++p) t.m[p] = fused.middleRows(p * left, left).leftCols(right);
  return t;
}

MpsTensor split_right(const Mat& fused, int phys) {
  MpsTensor t;
  const int right = static_cast<int>(fused.cols()) / phys;
  t.m.resize(phys);
  for (int p = 0; p < phys; ++p) t.m[p] = fused.middleCols(p * right, right);
  return t;
}

}  // namespace

int MpsState::max_bond_dim() const {
  int d = 0;
  for (int i = 0; i + 1 < length(); ++i) d = std::max(d, bond_dim(i));
  return d;
}

MpsState MpsState::product_state(const std::vector<int>& dims,
                                 const std::vector<int>& basis) {
  if (dims.size() != basis.size())
    throw std::invalid_argument("product_state: dims/basis size mismatch");
  MpsState s;
  s.phys_dims = dims;
  s.tensors.resize(dims.size());
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (basis[i] < 0 || basis[i] >= dims[i])
      throw std::invalid_argument("product_state: basis index out of range");
    MpsTensor& t = s.tensors[i];
    t.m.assign(dims[i], Mat::Zero(1, 1));
    t.m[basis[i]](0, 0) = 1.0;
  }
  s.center = 0;
  return s;
}

MpsState MpsState::random_state(const std::vector<int>& dims, int bond,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  MpsState s;
  s.phys_dims = dims;
  const int n = static_cast<int>(dims.size());
  s.tensors.resize(n);
  int dl = 1;
  for (int i = 0; i < n; ++i) {
    const int dr = (i == n - 1) ? 1 : bond;
    MpsTensor& t = s.tensors[i];
    t.m.resize(dims[i]);
    for (int p = 0; p < dims[i]; ++p) {
      t.m[p] = Mat(dl, dr);
      for (int a = 0; a < dl; ++a)
        for (int b = 0; b < dr; ++b) t.m[p](a, b) = cplx(gauss(rng), gauss(rng));
    }
    dl = dr;
  }
  s.canonicalize_at(0);
  s.normalize();
  return s;
}

double MpsState::norm() const {
  if (center) return std::sqrt(tensors[*center].squared_norm());
  return std::sqrt(std::abs(overlap(*this, *this)));
}

void MpsState::normalize() {
  const double n = norm();
  if (n < 1e-300) throw std::runtime_error("cannot normalize a zero state");
  const int pos = center ? *center : 0;
  for (Mat& a : tensors[pos].m) a /= n;
}

void MpsState::move_center_to(int pos) {
  if (!center) throw std::logic_error("move_center_to: no canonical center");
  if (pos < 0 || pos >= length()) throw std::out_of_range("center out of range");
  while (*center < pos) {
    const int i = *center;
    Eigen::HouseholderQR<Mat> qr(fuse_left(tensors[i]));
    const int k = static_cast<int>(
        std::min(qr.matrixQR().rows(), qr.matrixQR().cols()));
    Mat q = Mat(qr.householderQ()).leftCols(k);
    Mat r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    tensors[i] = split_left(q, phys_dims[i], k);
    for (Mat& a : tensors[i + 1].m) a = r * a;
    center = i + 1;
  }
  while (*center > pos) {
    const int i = *center;
    Mat f = fuse_right(tensors[i]);
    Eigen::HouseholderQR<Mat> qr(f.adjoint());
    const int k = static_cast<int>(
        std::min(qr.matrixQR().rows(), qr.matrixQR().cols()));
    Mat q = Mat(qr.householderQ()).leftCols(k);
    Mat r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    tensors[i] = split_right(q.adjoint(), phys_dims[i]);
    for (Mat& a : tensors[i - 1].m) a = a * r.adjoint();
    center = i - 1;
  }
}

void MpsState::canonicalize_at(int pos) {
  if (pos < 0 || pos >= length()) throw std::out_of_range("center out of range");
  // The QR sweeps establish the isometries regardless of the prior form:
  // left-orthonormalize everything, then pull the center back.
  center = 0;
  move_center_to(length() - 1);
  move_center_to(pos);
}

double MpsState::isometry_violation() const {
  if (!center) return 0.0;
  double worst = 0.0;
  for (int i = 0; i < length(); ++i) {
    if (i < *center) {
      Mat f = fuse_left(tensors[i]);
      worst = std::max(worst,
                       (f.adjoint() * f - Mat::Identity(f.cols(), f.cols())).cwiseAbs().maxCoeff());
    } else if (i > *center) {
      Mat f = fuse_right(tensors[i]);
      worst = std::max(worst,
                       (f * f.adjoint() - Mat::Identity(f.rows(), f.rows())).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

MpsState canonicalize(MpsState state, int center) {
  state.canonicalize_at(center);
  return state;
}

cplx overlap(const MpsState& a, const MpsState& b) {
  if (a.phys_dims != b.phys_dims)
    throw std::invalid_argument("overlap: physical dimension mismatch");
  Mat env = Mat::Ones(1, 1);
  for (int i = 0; i < a.length(); ++i) {
    const MpsTensor& ta = a.tensors[i];
    const MpsTensor& tb = b.tensors[i];
    Mat next = Mat::Zero(ta.right(), tb.right());
    for (int p = 0; p < ta.phys(); ++p)
      next.noalias() += ta.m[p].adjoint() * env * tb.m[p];
    env.swap(next);
  }
  return env(0, 0);
}

Vec to_dense_vector(const MpsState& state, std::int64_t max_dim) {
  std::int64_t dim = 1;
  for (int d : state.phys_dims) {
    dim *= d;
    if (dim > max_dim) throw std::invalid_argument("to_dense_vector: state too large");
  }
  // amp(config-prefix, right bond), expanded position by position.
  Mat amp = Mat::Ones(1, 1);
  for (int i = 0; i < state.length(); ++i) {
    const MpsTensor& t = state.tensors[i];
    Mat next(amp.rows() * t.phys(), t.right());
    for (Eigen::Index c = 0; c < amp.rows(); ++c)
      for (int p = 0; p < t.phys(); ++p)
        next.row(c * t.phys() + p) = amp.row(c) * t.m[p];
    amp.swap(next);
  }
  return Vec(amp.col(0));
}

TruncationReport apply_three_site_gate(MpsState& state, const Mat& gate,
                                       int first_pos, const TruncOptions& opts,
                                       bool center_to_right) {
  const int q = first_pos;
  if (q < 0 || q + 2 >= state.length())
    throw std::out_of_range("apply_three_site_gate: window out of range");
  if (!state.center || *state.center < q || *state.center > q + 2)
    throw std::logic_error("apply_three_site_gate: canonical center outside window");
  const int p0 = state.phys_dims[q], p1 = state.phys_dims[q + 1], p2 = state.phys_dims[q + 2];
  const int pd = p0 * p1 * p2;
  if (gate.rows() != pd || gate.cols() != pd)
    throw std::invalid_argument("apply_three_site_gate: gate dimension mismatch");

  state.move_center_to(q);
  const MpsTensor& t0 = state.tensors[q];
  const MpsTensor& t1 = state.tensors[q + 1];
  const MpsTensor& t2 = state.tensors[q + 2];
  const int dl = t0.left(), dr = t2.right();

  // theta[(p0 p1 p2)] as (dl x dr) blocks.
  std::vector<Mat> theta(pd);
  {
    std::vector<Mat> t01(p0 * p1);
    for (int a = 0; a < p0; ++a)
      for (int b = 0; b < p1; ++b) t01[a * p1 + b].noalias() = t0.m[a] * t1.m[b];
    for (int ab = 0; ab < p0 * p1; ++ab)
      for (int c = 0; c < p2; ++c) theta[ab * p2 + c].noalias() = t01[ab] * t2.m[c];
  }

  // Apply the gate: out[g] = sum_p G(g, p) theta[p].
  std::vector<Mat> out(pd, Mat::Zero(dl, dr));
  for (int g = 0; g < pd; ++g)
    for (int p = 0; p < pd; ++p) {
      const cplx c = gate(g, p);
      if (std::norm(c) > 1e-60) out[g].noalias() += c * theta[p];
    }

  auto svd = [&](const Mat& m) {
    return opts.use_gram ? svd_truncated_gram(m, opts.max_bond, opts.rel_cutoff)
                         : svd_truncated(m, opts.max_bond, opts.rel_cutoff);
  };

  TruncationReport report;

  // First cut: rows (p0, dl), cols (p1, p2, dr).
  Mat m1(static_cast<Eigen::Index>(p0) * dl, static_cast<Eigen::Index>(p1) * p2 * dr);
  for (int a = 0; a < p0; ++a)
    for (int b = 0; b < p1; ++b)
      for (int c = 0; c < p2; ++c)
        m1.block(a * dl, (b * p2 + c) * dr, dl, dr) = out[(a * p1 + b) * p2 + c];
  TruncatedSvd s1 = svd(m1);
  report.discarded_weights.push_back(s1.discarded_weight);
  report.max_bond_reached = s1.kept;
  const int k1 = s1.kept;
  state.tensors[q] = split_left(s1.u, p0, k1);

  Mat carry = s1.singular.cast<cplx>().asDiagonal() * s1.vh;  // k1 x (p1 p2 dr)

  // Second cut: rows (p1, k1), cols (p2, dr).
  Mat m2(static_cast<Eigen::Index>(p1) * k1, static_cast<Eigen::Index>(p2) * dr);
  for (int b = 0; b < p1; ++b)
    for (int c = 0; c < p2; ++c)
      m2.block(b * k1, c * dr, k1, dr) = carry.middleCols((b * p2 + c) * dr, dr);
  TruncatedSvd s2 = svd(m2);
  report.discarded_weights.push_back(s2.discarded_weight * (1.0 - s1.discarded_weight));
  report.max_bond_reached = std::max(report.max_bond_reached, s2.kept);
  const int k2 = s2.kept;
  state.tensors[q + 1] = split_left(s2.u, p1, k2);
  Mat tail = s2.singular.cast<cplx>().asDiagonal() * s2.vh;  // k2 x (p2 dr)
  state.tensors[q + 2] = split_right(tail, p2);

  state.center = q + 2;
  if (!center_to_right) state.move_center_to(q);
  state.cumulative_truncation += report.total();
  return report;
}

TruncationReport compress(MpsState& state, const TruncOptions& opts) {
  TruncationReport report;
  if (state.length() < 2) return report;
  if (!state.center) state.canonicalize_at(state.length() - 1);
  else state.move_center_to(state.length() - 1);

  // Right-to-left SVD sweep; each cut sees an exact environment on its right.
  for (int i = state.length() - 1; i > 0; --i) {
    Mat f = fuse_right(state.tensors[i]);
    TruncatedSvd s = opts.use_gram ? svd_truncated_gram(f, opts.max_bond, opts.rel_cutoff)
                                   : svd_truncated(f, opts.max_bond, opts.rel_cutoff);
    report.discarded_weights.push_back(s.discarded_weight);
    report.max_bond_reached = std::max(report.max_bond_reached, s.kept);
    state.tensors[i] = split_right(s.vh, state.phys_dims[i]);
    Mat carry = s.u * s.singular.cast<cplx>().asDiagonal();
    for (Mat& a : state.tensors[i - 1].m) a = a * carry;
  }
  state.center = 0;
  state.cumulative_truncation += report.total();
  return report;
}

namespace {

void write_i64(std::ofstream& f, std::int64_t v) {
  f.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_f64(std::ofstream& f, double v) {
  f.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
std::int64_t read_i64(std::ifstream& f) {
  std::int64_t v = 0;
  f.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}
double read_f64(std::ifstream& f) {
  double v = 0;
  f.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

constexpr char kMagic[8] = {'L', 'G', 'T', 'M', 'P', 'S', '0', '1'};

}  // namespace

void save_mps(const MpsState& state, const std::string& path, int max_bond_hint) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("save_mps: cannot open " + path);
  f.write(kMagic, sizeof(kMagic));
  const int n_sites = (state.length() + 1) / 2;
  const int d = state.length() > 1 ? state.phys_dims[1] : 1;
  write_i64(f, n_sites);
  write_i64(f, d);
  write_i64(f, max_bond_hint > 0 ? max_bond_hint : state.max_bond_dim());
  write_i64(f, state.length());
  for (int p : state.phys_dims) write_i64(f, p);
  write_i64(f, state.center ? *state.center : -1);
  write_f64(f, state.cumulative_truncation);
  for (const MpsTensor& t : state.tensors) {
    write_i64(f, t.left());
    write_i64(f, t.phys());
    write_i64(f, t.right());
    for (int l = 0; l < t.left(); ++l)
      for (int p = 0; p < t.phys(); ++p)
        for (int r = 0; r < t.right(); ++r) {
          write_f64(f, t.m[p](l, r).real());
          write_f64(f, t.m[p](l, r).imag());
        }
  }
  if (!f) throw std::runtime_error("save_mps: write failed on " + path);
}

MpsState load_mps(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("load_mps: cannot open " + path);
  char magic[8];
  f.read(magic, sizeof(magic));
  if (!f || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("load_mps: bad file header in " + path);
  read_i64(f);  // N (redundant with dims)
  read_i64(f);  // d
  read_i64(f);  // D hint
  const std::int64_t length = read_i64(f);
  if (length <= 0 || length > (1 << 20)) throw std::runtime_error("load_mps: corrupt length");
  MpsState s;
  s.phys_dims.resize(length);
  for (auto& p : s.phys_dims) p = static_cast<int>(read_i64(f));
  const std::int64_t center = read_i64(f);
  s.cumulative_truncation = read_f64(f);
  s.tensors.resize(length);
  for (auto& t : s.tensors) {
    const auto dl = read_i64(f), pd = read_i64(f), dr = read_i64(f);
    if (dl <= 0 || pd <= 0 || dr <= 0) throw std::runtime_error("load_mps: corrupt dims");
    t.m.assign(pd, Mat::Zero(dl, dr));
    for (int l = 0; l < dl; ++l)
      for (int p = 0; p < pd; ++p)
        for (int r = 0; r < dr; ++r) {
          const double re = read_f64(f);
          const double im = read_f64(f);
          t.m[p](l, r) = cplx(re, im);
        }
  }
  if (!f) throw std::runtime_error("load_mps: truncated file " + path);
  if (center >= 0 && center < length) s.center = static_cast<int>(center);
  return s;
}

}  // namespace lgt
