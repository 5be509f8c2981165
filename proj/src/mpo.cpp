#include "lgt/mpo.hpp"

#include <cmath>

namespace lgt {

void Mpo::Tensor::add(int a, int b, const Mat& op) {
  auto it = blocks.find({a, b});
  if (it == blocks.end()) blocks.emplace(std::make_pair(a, b), op);
  else it->second += op;
}

int Mpo::max_bond() const {
  int w = 1;
  for (const Tensor& t : tensors) w = std::max(w, std::max(t.wl, t.wr));
  return w;
}

Mpo Mpo::identity(const std::vector<int>& dims) {
  Mpo m;
  m.phys_dims = dims;
  m.tensors.resize(dims.size());
  for (std::size_t i = 0; i < dims.size(); ++i)
    m.tensors[i].add(0, 0, Mat::Identity(dims[i], dims[i]));
  return m;
}

Mpo Mpo::operator+(const Mpo& other) const {
  if (phys_dims != other.phys_dims)
    throw std::invalid_argument("mpo sum: physical dimension mismatch");
  Mpo out;
  out.phys_dims = phys_dims;
  out.tensors.resize(length());
  for (int i = 0; i < length(); ++i) {
    const Tensor& a = tensors[i];
    const Tensor& b = other.tensors[i];
    Tensor& t = out.tensors[i];
    const bool first = (i == 0);
    const bool last = (i == length() - 1);
    t.wl = first ? 1 : a.wl + b.wl;
    t.wr = last ? 1 : a.wr + b.wr;
    for (const auto& [key, op] : a.blocks) t.add(key.first, key.second, op);
    const int row_off = first ? 0 : a.wl;
    const int col_off = last ? 0 : a.wr;
    for (const auto& [key, op] : b.blocks)
      t.add(key.first + row_off, key.second + col_off, op);
  }
  return out;
}

Mpo& Mpo::operator*=(cplx scale) {
  if (tensors.empty()) return *this;
  for (auto& [key, op] : tensors[0].blocks) op *= scale;
  return *this;
}

Mat Mpo::to_dense_matrix(std::int64_t max_dim) const {
  std::int64_t dim = 1;
  for (int d : phys_dims) {
    dim *= d;
    if (dim > max_dim) throw std::invalid_argument("mpo to_dense: operator too large");
  }
  // amp[(row-prefix, col-prefix)] over bond states, expanded left to right.
  std::vector<Mat> amp(1, Mat::Ones(1, 1));
  for (int i = 0; i < length(); ++i) {
    const Tensor& t = tensors[i];
    const int p = phys_dims[i];
    std::vector<Mat> next(t.wr);
    for (int b = 0; b < t.wr; ++b)
      next[b] = Mat::Zero(amp[0].rows() * p, amp[0].cols() * p);
    for (const auto& [key, op] : t.blocks) {
      const auto [a, b] = key;
      if (amp[a].size() == 0) continue;
      for (int po = 0; po < p; ++po)
        for (int pi = 0; pi < p; ++pi) {
          const cplx c = op(po, pi);
          if (std::norm(c) < 1e-300) continue;
          for (Eigen::Index r = 0; r < amp[a].rows(); ++r)
            for (Eigen::Index s = 0; s < amp[a].cols(); ++s)
              next[b](r * p + po, s * p + pi) += c * amp[a](r, s);
        }
    }
    amp.swap(next);
  }
  return amp[0];
}

MpoBuilder::MpoBuilder(std::vector<int> phys_dims, int num_states)
    : phys_dims_(std::move(phys_dims)),
      num_states_(num_states),
      transitions_(phys_dims_.size()) {}

void MpoBuilder::add(int pos, int from, int to, const Mat& op) {
  if (pos < 0 || pos >= static_cast<int>(phys_dims_.size()))
    throw std::out_of_range("MpoBuilder: position out of range");
  if (op.rows() != phys_dims_[pos] || op.cols() != phys_dims_[pos])
    throw std::invalid_argument("MpoBuilder: operator dimension mismatch");
  auto& tmap = transitions_[pos];
  auto it = tmap.find({from, to});
  if (it == tmap.end()) tmap.emplace(std::make_pair(from, to), op);
  else it->second += op;
}

Mpo MpoBuilder::build() const {
  Mpo m;
  m.phys_dims = phys_dims_;
  const int n = static_cast<int>(phys_dims_.size());
  const int fin = num_states_ - 1;
  m.tensors.resize(n);
  for (int i = 0; i < n; ++i) {
    Mpo::Tensor& t = m.tensors[i];
    t.wl = (i == 0) ? 1 : num_states_;
    t.wr = (i == n - 1) ? 1 : num_states_;
    for (const auto& [key, op] : transitions_[i]) {
      int a = key.first, b = key.second;
      if (i == 0) {
        if (a != 0) continue;  // only paths leaving the ready state
        a = 0;
      }
      if (i == n - 1) {
        if (b != fin) continue;  // only paths reaching the finished state
        b = 0;
      }
      t.add(a, b, op);
    }
  }
  return m;
}

cplx mpo_matrix_element(const MpsState& bra, const Mpo& op, const MpsState& ket) {
  if (bra.phys_dims != op.phys_dims || ket.phys_dims != op.phys_dims)
    throw std::invalid_argument("mpo expectation: dimension mismatch");
  // env[b](alpha_bra, alpha_ket) for each MPO bond state b.
  std::vector<Mat> env(1, Mat::Ones(1, 1));
  for (int i = 0; i < op.length(); ++i) {
    const Mpo::Tensor& w = op.tensors[i];
    const MpsTensor& tb = bra.tensors[i];
    const MpsTensor& tk = ket.tensors[i];
    std::vector<Mat> next(w.wr, Mat::Zero(tb.right(), tk.right()));
    for (const auto& [key, o] : w.blocks) {
      const auto [a, b] = key;
      if (env[a].size() == 0) continue;
      // sum_{po,pi} o(po,pi) * Abra[po]^H env[a] Aket[pi]
      for (int po = 0; po < tb.phys(); ++po) {
        if (o.row(po).cwiseAbs().maxCoeff() < 1e-300) continue;
        Mat left = tb.m[po].adjoint() * env[a];
        for (int pi = 0; pi < tk.phys(); ++pi) {
          const cplx c = o(po, pi);
          if (std::norm(c) < 1e-300) continue;
          next[b].noalias() += c * (left * tk.m[pi]);
        }
      }
    }
    env.swap(next);
  }
  return env[0](0, 0);
}

double expectation(const MpsState& state, const Mpo& op) {
  const double nrm = state.norm();
  if (std::abs(nrm - 1.0) > 1e-8)
    throw std::invalid_argument("expectation: state is not normalized");
  const cplx val = mpo_matrix_element(state, op, state);
  const double scale = std::max(1.0, std::abs(val));
  if (std::abs(val.imag()) > 1e-10 * scale)
    throw std::runtime_error("expectation: non-negligible imaginary part");
  return val.real();
}

}  // namespace lgt
