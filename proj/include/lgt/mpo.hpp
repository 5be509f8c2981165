#pragma once

#include <map>
#include <utility>
#include <vector>

#include "lgt/mps.hpp"
#include "lgt/types.hpp"

namespace lgt {

/// Matrix product operator with sparse block storage. The first tensor has
/// left bond 1 and the last has right bond 1 (boundary vectors absorbed);
/// block (a, b) at a position holds the (p_out x p_in) operator factor that
/// connects left bond state a to right bond state b.
class Mpo {
 public:
  struct Tensor {
    int wl = 1, wr = 1;
    std::map<std::pair<int, int>, Mat> blocks;

    const Mat* block(int a, int b) const {
      auto it = blocks.find({a, b});
      return it == blocks.end() ? nullptr : &it->second;
    }
    void add(int a, int b, const Mat& op);
  };

  std::vector<Tensor> tensors;
  std::vector<int> phys_dims;

  int length() const { return static_cast<int>(tensors.size()); }
  int max_bond() const;

  static Mpo identity(const std::vector<int>& dims);

  /// Direct-sum addition: represents A + B exactly.
  Mpo operator+(const Mpo& other) const;
  Mpo& operator*=(cplx scale);
  friend Mpo operator*(cplx scale, Mpo m) { m *= scale; return m; }

  /// Dense matrix reconstruction for small chains (testing / oracles).
  Mat to_dense_matrix(std::int64_t max_dim = 1 << 13) const;
};

/// Helper for building FSM-style MPOs: per position, register transitions
/// (from-state, to-state, operator). State 0 is the ready state, state
/// `num_states-1` the finished state; boundary tensors are cropped so the
/// MPO value is the sum over all ready->finished paths.
class MpoBuilder {
 public:
  MpoBuilder(std::vector<int> phys_dims, int num_states);
  void add(int pos, int from, int to, const Mat& op);
  Mpo build() const;

 private:
  std::vector<int> phys_dims_;
  int num_states_;
  std::vector<std::map<std::pair<int, int>, Mat>> transitions_;
};

/// <state| op |state> without normalization.
cplx mpo_matrix_element(const MpsState& bra, const Mpo& op, const MpsState& ket);

/// Real expectation value of a Hermitian MPO on a normalized state.
/// Throws if the state is not normalized (|norm-1| > 1e-8) or if the
/// imaginary residue exceeds 1e-10 * scale.
double expectation(const MpsState& state, const Mpo& op);

}  // namespace lgt
