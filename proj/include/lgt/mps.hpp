#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lgt/linalg.hpp"
#include "lgt/types.hpp"

namespace lgt {

/// Rank-3 MPS tensor (left bond, physical, right bond), stored as one
/// (left x right) matrix per physical index.
struct MpsTensor {
  std::vector<Mat> m;

  int phys() const { return static_cast<int>(m.size()); }
  int left() const { return m.empty() ? 0 : static_cast<int>(m[0].rows()); }
  int right() const { return m.empty() ? 0 : static_cast<int>(m[0].cols()); }

  double squared_norm() const {
    double s = 0.0;
    for (const Mat& a : m) s += a.squaredNorm();
    return s;
  }
};

/// Truncation bookkeeping for a gate application or compression sweep.
/// Discarded weights are relative to the pre-cut squared norm of the
/// affected block; the fidelity loss of the whole operation is bounded by
/// their sum.
struct TruncationReport {
  std::vector<double> discarded_weights;
  int max_bond_reached = 0;

  double total() const {
    double s = 0.0;
    for (double w : discarded_weights) s += w;
    return s;
  }
  void merge(const TruncationReport& other) {
    discarded_weights.insert(discarded_weights.end(),
                             other.discarded_weights.begin(),
                             other.discarded_weights.end());
    max_bond_reached = std::max(max_bond_reached, other.max_bond_reached);
  }
};

/// Options controlling SVD truncation in gate application and compression.
struct TruncOptions {
  int max_bond = 0;          // 0 = unbounded
  double rel_cutoff = 1e-14; // relative to the largest singular value per cut
  bool use_gram = false;     // faster Gram-matrix SVD (resolves down to ~1e-8)
};

/// Open-boundary matrix product state over an arbitrary chain of physical
/// dimensions. Operations that claim a canonical form keep `center` valid;
/// mutating operations invalidate it when appropriate.
class MpsState {
 public:
  std::vector<MpsTensor> tensors;
  std::vector<int> phys_dims;
  std::optional<int> center;
  double cumulative_truncation = 0.0;

  MpsState() = default;

  int length() const { return static_cast<int>(tensors.size()); }
  /// Bond dimension to the right of tensor i (i in [0, length-2]).
  int bond_dim(int i) const { return tensors[i].right(); }
  int max_bond_dim() const;

  /// Product state |basis[0], basis[1], ...>.
  static MpsState product_state(const std::vector<int>& dims,
                                const std::vector<int>& basis);
  /// Random complex-Gaussian state with the given bond dimension, canonical
  /// at position 0 and normalized. Deterministic in the seed.
  static MpsState random_state(const std::vector<int>& dims, int bond,
                               std::uint64_t seed);

  double norm() const;
  void normalize();

  /// Move the canonical center to `pos` (requires a valid center).
  void move_center_to(int pos);
  /// Establish the canonical form from scratch at `pos`.
  void canonicalize_at(int pos);

  /// Largest deviation from the isometry conditions implied by `center`.
  double isometry_violation() const;
};

/// Value-returning canonicalization (the represented state is unchanged).
MpsState canonicalize(MpsState state, int center);

/// Exact overlap <a|b>; throws on physical-dimension mismatch.
cplx overlap(const MpsState& a, const MpsState& b);

/// Contract to a dense state vector with position 0 as the most significant
/// index. Guarded against dimensions above `max_dim` entries.
Vec to_dense_vector(const MpsState& state, std::int64_t max_dim = (1 << 22));

/// Apply a unitary (or general) gate acting on the three consecutive
/// positions starting at `first_pos`, re-splitting with two truncated SVDs.
/// The gate matrix is indexed row-major over (p0, p1, p2). The canonical
/// center must already lie inside the window; afterwards it sits at the
/// window edge selected by `center_to_right`.
TruncationReport apply_three_site_gate(MpsState& state, const Mat& gate,
                                       int first_pos, const TruncOptions& opts,
                                       bool center_to_right = true);

/// Full SVD compression sweep down to the given bond/cutoff.
TruncationReport compress(MpsState& state, const TruncOptions& opts);

/// Binary snapshot used for checkpoint/restart: header (N, d, D,
/// physical dims), then per-tensor dims and row-major (left, phys, right)
/// complex data as little-endian 64-bit floats.
void save_mps(const MpsState& state, const std::string& path, int max_bond_hint = 0);
MpsState load_mps(const std::string& path);

}  // namespace lgt
