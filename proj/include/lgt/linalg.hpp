#pragma once

#include <functional>
#include <utility>

#include "lgt/types.hpp"

namespace lgt {

/// Result of a truncated singular value decomposition A ~= U * S * V^H.
/// `discarded_weight` is the sum of squared singular values that were dropped,
/// normalized by the total sum of squares (0 for exact splits).
struct TruncatedSvd {
  Mat u;               // m x k
  RVec singular;       // k
  Mat vh;              // k x n
  double discarded_weight = 0.0;
  int kept = 0;
};

/// Truncated SVD keeping at most `max_rank` singular values (max_rank <= 0
/// means unbounded) and dropping values below `rel_cutoff * sigma_max`.
/// Ties at the truncation boundary are resolved by index order (descending
/// singular values as returned by the backend).
TruncatedSvd svd_truncated(const Mat& a, int max_rank, double rel_cutoff);

/// Same contract as svd_truncated but computed from the Gram matrix
/// A A^H (or A^H A, whichever is smaller). Roughly 3-5x faster for the
/// tensor-split shapes used in gate application; singular values below
/// ~1e-8 * sigma_max are not resolved and count as discarded.
TruncatedSvd svd_truncated_gram(const Mat& a, int max_rank, double rel_cutoff);

/// Lowest eigenpair of a Hermitian operator given only its action.
/// Lanczos with full reorthogonalization; stops when the residual
/// |H v - theta v| drops below `tol * max(1, |theta|)` or after max_iter
/// matrix applications.
struct LanczosResult {
  double eigenvalue = 0.0;
  Vec eigenvector;
  int iterations = 0;
  bool converged = false;
};

LanczosResult lanczos_lowest(const std::function<void(const Vec&, Vec&)>& apply_h,
                             const Vec& start, int max_iter, double tol);

/// y = exp(scale * H) * v for Hermitian H via a Lanczos-Krylov projection.
/// `scale` is typically -i*dt. The Krylov dimension adapts up to max_dim
/// using the standard residual estimate against `tol`.
Vec lanczos_expm_apply(const std::function<void(const Vec&, Vec&)>& apply_h,
                       const Vec& v, cplx scale, int max_dim, double tol);

/// Ordinary (optionally weighted) linear least squares: minimizes
/// ||W^(1/2) (A x - b)||_2. Weights are per-row; empty weights = unweighted.
/// Throws on rank deficiency.
struct LeastSquaresFit {
  RVec coefficients;
  double residual_norm = 0.0;
};

LeastSquaresFit least_squares(const Eigen::MatrixXd& a, const RVec& b,
                              const RVec& weights = RVec());

}  // namespace lgt
