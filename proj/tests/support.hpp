#pragma once

// Dense test oracles, independent of the tensor-network code paths they
// check: Kronecker embeddings, dense matrix exponentials and helpers.

#include <random>
#include <vector>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "lgt/types.hpp"

namespace lgt::test {

/// Embed a window operator acting on consecutive positions
/// [first, first + k) into the full tensor product space.
inline Mat embed_window(const std::vector<int>& dims, int first, const Mat& op) {
  Eigen::Index left = 1, right = 1;
  for (int i = 0; i < first; ++i) left *= dims[i];
  Eigen::Index wdim = 1;
  int i = first;
  while (wdim < op.rows()) {
    wdim *= dims[i];
    ++i;
  }
  if (wdim != op.rows()) throw std::invalid_argument("window does not align with dims");
  for (std::size_t j = i; j < dims.size(); ++j) right *= dims[j];
  const Mat il = Mat::Identity(left, left);
  const Mat ir = Mat::Identity(right, right);
  return Eigen::kroneckerProduct(il, Eigen::kroneckerProduct(op, ir).eval()).eval();
}

/// exp(scale * H) for Hermitian H via eigendecomposition.
inline Mat expm_hermitian(const Mat& h, cplx scale) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(h);
  Vec phases(eig.eigenvalues().size());
  for (Eigen::Index k = 0; k < phases.size(); ++k)
    phases(k) = std::exp(scale * eig.eigenvalues()(k));
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

/// Haar-ish random unitary from the QR of a Gaussian matrix.
inline Mat random_unitary(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Mat a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = cplx(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Mat> qr(a);
  return Mat(qr.householderQ());
}

inline Vec random_vector(Eigen::Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Vec v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = cplx(gauss(rng), gauss(rng));
  v.normalize();
  return v;
}

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace lgt::test
