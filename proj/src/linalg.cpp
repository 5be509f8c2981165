#include "lgt/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace lgt {

namespace {

TruncatedSvd truncate_from_full(const Mat& u, const RVec& s, const Mat& vh,
                                int max_rank, double rel_cutoff) {
  const int n = static_cast<int>(s.size());
  double total = s.squaredNorm();
  double smax = n > 0 ? s(0) : 0.0;
  int keep = n;
  if (max_rank > 0) keep = std::min(keep, max_rank);
  // Singular values arrive sorted descending; drop the tail below cutoff.
  const double floor_val = rel_cutoff * smax;
  while (keep > 1 && s(keep - 1) < floor_val) --keep;
  if (keep < 1) keep = 1;

  TruncatedSvd out;
  out.u = u.leftCols(keep);
  out.singular = s.head(keep);
  out.vh = vh.topRows(keep);
  out.kept = keep;
  double kept_weight = out.singular.squaredNorm();
  out.discarded_weight = total > 0.0 ? std::max(0.0, (total - kept_weight) / total) : 0.0;
  return out;
}

}  // namespace

TruncatedSvd svd_truncated(const Mat& a, int max_rank, double rel_cutoff) {
  // BDCSVD is much faster than Jacobi beyond tiny sizes; Jacobi is more
  // accurate for the very small blocks.
  if (std::min(a.rows(), a.cols()) <= 16) {
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return truncate_from_full(svd.matrixU(), svd.singularValues(),
                              svd.matrixV().adjoint(), max_rank, rel_cutoff);
  }
  Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return truncate_from_full(svd.matrixU(), svd.singularValues(),
                            svd.matrixV().adjoint(), max_rank, rel_cutoff);
}

TruncatedSvd svd_truncated_gram(const Mat& a, int max_rank, double rel_cutoff) {
  const bool rows_small = a.rows() <= a.cols();
  const Mat gram = rows_small ? Mat(a * a.adjoint()) : Mat(a.adjoint() * a);
  Eigen::SelfAdjointEigenSolver<Mat> eig(gram);
  if (eig.info() != Eigen::Success)
    return svd_truncated(a, max_rank, rel_cutoff);

  const int m = static_cast<int>(gram.rows());
  // Eigenvalues ascend; reorder descending.
  RVec evals(m);
  Mat evecs(m, m);
  for (int i = 0; i < m; ++i) {
    evals(i) = std::max(0.0, eig.eigenvalues()(m - 1 - i));
    evecs.col(i) = eig.eigenvectors().col(m - 1 - i);
  }
  const double total = evals.sum();
  const double smax = std::sqrt(evals(0));
  // The Gram route cannot resolve singular values below ~sqrt(eps)*smax;
  // anything smaller is treated as discarded.
  const double resolve_floor = 3e-8 * smax;
  const double floor_val = std::max(rel_cutoff * smax, resolve_floor);

  int keep = m;
  if (max_rank > 0) keep = std::min(keep, max_rank);
  while (keep > 1 && std::sqrt(evals(keep - 1)) < floor_val) --keep;
  if (keep < 1) keep = 1;

  TruncatedSvd out;
  out.kept = keep;
  out.singular = evals.head(keep).cwiseSqrt();
  if (rows_small) {
    out.u = evecs.leftCols(keep);
    out.vh = Mat(keep, a.cols());
    // V^H = S^-1 U^H A
    out.vh.noalias() = out.u.adjoint() * a;
    for (int i = 0; i < keep; ++i) out.vh.row(i) /= std::max(out.singular(i), 1e-300);
  } else {
    Mat v = evecs.leftCols(keep);
    out.u = Mat(a.rows(), keep);
    out.u.noalias() = a * v;
    for (int i = 0; i < keep; ++i) out.u.col(i) /= std::max(out.singular(i), 1e-300);
    out.vh = v.adjoint();
  }
  double kept_weight = out.singular.squaredNorm();
  out.discarded_weight = total > 0.0 ? std::max(0.0, (total - kept_weight) / total) : 0.0;
  return out;
}

LanczosResult lanczos_lowest(const std::function<void(const Vec&, Vec&)>& apply_h,
                             const Vec& start, int max_iter, double tol) {
  const Eigen::Index dim = start.size();
  LanczosResult res;
  if (dim == 0) throw std::invalid_argument("lanczos: empty start vector");
  max_iter = std::min<int>(max_iter, static_cast<int>(dim));

  std::vector<Vec> basis;
  basis.reserve(max_iter);
  std::vector<double> alpha, beta;  // tridiagonal entries

  Vec v = start;
  double nrm = v.norm();
  if (nrm < 1e-300) {
    v = Vec::Zero(dim);
    v(0) = 1.0;
    nrm = 1.0;
  }
  v /= nrm;
  basis.push_back(v);

  Vec w(dim);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri_eig;

  for (int it = 0; it < max_iter; ++it) {
    apply_h(basis[it], w);
    res.iterations = it + 1;
    double a = std::real(basis[it].dot(w));
    alpha.push_back(a);
    w -= a * basis[it];
    if (it > 0) w -= beta[it - 1] * basis[it - 1];
    // Full reorthogonalization keeps the basis clean over long runs.
    for (const Vec& q : basis) w -= q.dot(w) * q;

    // Solve the current tridiagonal problem.
    const int k = it + 1;
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    tri_eig.compute(t);
    const double theta = tri_eig.eigenvalues()(0);
    const double b = w.norm();
    const double resid = b * std::abs(tri_eig.eigenvectors()(k - 1, 0));
    if (resid < tol * std::max(1.0, std::abs(theta)) || b < 1e-14 || k == dim) {
      res.eigenvalue = theta;
      res.eigenvector = Vec::Zero(dim);
      for (int i = 0; i < k; ++i)
        res.eigenvector += tri_eig.eigenvectors()(i, 0) * basis[i];
      res.eigenvector.normalize();
      res.converged = resid < tol * std::max(1.0, std::abs(theta)) || b < 1e-14;
      return res;
    }
    beta.push_back(b);
    basis.push_back(w / b);
  }

  // Out of iterations: return the best estimate.
  const int k = static_cast<int>(alpha.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    t(i, i) = alpha[i];
    if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[i];
  }
  tri_eig.compute(t);
  res.eigenvalue = tri_eig.eigenvalues()(0);
  res.eigenvector = Vec::Zero(dim);
  for (int i = 0; i < k; ++i)
    res.eigenvector += tri_eig.eigenvectors()(i, 0) * basis[i];
  res.eigenvector.normalize();
  res.converged = false;
  return res;
}

Vec lanczos_expm_apply(const std::function<void(const Vec&, Vec&)>& apply_h,
                       const Vec& v, cplx scale, int max_dim, double tol) {
  const Eigen::Index dim = v.size();
  const double vnorm = v.norm();
  if (vnorm < 1e-300) return v;
  max_dim = std::min<int>(max_dim, static_cast<int>(dim));

  std::vector<Vec> basis;
  basis.reserve(max_dim);
  std::vector<double> alpha, beta;
  basis.push_back(v / vnorm);
  Vec w(dim);

  auto krylov_coeff = [&](int k) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t);
    // First column of exp(scale*T): sum_i exp(scale l_i) u_i u_i(0).
    Vec coeff = Vec::Zero(k);
    for (int i = 0; i < k; ++i) {
      cplx phase = std::exp(scale * eig.eigenvalues()(i));
      for (int j = 0; j < k; ++j)
        coeff(j) += phase * eig.eigenvectors()(j, i) * eig.eigenvectors()(0, i);
    }
    return coeff;
  };
  auto assemble = [&](const Vec& coeff) {
    Vec out = Vec::Zero(dim);
    for (int j = 0; j < coeff.size(); ++j) out += coeff(j) * basis[j];
    return Vec(out * vnorm);
  };

  for (int it = 0; it < max_dim; ++it) {
    apply_h(basis[it], w);
    double a = std::real(basis[it].dot(w));
    alpha.push_back(a);
    w -= a * basis[it];
    if (it > 0) w -= beta[it - 1] * basis[it - 1];
    for (const Vec& q : basis) w -= q.dot(w) * q;
    double b = w.norm();
    const int k = it + 1;
    if (b < 1e-14 || k == max_dim || k == dim) {
      return assemble(krylov_coeff(k));
    }
    // Convergence estimate: weight carried by the newest Krylov direction.
    if (k >= 4) {
      Vec coeff = krylov_coeff(k);
      if (std::abs(coeff(k - 1)) < tol) return assemble(coeff);
    }
    beta.push_back(b);
    basis.push_back(w / b);
  }
  return assemble(krylov_coeff(static_cast<int>(alpha.size())));
}

LeastSquaresFit least_squares(const Eigen::MatrixXd& a, const RVec& b,
                              const RVec& weights) {
  if (a.rows() != b.size()) throw std::invalid_argument("least_squares: size mismatch");
  if (a.rows() < a.cols()) throw std::invalid_argument("least_squares: underdetermined system");
  Eigen::MatrixXd aw = a;
  RVec bw = b;
  if (weights.size() > 0) {
    if (weights.size() != b.size())
      throw std::invalid_argument("least_squares: weight size mismatch");
    for (Eigen::Index i = 0; i < b.size(); ++i) {
      const double w = std::sqrt(weights(i));
      aw.row(i) *= w;
      bw(i) *= w;
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(aw);
  if (qr.rank() < a.cols())
    throw std::runtime_error("least_squares: rank-deficient design matrix");
  LeastSquaresFit fit;
  fit.coefficients = qr.solve(bw);
  fit.residual_norm = (aw * fit.coefficients - bw).norm();
  return fit;
}

}  // namespace lgt
