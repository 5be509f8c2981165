#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lgt {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

constexpr cplx iu{0.0, 1.0};

/// Which finite-dimensional realization of the gauge links is used.
enum class Variant { TruncatedCQED, Zd };

inline std::string variant_name(Variant v) {
  return v == Variant::TruncatedCQED ? "cqed" : "zd";
}

inline Variant variant_from_name(const std::string& s) {
  if (s == "cqed" || s == "cQED" || s == "CQED") return Variant::TruncatedCQED;
  if (s == "zd" || s == "Zd" || s == "ZD") return Variant::Zd;
  throw std::invalid_argument("unknown model variant: " + s);
}

/// Static description of one lattice gauge model instance.
///
/// The chain has N fermionic sites and N-1 links in between, laid out as
/// 2N-1 tensor positions with alternating physical dimensions
/// [2, d, 2, d, ..., 2]. There is no link before site 1 and none after
/// site N (open boundary, zero background flux).
struct ModelSpec {
  Variant variant = Variant::Zd;
  int num_sites = 2;          // N, number of fermionic sites
  int link_dim = 3;           // d, odd and >= 3
  double mass_mu = 0.0;       // dimensionless mass 2m/(a g^2)
  double gauss_penalty = 0.0; // coefficient on the Gauss-violation observable
  double charge_penalty = 0.0; // coefficient on (total charge)^2

  void validate() const {
    if (num_sites < 2) throw std::invalid_argument("need at least 2 sites");
    if (link_dim < 3 || link_dim % 2 == 0)
      throw std::invalid_argument("link dimension must be odd and >= 3");
    if (gauss_penalty < 0 || charge_penalty < 0)
      throw std::invalid_argument("penalty coefficients must be >= 0");
  }

  int chain_length() const { return 2 * num_sites - 1; }

  /// Physical dimension at chain position i (0-based): even = site, odd = link.
  int phys_dim(int pos) const { return pos % 2 == 0 ? 2 : link_dim; }

  std::vector<int> phys_dims() const {
    std::vector<int> dims(chain_length());
    for (int i = 0; i < chain_length(); ++i) dims[i] = phys_dim(i);
    return dims;
  }

  /// 1-based site index n -> chain position.
  static int site_pos(int n) { return 2 * (n - 1); }
  /// 1-based link index n (link between sites n and n+1) -> chain position.
  static int link_pos(int n) { return 2 * n - 1; }

  /// Staggered offset q_n = [n odd] entering charge and Gauss operators.
  static int stagger(int n) { return (n % 2 == 1) ? 1 : 0; }
};

}  // namespace lgt
