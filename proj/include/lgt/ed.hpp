#pragma once

#include <cstdint>
#include <tuple>
#include <vector>

#include "lgt/evolve.hpp"
#include "lgt/model.hpp"
#include "lgt/types.hpp"

namespace lgt {

/// Basis of the physical (Gauss-law fulfilling, zero total charge) sector,
/// listed as global dense indices. The global basis orders chain positions
/// left to right with position 0 most significant; within a factor, site
/// states are {empty, occupied} and link states ascend in flux -J..J.
struct SectorBasis {
  std::vector<std::int64_t> states;
  int dimension() const { return static_cast<int>(states.size()); }
};

/// Exact small-instance realization of a model: diagonal pieces, sparse
/// window terms for the hopping and noise, Gauss-operator diagonals and the
/// physical-sector basis. Serves as the independent truth source for the
/// MPS machinery.
class DenseModel {
 public:
  DenseModel(const ModelSpec& spec, double x, std::int64_t dim_cap = 600000);

  const ModelSpec& spec() const { return spec_; }
  double x() const { return x_; }
  std::int64_t dim() const { return dim_; }
  const SectorBasis& sector() const { return sector_; }

  /// y = W(x_eff) v, optionally with the noise term at strength
  /// noise_strength = lambda * x(t) and the penalty terms of the spec.
  void apply(const Vec& v, Vec& y, double x_eff, double noise_strength,
             bool include_penalties) const;

  /// Dense matrix of W(x) (optionally plus penalties); guarded by dim.
  Mat dense_matrix(bool include_penalties, std::int64_t max_dim = 4096) const;
  Mat dense_noise_matrix(std::int64_t max_dim = 4096) const;
  /// Dense matrix of Gauss operator n (1-based): G_n for cQED, U_n for Zd.
  Mat dense_gauss_matrix(int n, std::int64_t max_dim = 4096) const;

  /// Hamiltonian restricted to the physical sector at coupling x_eff.
  Mat sector_matrix(double x_eff) const;
  /// Embed a sector vector into the full Hilbert space.
  Vec sector_to_full(const Vec& sector_vec) const;

  /// Diagonal of the Gauss-violation observable (>= 0, zero on the sector).
  const RVec& penalty_diagonal() const { return penalty_diag_; }
  const RVec& charge_diagonal() const { return charge_diag_; }

  std::int64_t strong_coupling_index() const;
  double energy_expectation(const Vec& v, double x_eff) const;

  /// Decoded configuration (per-position local indices) of a global index.
  std::vector<int> decode(std::int64_t index) const;

 private:
  struct WindowTerm {
    std::int64_t wdim = 1, sdim = 1, pdim = 1;
    std::vector<std::tuple<int, int, cplx>> entries;
  };

  void apply_window(const WindowTerm& term, cplx scale, const Vec& v, Vec& y) const;

  ModelSpec spec_;
  double x_;
  std::int64_t dim_;
  std::vector<std::int64_t> strides_;
  RVec static_diag_;    // electric + mass terms
  RVec penalty_diag_;   // Gauss violation observable
  RVec charge_diag_;
  std::vector<WindowTerm> hop_terms_;    // unit coupling
  std::vector<WindowTerm> noise_terms_;  // unit strength
  SectorBasis sector_;
};

DenseModel build_dense(const ModelSpec& spec, double x);

/// Lowest k eigenpairs, optionally restricted to the physical zero-charge
/// sector. Sector vectors are returned embedded in the full space.
std::pair<RVec, std::vector<Vec>> exact_eigs(const DenseModel& model, int k,
                                             bool sector);

/// Midpoint-rule exact integration of the ramped (optionally noisy)
/// Hamiltonian from the strong-coupling state; the overlap column references
/// the sector ground state at x_final unless `reference` is supplied.
TrajectoryRecord exact_evolve(const DenseModel& model, const RampSchedule& schedule,
                              double dt, int sample_every = 10,
                              const Vec* reference = nullptr);

/// Dense state vector of an MPS in the global basis ordering (bridges the
/// tensor and exact representations for cross-checks).
Vec mps_to_dense(const MpsState& state);

}  // namespace lgt
