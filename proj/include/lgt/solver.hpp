#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lgt/model.hpp"
#include "lgt/mpo.hpp"
#include "lgt/mps.hpp"

namespace lgt {

/// Per-sweep energy record of a variational search.
struct ConvergenceTrace {
  std::vector<double> energies;
  double final_relative_change = 0.0;
  int sweeps = 0;
};

void write_trace_csv(const ConvergenceTrace& trace, const std::string& path);

struct GroundStateResult {
  MpsState state;
  double energy = 0.0;   // dimensionless, units of a g^2 / 2
  ConvergenceTrace trace;
  int bond_dim = 0;
  bool converged = false;
};

struct SolverOptions {
  int max_bond = 32;
  double rel_tol = 1e-8;      // relative energy change per sweep
  int max_sweeps = 200;
  int min_sweeps = 2;
  double svd_cutoff = 1e-14;
  std::uint64_t seed = 1;     // random-restart seeds derive from this
  const MpsState* warm_start = nullptr;
};

/// Variational two-site sweeping minimization of the Hamiltonian MPO.
/// The search starts from the physical strong-coupling product state (or the
/// warm start) so the penalty terms only need to hold the sector, not find
/// it. A non-converged search returns the partial result with
/// `converged = false` rather than throwing.
GroundStateResult find_ground_state(const HamiltonianRep& h, const SolverOptions& opts);

/// First excited state in the physical sector: the same sweeping problem for
/// H + w |g><g|. Retries from seeded random states (up to 3) when the
/// orthogonality check |<g|e>| < 1e-6 or the sector check <P> < 1e-8 fails,
/// then throws. `orth_weight <= 0` selects 100 * (E_max bound - E0).
GroundStateResult find_first_excited(const HamiltonianRep& h,
                                     const GroundStateResult& ground,
                                     const SolverOptions& opts,
                                     double orth_weight = 0.0);

double default_orth_weight(const ModelSpec& spec, double x, double ground_energy);

struct GapPoint {
  double x = 0.0;
  double gap = 0.0;
  double e0 = 0.0;
  double e1 = 0.0;
};

/// Gap E1 - E0 over a list of couplings; consecutive points reuse the
/// previous solutions as warm starts.
std::vector<GapPoint> compute_gap_curve(const ModelSpec& spec,
                                        const std::vector<double>& x_values,
                                        const SolverOptions& opts);

/// Linear extrapolation of the energy in 1/D through the two largest bond
/// dimensions; the error estimate is the distance from the largest-D value.
std::pair<double, double> extrapolate_bond_dimension(
    const std::vector<std::pair<int, double>>& d_energy_points);

/// Deterministic seed for restarts, derived from the instance parameters.
std::uint64_t restart_seed(const ModelSpec& spec, double x, int max_bond, int attempt);

}  // namespace lgt
