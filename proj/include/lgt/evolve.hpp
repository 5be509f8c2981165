#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lgt/model.hpp"
#include "lgt/mps.hpp"

namespace lgt {

/// Adiabatic coupling ramp x(t) = x_final * (t/T)^exponent plus the relative
/// strength of the gauge-breaking noise term.
struct RampSchedule {
  double x_final = 100.0;
  double total_time = 80.0;
  int exponent = 3;
  double lambda = 0.0;

  double value(double t) const {
    if (t < -1e-12 || t > total_time * (1.0 + 1e-12))
      throw std::out_of_range("ramp evaluated outside [0, T]");
    if (total_time <= 0.0) return x_final;
    double r = std::max(0.0, std::min(1.0, t / total_time));
    double v = 1.0;
    for (int k = 0; k < exponent; ++k) v *= r;
    return x_final * v;
  }
};

inline double ramp_value(const RampSchedule& schedule, double t) {
  return schedule.value(t);
}

/// Time series sampled during an evolution run.
struct TrajectoryRecord {
  std::vector<double> time;
  std::vector<double> x;
  std::vector<double> energy;
  std::vector<double> overlap;           // |<reference|psi>|, -1 if no reference
  std::vector<double> penalty_per_site;
  std::vector<double> total_charge;
  std::vector<double> truncation_weight; // accumulated
  std::vector<double> norm;

  std::size_t size() const { return time.size(); }
  void append(double t, double xv, double e, double ov, double pen, double q,
              double trunc, double nrm);
};

void write_trajectory_csv(const TrajectoryRecord& rec, const std::string& path,
                          const std::string& config_hash = "");
TrajectoryRecord read_trajectory_csv(const std::string& path);

/// One second-order Trotter step: layers of commuting three-site gates with
/// couplings evaluated at the step midpoint (odd blocks at dt/2, even blocks
/// at dt, odd again at dt/2).
struct TrotterPlan {
  struct Gate {
    int window_start = 0;
    Mat u;
  };
  double dt = 0.0;
  int order = 2;
  std::vector<std::vector<Gate>> layers;
};

TrotterPlan build_trotter_step(const ModelSpec& spec, double x_mid,
                               double lambda, double dt);

struct EvolveParams {
  double dt = 0.01;
  int max_bond = 40;
  double svd_cutoff = 1e-14;
  bool use_gram_svd = true;
  int sample_every = 50;            // steps between recorded samples
  double norm_loss_abort = 0.01;    // abort when 1 - norm exceeds this
  std::string checkpoint_path;      // empty = no checkpointing
  int checkpoint_every = 2000;      // steps
};

/// Adiabatic preparation driver: starts from the strong-coupling state and
/// integrates the ramped Hamiltonian with second-order Trotter steps,
/// recording observables. When a reference state is supplied the overlap
/// column tracks |<ref|psi(t)>|.
TrajectoryRecord evolve_adiabatic(const ModelSpec& spec, const RampSchedule& schedule,
                                  const EvolveParams& params,
                                  const MpsState* reference = nullptr);

/// Relative energy error of the final sample against the reference energy;
/// falls back to the absolute error (flagged) when the reference is zero.
struct EnergyError {
  double value = 0.0;
  bool absolute = false;
};

EnergyError final_energy_error(const TrajectoryRecord& record, double reference_energy);

}  // namespace lgt
