#include "lgt/evolve.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <Eigen/Eigenvalues>

#include "lgt/csv.hpp"

namespace lgt {

void TrajectoryRecord::append(double t, double xv, double e, double ov, double pen,
                              double q, double trunc, double nrm) {
  time.push_back(t);
  x.push_back(xv);
  energy.push_back(e);
  overlap.push_back(ov);
  penalty_per_site.push_back(pen);
  total_charge.push_back(q);
  truncation_weight.push_back(trunc);
  norm.push_back(nrm);
}

void write_trajectory_csv(const TrajectoryRecord& rec, const std::string& path,
                          const std::string& config_hash) {
  CsvWriter csv(path,
                {"t", "x", "energy", "overlap", "penalty_per_site", "total_charge",
                 "truncation_weight", "norm"},
                config_hash.empty() ? "" : "config " + config_hash);
  for (std::size_t i = 0; i < rec.size(); ++i)
    csv.row({rec.time[i], rec.x[i], rec.energy[i], rec.overlap[i],
             rec.penalty_per_site[i], rec.total_charge[i], rec.truncation_weight[i],
             rec.norm[i]});
}

TrajectoryRecord read_trajectory_csv(const std::string& path) {
  const CsvTable t = CsvTable::read(path);
  TrajectoryRecord rec;
  rec.time = t.numeric_column("t");
  rec.x = t.numeric_column("x");
  rec.energy = t.numeric_column("energy");
  rec.overlap = t.numeric_column("overlap");
  rec.penalty_per_site = t.numeric_column("penalty_per_site");
  rec.total_charge = t.numeric_column("total_charge");
  rec.truncation_weight = t.numeric_column("truncation_weight");
  rec.norm = t.numeric_column("norm");
  return rec;
}

TrotterPlan build_trotter_step(const ModelSpec& spec, double x_mid, double lambda,
                               double dt) {
  const std::vector<GateBlock> blocks = gate_blocks(spec, x_mid, lambda);
  auto layer = [&](bool odd, double tau) {
    std::vector<TrotterPlan::Gate> gates;
    for (const GateBlock& b : blocks) {
      if ((b.index % 2 == 1) != odd) continue;
      Eigen::SelfAdjointEigenSolver<Mat> eig(b.h);
      Mat u = Mat::Zero(b.h.rows(), b.h.cols());
      Vec phases(eig.eigenvalues().size());
      for (Eigen::Index k = 0; k < phases.size(); ++k)
        phases(k) = std::exp(-iu * tau * eig.eigenvalues()(k));
      u = eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
      gates.push_back({b.window_start(), std::move(u)});
    }
    return gates;
  };
  TrotterPlan plan;
  plan.dt = dt;
  plan.layers.push_back(layer(true, dt / 2));
  plan.layers.push_back(layer(false, dt));
  plan.layers.push_back(layer(true, dt / 2));
  return plan;
}

namespace {

struct Checkpoint {
  int step = 0;
  double norm_sq = 1.0;
};

void save_checkpoint(const std::string& base, const MpsState& state, int step,
                     double norm_sq) {
  save_mps(state, base + ".mps.tmp");
  std::ofstream meta(base + ".meta.tmp", std::ios::trunc);
  meta << "step " << step << "\n";
  meta << "norm_sq " << format_double(norm_sq) << "\n";
  meta.close();
  std::filesystem::rename(base + ".mps.tmp", base + ".mps");
  std::filesystem::rename(base + ".meta.tmp", base + ".meta");
}

bool load_checkpoint(const std::string& base, MpsState& state, Checkpoint& ck) {
  if (!std::filesystem::exists(base + ".mps") ||
      !std::filesystem::exists(base + ".meta"))
    return false;
  state = load_mps(base + ".mps");
  std::ifstream meta(base + ".meta");
  std::string key;
  while (meta >> key) {
    if (key == "step") meta >> ck.step;
    else if (key == "norm_sq") meta >> ck.norm_sq;
  }
  return true;
}

}  // namespace

TrajectoryRecord evolve_adiabatic(const ModelSpec& spec, const RampSchedule& schedule,
                                  const EvolveParams& params, const MpsState* reference) {
  spec.validate();
  if (params.dt <= 0) throw std::invalid_argument("dt must be positive");
  const int steps = static_cast<int>(std::llround(schedule.total_time / params.dt));
  if (std::abs(steps * params.dt - schedule.total_time) > 1e-9 * schedule.total_time + 1e-12)
    throw std::invalid_argument("dt must divide the total evolution time");

  MpsState psi = strong_coupling_state(spec);
  double norm_sq = 1.0;  // running product of kept truncation weight
  int first_step = 0;
  if (!params.checkpoint_path.empty()) {
    Checkpoint ck;
    if (load_checkpoint(params.checkpoint_path, psi, ck)) {
      first_step = ck.step;
      norm_sq = ck.norm_sq;
    }
  }

  const ObservableRep penalty = penalty_observable(spec);
  const ObservableRep charge = total_charge_observable(spec);

  TruncOptions trunc;
  trunc.max_bond = params.max_bond;
  trunc.rel_cutoff = params.svd_cutoff;
  trunc.use_gram = params.use_gram_svd;

  TrajectoryRecord rec;
  auto record = [&](double t) {
    const double xv = schedule.value(std::min(t, schedule.total_time));
    psi.move_center_to(0);
    psi.normalize();
    const double energy = expectation(psi, energy_observable(spec, xv));
    const double pen = expectation(psi, penalty);
    const double q = expectation(psi, charge);
    const double ov = reference ? std::abs(overlap(*reference, psi)) : -1.0;
    rec.append(t, xv, energy, ov, pen / spec.num_sites, q, psi.cumulative_truncation,
               std::sqrt(norm_sq));
  };
  if (first_step == 0) record(0.0);

  for (int s = first_step; s < steps; ++s) {
    const double t_mid = (s + 0.5) * params.dt;
    const double x_mid = schedule.value(std::min(t_mid, schedule.total_time));
    const TrotterPlan plan =
        build_trotter_step(spec, x_mid, schedule.lambda, params.dt);

    // Layers alternate sweep direction so the canonical center zig-zags.
    bool forward = true;
    for (const auto& layer : plan.layers) {
      if (layer.empty()) continue;
      if (forward) {
        psi.move_center_to(layer.front().window_start);
        for (const auto& gate : layer) {
          psi.move_center_to(gate.window_start);
          TruncationReport rep = apply_three_site_gate(psi, gate.u, gate.window_start,
                                                       trunc, true);
          for (double w : rep.discarded_weights) norm_sq *= (1.0 - w);
        }
      } else {
        psi.move_center_to(layer.back().window_start + 2);
        for (auto it = layer.rbegin(); it != layer.rend(); ++it) {
          psi.move_center_to(it->window_start + 2);
          TruncationReport rep =
              apply_three_site_gate(psi, it->u, it->window_start, trunc, false);
          for (double w : rep.discarded_weights) norm_sq *= (1.0 - w);
        }
      }
      // Gates renormalize at the SVD cuts only implicitly; restore norm 1.
      psi.move_center_to(*psi.center);
      psi.normalize();
      forward = !forward;
    }

    if (1.0 - norm_sq > params.norm_loss_abort)
      throw std::runtime_error(
          "evolution aborted: accumulated truncation norm loss " +
          format_double(1.0 - norm_sq) + " exceeds " +
          format_double(params.norm_loss_abort));

    const int done = s + 1;
    if (done % params.sample_every == 0 || done == steps) record(done * params.dt);
    if (!params.checkpoint_path.empty() && done % params.checkpoint_every == 0 &&
        done != steps)
      save_checkpoint(params.checkpoint_path, psi, done, norm_sq);
  }
  return rec;
}

EnergyError final_energy_error(const TrajectoryRecord& record, double reference_energy) {
  if (record.size() == 0) throw std::invalid_argument("empty trajectory");
  EnergyError err;
  const double e = record.energy.back();
  if (std::abs(reference_energy) < 1e-14) {
    err.value = std::abs(e - reference_energy);
    err.absolute = true;
  } else {
    err.value = std::abs(e - reference_energy) / std::abs(reference_energy);
  }
  return err;
}

}  // namespace lgt
