#include "lgt/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "lgt/analysis.hpp"
#include "lgt/csv.hpp"
#include "lgt/svg.hpp"

namespace fs = std::filesystem;

namespace lgt {

namespace {

/// Run fn(0..n-1) on a bounded pool; collects the first failure message.
void run_indexed(int n, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::string first_error;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (first_error.empty()) first_error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (!first_error.empty()) throw std::runtime_error(first_error);
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == '.' || c == '/' || c == ' ') c = '_';
  return s;
}

/// Short human tag naming the expanded axes of a grid point.
std::string point_tag(const ConfigMap& parent, const ConfigMap& point) {
  std::string tag;
  for (const auto& [key, items] : parent.values) {
    if (items.size() < 2) continue;
    const auto& v = point.values.at(key);
    std::string shortkey = key;
    const auto dot = shortkey.rfind('.');
    if (dot != std::string::npos) shortkey = shortkey.substr(dot + 1);
    tag += "_" + sanitize(shortkey) + sanitize(v[0]);
  }
  return tag.empty() ? "_single" : tag;
}

struct JobPaths {
  fs::path dir;
  fs::path done_marker;
};

JobPaths prepare_dir(const ConfigMap& cfg, const RunOptions& opts, const std::string& job) {
  JobPaths p;
  const std::string dir =
      !opts.out_dir.empty() ? opts.out_dir : cfg.get_string("output.dir", "runs/" + job);
  p.dir = dir;
  fs::create_directories(p.dir);
  p.done_marker = p.dir / (job + ".done");
  return p;
}

bool already_done(const JobPaths& p, const ConfigMap& cfg, bool force, std::ostream& log) {
  if (force) return false;
  std::ifstream in(p.done_marker);
  if (!in) return false;
  std::string stored;
  in >> stored;
  if (stored == cfg.hash_hex()) {
    log << "up to date (config " << stored << "), skipping; use --force to re-run\n";
    return true;
  }
  return false;
}

void mark_done(const JobPaths& p, const ConfigMap& cfg) {
  std::ofstream out(p.done_marker, std::ios::trunc);
  out << cfg.hash_hex() << "\n";
}

// ---------------------------------------------------------------------------
// ground job

struct GroundRow {
  ConfigMap point;
  double energy = 0.0, penalty = 0.0, charge = 0.0, omega = 0.0;
  int sweeps = 0;
  bool converged = false;
};

int run_ground(const ConfigMap& cfg, const RunOptions& opts, std::ostream& log) {
  const JobPaths paths = prepare_dir(cfg, opts, "ground");
  if (already_done(paths, cfg, opts.force, log)) return 0;

  const std::vector<ConfigMap> grid = cfg.expand_grid();
  std::vector<GroundRow> rows(grid.size());
  const bool write_trace = cfg.get_bool("solver.write_trace", false);

  run_indexed(static_cast<int>(grid.size()), opts.workers, [&](int i) {
    const ConfigMap& point = grid[i];
    const ModelSpec spec = spec_from_config(point);
    const double x = point.get_double("x", 0.0);
    const HamiltonianRep h = build_hamiltonian(spec, x);
    const SolverOptions sopts = solver_options_from_config(point);
    const GroundStateResult res = find_ground_state(h, sopts);
    GroundRow row;
    row.point = point;
    row.energy = res.energy;
    row.sweeps = res.trace.sweeps;
    row.converged = res.converged;
    row.penalty = expectation(res.state, penalty_observable(spec));
    row.charge = expectation(res.state, total_charge_observable(spec));
    row.omega = x > 0 ? res.energy / (2.0 * spec.num_sites * x) : 0.0;
    rows[i] = std::move(row);
    if (write_trace)
      write_trace_csv(res.trace,
                      (paths.dir / ("trace" + point_tag(cfg, point) + ".csv")).string());
    if (point.get_bool("solver.save_state", false))
      save_mps(res.state,
               (paths.dir / ("ground" + point_tag(cfg, point) + ".mps")).string(),
               sopts.max_bond);
  });

  CsvWriter csv((paths.dir / "ground.csv").string(),
                {"variant", "N", "d", "mu", "x", "D", "energy", "omega", "sweeps",
                 "converged", "penalty", "charge"},
                "config " + cfg.hash_hex());
  for (const GroundRow& r : rows) {
    const ModelSpec spec = spec_from_config(r.point);
    csv.row(std::vector<std::string>{
        variant_name(spec.variant), std::to_string(spec.num_sites),
        std::to_string(spec.link_dim), format_double(spec.mass_mu),
        format_double(r.point.get_double("x", 0.0)),
        std::to_string(r.point.get_int("mps.D", 32)), format_double(r.energy),
        format_double(r.omega), std::to_string(r.sweeps),
        r.converged ? "1" : "0", format_double(r.penalty), format_double(r.charge)});
  }
  mark_done(paths, cfg);
  log << "ground: " << rows.size() << " point(s) -> " << (paths.dir / "ground.csv")
      << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// gap job

int run_gap(const ConfigMap& cfg, const RunOptions& opts, std::ostream& log) {
  const JobPaths paths = prepare_dir(cfg, opts, "gap");
  if (already_done(paths, cfg, opts.force, log)) return 0;

  // x stays a whole curve per grid point so the solver can warm start.
  const std::vector<ConfigMap> grid = cfg.expand_grid({"x"});
  struct CurveResult {
    ConfigMap point;
    std::vector<GapPoint> gaps;
  };
  std::vector<CurveResult> curves(grid.size());
  run_indexed(static_cast<int>(grid.size()), opts.workers, [&](int i) {
    const ConfigMap& point = grid[i];
    const ModelSpec spec = spec_from_config(point);
    const std::vector<double> xs = point.get_double_list("x");
    if (xs.empty()) throw std::runtime_error("gap job needs an x list");
    curves[i] = {point, compute_gap_curve(spec, xs, solver_options_from_config(point))};
  });

  CsvWriter csv((paths.dir / "gap.csv").string(),
                {"variant", "N", "d", "D", "x", "e0", "e1", "gap"},
                "config " + cfg.hash_hex());
  for (const CurveResult& c : curves) {
    const ModelSpec spec = spec_from_config(c.point);
    for (const GapPoint& g : c.gaps)
      csv.row(std::vector<std::string>{
          variant_name(spec.variant), std::to_string(spec.num_sites),
          std::to_string(spec.link_dim), std::to_string(c.point.get_int("mps.D", 32)),
          format_double(g.x), format_double(g.e0), format_double(g.e1),
          format_double(g.gap)});
  }
  mark_done(paths, cfg);
  log << "gap: " << curves.size() << " curve(s) -> " << (paths.dir / "gap.csv") << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// evolve job

int run_evolve(const ConfigMap& cfg, const RunOptions& opts, std::ostream& log) {
  const JobPaths paths = prepare_dir(cfg, opts, "evolve");
  if (already_done(paths, cfg, opts.force, log)) return 0;

  const std::vector<ConfigMap> grid = cfg.expand_grid();

  // Reference ground states at x_final, shared across trajectories that
  // differ only in schedule parameters.
  struct RefKey {
    std::string variant;
    int n, d, ref_d;
    double x_final, mu;
    bool operator<(const RefKey& o) const {
      return std::tie(variant, n, d, ref_d, x_final, mu) <
             std::tie(o.variant, o.n, o.d, o.ref_d, o.x_final, o.mu);
    }
  };
  std::map<RefKey, GroundStateResult> references;
  auto ref_key = [](const ConfigMap& point) {
    const ModelSpec spec = spec_from_config(point);
    const int d_evo = point.get_int("mps.D", 32);
    return RefKey{variant_name(spec.variant), spec.num_sites, spec.link_dim,
                  point.get_int("evolve.ref_D", 2 * d_evo),
                  point.get_double("ramp.xF", 100.0), spec.mass_mu};
  };
  std::vector<RefKey> needed;
  for (const ConfigMap& point : grid) {
    const RefKey key = ref_key(point);
    if (!references.count(key)) {
      references[key] = GroundStateResult{};
      needed.push_back(key);
    }
  }
  std::vector<std::pair<RefKey, const ConfigMap*>> ref_jobs;
  for (const RefKey& key : needed)
    for (const ConfigMap& point : grid)
      if (!(ref_key(point) < key) && !(key < ref_key(point))) {
        ref_jobs.emplace_back(key, &point);
        break;
      }
  run_indexed(static_cast<int>(ref_jobs.size()), opts.workers, [&](int i) {
    const auto& [key, point] = ref_jobs[i];
    const ModelSpec spec = spec_from_config(*point);
    SolverOptions sopts = solver_options_from_config(*point);
    sopts.max_bond = key.ref_d;
    const HamiltonianRep h = build_hamiltonian(spec, key.x_final);
    references[key] = find_ground_state(h, sopts);
  });

  struct EvolveRow {
    ConfigMap point;
    double final_overlap = 0.0, final_energy = 0.0, ref_energy = 0.0;
    double rel_energy_error = 0.0, max_penalty = 0.0, final_penalty = 0.0;
    double max_charge = 0.0, final_norm = 1.0;
  };
  std::vector<EvolveRow> rows(grid.size());

  run_indexed(static_cast<int>(grid.size()), opts.workers, [&](int i) {
    const ConfigMap& point = grid[i];
    const ModelSpec spec = spec_from_config(point);
    const RampSchedule schedule = schedule_from_config(point);
    EvolveParams params = evolve_params_from_config(point);
    const std::string tag = point_tag(cfg, point);
    if (point.get_bool("evolve.checkpoint", true))
      params.checkpoint_path = (paths.dir / ("ck" + tag)).string();
    const GroundStateResult& ref = references.at(ref_key(point));
    const TrajectoryRecord rec =
        evolve_adiabatic(spec, schedule, params, &ref.state);
    write_trajectory_csv(rec, (paths.dir / ("traj" + tag + ".csv")).string(),
                         point.hash_hex());
    EvolveRow row;
    row.point = point;
    row.final_overlap = rec.overlap.back();
    row.final_energy = rec.energy.back();
    row.ref_energy = ref.energy;
    row.rel_energy_error = final_energy_error(rec, ref.energy).value;
    row.max_penalty = *std::max_element(rec.penalty_per_site.begin(),
                                        rec.penalty_per_site.end());
    row.final_penalty = rec.penalty_per_site.back();
    double maxq = 0.0;
    for (double q : rec.total_charge) maxq = std::max(maxq, std::abs(q));
    row.max_charge = maxq;
    row.final_norm = rec.norm.back();
    rows[i] = std::move(row);
    if (!params.checkpoint_path.empty()) {
      std::error_code ec;
      fs::remove(params.checkpoint_path + ".mps", ec);
      fs::remove(params.checkpoint_path + ".meta", ec);
    }
  });

  CsvWriter csv((paths.dir / "evolve.csv").string(),
                {"variant", "N", "d", "D", "dt", "T", "lambda", "xF", "p",
                 "final_overlap", "final_energy", "ref_energy", "rel_energy_error",
                 "max_penalty_per_site", "final_penalty_per_site", "max_charge",
                 "final_norm"},
                "config " + cfg.hash_hex());
  for (const EvolveRow& r : rows) {
    const ModelSpec spec = spec_from_config(r.point);
    const RampSchedule s = schedule_from_config(r.point);
    csv.row(std::vector<std::string>{
        variant_name(spec.variant), std::to_string(spec.num_sites),
        std::to_string(spec.link_dim), std::to_string(r.point.get_int("mps.D", 32)),
        format_double(r.point.get_double("evolve.dt", 0.01)),
        format_double(s.total_time), format_double(s.lambda),
        format_double(s.x_final), std::to_string(s.exponent),
        format_double(r.final_overlap), format_double(r.final_energy),
        format_double(r.ref_energy), format_double(r.rel_energy_error),
        format_double(r.max_penalty), format_double(r.final_penalty),
        format_double(r.max_charge), format_double(r.final_norm)});
  }
  mark_done(paths, cfg);
  log << "evolve: " << rows.size() << " trajectorie(s) -> " << (paths.dir / "evolve.csv")
      << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// analyze job

struct GroupKey {
  std::vector<std::string> parts;
  bool operator<(const GroupKey& o) const { return parts < o.parts; }
  std::string str() const {
    std::string s;
    for (const auto& p : parts) s += (s.empty() ? "" : "/") + p;
    return s;
  }
};

int run_analyze(const ConfigMap& cfg, const RunOptions& opts, std::ostream& log) {
  const JobPaths paths = prepare_dir(cfg, opts, "analyze");
  const std::string kind = cfg.require_string("analyze.kind");
  const std::string input = cfg.get_string("analyze.input", "");

  if (kind == "extrapolate_d") {
    // Group ground.csv rows by instance, extrapolate energy linearly in 1/D.
    const CsvTable t = CsvTable::read(input);
    std::map<GroupKey, std::vector<std::pair<int, double>>> groups;
    const int c_var = t.column("variant"), c_n = t.column("N"), c_d = t.column("d"),
              c_x = t.column("x"), c_dd = t.column("D"), c_e = t.column("energy");
    if (c_var < 0 || c_n < 0 || c_d < 0 || c_x < 0 || c_dd < 0 || c_e < 0)
      throw std::runtime_error("extrapolate_d: input is not a ground.csv table");
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      GroupKey key{{t.rows[r][c_var], t.rows[r][c_n], t.rows[r][c_d], t.rows[r][c_x]}};
      groups[key].emplace_back(static_cast<int>(t.number(r, c_dd)), t.number(r, c_e));
    }
    CsvWriter csv((paths.dir / "extrapolated.csv").string(),
                  {"variant", "N", "d", "x", "energy", "energy_err", "omega",
                   "omega_err"},
                  "config " + cfg.hash_hex());
    for (const auto& [key, points] : groups) {
      const auto [e_inf, e_err] = extrapolate_bond_dimension(points);
      const double n = std::stod(key.parts[1]);
      const double x = std::stod(key.parts[3]);
      const double denom = 2.0 * n * x;
      csv.row(std::vector<std::string>{key.parts[0], key.parts[1], key.parts[2],
                                       key.parts[3], format_double(e_inf),
                                       format_double(e_err),
                                       format_double(x > 0 ? e_inf / denom : 0.0),
                                       format_double(x > 0 ? e_err / denom : 0.0)});
    }
    log << "analyze extrapolate_d -> " << (paths.dir / "extrapolated.csv") << "\n";
    return 0;
  }

  if (kind == "finite_size") {
    const CsvTable t = CsvTable::read(input);
    const int c_var = t.column("variant"), c_n = t.column("N"), c_d = t.column("d"),
              c_x = t.column("x"), c_o = t.column("omega"), c_oe = t.column("omega_err");
    if (c_var < 0 || c_n < 0 || c_d < 0 || c_x < 0 || c_o < 0)
      throw std::runtime_error("finite_size: input lacks variant/N/d/x/omega columns");
    std::map<GroupKey, std::vector<std::size_t>> groups;
    for (std::size_t r = 0; r < t.rows.size(); ++r)
      groups[GroupKey{{t.rows[r][c_var], t.rows[r][c_d], t.rows[r][c_x]}}].push_back(r);
    CsvWriter csv((paths.dir / "finite_size.csv").string(),
                  {"variant", "d", "x", "omega", "c1", "residual"},
                  "config " + cfg.hash_hex());
    for (const auto& [key, rows] : groups) {
      std::vector<std::pair<double, double>> pts;
      std::vector<double> errs;
      for (std::size_t r : rows) {
        pts.emplace_back(t.number(r, c_n), t.number(r, c_o));
        if (c_oe >= 0) errs.push_back(std::max(1e-12, t.number(r, c_oe)));
      }
      const FitResult fit = fit_finite_size(pts, errs);
      csv.row(std::vector<std::string>{key.parts[0], key.parts[1], key.parts[2],
                                       format_double(fit.coefficients[0]),
                                       format_double(fit.coefficients[1]),
                                       format_double(fit.residual_norm)});
    }
    log << "analyze finite_size -> " << (paths.dir / "finite_size.csv") << "\n";
    return 0;
  }

  if (kind == "continuum") {
    const CsvTable t = CsvTable::read(input);
    const std::string xcol = cfg.get_string("analyze.x_column", "x");
    const std::string ycol = cfg.get_string("analyze.y_column", "omega");
    const std::vector<double> xs = t.numeric_column(xcol);
    const std::vector<double> ys = t.numeric_column(ycol);
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < xs.size(); ++i) pts.emplace_back(xs[i], ys[i]);
    const FitResult fit = fit_continuum(pts);
    std::vector<FitResult> fits{fit};
    write_fit_csv(fits, (paths.dir / "continuum.csv").string());
    log << "analyze continuum: omega_cont = " << format_double(fit.coefficients[0]);
    if (!fit.warning.empty()) log << "  [warning: " << fit.warning << "]";
    log << "\n";
    return 0;
  }

  if (kind == "slope") {
    const TrajectoryRecord rec = read_trajectory_csv(input);
    const double t0 = cfg.get_double("analyze.t_min", 0.0);
    const double t1 = cfg.get_double("analyze.t_max", rec.time.back());
    const double slope = loglog_slope(rec.time, rec.penalty_per_site, t0, t1);
    CsvWriter csv((paths.dir / "slope.csv").string(), {"t_min", "t_max", "slope"});
    csv.row({t0, t1, slope});
    log << "analyze slope: " << format_double(slope) << "\n";
    return 0;
  }

  if (kind == "offset") {
    const TrajectoryRecord a = read_trajectory_csv(cfg.require_string("analyze.input_a"));
    const TrajectoryRecord b = read_trajectory_csv(cfg.require_string("analyze.input_b"));
    const double t_star = cfg.get_double("analyze.t_star", a.time.back());
    const CurveOffset off = curve_offset(a.time, a.penalty_per_site, b.time,
                                         b.penalty_per_site, t_star);
    CsvWriter csv((paths.dir / "offset.csv").string(),
                  {"t_star", "delta", "interpolated"});
    csv.row({t_star, off.delta, off.interpolated ? 1.0 : 0.0});
    log << "analyze offset: delta = " << format_double(off.delta) << "\n";
    return 0;
  }

  if (kind == "penalty_fit") {
    const TrajectoryRecord rec = read_trajectory_csv(input);
    const RampSchedule s = schedule_from_config(cfg);
    const ModelSpec spec = spec_from_config(cfg);
    const double t0 = cfg.get_double("analyze.t_min", 0.0);
    const double t1 = cfg.get_double("analyze.t_max", rec.time.back());
    const double c = fit_penalty_constant(rec.time, rec.penalty_per_site, s.lambda,
                                          s.x_final, s.total_time, s.exponent, t0, t1);
    double max_rel = 0.0;
    for (std::size_t i = 0; i < rec.size(); ++i) {
      if (rec.time[i] < t0 || rec.time[i] > t1) continue;
      const double model = perturbative_penalty(s.lambda, s.x_final, s.total_time,
                                                rec.time[i], c, spec.num_sites,
                                                s.exponent) /
                           spec.num_sites;
      if (rec.penalty_per_site[i] > 0)
        max_rel = std::max(max_rel,
                           std::abs(model - rec.penalty_per_site[i]) /
                               rec.penalty_per_site[i]);
    }
    CsvWriter csv((paths.dir / "penalty_fit.csv").string(),
                  {"c", "t_min", "t_max", "max_rel_deviation"});
    csv.row({c, t0, t1, max_rel});
    log << "analyze penalty_fit: c = " << format_double(c)
        << ", max rel deviation = " << format_double(max_rel) << "\n";
    return 0;
  }

  throw std::runtime_error("unknown analyze.kind: " + kind);
}

}  // namespace

ModelSpec spec_from_config(const ConfigMap& cfg) {
  ModelSpec spec;
  spec.variant = variant_from_name(cfg.get_string("model.variant", "zd"));
  spec.num_sites = cfg.get_int("model.N", 2);
  spec.link_dim = cfg.get_int("model.d", 3);
  spec.mass_mu = cfg.get_double("model.mu", 0.0);
  spec.gauss_penalty = cfg.get_double("model.gauss_penalty", 1000.0);
  spec.charge_penalty = cfg.get_double("model.charge_penalty", 1000.0);
  spec.validate();
  return spec;
}

SolverOptions solver_options_from_config(const ConfigMap& cfg) {
  SolverOptions opts;
  opts.max_bond = cfg.get_int("mps.D", 32);
  opts.rel_tol = cfg.get_double("solver.rel_tol", 1e-8);
  opts.max_sweeps = cfg.get_int("solver.max_sweeps", 200);
  opts.svd_cutoff = cfg.get_double("mps.svd_cutoff", 1e-14);
  opts.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 1));
  return opts;
}

RampSchedule schedule_from_config(const ConfigMap& cfg) {
  RampSchedule s;
  s.x_final = cfg.get_double("ramp.xF", 100.0);
  s.total_time = cfg.get_double("ramp.T", 80.0);
  s.exponent = cfg.get_int("ramp.p", 3);
  s.lambda = cfg.get_double("ramp.lambda", 0.0);
  if (s.total_time <= 0) throw std::runtime_error("ramp.T must be positive");
  if (s.exponent < 1) throw std::runtime_error("ramp.p must be >= 1");
  if (s.lambda < 0) throw std::runtime_error("ramp.lambda must be >= 0");
  return s;
}

EvolveParams evolve_params_from_config(const ConfigMap& cfg) {
  EvolveParams p;
  p.dt = cfg.get_double("evolve.dt", 0.01);
  p.max_bond = cfg.get_int("mps.D", 32);
  p.svd_cutoff = cfg.get_double("mps.svd_cutoff", 1e-14);
  p.use_gram_svd = cfg.get_bool("evolve.gram_svd", true);
  p.sample_every = cfg.get_int("evolve.sample_every", 50);
  p.checkpoint_every = cfg.get_int("evolve.checkpoint_every", 2000);
  return p;
}

int env_worker_count() {
  const char* env = std::getenv("LGT_WORKERS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return n > 0 ? n : 1;
}

void plot_csv(const std::string& csv_path, const std::string& kind,
              const std::string& svg_path) {
  PlotOptions opts;
  std::vector<PlotSeries> series;
  const CsvTable t = CsvTable::read(csv_path);
  auto need = [&](const std::string& col) {
    if (t.column(col) < 0)
      throw std::runtime_error("plot kind '" + kind + "' needs column '" + col +
                               "' in " + csv_path);
  };
  if (kind == "overlap_vs_T") {
    need("T");
    need("final_overlap");
    series.push_back({"overlap", t.numeric_column("T"), t.numeric_column("final_overlap")});
    opts.x_label = "total time T";
    opts.y_label = "final overlap";
  } else if (kind == "energy_error_vs_T") {
    need("T");
    need("rel_energy_error");
    series.push_back({"rel error", t.numeric_column("T"),
                      t.numeric_column("rel_energy_error")});
    opts.x_label = "total time T";
    opts.y_label = "relative energy error";
    opts.log_y = true;
  } else if (kind == "penalty_vs_t") {
    need("t");
    need("penalty_per_site");
    series.push_back({"P/N", t.numeric_column("t"), t.numeric_column("penalty_per_site")});
    opts.x_label = "t";
    opts.y_label = "penalty per site";
    opts.log_x = true;
    opts.log_y = true;
  } else if (kind == "energy_vs_t") {
    need("t");
    need("energy");
    series.push_back({"energy", t.numeric_column("t"), t.numeric_column("energy")});
    opts.x_label = "t";
    opts.y_label = "energy";
  } else if (kind == "overlap_vs_t") {
    need("t");
    need("overlap");
    series.push_back({"overlap", t.numeric_column("t"), t.numeric_column("overlap")});
    opts.x_label = "t";
    opts.y_label = "overlap";
  } else if (kind == "gap_vs_x") {
    need("x");
    need("gap");
    series.push_back({"gap", t.numeric_column("x"), t.numeric_column("gap")});
    opts.x_label = "x";
    opts.y_label = "gap";
  } else if (kind == "omega_vs_x") {
    need("x");
    need("omega");
    series.push_back({"omega", t.numeric_column("x"), t.numeric_column("omega")});
    opts.x_label = "x";
    opts.y_label = "energy density";
  } else {
    throw std::runtime_error("unknown plot kind: " + kind);
  }
  opts.title = kind;
  write_svg_plot(svg_path, series, opts);
}

int run_config(const ConfigMap& config, const RunOptions& options, std::ostream& log) {
  RunOptions opts = options;
  if (opts.workers <= 0) opts.workers = env_worker_count();
  const std::string job = config.require_string("job");
  if (job == "ground") return run_ground(config, opts, log);
  if (job == "gap") return run_gap(config, opts, log);
  if (job == "evolve") return run_evolve(config, opts, log);
  if (job == "analyze") return run_analyze(config, opts, log);
  if (job == "sweep") {
    ConfigMap inner = config;
    inner.values.erase("job");
    const std::string target = config.require_string("sweep.job");
    inner.values.erase("sweep.job");
    inner.set("job", target);
    if (target == "sweep") throw std::runtime_error("sweep.job cannot be 'sweep'");
    return run_config(inner, opts, log);
  }
  throw std::runtime_error("unknown job kind: " + job);
}

}  // namespace lgt
