#pragma once

#include <iosfwd>
#include <string>

#include "lgt/config.hpp"
#include "lgt/evolve.hpp"
#include "lgt/solver.hpp"
#include "lgt/types.hpp"

namespace lgt {

struct RunOptions {
  std::string out_dir;   // overrides output.dir when non-empty
  bool force = false;    // ignore completion markers
  int workers = 0;       // 0 = LGT_WORKERS env var, else 1
};

/// Dispatch a parsed config to its job implementation. Returns a process
/// exit status (0 on success). Output files land in the configured output
/// directory; completed configs are recorded by hash and skipped on re-runs
/// unless forced.
int run_config(const ConfigMap& config, const RunOptions& options, std::ostream& log);

// Config -> domain object translation (shared with the CLI and tests).
ModelSpec spec_from_config(const ConfigMap& config);
SolverOptions solver_options_from_config(const ConfigMap& config);
RampSchedule schedule_from_config(const ConfigMap& config);
EvolveParams evolve_params_from_config(const ConfigMap& config);

int env_worker_count();

/// Render a CSV produced by the jobs into an SVG; `kind` selects the
/// column mapping and scales (line/log-log).
void plot_csv(const std::string& csv_path, const std::string& kind,
              const std::string& svg_path);

}  // namespace lgt
