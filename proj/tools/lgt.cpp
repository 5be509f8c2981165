// Experiment runner for the lattice gauge model toolkit: dispatches
// ground-state, gap, evolution and analysis jobs described by flat
// key = value config files, and renders result CSVs as SVG plots.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lgt/config.hpp"
#include "lgt/runner.hpp"

namespace {

struct JobArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  bool force = false;
};

void add_job_command(CLI::App& app, const std::string& name, const std::string& desc,
                     std::vector<std::pair<std::string, JobArgs>>& queue) {
  CLI::App* cmd = app.add_subcommand(name, desc);
  auto args = std::make_shared<JobArgs>();
  cmd->add_option("config", args->config_path, "config file (key = value lines)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--set", args->overrides, "override entries, key=value")
      ->type_name("KEY=VALUE");
  cmd->add_option("--out", args->out_dir, "output directory override");
  cmd->add_flag("--force", args->force, "re-run even if the config hash matches");
  cmd->callback([name, args, &queue] { queue.emplace_back(name, *args); });
}

int run_job(const std::string& job, const JobArgs& args) {
  lgt::ConfigMap cfg = lgt::ConfigMap::parse_file(args.config_path);
  for (const std::string& kv : args.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (cfg.has("job") && cfg.require_string("job") != job)
    throw std::runtime_error("config declares job '" + cfg.require_string("job") +
                             "' but the subcommand is '" + job + "'");
  cfg.set("job", job);
  lgt::RunOptions opts;
  opts.out_dir = args.out_dir;
  opts.force = args.force;
  return lgt::run_config(cfg, opts, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MPS toolkit for finite-dimensional lattice Schwinger models"};
  app.require_subcommand(1);

  std::vector<std::pair<std::string, JobArgs>> queue;
  add_job_command(app, "ground", "variational ground-state search over a parameter grid", queue);
  add_job_command(app, "gap", "ground/first-excited gap curves over x", queue);
  add_job_command(app, "evolve", "adiabatic (optionally noisy) time evolution", queue);
  add_job_command(app, "sweep", "run the job named by sweep.job over the config grid", queue);
  add_job_command(app, "analyze", "fits and diagnostics over result CSVs", queue);

  CLI::App* plot = app.add_subcommand("plot", "render a result CSV as an SVG");
  std::string plot_csv_path, plot_kind, plot_out;
  plot->add_option("csv", plot_csv_path, "input CSV")->required()->check(CLI::ExistingFile);
  plot->add_option("--kind", plot_kind,
                   "overlap_vs_T | energy_error_vs_T | penalty_vs_t | energy_vs_t | "
                   "overlap_vs_t | gap_vs_x | omega_vs_x")
      ->required();
  plot->add_option("--out", plot_out, "output SVG path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (plot->parsed()) {
      lgt::plot_csv(plot_csv_path, plot_kind, plot_out);
      std::cout << "wrote " << plot_out << "\n";
      return 0;
    }
    for (const auto& [job, args] : queue) {
      const int status = run_job(job, args);
      if (status != 0) return status;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
