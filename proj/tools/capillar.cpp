// Batch front end: capillar run|check-thermo|equilibrium|eigen <config.json> [--out DIR]
#include <CLI11.hpp>
#include <iostream>

#include "capillar/app.hpp"

int main(int argc, char** argv) {
  CLI::App cli{"Two-phase fluid-interface model: solver and diagnostics"};
  cli.require_subcommand(1);

  capillar::AppOptions opts;
  std::string out_dir;
  double h = 0.0;
  double threshold = 0.0;

  auto add = [&](const char* name, const char* help) {
    CLI::App* sub = cli.add_subcommand(name, help);
    sub->add_option("config", opts.config_path, "JSON configuration file")->required();
    sub->add_option("--out", out_dir, "Output directory");
    return sub;
  };
  add("run", "Integrate the 1D model and write snapshots, monitors and a summary");
  CLI::App* thermo = add("check-thermo", "Finite-difference Gibbs checks of the equations of state");
  // --h is the finite-difference step, so help stays on --help only.
  thermo->set_help_flag("--help", "Print this help message and exit");
  thermo->add_option("--h", h, "Relative finite-difference step");
  thermo->add_option("--threshold", threshold, "Pass/fail threshold on the residuals");
  add("equilibrium", "Solve the thermodynamic equilibrium problem");
  add("eigen", "Spectrum of the quasilinear matrix at one state");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : capillar::kExitConfig;
  }

  opts.command = cli.get_subcommands().front()->get_name();
  if (!out_dir.empty()) opts.out_dir = out_dir;
  if (thermo->count("--h")) opts.h = h;
  if (thermo->count("--threshold")) opts.threshold = threshold;
  return capillar::run_app(opts, std::cout, std::cerr);
}
