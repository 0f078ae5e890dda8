#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "capillar/config.hpp"

namespace capillar {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitNumerical = 2 };

struct AppOptions {
  std::string command;  // run | check-thermo | equilibrium | eigen
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<double> h;          // check-thermo overrides
  std::optional<double> threshold;
};

/// Executes one subcommand. Reports go to `out`, errors to `err`; files are
/// written under the output directory. Never throws.
int run_app(const AppOptions& opts, std::ostream& out, std::ostream& err);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

std::string snapshot_csv(const Fields& fields, const Grid1D& grid, const ModelParams& params);
std::string monitors_csv(const std::vector<Monitors>& series);

/// Report builders behind the subcommands.
nlohmann::json thermo_report(const RunConfig& cfg, bool& pass);
nlohmann::json equilibrium_report(const RunConfig& cfg);
nlohmann::json eigen_report(const PrimCell& cell, const ModelParams& params);
nlohmann::json monitors_json(const Monitors& m);

}  // namespace capillar
