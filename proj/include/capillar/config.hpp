#pragma once

#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "capillar/equilibrium.hpp"
#include "capillar/solver1d.hpp"

namespace capillar {

/// A cell given in a config. Exactly one of s (mixture entropy) or s_i
/// (interfacial entropy per area) is supplied; the other follows.
struct CellSpec {
  PrimCell cell;
  std::optional<double> s_i;  // set when the cell was given through s_i

  PrimCell resolve() const;
};

struct UniformIc {
  CellSpec state;
};

struct TwoStateIc {
  double x_split = 0.5;
  CellSpec left;
  CellSpec right;
};

/// base + amplitude * sin(2 pi (x - x0) / L) applied to one field.
struct SmoothSineIc {
  CellSpec base;
  double amplitude = 0.0;
  Var field = kRho;
};

using InitialCondition = std::variant<UniformIc, TwoStateIc, SmoothSineIc>;

struct OutputConfig {
  std::string directory = ".";
  std::string prefix = "capillar";
  int every = 0;  // snapshot cadence in steps; 0 writes the first and last only
};

struct ThermoCheckConfig {
  double h = kDefaultGibbsStep;
  double threshold = 1e-6;
  int n = 10;  // grid points per axis for (tau, s)
  // Sweep windows; unset ranges default to [tau_ref/2, 2 tau_ref] and
  // [s_ref - c_v, s_ref + c_v] per phase.
  std::optional<std::array<double, 2>> tau_range;
  std::optional<std::array<double, 2>> s_range;
  std::array<double, 2> s_i_range{-5.0, 5.0};
  int n_interface = 101;
};

struct EquilibriumConfig {
  EquilibriumProblem problem;
  MixtureState guess;  // rho and s are taken from the problem
  double guess_s_i = 0.0;
};

struct RunConfig {
  ModelParams params;  // holds the materials
  Floors floors;
  std::optional<Grid1D> grid;
  std::optional<InitialCondition> ic;
  std::optional<SolverConfig> time;
  OutputConfig output;
  ThermoCheckConfig thermo_check;
  std::optional<EquilibriumConfig> equilibrium;
  std::optional<CellSpec> eigen_state;
};

/// Parses and validates the whole document. Unknown keys, missing required
/// keys and out-of-range values throw Error(ConfigInvalid) naming the key.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

/// Echo with every default filled in.
nlohmann::json to_json(const RunConfig& cfg);
nlohmann::json to_json(const PrimCell& cell);

Fields initial_fields(const RunConfig& cfg);

const char* to_string(Boundary b) noexcept;
const char* to_string(SourceIntegrator s) noexcept;
const char* to_string(SourceSign s) noexcept;
const char* to_string(ClosureKind k) noexcept;
const char* to_string(EquilibriumMode m) noexcept;

}  // namespace capillar
