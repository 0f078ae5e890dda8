#include "capillar/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "capillar/errors.hpp"

namespace capillar {

using nlohmann::json;

const char* to_string(Boundary b) noexcept {
  return b == Boundary::periodic ? "periodic" : "transmissive";
}

const char* to_string(SourceIntegrator s) noexcept {
  switch (s) {
    case SourceIntegrator::none: return "none";
    case SourceIntegrator::rk2: return "rk2";
    case SourceIntegrator::subcycled_rk2: return "subcycled_rk2";
  }
  return "?";
}

const char* to_string(SourceSign s) noexcept { return s == SourceSign::lagrangian ? "lagrangian" : "derived"; }

const char* to_string(ClosureKind k) noexcept {
  return k == ClosureKind::spherical ? "spherical" : "planar";
}

const char* to_string(EquilibriumMode m) noexcept {
  return m == EquilibriumMode::full ? "full" : "frozen_y";
}

PrimCell CellSpec::resolve() const {
  PrimCell c = cell;
  if (s_i) c.s = mixture_entropy(c.rho, c.y, c.s1, c.s2, c.a_i, *s_i);
  return c;
}

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::ConfigInvalid, msg); }

/// Reads one JSON object, remembering which keys were consumed so that
/// leftovers can be reported as unknown.
class Obj {
public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) invalid(path_ + ": expected an object");
  }

  std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

  bool has(const std::string& k) const { return j_.contains(k); }

  const json& at(const std::string& k) {
    if (!j_.contains(k)) invalid(key(k) + ": required key missing");
    seen_.insert(k);
    return j_.at(k);
  }

  double num(const std::string& k) {
    const json& v = at(k);
    if (!v.is_number()) invalid(key(k) + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) invalid(key(k) + ": must be finite");
    return d;
  }
  double num(const std::string& k, double dflt) { return has(k) ? num(k) : dflt; }

  long integer(const std::string& k) {
    const json& v = at(k);
    if (!v.is_number_integer()) invalid(key(k) + ": expected an integer");
    return v.get<long>();
  }
  long integer(const std::string& k, long dflt) { return has(k) ? integer(k) : dflt; }

  std::string str(const std::string& k) {
    const json& v = at(k);
    if (!v.is_string()) invalid(key(k) + ": expected a string");
    return v.get<std::string>();
  }
  std::string str(const std::string& k, const std::string& dflt) { return has(k) ? str(k) : dflt; }

  std::array<double, 2> range(const std::string& k) {
    const json& v = at(k);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      invalid(key(k) + ": expected [low, high]");
    }
    std::array<double, 2> r{v[0].get<double>(), v[1].get<double>()};
    if (!(r[0] < r[1])) invalid(key(k) + ": low must be < high");
    return r;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) invalid(key(it.key()) + ": unknown key");
    }
  }

private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

/// Runs a validate() and re-labels parameter errors as config errors.
template <class F>
void checked(const std::string& path, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigInvalid) throw;
    std::string msg = e.what();
    const auto colon = msg.find(": ");
    if (colon != std::string::npos) msg = msg.substr(colon + 2);
    invalid(path + ": " + msg);
  }
}

PhaseEos parse_phase(const json& j, const std::string& path) {
  Obj o(j, path);
  PhaseEos e;
  e.gamma = o.num("gamma", e.gamma);
  e.c_v = o.num("c_v", e.c_v);
  e.p_inf = o.num("p_inf", e.p_inf);
  e.q = o.num("q", e.q);
  e.tau_ref = o.num("tau_ref", e.tau_ref);
  e.T_ref = o.num("T_ref", e.T_ref);
  e.s_ref = o.num("s_ref", e.s_ref);
  o.finish();
  checked(path, [&] { e.validate(); });
  return e;
}

InterfaceEos parse_interface(const json& j) {
  Obj o(j, "interface");
  InterfaceEos e;
  e.gamma0 = o.num("gamma0", e.gamma0);
  e.T_ref_i = o.num("T_ref_i", e.T_ref_i);
  e.theta = o.num("theta", e.theta);
  o.finish();
  checked("interface", [&] { e.validate(); });
  return e;
}

template <class Enum, std::size_t N>
Enum parse_enum(Obj& o, const std::string& k, Enum dflt,
                const std::array<std::pair<const char*, Enum>, N>& table) {
  if (!o.has(k)) return dflt;
  const std::string v = o.str(k);
  for (const auto& [name, value] : table) {
    if (v == name) return value;
  }
  std::string allowed;
  for (const auto& [name, value] : table) allowed += std::string(allowed.empty() ? "" : ", ") + name;
  invalid(o.key(k) + ": '" + v + "' is not one of " + allowed);
}

CellSpec parse_cell(const json& j, const std::string& path, const Materials& mat) {
  Obj o(j, path);
  CellSpec c;
  c.cell.rho = o.num("rho");
  c.cell.u = o.num("u", 0.0);
  c.cell.y = o.num("y");
  c.cell.alpha = o.num("alpha");
  c.cell.a_i = o.num("a_i");
  c.cell.w = o.num("w", 0.0);
  c.cell.n = o.num("n", 0.0);
  c.cell.s1 = o.num("s1");
  c.cell.s2 = o.num("s2");
  const bool has_s = o.has("s");
  const bool has_si = o.has("s_i");
  if (has_s == has_si) invalid(path + ": give exactly one of s or s_i");
  if (has_s) c.cell.s = o.num("s");
  if (has_si) c.s_i = o.num("s_i");
  o.finish();
  checked(path, [&] {
    const PrimCell p = c.resolve();
    validate(p.thermo(), Floors{0.0, 0.0});
    eval_components(p.thermo(), mat);
  });
  return c;
}

Var parse_var(const std::string& name, const std::string& path) {
  for (int k = 0; k < kNumVars; ++k) {
    if (name == kVarNames[k]) return static_cast<Var>(k);
  }
  invalid(path + ": unknown field '" + name + "'");
}

InitialCondition parse_ic(const json& j, const Materials& mat) {
  Obj o(j, "ic");
  const std::string type = o.str("type");
  InitialCondition ic;
  if (type == "uniform") {
    ic = UniformIc{parse_cell(o.at("state"), "ic.state", mat)};
  } else if (type == "two_state") {
    TwoStateIc t;
    t.x_split = o.num("x_split");
    t.left = parse_cell(o.at("left"), "ic.left", mat);
    t.right = parse_cell(o.at("right"), "ic.right", mat);
    ic = t;
  } else if (type == "smooth_sine") {
    SmoothSineIc s;
    s.base = parse_cell(o.at("base"), "ic.base", mat);
    s.amplitude = o.num("amplitude");
    s.field = parse_var(o.str("field"), "ic.field");
    if (s.field == kS && s.base.s_i) invalid("ic.field: cannot perturb s when the base gives s_i");
    ic = s;
  } else {
    invalid("ic.type: '" + type + "' is not one of uniform, two_state, smooth_sine");
  }
  o.finish();
  return ic;
}

}  // namespace

RunConfig parse_config(const json& doc) {
  Obj root(doc, "");
  RunConfig cfg;
  Materials& mat = cfg.params.materials;
  mat.eos1 = parse_phase(root.at("eos1"), "eos1");
  mat.eos2 = parse_phase(root.at("eos2"), "eos2");
  mat.ieos = parse_interface(root.at("interface"));

  if (root.has("params")) {
    Obj o(root.at("params"), "params");
    cfg.params.m = o.num("m", cfg.params.m);
    cfg.params.nu = o.num("nu", cfg.params.nu);
    cfg.params.lambda_w = o.num("lambda_w", cfg.params.lambda_w);
    cfg.params.lambda_n = o.num("lambda_n", cfg.params.lambda_n);
    cfg.params.source_sign = parse_enum<SourceSign, 2>(
        o, "source_sign", cfg.params.source_sign,
        {{{"lagrangian", SourceSign::lagrangian}, {"derived", SourceSign::derived}}});
    o.finish();
  }
  checked("params", [&] { cfg.params.validate(); });

  if (root.has("numerics")) {
    Obj o(root.at("numerics"), "numerics");
    cfg.floors.eps_frac = o.num("eps_frac", cfg.floors.eps_frac);
    cfg.floors.a_min = o.num("a_min", cfg.floors.a_min);
    o.finish();
    if (!(cfg.floors.eps_frac >= 0.0 && cfg.floors.eps_frac < 0.5)) {
      invalid("numerics.eps_frac: must lie in [0, 0.5)");
    }
    if (!(cfg.floors.a_min >= 0.0)) invalid("numerics.a_min: must be >= 0");
  }

  if (root.has("grid")) {
    Obj o(root.at("grid"), "grid");
    Grid1D g;
    g.x0 = o.num("x0", g.x0);
    g.x1 = o.num("x1", g.x1);
    g.n_cells = static_cast<int>(o.integer("n_cells"));
    g.bc = parse_enum<Boundary, 2>(
        o, "bc", g.bc,
        {{{"periodic", Boundary::periodic}, {"transmissive", Boundary::transmissive}}});
    o.finish();
    checked("grid", [&] { g.validate(); });
    cfg.grid = g;
  }

  if (root.has("ic")) cfg.ic = parse_ic(root.at("ic"), mat);

  if (root.has("time")) {
    Obj o(root.at("time"), "time");
    SolverConfig t;
    t.cfl = o.num("cfl", t.cfl);
    t.t_end = o.num("t_end");
    t.source_integrator = parse_enum<SourceIntegrator, 3>(
        o, "source_integrator", t.source_integrator,
        {{{"none", SourceIntegrator::none},
          {"rk2", SourceIntegrator::rk2},
          {"subcycled_rk2", SourceIntegrator::subcycled_rk2}}});
    t.subcycle_max_dt_fraction = o.num("subcycle_max_dt_fraction", t.subcycle_max_dt_fraction);
    t.output_every = static_cast<int>(o.integer("output_every", t.output_every));
    t.max_steps = o.integer("max_steps", t.max_steps);
    o.finish();
    t.floors = cfg.floors;
    checked("time", [&] { t.validate(); });
    if (t.max_steps < 1) invalid("time.max_steps: must be >= 1");
    cfg.time = t;
  }

  if (root.has("output")) {
    Obj o(root.at("output"), "output");
    cfg.output.directory = o.str("directory", cfg.output.directory);
    cfg.output.prefix = o.str("prefix", cfg.output.prefix);
    cfg.output.every = static_cast<int>(o.integer("every", cfg.output.every));
    o.finish();
    if (cfg.output.prefix.empty() || cfg.output.prefix.find('/') != std::string::npos) {
      invalid("output.prefix: must be a non-empty file-name prefix");
    }
    if (cfg.output.every < 0) invalid("output.every: must be >= 0");
  }

  if (root.has("thermo_check")) {
    Obj o(root.at("thermo_check"), "thermo_check");
    ThermoCheckConfig& tc = cfg.thermo_check;
    tc.h = o.num("h", tc.h);
    tc.threshold = o.num("threshold", tc.threshold);
    tc.n = static_cast<int>(o.integer("n", tc.n));
    if (o.has("tau_range")) tc.tau_range = o.range("tau_range");
    if (o.has("s_range")) tc.s_range = o.range("s_range");
    if (o.has("s_i_range")) tc.s_i_range = o.range("s_i_range");
    tc.n_interface = static_cast<int>(o.integer("n_interface", tc.n_interface));
    o.finish();
    if (!(tc.h > 0.0)) invalid("thermo_check.h: must be > 0");
    if (!(tc.threshold > 0.0)) invalid("thermo_check.threshold: must be > 0");
    if (tc.n < 2) invalid("thermo_check.n: must be >= 2");
    if (tc.n_interface < 2) invalid("thermo_check.n_interface: must be >= 2");
    if (tc.tau_range && !((*tc.tau_range)[0] > 0.0)) invalid("thermo_check.tau_range: must be > 0");
  }

  if (root.has("equilibrium")) {
    Obj o(root.at("equilibrium"), "equilibrium");
    EquilibriumConfig ec;
    EquilibriumProblem& pb = ec.problem;
    pb.tau = o.num("tau");
    pb.s = o.num("s");
    pb.mode = parse_enum<EquilibriumMode, 2>(
        o, "mode", pb.mode,
        {{{"full", EquilibriumMode::full}, {"frozen_y", EquilibriumMode::frozen_y}}});
    pb.y = o.num("y", pb.y);
    pb.tol = o.num("tol", pb.tol);
    pb.max_iter = static_cast<int>(o.integer("max_iter", pb.max_iter));
    pb.fd_step = o.num("fd_step", pb.fd_step);
    pb.max_halvings = static_cast<int>(o.integer("max_halvings", pb.max_halvings));
    {
      Obj c(o.at("closure"), "equilibrium.closure");
      pb.closure.kind = parse_enum<ClosureKind, 2>(
          c, "kind", pb.closure.kind,
          {{{"spherical", ClosureKind::spherical}, {"planar", ClosureKind::planar}}});
      pb.closure.n_b = c.num("n_b", pb.closure.n_b);
      c.finish();
    }
    {
      Obj g(o.at("guess"), "equilibrium.guess");
      MixtureState& st = ec.guess;
      st.rho = 1.0 / pb.tau;
      st.s = pb.s;
      st.y = pb.mode == EquilibriumMode::full ? g.num("y") : pb.y;
      st.alpha = g.num("alpha");
      st.s1 = g.num("s1");
      ec.guess_s_i = g.num("s_i");
      if (pb.closure.kind == ClosureKind::spherical) {
        if (g.has("a_i")) invalid("equilibrium.guess.a_i: set by the spherical closure");
        st.a_i = pb.closure.area(st.alpha);
      } else {
        st.a_i = g.num("a_i");
      }
      g.finish();
      st.s2 = (st.s - st.y * st.s1 - st.a_i * ec.guess_s_i * pb.tau) / (1.0 - st.y);
    }
    o.finish();
    if (pb.mode == EquilibriumMode::frozen_y && !o.has("y")) {
      invalid("equilibrium.y: required in frozen_y mode");
    }
    checked("equilibrium", [&] { pb.validate(); });
    checked("equilibrium.guess", [&] { validate(ec.guess, Floors{0.0, 0.0}); });
    cfg.equilibrium = ec;
  }

  if (root.has("eigen")) {
    Obj o(root.at("eigen"), "eigen");
    cfg.eigen_state = parse_cell(o.at("state"), "eigen.state", mat);
    o.finish();
  }

  root.finish();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    invalid(std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

namespace {

json phase_json(const PhaseEos& e) {
  return {{"gamma", e.gamma}, {"c_v", e.c_v},         {"p_inf", e.p_inf}, {"q", e.q},
          {"tau_ref", e.tau_ref}, {"T_ref", e.T_ref}, {"s_ref", e.s_ref}};
}

json cell_spec_json(const CellSpec& c) {
  json j = to_json(c.cell);
  if (c.s_i) {
    j.erase("s");
    j["s_i"] = *c.s_i;
  }
  return j;
}

}  // namespace

json to_json(const PrimCell& c) {
  json j;
  for (int k = 0; k < kNumVars; ++k) j[kVarNames[k]] = c.get(static_cast<Var>(k));
  return j;
}

json to_json(const RunConfig& cfg) {
  const Materials& mat = cfg.params.materials;
  json j;
  j["eos1"] = phase_json(mat.eos1);
  j["eos2"] = phase_json(mat.eos2);
  j["interface"] = {{"gamma0", mat.ieos.gamma0}, {"T_ref_i", mat.ieos.T_ref_i}, {"theta", mat.ieos.theta}};
  j["params"] = {{"m", cfg.params.m},
                 {"nu", cfg.params.nu},
                 {"lambda_w", cfg.params.lambda_w},
                 {"lambda_n", cfg.params.lambda_n},
                 {"source_sign", to_string(cfg.params.source_sign)}};
  j["numerics"] = {{"eps_frac", cfg.floors.eps_frac}, {"a_min", cfg.floors.a_min}};
  if (cfg.grid) {
    j["grid"] = {{"x0", cfg.grid->x0},
                 {"x1", cfg.grid->x1},
                 {"n_cells", cfg.grid->n_cells},
                 {"bc", to_string(cfg.grid->bc)}};
  }
  if (cfg.ic) {
    j["ic"] = std::visit(
        [](const auto& ic) -> json {
          using T = std::decay_t<decltype(ic)>;
          if constexpr (std::is_same_v<T, UniformIc>) {
            return {{"type", "uniform"}, {"state", cell_spec_json(ic.state)}};
          } else if constexpr (std::is_same_v<T, TwoStateIc>) {
            return {{"type", "two_state"},
                    {"x_split", ic.x_split},
                    {"left", cell_spec_json(ic.left)},
                    {"right", cell_spec_json(ic.right)}};
          } else {
            return {{"type", "smooth_sine"},
                    {"base", cell_spec_json(ic.base)},
                    {"amplitude", ic.amplitude},
                    {"field", kVarNames[ic.field]}};
          }
        },
        *cfg.ic);
  }
  if (cfg.time) {
    j["time"] = {{"cfl", cfg.time->cfl},
                 {"t_end", cfg.time->t_end},
                 {"source_integrator", to_string(cfg.time->source_integrator)},
                 {"subcycle_max_dt_fraction", cfg.time->subcycle_max_dt_fraction},
                 {"output_every", cfg.time->output_every},
                 {"max_steps", cfg.time->max_steps}};
  }
  j["output"] = {{"directory", cfg.output.directory},
                 {"prefix", cfg.output.prefix},
                 {"every", cfg.output.every}};
  {
    const ThermoCheckConfig& tc = cfg.thermo_check;
    json t = {{"h", tc.h},
              {"threshold", tc.threshold},
              {"n", tc.n},
              {"s_i_range", tc.s_i_range},
              {"n_interface", tc.n_interface}};
    if (tc.tau_range) t["tau_range"] = *tc.tau_range;
    if (tc.s_range) t["s_range"] = *tc.s_range;
    j["thermo_check"] = t;
  }
  if (cfg.equilibrium) {
    const EquilibriumProblem& pb = cfg.equilibrium->problem;
    const MixtureState& g = cfg.equilibrium->guess;
    json closure = {{"kind", to_string(pb.closure.kind)}};
    if (pb.closure.kind == ClosureKind::spherical) closure["n_b"] = pb.closure.n_b;
    json guess = {{"alpha", g.alpha}, {"s1", g.s1}, {"s_i", cfg.equilibrium->guess_s_i}};
    if (pb.mode == EquilibriumMode::full) guess["y"] = g.y;
    if (pb.closure.kind == ClosureKind::planar) guess["a_i"] = g.a_i;
    j["equilibrium"] = {{"tau", pb.tau},
                        {"s", pb.s},
                        {"mode", to_string(pb.mode)},
                        {"y", pb.y},
                        {"tol", pb.tol},
                        {"max_iter", pb.max_iter},
                        {"fd_step", pb.fd_step},
                        {"max_halvings", pb.max_halvings},
                        {"closure", closure},
                        {"guess", guess}};
  }
  if (cfg.eigen_state) j["eigen"] = {{"state", cell_spec_json(*cfg.eigen_state)}};
  return j;
}

Fields initial_fields(const RunConfig& cfg) {
  if (!cfg.grid || !cfg.ic) invalid("grid and ic blocks are required to build initial fields");
  const Grid1D& g = *cfg.grid;
  Fields f(g.n_cells);
  for (int i = 0; i < g.n_cells; ++i) {
    const double x = g.center(i);
    f[i] = std::visit(
        [&](const auto& ic) -> PrimCell {
          using T = std::decay_t<decltype(ic)>;
          if constexpr (std::is_same_v<T, UniformIc>) {
            return ic.state.resolve();
          } else if constexpr (std::is_same_v<T, TwoStateIc>) {
            return (x < ic.x_split ? ic.left : ic.right).resolve();
          } else {
            CellSpec c = ic.base;
            const double phase = 2.0 * std::numbers::pi * (x - g.x0) / (g.x1 - g.x0);
            c.cell.set(ic.field, c.cell.get(ic.field) + ic.amplitude * std::sin(phase));
            return c.resolve();
          }
        },
        *cfg.ic);
  }
  checked("ic", [&] {
    for (const PrimCell& c : f) {
      validate(c.thermo(), cfg.floors);
      eval_components(c.thermo(), cfg.params.materials);
    }
  });
  return f;
}

}  // namespace capillar
