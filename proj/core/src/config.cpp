#include "tto/config.hpp"

#include "tto/version.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tto {

namespace {

double parse_double(const std::string& key, const std::string& value)
{
  try {
    size_t end = 0;
    const double v = std::stod(value, &end);
    if (end != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid numeric value for key '" + key + "': " + value);
  }
}

int parse_int(const std::string& key, const std::string& value)
{
  try {
    size_t end = 0;
    const int v = std::stoi(value, &end);
    if (end != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid integer value for key '" + key + "': " + value);
  }
}

std::string trim(const std::string& s)
{
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

void set_config_key(RunConfig& c, const std::string& key, const std::string& value)
{
  if (key == "bvp")
    c.bvp = value;
  else if (key == "plasticity")
    c.plasticity = value;
  else if (key == "loops")
    c.loops = parse_int(key, value);
  else if (key == "v0")
    c.v0 = parse_double(key, value);
  else if (key == "eta_s")
    c.eta_s = parse_double(key, value);
  else if (key == "beta_mm2")
    c.beta_mm2 = parse_double(key, value);
  else if (key == "esize_mm")
    c.esize_mm = parse_double(key, value);
  else if (key == "u_star_mm")
    c.u_star_mm = parse_double(key, value);
  else if (key == "dt_s")
    c.dt_s = parse_double(key, value);
  else if (key == "max_iters")
    c.max_iters = parse_int(key, value);
  else if (key == "chi_min")
    c.chi_min = parse_double(key, value);
  else if (key == "newton_tol")
    c.newton_tol = parse_double(key, value);
  else if (key == "snapshot_every")
    c.snapshot_every = parse_int(key, value);
  else if (key == "solver")
    c.solver = value;
  else if (key == "out")
    c.out = value;
  else
    throw std::invalid_argument("unknown configuration key: " + key);
}

RunConfig load_config(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read configuration file: " + path);
  RunConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("malformed line " + std::to_string(lineno) + " in " +
                                  path + " (expected key=value)");
    set_config_key(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  validate_config(c);
  return c;
}

void validate_config(const RunConfig& c)
{
  preset_by_name(c.bvp);  // throws for unknown presets
  if (c.plasticity != "elastic" && c.plasticity != "ideal" && c.plasticity != "linear" &&
      c.plasticity != "exponential")
    throw std::invalid_argument(
        "plasticity must be one of elastic|ideal|linear|exponential");
  if (c.loops < 1 || c.loops > 5) throw std::invalid_argument("loops must lie in [1, 5]");
  if (c.v0 < 0.0 || c.v0 > 1.0) throw std::invalid_argument("v0 must lie in (0, 1]");
  if (c.eta_s < 0.0) throw std::invalid_argument("eta_s must be positive");
  if (c.beta_mm2 < 0.0) throw std::invalid_argument("beta_mm2 must be positive");
  if (c.esize_mm < 0.0) throw std::invalid_argument("esize_mm must be positive");
  if (c.dt_s <= 0.0) throw std::invalid_argument("dt_s must be positive");
  if (c.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(c.chi_min > 0.0 && c.chi_min < 1.0))
    throw std::invalid_argument("chi_min must lie in (0, 1)");
  if (!(c.newton_tol > 0.0)) throw std::invalid_argument("newton_tol must be positive");
  if (c.snapshot_every < 0) throw std::invalid_argument("snapshot_every must be >= 0");
  if (c.solver != "auto" && c.solver != "direct" && c.solver != "cg")
    throw std::invalid_argument("solver must be one of auto|direct|cg");
}

MaterialParams material_from_config(const RunConfig& c)
{
  if (c.plasticity == "elastic") return MaterialParams::elastic();
  if (c.plasticity == "ideal") return MaterialParams::steel(YieldLaw::kIdeal);
  if (c.plasticity == "linear") return MaterialParams::steel(YieldLaw::kLinearHardening);
  if (c.plasticity == "exponential")
    return MaterialParams::steel(YieldLaw::kExponentialHardening);
  throw std::invalid_argument("plasticity must be one of elastic|ideal|linear|exponential");
}

ResolvedRun resolve_run(const RunConfig& config)
{
  validate_config(config);

  ResolvedRun run;
  run.input = config;
  run.preset = preset_by_name(config.bvp);
  run.elem_size = config.esize_mm > 0.0 ? config.esize_mm : run.preset.elem_size;
  run.u_star = config.u_star_mm > 0.0 ? config.u_star_mm : run.preset.u_star;
  run.problem = build_problem(run.preset, run.elem_size, run.u_star);
  run.material = material_from_config(config);
  run.beta = config.beta_mm2 > 0.0 ? config.beta_mm2 : 2.0 * run.elem_size * run.elem_size;

  OptimizerConfig opt;
  opt.loops = config.loops;
  opt.max_iterations = config.max_iters;
  opt.v0 = config.v0 > 0.0 ? config.v0 : run.preset.v0;
  opt.eta = config.eta_s > 0.0 ? config.eta_s : run.preset.eta;
  opt.beta = run.beta;
  opt.dt = config.dt_s;
  opt.chi_min = config.chi_min;
  opt.newton_tol = config.newton_tol;
  if (config.solver == "direct")
    opt.solver = FemSystem::Solver::kDirect;
  else if (config.solver == "cg")
    opt.solver = FemSystem::Solver::kConjugateGradient;
  else
    opt.solver = run.preset.quasi_2d ? FemSystem::Solver::kDirect
                                     : FemSystem::Solver::kConjugateGradient;
  run.optimizer = opt;
  return run;
}

std::string manifest_json(const ResolvedRun& run, const std::string& status,
                          int iterations, double final_stiffness)
{
  nlohmann::json j;
  j["version"] = kVersion;
  j["status"] = status;
  j["iterations"] = iterations;
  j["final_stiffness"] = final_stiffness;

  j["bvp"] = run.preset.name;
  j["dims_mm"] = {run.problem.mesh.dims[0], run.problem.mesh.dims[1],
                  run.problem.mesh.dims[2]};
  j["esize_mm"] = run.problem.mesh.elem_size;
  j["elements"] = run.problem.mesh.n_elements();
  j["u_star_mm"] = run.u_star;
  j["plasticity"] = run.input.plasticity;
  j["loops"] = run.optimizer.loops;
  j["v0"] = run.optimizer.v0;
  j["eta_s"] = run.optimizer.eta;
  j["beta_mm2"] = run.optimizer.beta;
  j["dt_s"] = run.optimizer.dt;
  j["chi_min"] = run.optimizer.chi_min;
  j["newton_tol"] = run.optimizer.newton_tol;
  j["max_iters"] = run.optimizer.max_iterations;
  j["solver"] =
      run.optimizer.solver == FemSystem::Solver::kDirect ? "direct" : "cg";

  j["material"] = {{"youngs_modulus_mpa", run.material.youngs_modulus},
                   {"poisson_ratio", run.material.poisson_ratio},
                   {"sigma_y_exp_mpa", run.material.sigma_y_exp},
                   {"hardening_h_mpa", run.material.hardening_h},
                   {"hardening_h0_mpa", run.material.hardening_h0},
                   {"hardening_h1_mpa", run.material.hardening_h1},
                   {"hardening_kappa", run.material.hardening_kappa}};
  return j.dump(2);
}

}  // namespace tto
