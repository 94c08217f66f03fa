#include "tto/config.hpp"
#include "tto/drivers.hpp"
#include "tto/io.hpp"
#include "tto/optimizer.hpp"
#include "tto/version.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitMaxIterations = 2;

void add_run_options(CLI::App* cmd, tto::RunConfig& config, std::string& config_file)
{
  cmd->add_option("--config", config_file, "flat key=value configuration file");
  cmd->add_option("--bvp", config.bvp, "preset: clamped_beam|mbb|cantilever3d");
  cmd->add_option("--plasticity", config.plasticity,
                  "material law: elastic|ideal|linear|exponential");
  cmd->add_option("--loops", config.loops, "displacement/plastic updates per iteration");
  cmd->add_option("--v0", config.v0, "volume fraction (preset default when omitted)");
  cmd->add_option("--eta-s", config.eta_s, "viscosity [s]");
  cmd->add_option("--beta-mm2", config.beta_mm2,
                  "regularization [mm^2] (default 2*esize^2)");
  cmd->add_option("--esize-mm", config.esize_mm, "element edge length [mm]");
  cmd->add_option("--u-star-mm", config.u_star_mm, "load magnitude [mm]");
  cmd->add_option("--dt-s", config.dt_s, "pseudo-time step [s]");
  cmd->add_option("--max-iters", config.max_iters, "iteration budget");
  cmd->add_option("--chi-min", config.chi_min, "lower density bound");
  cmd->add_option("--newton-tol", config.newton_tol, "plastic update tolerance");
  cmd->add_option("--snapshot-every", config.snapshot_every,
                  "field snapshot cadence (0 disables)");
  cmd->add_option("--solver", config.solver, "auto|direct|cg");
  cmd->add_option("--out", config.out, "output directory");
}

tto::RunConfig merge_config(const CLI::App* cmd, const tto::RunConfig& cli_values,
                            const std::string& config_file)
{
  if (config_file.empty()) return cli_values;
  tto::RunConfig merged = tto::load_config(config_file);
  // command line flags override file values
  auto overridden = [cmd](const char* flag) { return cmd->count(flag) > 0; };
  if (overridden("--bvp")) merged.bvp = cli_values.bvp;
  if (overridden("--plasticity")) merged.plasticity = cli_values.plasticity;
  if (overridden("--loops")) merged.loops = cli_values.loops;
  if (overridden("--v0")) merged.v0 = cli_values.v0;
  if (overridden("--eta-s")) merged.eta_s = cli_values.eta_s;
  if (overridden("--beta-mm2")) merged.beta_mm2 = cli_values.beta_mm2;
  if (overridden("--esize-mm")) merged.esize_mm = cli_values.esize_mm;
  if (overridden("--u-star-mm")) merged.u_star_mm = cli_values.u_star_mm;
  if (overridden("--dt-s")) merged.dt_s = cli_values.dt_s;
  if (overridden("--max-iters")) merged.max_iters = cli_values.max_iters;
  if (overridden("--chi-min")) merged.chi_min = cli_values.chi_min;
  if (overridden("--newton-tol")) merged.newton_tol = cli_values.newton_tol;
  if (overridden("--snapshot-every")) merged.snapshot_every = cli_values.snapshot_every;
  if (overridden("--solver")) merged.solver = cli_values.solver;
  if (overridden("--out")) merged.out = cli_values.out;
  return merged;
}

int command_run(const tto::RunConfig& config)
{
  const tto::ResolvedRun run = tto::resolve_run(config);
  tto::ensure_directory(config.out);

  std::printf("bvp=%s elements=%d plasticity=%s loops=%d v0=%g eta=%g beta=%g\n",
              run.preset.name.c_str(), run.problem.mesh.n_elements(),
              config.plasticity.c_str(), run.optimizer.loops, run.optimizer.v0,
              run.optimizer.eta, run.optimizer.beta);

  tto::Optimizer optimizer(run.problem.mesh, run.problem.load, run.material,
                           run.optimizer);

  const auto snapshot = [&](const tto::Optimizer& opt, int iteration, bool final) {
    char name[64];
    if (final)
      std::snprintf(name, sizeof(name), "/fields_final.vtk");
    else
      std::snprintf(name, sizeof(name), "/fields_%05d.vtk", iteration);
    tto::write_vtk(config.out + name, opt.mesh(), opt.states(), opt.displacements(),
                   opt.fem().elasticity());
    tto::write_convergence_csv(config.out + "/convergence.csv", opt.history());
    if (!final) return;
    const auto& rec = opt.history().back();
    std::printf("iteration %d: S=%.6g max|eps_p|=%.3g\n", rec.iteration, rec.stiffness,
                rec.max_eps_p_norm);
  };

  const tto::RunStatus status = optimizer.run(snapshot, config.snapshot_every);
  const bool converged = status == tto::RunStatus::kConverged;

  const double final_s =
      optimizer.history().empty() ? 0.0 : optimizer.history().back().stiffness;
  tto::write_text_file(config.out + "/manifest.json",
                       tto::manifest_json(run, converged ? "converged" : "max_iterations",
                                          optimizer.iteration(), final_s));
  tto::write_convergence_csv(config.out + "/convergence.csv", optimizer.history());

  std::printf("%s after %d iterations, S = %.8g\n",
              converged ? "converged" : "stopped at iteration budget",
              optimizer.iteration(), final_s);
  return converged ? kExitOk : kExitMaxIterations;
}

int command_matpoint(const std::string& plasticity, const std::string& out_dir)
{
  tto::RunConfig probe;
  probe.plasticity = plasticity;
  const tto::MaterialParams params = tto::material_from_config(probe);

  tto::ensure_directory(out_dir);
  const tto::MatPointCurve curve = tto::material_point_run(params);
  const std::string path = out_dir + "/matpoint_" + plasticity + ".csv";
  tto::write_matpoint_csv(path, curve);

  double vm_peak_surrogate = 0.0, vm_peak_classic = 0.0;
  for (const tto::MatPointStep& s : curve.steps) {
    vm_peak_surrogate = std::max(vm_peak_surrogate, s.vm_surrogate);
    vm_peak_classic = std::max(vm_peak_classic, s.vm_classic);
  }
  std::printf("wrote %s (peak von Mises: surrogate %.4g MPa, classic %.4g MPa)\n",
              path.c_str(), vm_peak_surrogate, vm_peak_classic);
  return kExitOk;
}

int command_femcheck(const tto::RunConfig& config, int preopt_iters, int ramp_steps)
{
  tto::RunConfig reduced = config;
  if (reduced.esize_mm <= 0.0) {
    // halve the preset resolution; keeps the runtime at seconds
    reduced.esize_mm = 2.0 * tto::preset_by_name(config.bvp).elem_size;
  }
  const tto::ResolvedRun run = tto::resolve_run(reduced);

  tto::FemCheckOptions options;
  options.preopt_iterations = preopt_iters;
  options.ramp_steps = ramp_steps;
  options.optimizer = run.optimizer;

  std::printf("femcheck: %s, %d elements, plasticity=%s, %d ramp steps\n",
              run.preset.name.c_str(), run.problem.mesh.n_elements(),
              reduced.plasticity.c_str(), ramp_steps);

  const tto::FemCheckResult result =
      tto::fem_model_comparison(run.problem, run.material, options);

  std::printf("max |eps_p|: surrogate %.6g, classic %.6g\n", result.max_eps_p_surrogate,
              result.max_eps_p_classic);
  std::printf("max relative deviation: %.4g %%\n", 100.0 * result.max_rel_deviation);
  return result.max_rel_deviation < 0.01 ? kExitOk : kExitMaxIterations;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"thermodynamic topology optimization with surrogate plasticity"};
  app.set_version_flag("--version", tto::kVersion);
  app.require_subcommand(1);

  tto::RunConfig run_config;
  std::string run_config_file;
  CLI::App* run_cmd = app.add_subcommand("run", "optimize a benchmark structure");
  add_run_options(run_cmd, run_config, run_config_file);

  std::string mp_plasticity = "ideal";
  std::string mp_out = "out";
  CLI::App* mp_cmd =
      app.add_subcommand("matpoint", "strain-driven material point comparison");
  mp_cmd->add_option("--plasticity", mp_plasticity,
                     "material law: elastic|ideal|linear|exponential");
  mp_cmd->add_option("--out", mp_out, "output directory");

  tto::RunConfig fc_config;
  std::string fc_config_file;
  int fc_preopt = 60;
  int fc_ramp = 20;
  CLI::App* fc_cmd = app.add_subcommand(
      "femcheck", "fixed-structure surrogate vs classic field comparison");
  add_run_options(fc_cmd, fc_config, fc_config_file);
  fc_cmd->add_option("--preopt-iters", fc_preopt,
                     "optimization iterations fixing the structure");
  fc_cmd->add_option("--ramp-steps", fc_ramp, "load increments");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed())
      return command_run(merge_config(run_cmd, run_config, run_config_file));
    if (mp_cmd->parsed()) return command_matpoint(mp_plasticity, mp_out);
    if (fc_cmd->parsed())
      return command_femcheck(merge_config(fc_cmd, fc_config, fc_config_file), fc_preopt,
                              fc_ramp);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
