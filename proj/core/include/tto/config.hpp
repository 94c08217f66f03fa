#pragma once

#include "tto/material.hpp"
#include "tto/optimizer.hpp"
#include "tto/presets.hpp"

#include <string>

namespace tto {

/// User-facing run configuration. Zero-valued entries fall back to the
/// preset's defaults; beta falls back to 2 * elem_size^2. Physical keys carry
/// their unit in the name.
struct RunConfig {
  std::string bvp = "clamped_beam";
  std::string plasticity = "ideal";  // elastic | ideal | linear | exponential
  int loops = 1;
  double v0 = 0.0;         // [-]
  double eta_s = 0.0;      // [s]
  double beta_mm2 = 0.0;   // [mm^2]
  double esize_mm = 0.0;   // [mm]
  double u_star_mm = 0.0;  // [mm]
  double dt_s = 1.0;       // [s]
  int max_iters = 1000;
  double chi_min = 1e-3;
  double newton_tol = 1e-8;
  int snapshot_every = 10;
  std::string solver = "auto";  // auto | direct | cg
  std::string out = "out";
};

/// Applies one key=value pair; unknown keys and out-of-range values are
/// rejected with the key name in the message.
void set_config_key(RunConfig& config, const std::string& key, const std::string& value);

/// Reads a flat key=value file ('#' starts a comment).
RunConfig load_config(const std::string& path);

void validate_config(const RunConfig& config);

MaterialParams material_from_config(const RunConfig& config);

/// Everything needed to execute a run, derived from a RunConfig.
struct ResolvedRun {
  RunConfig input;
  Preset preset;
  Problem problem;
  MaterialParams material;
  OptimizerConfig optimizer;
  double beta = 0.0;
  double elem_size = 0.0;
  double u_star = 0.0;
};

ResolvedRun resolve_run(const RunConfig& config);

/// JSON manifest with the fully resolved configuration; written next to the
/// results so a run can be reproduced from its outputs alone.
std::string manifest_json(const ResolvedRun& run, const std::string& status,
                          int iterations, double final_stiffness);

}  // namespace tto
