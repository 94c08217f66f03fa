#pragma once

#include "tto/config.hpp"
#include "tto/material.hpp"
#include "tto/presets.hpp"

#include <string>
#include <vector>

namespace tto {

/// One record of the strain-driven material point test. The surrogate model
/// and the classic rate-independent model are driven along the same path.
struct MatPointStep {
  int step = 0;
  double eps11 = 0.0;
  double eps_norm = 0.0;
  double vm_surrogate = 0.0;
  double eps_p_norm_surrogate = 0.0;
  double vm_classic = 0.0;
  double eps_p_norm_classic = 0.0;
  Vec6 eps = Vec6::Zero();
  Vec6 eps_p_surrogate = Vec6::Zero();
  Vec6 eps_p_classic = Vec6::Zero();
};

struct MatPointCurve {
  std::vector<MatPointStep> steps;
  int steps_per_quarter = 25;
  double eps11_max = 0.005;
};

/// Proportional strain direction of the material point test; the diagonal
/// carries the Poisson ratio of `params`.
Mat3 matpoint_strain_direction(const MaterialParams& params);

/// Drives a full tension/unload/compression/unload cycle of
/// 4 * steps_per_quarter linear load steps with eps11 peaking at eps11_max.
MatPointCurve material_point_run(const MaterialParams& params, int steps_per_quarter = 25,
                                 double eps11_max = 0.005);

void write_matpoint_csv(const std::string& path, const MatPointCurve& curve);

struct FemCheckOptions {
  int ramp_steps = 20;         // load increments for both models
  int preopt_iterations = 60;  // optimization iterations fixing the structure
  int stagger_max = 40;        // displacement/plastic-strain passes per increment
  double stagger_tol = 1e-10;  // on the plastic strain change between passes
  OptimizerConfig optimizer;   // settings for the structure pre-optimization
};

struct FemCheckResult {
  double max_rel_deviation = 0.0;  // max_qp |eps_p_s - eps_p_c| / max_qp |eps_p_c|
  double max_eps_p_surrogate = 0.0;
  double max_eps_p_classic = 0.0;
  int worst_stagger_iterations = 0;
  std::vector<double> chi;  // the frozen structure the comparison ran on
};

/// Fixed-structure comparison: optimizes a structure for `params`, freezes the
/// density field, then ramps the load on it with the surrogate model and with
/// the classic model and compares the plastic strain fields point by point.
FemCheckResult fem_model_comparison(const Problem& problem, const MaterialParams& params,
                                    const FemCheckOptions& options);

}  // namespace tto
