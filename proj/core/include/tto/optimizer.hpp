#pragma once

#include "tto/density.hpp"
#include "tto/fem.hpp"

#include <functional>
#include <vector>

namespace tto {

/// Convergence is declared once the relative stiffness change drops below
/// `first_tol` and stays below `trailing_tol` for the next `trailing_steps`
/// consecutive iterations.
struct ConvergenceRule {
  double first_tol = 1e-5;
  double trailing_tol = 1e-4;
  int trailing_steps = 3;
};

enum class Verdict { kContinue, kConverged };

Verdict check_convergence(const std::vector<double>& stiffness, const ConvergenceRule& rule);

struct IterationRecord {
  int iteration = 0;
  double stiffness = 0.0;        // load-displacement product of the last solve
  double volume_error = 0.0;     // relative deviation from v0
  double max_eps_p_norm = 0.0;   // max ||eps_p|| over all integration points
  double max_abs_trace_eps_p = 0.0;
  int newton_max_iterations = 0; // worst point this iteration
  int newton_failures = 0;       // points flagged non-converged
  double lambda_chi = 0.0;
  int bounds_active = 0;
  double wall_seconds = 0.0;
};

using History = std::vector<IterationRecord>;

struct OptimizerConfig {
  int loops = 1;             // displacement/plastic-strain updates per iteration
  int max_iterations = 1000;
  double v0 = 0.5;
  double eta = 15.0;         // [s]
  double beta = 0.0;         // [mm^2]; <= 0 derives 2 * elem_size^2
  double dt = 1.0;           // [s]
  double chi_min = 1e-3;
  double newton_tol = 1e-8;
  int newton_max_iter = 50;
  ConvergenceRule convergence;
  FemSystem::Solver solver = FemSystem::Solver::kDirect;
};

enum class RunStatus { kConverged, kMaxIterations };

/// Staggered optimization loop: per iteration, `loops` repetitions of a
/// displacement solve followed by the plastic-strain update, then one density
/// update driven by the energies of the last solve. All stages are strictly
/// ordered and deterministic.
class Optimizer {
 public:
  Optimizer(const Mesh& mesh, const LoadCase& load, const MaterialParams& params,
            const OptimizerConfig& config);

  void iterate();
  Verdict verdict() const;

  /// Runs until convergence or max_iterations. The callback, when given, is
  /// invoked after every `snapshot_every`-th iteration and once at the end.
  using SnapshotFn = std::function<void(const Optimizer&, int iteration, bool final)>;
  RunStatus run(const SnapshotFn& snapshot = nullptr, int snapshot_every = 0);

  const std::vector<ElementState>& states() const { return states_; }
  const Eigen::VectorXd& displacements() const { return u_; }
  const History& history() const { return history_; }
  const Mesh& mesh() const { return *mesh_; }
  const FemSystem& fem() const { return fem_; }
  const MaterialParams& material() const { return params_; }
  const OptimizerConfig& config() const { return config_; }
  int iteration() const { return iteration_; }
  std::vector<double> chi() const;

 private:
  const Mesh* mesh_;
  const LoadCase* load_;
  MaterialParams params_;
  OptimizerConfig config_;
  FemSystem fem_;
  Mat66 E0_;

  std::vector<ElementState> states_;
  Eigen::VectorXd u_;
  History history_;
  int iteration_ = 0;
};

}  // namespace tto
