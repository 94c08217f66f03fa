#include "tto/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace tto {

Verdict check_convergence(const std::vector<double>& stiffness, const ConvergenceRule& rule)
{
  const int n = static_cast<int>(stiffness.size());
  if (n < 2 + rule.trailing_steps) return Verdict::kContinue;

  std::vector<double> change(n, 0.0);  // change[k] between records k-1 and k
  for (int k = 1; k < n; ++k) {
    const double denom = std::max(std::abs(stiffness[k - 1]), 1e-300);
    change[k] = std::abs(stiffness[k] - stiffness[k - 1]) / denom;
  }

  for (int k = 1; k + rule.trailing_steps < n; ++k) {
    if (change[k] >= rule.first_tol) continue;
    bool ok = true;
    for (int j = 1; j <= rule.trailing_steps; ++j)
      if (change[k + j] >= rule.trailing_tol) ok = false;
    if (ok) return Verdict::kConverged;
  }
  return Verdict::kContinue;
}

Optimizer::Optimizer(const Mesh& mesh, const LoadCase& load, const MaterialParams& params,
                     const OptimizerConfig& config)
    : mesh_(&mesh),
      load_(&load),
      params_(params),
      config_(config),
      fem_(mesh, load, params, config.solver),
      E0_(elasticity_tensor(params))
{
  params_.validate();
  if (config_.loops < 1 || config_.loops > 5)
    throw std::invalid_argument("loops must lie in [1, 5]");
  if (!(config_.v0 > 0.0 && config_.v0 <= 1.0))
    throw std::invalid_argument("v0 must lie in (0, 1]");
  if (config_.beta <= 0.0) config_.beta = 2.0 * mesh.elem_size * mesh.elem_size;

  states_.assign(mesh.n_elements(), ElementState{});
  for (ElementState& s : states_) s.chi = config_.v0;  // uniform start
  u_ = Eigen::VectorXd::Zero(3 * mesh.n_nodes());
}

std::vector<double> Optimizer::chi() const
{
  std::vector<double> c(states_.size());
  for (size_t e = 0; e < states_.size(); ++e) c[e] = states_[e].chi;
  return c;
}

void Optimizer::iterate()
{
  const auto t0 = std::chrono::steady_clock::now();

  IterationRecord rec;
  rec.iteration = iteration_ + 1;

  // the tangent depends on the densities only, which are frozen for all loops
  fem_.assemble(chi());

  std::vector<double> psi0_last(states_.size(), 0.0);
  for (int loop = 0; loop < config_.loops; ++loop) {
    u_ = fem_.solve(states_);
    fem_.update_strains(u_, states_);

    const bool last_loop = loop + 1 == config_.loops;
    if (last_loop) {
      // energies of the pair (new strains, plastic strains of this solve)
      for (size_t e = 0; e < states_.size(); ++e)
        psi0_last[e] = element_psi0(states_[e], E0_);

      std::vector<double> values;
      values.reserve(load_->prescribed.size());
      for (const DirichletBC& bc : load_->prescribed) values.push_back(bc.value);
      rec.stiffness = stiffness_metric(fem_.reactions(u_, states_), values);
    }

    for (ElementState& es : states_) {
      for (QpState& q : es.qp) {
        PointState prev{Vec6::Zero(), q.eps_p, es.chi};
        const PlasticUpdateResult upd = update_plastic_strains(
            prev, q.eps, E0_, params_, config_.newton_tol, config_.newton_max_iter);
        q.eps_p = upd.eps_p;
        if (last_loop) {
          rec.newton_max_iterations =
              std::max(rec.newton_max_iterations, upd.newton_iterations);
          if (upd.failed()) ++rec.newton_failures;
        }
      }
    }
  }

  DensityField field;
  field.chi = chi();
  field.chi_min = config_.chi_min;
  field.v0 = config_.v0;
  field.beta = config_.beta;
  field.eta = config_.eta;
  field.dt = config_.dt;

  const DrivingForceField df = driving_force_from_psi0(psi0_last, field.chi, field.chi_min);
  const DensityUpdateResult upd = update_density(field, df.p_bar, *mesh_);
  for (size_t e = 0; e < states_.size(); ++e) states_[e].chi = upd.chi[e];

  rec.lambda_chi = upd.lambda_chi;
  for (unsigned char a : upd.bound_active) rec.bounds_active += a;

  double mean_chi = 0.0;
  for (const ElementState& es : states_) mean_chi += es.chi;
  mean_chi /= static_cast<double>(states_.size());
  rec.volume_error = std::abs(mean_chi - config_.v0) / config_.v0;

  for (const ElementState& es : states_) {
    for (const QpState& q : es.qp) {
      rec.max_eps_p_norm = std::max(rec.max_eps_p_norm, q.eps_p.norm());
      rec.max_abs_trace_eps_p = std::max(rec.max_abs_trace_eps_p, std::abs(trace(q.eps_p)));
    }
  }

  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  history_.push_back(rec);
  ++iteration_;
}

Verdict Optimizer::verdict() const
{
  std::vector<double> s;
  s.reserve(history_.size());
  for (const IterationRecord& r : history_) s.push_back(r.stiffness);
  return check_convergence(s, config_.convergence);
}

RunStatus Optimizer::run(const SnapshotFn& snapshot, int snapshot_every)
{
  while (iteration_ < config_.max_iterations) {
    iterate();
    if (snapshot && snapshot_every > 0 && iteration_ % snapshot_every == 0)
      snapshot(*this, iteration_, false);
    if (verdict() == Verdict::kConverged) {
      if (snapshot) snapshot(*this, iteration_, true);
      return RunStatus::kConverged;
    }
  }
  if (snapshot) snapshot(*this, iteration_, true);
  return RunStatus::kMaxIterations;
}

}  // namespace tto
