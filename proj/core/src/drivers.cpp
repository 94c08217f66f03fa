#include "tto/drivers.hpp"

#include "tto/optimizer.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace tto {

Mat3 matpoint_strain_direction(const MaterialParams& params)
{
  const double nu = params.poisson_ratio;
  Mat3 m;
  m << 1.0, 0.6, 0.6,
       0.6, -nu, -0.1,
       0.6, -0.1, -nu;
  return m;
}

namespace {

// piecewise-linear cycle 0 -> +1 -> 0 -> -1 -> 0 over 4q steps
double cycle_amplitude(int step, int q)
{
  if (step <= q) return static_cast<double>(step) / q;
  if (step <= 3 * q) return static_cast<double>(2 * q - step) / q;
  return static_cast<double>(step - 4 * q) / q;
}

}  // namespace

MatPointCurve material_point_run(const MaterialParams& params, int steps_per_quarter,
                                 double eps11_max)
{
  if (steps_per_quarter < 1)
    throw std::invalid_argument("steps_per_quarter must be >= 1");

  const Mat66 E0 = elasticity_tensor(params);
  const Vec6 direction = to_mandel(matpoint_strain_direction(params));

  MatPointCurve curve;
  curve.steps_per_quarter = steps_per_quarter;
  curve.eps11_max = eps11_max;

  Vec6 eps_p_surrogate = Vec6::Zero();
  ClassicState classic;

  const int n_steps = 4 * steps_per_quarter;
  curve.steps.reserve(n_steps + 1);
  for (int l = 0; l <= n_steps; ++l) {
    const double eps11 = eps11_max * cycle_amplitude(l, steps_per_quarter);
    const Vec6 eps = eps11 * direction;

    PointState prev{Vec6::Zero(), eps_p_surrogate, 1.0};
    const PlasticUpdateResult upd = update_plastic_strains(prev, eps, E0, params);
    eps_p_surrogate = upd.eps_p;

    classic = classic_update(classic, eps, 1.0, E0, params, 1);

    MatPointStep rec;
    rec.step = l;
    rec.eps11 = eps11;
    rec.eps = eps;
    rec.eps_norm = eps.norm();
    rec.eps_p_surrogate = eps_p_surrogate;
    rec.eps_p_classic = classic.eps_p;
    rec.eps_p_norm_surrogate = eps_p_surrogate.norm();
    rec.eps_p_norm_classic = classic.eps_p.norm();
    rec.vm_surrogate = von_mises(stress({eps, eps_p_surrogate, 1.0}, E0));
    rec.vm_classic = von_mises(stress({eps, classic.eps_p, 1.0}, E0));
    curve.steps.push_back(rec);
  }
  return curve;
}

void write_matpoint_csv(const std::string& path, const MatPointCurve& curve)
{
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write file: " + path);
  os << "step,eps11,eps_norm,vm_surrogate,eps_p_norm_surrogate,vm_classic,"
        "eps_p_norm_classic\n";
  char buf[256];
  for (const MatPointStep& r : curve.steps) {
    std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", r.step,
                  r.eps11, r.eps_norm, r.vm_surrogate, r.eps_p_norm_surrogate,
                  r.vm_classic, r.eps_p_norm_classic);
    os << buf;
  }
}

FemCheckResult fem_model_comparison(const Problem& problem, const MaterialParams& params,
                                    const FemCheckOptions& options)
{
  const Mesh& mesh = problem.mesh;
  const Mat66 E0 = elasticity_tensor(params);

  // fix a structure by running the optimization for a bounded budget
  OptimizerConfig opt = options.optimizer;
  opt.max_iterations = options.preopt_iterations;
  Optimizer optimizer(mesh, problem.load, params, opt);
  optimizer.run();

  FemCheckResult result;
  result.chi = optimizer.chi();

  FemSystem fem(mesh, problem.load, params, opt.solver);
  fem.assemble(result.chi);

  std::vector<ElementState> surrogate(mesh.n_elements());
  std::vector<ElementState> classic(mesh.n_elements());
  std::vector<std::array<ClassicState, 8>> classic_points(mesh.n_elements());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    surrogate[e].chi = result.chi[e];
    classic[e].chi = result.chi[e];
  }

  for (int step = 1; step <= options.ramp_steps; ++step) {
    const double scale = static_cast<double>(step) / options.ramp_steps;

    // surrogate: alternate solves and stateless plastic updates
    for (int pass = 0; pass < options.stagger_max; ++pass) {
      const Eigen::VectorXd u = fem.solve(surrogate, scale);
      fem.update_strains(u, surrogate);
      double delta = 0.0;
      for (ElementState& es : surrogate) {
        for (QpState& q : es.qp) {
          PointState prev{Vec6::Zero(), q.eps_p, es.chi};
          const PlasticUpdateResult upd = update_plastic_strains(prev, q.eps, E0, params);
          delta = std::max(delta, (upd.eps_p - q.eps_p).norm());
          q.eps_p = upd.eps_p;
        }
      }
      result.worst_stagger_iterations = std::max(result.worst_stagger_iterations, pass + 1);
      if (delta <= options.stagger_tol) break;
    }

    // classic: every pass re-integrates the increment from the step's start
    // state so the staggering does not accumulate spurious dissipation
    const std::vector<std::array<ClassicState, 8>> step_start = classic_points;
    for (int pass = 0; pass < options.stagger_max; ++pass) {
      const Eigen::VectorXd u = fem.solve(classic, scale);
      fem.update_strains(u, classic);
      double delta = 0.0;
      for (int e = 0; e < mesh.n_elements(); ++e) {
        for (int q = 0; q < 8; ++q) {
          const ClassicState next = classic_update(
              step_start[e][q], classic[e].qp[q].eps, classic[e].chi, E0, params, 1);
          delta = std::max(delta, (next.eps_p - classic_points[e][q].eps_p).norm());
          classic_points[e][q] = next;
          classic[e].qp[q].eps_p = next.eps_p;
        }
      }
      result.worst_stagger_iterations = std::max(result.worst_stagger_iterations, pass + 1);
      if (delta <= options.stagger_tol) break;
    }
  }

  double max_diff = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    for (int q = 0; q < 8; ++q) {
      const Vec6& a = surrogate[e].qp[q].eps_p;
      const Vec6& b = classic[e].qp[q].eps_p;
      max_diff = std::max(max_diff, (a - b).norm());
      result.max_eps_p_surrogate = std::max(result.max_eps_p_surrogate, a.norm());
      result.max_eps_p_classic = std::max(result.max_eps_p_classic, b.norm());
    }
  }
  result.max_rel_deviation =
      result.max_eps_p_classic > 0.0 ? max_diff / result.max_eps_p_classic : 0.0;
  return result;
}

}  // namespace tto
