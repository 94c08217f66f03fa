#include "tto/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tto {

DrivingForceField driving_force_from_psi0(const std::vector<double>& psi0,
                                          const std::vector<double>& chi, double chi_min)
{
  if (psi0.size() != chi.size())
    throw std::invalid_argument("psi0 and chi differ in size");

  DrivingForceField out;
  const size_t n = chi.size();
  out.p.resize(n);
  for (size_t e = 0; e < n; ++e) out.p[e] = -3.0 * chi[e] * chi[e] * psi0[e];

  double weighted = 0.0;
  double weight_sum = 0.0;
  for (size_t e = 0; e < n; ++e) {
    const double w = (chi[e] - chi_min) * (1.0 - chi[e]);
    weighted += w * out.p[e];
    weight_sum += w;
  }

  double normalizer = 0.0;
  if (weight_sum > 0.0) {
    out.p_w = weighted / weight_sum;
    normalizer = std::abs(out.p_w);
  }
  if (normalizer == 0.0) {
    // fully saturated field; fall back to the mean magnitude
    out.degenerate_weighting = true;
    double acc = 0.0;
    for (double v : out.p) acc += std::abs(v);
    normalizer = n > 0 ? acc / n : 0.0;
    out.p_w = -normalizer;
  }

  out.p_bar.resize(n);
  for (size_t e = 0; e < n; ++e)
    out.p_bar[e] = normalizer > 0.0 ? out.p[e] / normalizer : 0.0;
  return out;
}

DrivingForceField driving_force(const std::vector<ElementState>& states, const Mat66& E0,
                                double chi_min)
{
  std::vector<double> psi0(states.size());
  std::vector<double> chi(states.size());
  for (size_t e = 0; e < states.size(); ++e) {
    psi0[e] = element_psi0(states[e], E0);
    chi[e] = states[e].chi;
  }
  return driving_force_from_psi0(psi0, chi, chi_min);
}

std::vector<double> density_laplacian(const std::vector<double>& chi, const Mesh& mesh)
{
  if (static_cast<int>(chi.size()) != mesh.n_elements())
    throw std::invalid_argument("density vector size does not match the mesh");
  const double inv_h2 = 1.0 / (mesh.elem_size * mesh.elem_size);
  std::vector<double> lap(chi.size(), 0.0);
  for (int e = 0; e < mesh.n_elements(); ++e) {
    double acc = 0.0;
    for (int f = 0; f < 6; ++f) {
      const int nb = mesh.neighbors[e][f];
      if (nb >= 0) acc += chi[nb] - chi[e];
    }
    lap[e] = acc * inv_h2;
  }
  return lap;
}

DensityUpdateResult update_density(const DensityField& field,
                                   const std::vector<double>& p_bar, const Mesh& mesh)
{
  const size_t n = field.chi.size();
  if (p_bar.size() != n) throw std::invalid_argument("p_bar size does not match chi");
  if (static_cast<int>(n) != mesh.n_elements())
    throw std::invalid_argument("field size does not match the mesh");

  const double step = field.dt / field.eta;
  const std::vector<double> lap = density_laplacian(field.chi, mesh);

  std::vector<double> drive(n);
  double drive_max = 0.0;
  for (size_t e = 0; e < n; ++e) {
    drive[e] = -p_bar[e] + field.beta * lap[e];
    drive_max = std::max(drive_max, std::abs(drive[e]));
  }

  const double target = field.v0 * static_cast<double>(n);  // uniform element volumes

  auto volume_error = [&](double lambda) {
    double acc = 0.0;
    for (size_t e = 0; e < n; ++e) {
      const double cand = field.chi[e] + step * (drive[e] + lambda);
      acc += std::clamp(cand, field.chi_min, 1.0);
    }
    return acc - target;
  };

  DensityUpdateResult out;

  // bracket the monotone volume error, widening geometrically if needed
  double span = drive_max + (1.0 - field.chi_min) / step + 1.0;
  double lo = -span, hi = span;
  double err_lo = volume_error(lo), err_hi = volume_error(hi);
  for (int widen = 0; widen < 60 && (err_lo > 0.0 || err_hi < 0.0); ++widen) {
    span *= 2.0;
    lo = -span;
    hi = span;
    err_lo = volume_error(lo);
    err_hi = volume_error(hi);
  }

  const double tol = 1e-12 * static_cast<double>(n);
  double lambda = 0.0, err = volume_error(0.0);
  if (std::abs(err_lo) <= tol) {
    lambda = lo;
    err = err_lo;
  } else if (std::abs(err_hi) <= tol) {
    lambda = hi;
    err = err_hi;
  } else {
    int it = 0;
    for (; it < 200; ++it) {
      lambda = 0.5 * (lo + hi);
      err = volume_error(lambda);
      if (std::abs(err) <= tol) break;
      if (err < 0.0)
        lo = lambda;
      else
        hi = lambda;
    }
    out.bisection_iterations = it;
  }
  out.volume_converged = std::abs(err) <= 1e-9 * target;

  out.lambda_chi = lambda;
  out.chi.resize(n);
  out.bound_active.resize(n);
  for (size_t e = 0; e < n; ++e) {
    const double cand = field.chi[e] + step * (drive[e] + lambda);
    out.chi[e] = std::clamp(cand, field.chi_min, 1.0);
    out.bound_active[e] = (cand < field.chi_min || cand > 1.0) ? 1 : 0;
  }
  return out;
}

}  // namespace tto
