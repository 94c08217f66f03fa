#pragma once

#include "tto/fem.hpp"
#include "tto/mesh.hpp"

#include <vector>

namespace tto {

/// Parameters and current values of the per-element density field.
struct DensityField {
  std::vector<double> chi;
  double chi_min = 1e-3;  // lower bound [-]
  double v0 = 0.5;        // prescribed volume fraction [-]
  double beta = 0.0;      // gradient regularization [mm^2]
  double eta = 15.0;      // viscosity [s]
  double dt = 1.0;        // pseudo-time step [s]
};

/// Driving force p_e = -3 chi_e^2 Psi0_e (element average of Psi0) together
/// with its normalization. p_bar keeps the sign of p and is scaled by the
/// magnitude of the weighted mean, so elements with above-average energy
/// receive above-average (positive) density increments from -p_bar.
struct DrivingForceField {
  std::vector<double> p;      // [MPa], nonpositive
  double p_w = 0.0;           // weighted mean of p [MPa]
  std::vector<double> p_bar;  // p / |p_w| [-]
  bool degenerate_weighting = false;  // all elements at the bounds; fell back to mean |p|
};

DrivingForceField driving_force(const std::vector<ElementState>& states, const Mat66& E0,
                                double chi_min);

/// Variant taking precomputed element energies (the optimization evaluates
/// Psi0 with the strain/plastic-strain pair of the last displacement solve).
DrivingForceField driving_force_from_psi0(const std::vector<double>& psi0,
                                          const std::vector<double>& chi, double chi_min);

/// Face-neighbor finite-difference Laplacian. Missing neighbors contribute
/// zero, which realizes the zero-flux boundary condition.
std::vector<double> density_laplacian(const std::vector<double>& chi, const Mesh& mesh);

struct DensityUpdateResult {
  std::vector<double> chi;
  double lambda_chi = 0.0;                 // volume-constraint multiplier
  std::vector<unsigned char> bound_active; // box-constraint multiplier active
  int bisection_iterations = 0;
  bool volume_converged = true;
};

/// Explicit update of the density field,
///   chi <- clamp(chi + dt/eta (-p_bar + beta lap(chi) + lambda), chi_min, 1),
/// with lambda determined by bisection so the prescribed volume fraction is
/// conserved. Clamping realizes the bound multiplier.
DensityUpdateResult update_density(const DensityField& field,
                                   const std::vector<double>& p_bar, const Mesh& mesh);

}  // namespace tto
