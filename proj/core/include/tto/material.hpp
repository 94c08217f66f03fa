#pragma once

#include "tto/tensor.hpp"

namespace tto {

enum class YieldLaw { kIdeal, kLinearHardening, kExponentialHardening };

/// Isotropic elasto-plastic material description. Stresses in MPa, strains
/// dimensionless. The yield threshold used by the model is the tensor-norm
/// bound sigma_y = sqrt(2/3) * sigma_y_exp, so that a uniaxial stress state
/// yields exactly at the experimental value sigma_y_exp.
struct MaterialParams {
  double youngs_modulus = 210000.0;  // E0 [MPa]
  double poisson_ratio = 0.3;        // nu [-]
  double sigma_y_exp = 300.0;        // experimental yield stress [MPa]
  YieldLaw law = YieldLaw::kIdeal;
  double hardening_h = 1000.0;       // slope for linear hardening [MPa]
  double hardening_h0 = 40000.0;     // initial slope, exponential law [MPa]
  double hardening_h1 = 1000.0;      // end slope, exponential law [MPa]
  double hardening_kappa = 300.0;    // transition rate, exponential law [-]

  double sigma_y() const { return std::sqrt(2.0 / 3.0) * sigma_y_exp; }
  double lame_lambda() const
  {
    return youngs_modulus * poisson_ratio /
           ((1.0 + poisson_ratio) * (1.0 - 2.0 * poisson_ratio));
  }
  double lame_mu() const { return youngs_modulus / (2.0 * (1.0 + poisson_ratio)); }
  double bulk_modulus() const { return lame_lambda() + 2.0 / 3.0 * lame_mu(); }

  /// Throws std::invalid_argument when a parameter is outside its admissible
  /// range (E0 > 0, 0 < nu < 0.5, sigma_y_exp > 0, exponential law needs
  /// h0 > h1 >= 0 and kappa > 0).
  void validate() const;

  /// Steel parameters used by all presets.
  static MaterialParams steel(YieldLaw law = YieldLaw::kIdeal);

  /// Unreachably high yield stress; the plastic branch never activates.
  static MaterialParams elastic();
};

/// Reference density for the stiffness interpolation, rho(chi) = chi^3.
inline double simp(double chi) { return chi * chi * chi; }

/// Isotropic Hooke tensor of the full material as a Mandel 6x6 matrix.
Mat66 elasticity_tensor(const MaterialParams& params);

/// State of one integration point: total strain, plastic strain, and the
/// density variable of the owning element.
struct PointState {
  Vec6 eps = Vec6::Zero();
  Vec6 eps_p = Vec6::Zero();
  double chi = 1.0;
};

/// Cauchy stress sigma = chi^3 E0 : (eps - eps_p).
Vec6 stress(const PointState& state, const Mat66& E0);

/// Strain energy density of the virtually full material,
/// Psi0 = 1/2 (eps - eps_p) : E0 : (eps - eps_p). Nonnegative; independent of chi.
double free_energy0(const PointState& state, const Mat66& E0);

/// Yield threshold r(||eps_p||, chi) in tensor-norm form (scales with chi^3).
double yield_r(double eps_p_norm, double chi, const MaterialParams& params);

/// dr/deps_p. Zero for ideal plasticity and, by the limit convention, at
/// ||eps_p|| = 0 for the hardening laws.
Vec6 yield_r_d1(const Vec6& eps_p, double chi, const MaterialParams& params);

/// d2r/deps_p deps_p; same conventions as yield_r_d1.
Mat66 yield_r_d2(const Vec6& eps_p, double chi, const MaterialParams& params);

enum class Regime { kElastic, kPlastic };

/// Strain-based regime indicator: plastic iff ||dev(chi^3 E0 : eps)|| >= r,
/// with r evaluated at the plastic strain stored in `state`. Using the linear
/// stress chi^3 E0 : eps instead of the actual stress makes the decision a
/// function of the current strain alone, which is what lets plastic strains
/// shrink again when the surrounding structure stiffens.
Regime indicator_strain(const PointState& state, const Mat66& E0,
                        const MaterialParams& params);

/// Governing algebraic residual for the plastic strains and its 1/chi scaled
/// companion. `singular` is set when the stress deviator vanishes (no unique
/// flow direction); callers treat the point as elastic then.
struct SurrogateResidual {
  Vec6 s = Vec6::Zero();
  Vec6 s_scaled = Vec6::Zero();
  bool singular = false;
};
SurrogateResidual surrogate_residual(const PointState& state, const Mat66& E0,
                                     const MaterialParams& params);

/// Analytical derivative of the residual with respect to eps_p.
struct SurrogateTangent {
  Mat66 ds = Mat66::Zero();
  Mat66 ds_scaled = Mat66::Zero();
  bool singular = false;
};
SurrogateTangent surrogate_tangent(const PointState& state, const Mat66& E0,
                                   const MaterialParams& params);

enum class UpdateStatus {
  kElastic,       // strain indicator below yield; eps_p = 0
  kGated,         // trial stress within 1% of the yield surface; eps_p kept
  kConverged,     // Newton solve converged
  kSingular,      // degenerate deviator; treated as elastic
  kNotConverged,  // Newton exhausted max_iter; previous eps_p retained
};

struct PlasticUpdateResult {
  Vec6 eps_p = Vec6::Zero();
  UpdateStatus status = UpdateStatus::kElastic;
  int newton_iterations = 0;
  bool failed() const { return status == UpdateStatus::kNotConverged; }
};

/// Computes the plastic strain tensor belonging to the strain `eps_new`.
///
/// The solve is stateless: whenever the Newton iteration runs it starts from
/// eps_p = 0, so the result depends on the current strain only. The previous
/// state enters twice: through the yield threshold of the regime indicator and
/// through the trial-stress gate |phi(sigma_trial)| / r < 1% that keeps the
/// previous plastic strains when they are already consistent.
PlasticUpdateResult update_plastic_strains(const PointState& prev, const Vec6& eps_new,
                                           const Mat66& E0, const MaterialParams& params,
                                           double tol = 1e-8, int max_iter = 50);

/// State of the classic rate-independent model (validation reference).
/// `eps` keeps the strain the state was last driven to, so an update can
/// substep the increment toward a new strain.
struct ClassicState {
  Vec6 eps_p = Vec6::Zero();
  double arc_length = 0.0;  // accumulated ||d eps_p||
  Vec6 eps = Vec6::Zero();
};

/// Radial-return update of the classic model. The strain path from the stored
/// state to `eps_new` is split into `n_substeps` linear increments.
ClassicState classic_update(const ClassicState& state, const Vec6& eps_new, double chi,
                            const Mat66& E0, const MaterialParams& params,
                            int n_substeps = 20);

}  // namespace tto
