#include "tto/material.hpp"

#include <stdexcept>

namespace tto {

namespace {

// Hardening curve R(n) with r = chi^3 * R(||eps_p||), plus its first and
// second derivatives with respect to ||eps_p||.
double hardening_value(double n, const MaterialParams& p)
{
  switch (p.law) {
    case YieldLaw::kIdeal:
      return p.sigma_y();
    case YieldLaw::kLinearHardening:
      return p.sigma_y() + p.hardening_h * n;
    case YieldLaw::kExponentialHardening:
      return p.sigma_y() + p.hardening_h1 * n +
             (p.hardening_h1 - p.hardening_h0) / p.hardening_kappa *
                 (std::exp(-p.hardening_kappa * n) - 1.0);
  }
  return p.sigma_y();
}

double hardening_slope(double n, const MaterialParams& p)
{
  switch (p.law) {
    case YieldLaw::kIdeal:
      return 0.0;
    case YieldLaw::kLinearHardening:
      return p.hardening_h;
    case YieldLaw::kExponentialHardening:
      return p.hardening_h1 -
             (p.hardening_h1 - p.hardening_h0) * std::exp(-p.hardening_kappa * n);
  }
  return 0.0;
}

double hardening_curvature(double n, const MaterialParams& p)
{
  switch (p.law) {
    case YieldLaw::kIdeal:
    case YieldLaw::kLinearHardening:
      return 0.0;
    case YieldLaw::kExponentialHardening:
      return p.hardening_kappa * (p.hardening_h1 - p.hardening_h0) *
             std::exp(-p.hardening_kappa * n);
  }
  return 0.0;
}

constexpr double kSingularDeviatorRatio = 1e-12;

}  // namespace

void MaterialParams::validate() const
{
  if (!(youngs_modulus > 0.0)) throw std::invalid_argument("youngs_modulus must be positive");
  if (!(poisson_ratio > 0.0 && poisson_ratio < 0.5))
    throw std::invalid_argument("poisson_ratio must lie in (0, 0.5)");
  if (!(sigma_y_exp > 0.0)) throw std::invalid_argument("sigma_y_exp must be positive");
  if (law == YieldLaw::kExponentialHardening) {
    if (!(hardening_h0 > hardening_h1 && hardening_h1 >= 0.0))
      throw std::invalid_argument("exponential hardening requires h0 > h1 >= 0");
    if (!(hardening_kappa > 0.0))
      throw std::invalid_argument("hardening_kappa must be positive");
  }
}

MaterialParams MaterialParams::steel(YieldLaw law)
{
  MaterialParams p;
  p.law = law;
  return p;
}

MaterialParams MaterialParams::elastic()
{
  MaterialParams p;
  p.law = YieldLaw::kIdeal;
  p.sigma_y_exp = 500000.0;
  return p;
}

Mat66 elasticity_tensor(const MaterialParams& params)
{
  const double la = params.lame_lambda();
  const double mu = params.lame_mu();
  Mat66 E = Mat66::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) E(i, j) = la;
    E(i, i) += 2.0 * mu;
    E(i + 3, i + 3) = 2.0 * mu;  // Mandel scaling; engineering Voigt would carry mu
  }
  return E;
}

Vec6 stress(const PointState& state, const Mat66& E0)
{
  return simp(state.chi) * (E0 * (state.eps - state.eps_p));
}

double free_energy0(const PointState& state, const Mat66& E0)
{
  const Vec6 e = state.eps - state.eps_p;
  return 0.5 * e.dot(E0 * e);
}

double yield_r(double eps_p_norm, double chi, const MaterialParams& params)
{
  return simp(chi) * hardening_value(eps_p_norm, params);
}

Vec6 yield_r_d1(const Vec6& eps_p, double chi, const MaterialParams& params)
{
  if (params.law == YieldLaw::kIdeal) return Vec6::Zero();
  const double n = eps_p.norm();
  if (n == 0.0) return Vec6::Zero();  // bounded directional limit
  return simp(chi) * hardening_slope(n, params) / n * eps_p;
}

Mat66 yield_r_d2(const Vec6& eps_p, double chi, const MaterialParams& params)
{
  if (params.law == YieldLaw::kIdeal) return Mat66::Zero();
  const double n = eps_p.norm();
  if (n == 0.0) return Mat66::Zero();
  const Mat66 dyad = eps_p * eps_p.transpose();
  const double rp = hardening_slope(n, params);
  const double rpp = hardening_curvature(n, params);
  return simp(chi) * (rp * (Mat66::Identity() / n - dyad / (n * n * n)) + rpp * dyad / (n * n));
}

Regime indicator_strain(const PointState& state, const Mat66& E0,
                        const MaterialParams& params)
{
  const Vec6 sigma_lin = simp(state.chi) * (E0 * state.eps);
  const double r = yield_r(state.eps_p.norm(), state.chi, params);
  return deviator(sigma_lin).norm() - r >= 0.0 ? Regime::kPlastic : Regime::kElastic;
}

SurrogateResidual surrogate_residual(const PointState& state, const Mat66& E0,
                                     const MaterialParams& params)
{
  SurrogateResidual out;
  const double chi3 = simp(state.chi);
  const Vec6 id = identity6();

  const Vec6 sigma = chi3 * (E0 * (state.eps - state.eps_p));
  const Vec6 sigma_dev = deviator(sigma);
  const double r = yield_r(state.eps_p.norm(), state.chi, params);

  if (sigma_dev.norm() < kSingularDeviatorRatio * r) {
    out.singular = true;
    return out;
  }

  const Vec6 g = yield_r_d1(state.eps_p, state.chi, params);
  const Vec6 A_sd = chi3 * (E0 * sigma_dev);
  const double denom = sigma_dev.dot(A_sd) + g.dot(sigma_dev) * r;
  const Vec6 direction = A_sd / r + g;

  // Hydrostatic closure: at a root tr(sigma) equals the linear-stress trace,
  // which is equivalent to tr(eps_p) = 0.
  const Vec6 E0_id = E0 * id;
  const double vol_scale = chi3 * id.dot(E0 * state.eps) / id.dot(E0_id);

  out.s = -sigma + (r * r * r / denom) * direction + vol_scale * E0_id;
  out.s_scaled = out.s / state.chi;
  return out;
}

SurrogateTangent surrogate_tangent(const PointState& state, const Mat66& E0,
                                   const MaterialParams& params)
{
  SurrogateTangent out;
  const double chi3 = simp(state.chi);

  const Mat66 A = chi3 * E0;
  const Vec6 sigma = A * (state.eps - state.eps_p);
  const Vec6 sigma_dev = deviator(sigma);
  const double r = yield_r(state.eps_p.norm(), state.chi, params);

  if (sigma_dev.norm() < kSingularDeviatorRatio * r) {
    out.singular = true;
    return out;
  }

  const Vec6 g = yield_r_d1(state.eps_p, state.chi, params);
  const Mat66 G = yield_r_d2(state.eps_p, state.chi, params);
  const Mat66 P = deviator_projector();

  const Mat66 PA = P * A;    // d(sigma_dev)/d(eps_p) = -PA
  const Vec6 A_sd = A * sigma_dev;
  const double denom = sigma_dev.dot(A_sd) + g.dot(sigma_dev) * r;
  const Vec6 direction = A_sd / r + g;

  // d(denom)/d(eps_p)
  const Vec6 d_denom =
      -2.0 * (A * (P * A_sd)) + r * (G * sigma_dev - A * (P * g)) + g.dot(sigma_dev) * g;
  // d(r^3/denom)/d(eps_p)
  const double r3 = r * r * r;
  const Vec6 d_scale = (3.0 * r * r / denom) * g - (r3 / (denom * denom)) * d_denom;
  // d(direction)/d(eps_p)
  const Mat66 d_direction = -(A * PA) / r - (A_sd * g.transpose()) / (r * r) + G;

  out.ds = A + direction * d_scale.transpose() + (r3 / denom) * d_direction;
  out.ds_scaled = out.ds / state.chi;
  return out;
}

PlasticUpdateResult update_plastic_strains(const PointState& prev, const Vec6& eps_new,
                                           const Mat66& E0, const MaterialParams& params,
                                           double tol, int max_iter)
{
  PlasticUpdateResult out;
  const double chi3 = simp(prev.chi);
  const double r_gate = yield_r(prev.eps_p.norm(), prev.chi, params);

  PointState probe{eps_new, prev.eps_p, prev.chi};
  if (indicator_strain(probe, E0, params) == Regime::kElastic) {
    out.status = UpdateStatus::kElastic;
    return out;  // re-solving from zero, elastic states carry no plastic strain
  }

  const Vec6 sigma_trial = chi3 * (E0 * (eps_new - prev.eps_p));
  const double phi_trial = deviator(sigma_trial).norm() - r_gate;
  if (std::abs(phi_trial) / r_gate < 0.01) {
    out.eps_p = prev.eps_p;
    out.status = UpdateStatus::kGated;
    return out;
  }

  PointState it_state{eps_new, Vec6::Zero(), prev.chi};
  for (int it = 0; it <= max_iter; ++it) {
    const SurrogateResidual res = surrogate_residual(it_state, E0, params);
    if (res.singular) {
      out.status = UpdateStatus::kSingular;
      out.eps_p = Vec6::Zero();
      out.newton_iterations = it;
      return out;
    }
    if (res.s_scaled.lpNorm<Eigen::Infinity>() <= tol) {
      Vec6 converged = it_state.eps_p;
      // the exact root is deviatoric; strip the O(tol) trace residue
      converged -= trace(converged) / 3.0 * identity6();
      out.eps_p = converged;
      out.status = UpdateStatus::kConverged;
      out.newton_iterations = it;
      return out;
    }
    if (it == max_iter) break;
    const SurrogateTangent tan = surrogate_tangent(it_state, E0, params);
    if (tan.singular) {
      out.status = UpdateStatus::kSingular;
      out.eps_p = Vec6::Zero();
      out.newton_iterations = it;
      return out;
    }
    it_state.eps_p -= tan.ds_scaled.partialPivLu().solve(res.s_scaled);
  }

  out.eps_p = prev.eps_p;  // keep the last consistent state and flag the point
  out.status = UpdateStatus::kNotConverged;
  out.newton_iterations = max_iter;
  return out;
}

ClassicState classic_update(const ClassicState& state, const Vec6& eps_new, double chi,
                            const Mat66& E0, const MaterialParams& params, int n_substeps)
{
  if (n_substeps < 1) throw std::invalid_argument("n_substeps must be >= 1");
  const double two_mu = 2.0 * params.lame_mu() * simp(chi);

  ClassicState out = state;
  for (int k = 1; k <= n_substeps; ++k) {
    const double a = static_cast<double>(k) / n_substeps;
    const Vec6 eps = state.eps + a * (eps_new - state.eps);
    const Vec6 s_trial = two_mu * (deviator(eps) - out.eps_p);
    const double trial_norm = s_trial.norm();
    const double r0 = yield_r(out.arc_length, chi, params);
    if (trial_norm <= r0) continue;

    double dgamma = 0.0;
    switch (params.law) {
      case YieldLaw::kIdeal:
        dgamma = (trial_norm - r0) / two_mu;
        break;
      case YieldLaw::kLinearHardening:
        dgamma = (trial_norm - r0) / (two_mu + simp(chi) * params.hardening_h);
        break;
      case YieldLaw::kExponentialHardening: {
        // scalar Newton for ||s_trial|| - 2 mu chi^3 dg = r(alpha + dg)
        dgamma = (trial_norm - r0) /
                 (two_mu + simp(chi) * hardening_slope(out.arc_length, params));
        for (int i = 0; i < 50; ++i) {
          const double f =
              trial_norm - two_mu * dgamma - yield_r(out.arc_length + dgamma, chi, params);
          if (std::abs(f) <= 1e-12 * std::max(r0, 1.0)) break;
          const double df =
              -two_mu - simp(chi) * hardening_slope(out.arc_length + dgamma, params);
          dgamma -= f / df;
        }
        break;
      }
    }
    out.eps_p += dgamma / trial_norm * s_trial;
    out.arc_length += dgamma;
  }
  out.eps = eps_new;
  return out;
}

}  // namespace tto
