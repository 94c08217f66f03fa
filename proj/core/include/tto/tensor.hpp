#pragma once

#include <Eigen/Dense>

#include <cmath>

namespace tto {

// Symmetric second-order tensors are stored as 6-vectors in Mandel form,
//   [a11, a22, a33, sqrt(2)*a23, sqrt(2)*a13, sqrt(2)*a12],
// so the Euclidean dot product of two such vectors equals the full tensor
// double contraction a:b and the 2-norm equals the Frobenius norm. Fourth-order
// tensors with minor symmetries become plain 6x6 matrices under the same
// scaling, and tensor contractions reduce to matrix-vector products.
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat66 = Eigen::Matrix<double, 6, 6>;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kSqrt2 = 1.4142135623730951;

/// Second-order identity tensor.
inline Vec6 identity6()
{
  Vec6 id;
  id << 1.0, 1.0, 1.0, 0.0, 0.0, 0.0;
  return id;
}

/// Mandel vector from a (possibly unsymmetric) 3x3 matrix; the skew part is
/// projected out.
inline Vec6 to_mandel(const Mat3& a)
{
  Vec6 v;
  v[0] = a(0, 0);
  v[1] = a(1, 1);
  v[2] = a(2, 2);
  v[3] = 0.5 * kSqrt2 * (a(1, 2) + a(2, 1));
  v[4] = 0.5 * kSqrt2 * (a(0, 2) + a(2, 0));
  v[5] = 0.5 * kSqrt2 * (a(0, 1) + a(1, 0));
  return v;
}

inline Mat3 from_mandel(const Vec6& v)
{
  Mat3 a;
  a(0, 0) = v[0];
  a(1, 1) = v[1];
  a(2, 2) = v[2];
  a(1, 2) = a(2, 1) = v[3] / kSqrt2;
  a(0, 2) = a(2, 0) = v[4] / kSqrt2;
  a(0, 1) = a(1, 0) = v[5] / kSqrt2;
  return a;
}

inline double trace(const Vec6& a) { return a[0] + a[1] + a[2]; }

/// Deviatoric part, dev(a) = a - tr(a)/3 I.
inline Vec6 deviator(const Vec6& a)
{
  Vec6 d = a;
  const double m = trace(a) / 3.0;
  d[0] -= m;
  d[1] -= m;
  d[2] -= m;
  return d;
}

/// Projector onto the deviator subspace, P = I_sym - 1/3 I (x) I.
inline Mat66 deviator_projector()
{
  const Vec6 id = identity6();
  return Mat66::Identity() - (id * id.transpose()) / 3.0;
}

/// von Mises equivalent stress, sqrt(3/2)*||dev(sigma)||.
inline double von_mises(const Vec6& sigma)
{
  return std::sqrt(1.5) * deviator(sigma).norm();
}

/// von Mises equivalent (plastic) strain, sqrt(2/3)*||dev(eps)||.
inline double von_mises_strain(const Vec6& eps)
{
  return std::sqrt(2.0 / 3.0) * deviator(eps).norm();
}

}  // namespace tto
