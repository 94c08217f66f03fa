#include "tto/fem.hpp"

#include <Eigen/IterativeLinearSolvers>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tto {

double element_psi0(const ElementState& state, const Mat66& E0)
{
  double acc = 0.0;
  for (const QpState& q : state.qp) {
    const Vec6 e = q.eps - q.eps_p;
    acc += 0.5 * e.dot(E0 * e);
  }
  return acc / 8.0;
}

FemSystem::FemSystem(const Mesh& mesh, const LoadCase& load, const MaterialParams& params,
                     Solver solver)
    : mesh_(&mesh), load_(&load), E0_(elasticity_tensor(params)), solver_kind_(solver)
{
  const QuadratureRule& rule = QuadratureRule::gauss2();
  const double detJ = std::pow(mesh.elem_size / 2.0, 3);

  K0_.setZero();
  for (int q = 0; q < 8; ++q) {
    const auto grad = shape_gradients_local(rule.points[q], mesh.elem_size);
    Eigen::Matrix<double, 6, 24> B = Eigen::Matrix<double, 6, 24>::Zero();
    const double s = 1.0 / kSqrt2;
    for (int a = 0; a < 8; ++a) {
      const double gx = grad(a, 0), gy = grad(a, 1), gz = grad(a, 2);
      B(0, 3 * a + 0) = gx;
      B(1, 3 * a + 1) = gy;
      B(2, 3 * a + 2) = gz;
      B(3, 3 * a + 1) = s * gz;  // sqrt(2) eps_23
      B(3, 3 * a + 2) = s * gy;
      B(4, 3 * a + 0) = s * gz;  // sqrt(2) eps_13
      B(4, 3 * a + 2) = s * gx;
      B(5, 3 * a + 0) = s * gy;  // sqrt(2) eps_12
      B(5, 3 * a + 1) = s * gx;
    }
    B_[q] = B;
    w_[q] = rule.weights[q] * detJ;
    K0_ += w_[q] * B.transpose() * E0_ * B;
  }

  build_dof_map();
  build_sparsity();
}

void FemSystem::build_dof_map()
{
  const int n_dof = 3 * mesh_->n_nodes();
  free_index_.assign(n_dof, -1);
  dirichlet_.assign(n_dof, 0.0);
  is_prescribed_.assign(n_dof, 0);

  if (load_->prescribed.empty())
    throw std::invalid_argument("load case has no prescribed displacements");

  for (const DirichletBC& bc : load_->prescribed) {
    if (bc.node < 0 || bc.node >= mesh_->n_nodes() || bc.dir < 0 || bc.dir > 2)
      throw std::out_of_range("Dirichlet condition references an invalid dof");
    const int dof = 3 * bc.node + bc.dir;
    is_prescribed_[dof] = 1;
    dirichlet_[dof] = bc.value;
  }
  n_free_ = 0;
  for (int dof = 0; dof < n_dof; ++dof)
    if (!is_prescribed_[dof]) free_index_[dof] = n_free_++;
}

void FemSystem::build_sparsity()
{
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<size_t>(mesh_->n_elements()) * 300);
  for (int e = 0; e < mesh_->n_elements(); ++e) {
    const auto& conn = mesh_->elements[e];
    for (int a = 0; a < 24; ++a) {
      const int ga = free_index_[3 * conn[a / 3] + a % 3];
      if (ga < 0) continue;
      for (int b = 0; b < 24; ++b) {
        const int gb = free_index_[3 * conn[b / 3] + b % 3];
        if (gb >= 0) triplets.emplace_back(ga, gb, 0.0);
      }
    }
  }
  K_.resize(n_free_, n_free_);
  K_.setFromTriplets(triplets.begin(), triplets.end());
  K_.makeCompressed();

  // map each element entry to its slot in the compressed value array
  value_slot_.assign(mesh_->n_elements(), std::vector<int>(24 * 24, -1));
  const int* outer = K_.outerIndexPtr();
  const int* inner = K_.innerIndexPtr();
  for (int e = 0; e < mesh_->n_elements(); ++e) {
    const auto& conn = mesh_->elements[e];
    for (int a = 0; a < 24; ++a) {
      const int ga = free_index_[3 * conn[a / 3] + a % 3];
      if (ga < 0) continue;
      for (int b = 0; b < 24; ++b) {
        const int gb = free_index_[3 * conn[b / 3] + b % 3];
        if (gb < 0) continue;
        // binary search within column gb (column-major storage)
        int lo = outer[gb], hi = outer[gb + 1] - 1, slot = -1;
        while (lo <= hi) {
          const int mid = (lo + hi) / 2;
          if (inner[mid] == ga) {
            slot = mid;
            break;
          }
          if (inner[mid] < ga)
            lo = mid + 1;
          else
            hi = mid - 1;
        }
        value_slot_[e][24 * a + b] = slot;
      }
    }
  }
  pattern_ready_ = true;
}

void FemSystem::assemble(const std::vector<double>& chi)
{
  if (static_cast<int>(chi.size()) != mesh_->n_elements())
    throw std::invalid_argument("density vector size does not match the mesh");

  double* values = K_.valuePtr();
  std::fill(values, values + K_.nonZeros(), 0.0);
  for (int e = 0; e < mesh_->n_elements(); ++e) {
    const double scale = simp(chi[e]);
    const auto& slots = value_slot_[e];
    for (int a = 0; a < 24; ++a)
      for (int b = 0; b < 24; ++b) {
        const int slot = slots[24 * a + b];
        if (slot >= 0) values[slot] += scale * K0_(a, b);
      }
  }

  if (solver_kind_ == Solver::kDirect) {
    if (!ldlt_) {
      ldlt_ = std::make_unique<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>();
      ldlt_->analyzePattern(K_);
    }
    ldlt_->factorize(K_);
    if (ldlt_->info() != Eigen::Success)
      throw std::runtime_error("tangent factorization failed (singular system)");
  }
  factorized_ = true;
}

Eigen::VectorXd FemSystem::solve(const std::vector<ElementState>& states,
                                 double load_scale) const
{
  if (!factorized_) throw std::logic_error("assemble() must be called before solve()");
  if (static_cast<int>(states.size()) != mesh_->n_elements())
    throw std::invalid_argument("state vector size does not match the mesh");

  const int n_dof = 3 * mesh_->n_nodes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_free_);

  for (int e = 0; e < mesh_->n_elements(); ++e) {
    const auto& conn = mesh_->elements[e];
    const double chi3 = simp(states[e].chi);

    // plastic pre-strain forces
    Eigen::Matrix<double, 24, 1> fe = Eigen::Matrix<double, 24, 1>::Zero();
    for (int q = 0; q < 8; ++q)
      fe += w_[q] * (B_[q].transpose() * (chi3 * (E0_ * states[e].qp[q].eps_p)));

    // shift by the prescribed boundary values
    Eigen::Matrix<double, 24, 1> ud = Eigen::Matrix<double, 24, 1>::Zero();
    bool any_dirichlet = false;
    for (int a = 0; a < 24; ++a) {
      const int dof = 3 * conn[a / 3] + a % 3;
      if (is_prescribed_[dof]) {
        ud[a] = load_scale * dirichlet_[dof];
        any_dirichlet = true;
      }
    }
    if (any_dirichlet) fe -= chi3 * (K0_ * ud);

    for (int a = 0; a < 24; ++a) {
      const int ga = free_index_[3 * conn[a / 3] + a % 3];
      if (ga >= 0) rhs[ga] += fe[a];
    }
  }

  Eigen::VectorXd u_free(n_free_);
  if (solver_kind_ == Solver::kDirect) {
    u_free = ldlt_->solve(rhs);
    if (ldlt_->info() != Eigen::Success)
      throw std::runtime_error("linear solve failed");
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper>
        cg;
    cg.setTolerance(1e-10);
    cg.setMaxIterations(20000);
    cg.compute(K_);
    u_free = cg.solve(rhs);
    if (cg.info() != Eigen::Success)
      throw std::runtime_error("conjugate gradient did not converge");
  }

  Eigen::VectorXd u = Eigen::VectorXd::Zero(n_dof);
  for (int dof = 0; dof < n_dof; ++dof) {
    if (is_prescribed_[dof])
      u[dof] = load_scale * dirichlet_[dof];
    else
      u[dof] = u_free[free_index_[dof]];
  }
  return u;
}

Eigen::VectorXd FemSystem::internal_forces(const Eigen::VectorXd& u,
                                           const std::vector<ElementState>& states) const
{
  const int n_dof = 3 * mesh_->n_nodes();
  if (u.size() != n_dof) throw std::invalid_argument("displacement vector has wrong size");

  Eigen::VectorXd f = Eigen::VectorXd::Zero(n_dof);
  for (int e = 0; e < mesh_->n_elements(); ++e) {
    const auto& conn = mesh_->elements[e];
    const double chi3 = simp(states[e].chi);

    Eigen::Matrix<double, 24, 1> ue;
    for (int a = 0; a < 8; ++a) ue.segment<3>(3 * a) = u.segment<3>(3 * conn[a]);

    Eigen::Matrix<double, 24, 1> fe = chi3 * (K0_ * ue);
    for (int q = 0; q < 8; ++q)
      fe -= w_[q] * (B_[q].transpose() * (chi3 * (E0_ * states[e].qp[q].eps_p)));

    for (int a = 0; a < 8; ++a) f.segment<3>(3 * conn[a]) += fe.segment<3>(3 * a);
  }
  return f;
}

std::vector<double> FemSystem::reactions(const Eigen::VectorXd& u,
                                         const std::vector<ElementState>& states) const
{
  const Eigen::VectorXd f = internal_forces(u, states);
  std::vector<double> r;
  r.reserve(load_->prescribed.size());
  for (const DirichletBC& bc : load_->prescribed) r.push_back(f[3 * bc.node + bc.dir]);
  return r;
}

void FemSystem::update_strains(const Eigen::VectorXd& u,
                               std::vector<ElementState>& states) const
{
  for (int e = 0; e < mesh_->n_elements(); ++e) {
    const auto& conn = mesh_->elements[e];
    Eigen::Matrix<double, 24, 1> ue;
    for (int a = 0; a < 8; ++a) ue.segment<3>(3 * a) = u.segment<3>(3 * conn[a]);
    for (int q = 0; q < 8; ++q) states[e].qp[q].eps = B_[q] * ue;
  }
}

double stiffness_metric(const std::vector<double>& reactions,
                        const std::vector<double>& prescribed_values)
{
  if (reactions.size() != prescribed_values.size())
    throw std::invalid_argument("reactions and prescribed values differ in size");
  double dot = 0.0;
  double magnitude = 0.0;
  for (size_t i = 0; i < reactions.size(); ++i) {
    dot += reactions[i] * prescribed_values[i];
    magnitude += std::abs(prescribed_values[i]);
  }
  if (magnitude == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return dot;
}

}  // namespace tto
