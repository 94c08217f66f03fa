#pragma once

#include "tto/material.hpp"
#include "tto/mesh.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <memory>
#include <vector>

namespace tto {

struct DirichletBC {
  int node = 0;
  int dir = 0;        // 0,1,2 -> x,y,z
  double value = 0.0; // prescribed displacement [mm]
};

struct LoadCase {
  std::vector<DirichletBC> prescribed;
};

/// Per-quadrature-point kinematic state.
struct QpState {
  Vec6 eps = Vec6::Zero();
  Vec6 eps_p = Vec6::Zero();
};

/// Per-element state: density variable plus the states of the 8 integration
/// points.
struct ElementState {
  double chi = 1.0;
  std::array<QpState, 8> qp;
};

/// Quadrature-point average of the full-material energy density Psi0.
double element_psi0(const ElementState& state, const Mat66& E0);

/// Linear system of the balance of linear momentum on a structured hexahedral
/// mesh. The stress is affine in the displacements for frozen plastic strains
/// and densities, so one factorization per density field serves any number of
/// right-hand sides.
class FemSystem {
 public:
  enum class Solver { kDirect, kConjugateGradient };

  FemSystem(const Mesh& mesh, const LoadCase& load, const MaterialParams& params,
            Solver solver = Solver::kDirect);

  /// Assembles and factorizes the tangent for the given per-element densities.
  void assemble(const std::vector<double>& chi);

  /// Solves for the nodal displacements with the plastic strains of `states`
  /// frozen. Prescribed values are scaled by `load_scale`. Returns the full
  /// displacement vector (3 * n_nodes) with prescribed entries filled in.
  Eigen::VectorXd solve(const std::vector<ElementState>& states,
                        double load_scale = 1.0) const;

  /// Internal force vector  A_e [ B^T sigma ], length 3 * n_nodes. Entries at
  /// free dofs vanish at equilibrium; entries at prescribed dofs are the
  /// reaction forces.
  Eigen::VectorXd internal_forces(const Eigen::VectorXd& u,
                                  const std::vector<ElementState>& states) const;

  /// Reaction force components at the prescribed dofs, in load-case order.
  std::vector<double> reactions(const Eigen::VectorXd& u,
                                const std::vector<ElementState>& states) const;

  /// Evaluates the strains at all integration points from `u`.
  void update_strains(const Eigen::VectorXd& u, std::vector<ElementState>& states) const;

  const Mesh& mesh() const { return *mesh_; }
  const LoadCase& load() const { return *load_; }
  const Mat66& elasticity() const { return E0_; }
  const Eigen::Matrix<double, 24, 24>& element_stiffness() const { return K0_; }
  const Eigen::Matrix<double, 6, 24>& strain_operator(int qp) const { return B_[qp]; }
  double qp_weight(int qp) const { return w_[qp]; }
  int n_dofs() const { return 3 * mesh_->n_nodes(); }
  int n_free_dofs() const { return n_free_; }

 private:
  void build_dof_map();
  void build_sparsity();

  const Mesh* mesh_;
  const LoadCase* load_;
  Mat66 E0_;
  Solver solver_kind_;

  std::array<Eigen::Matrix<double, 6, 24>, 8> B_;  // strain operators (Mandel)
  std::array<double, 8> w_{};                      // quadrature weight * detJ
  Eigen::Matrix<double, 24, 24> K0_;               // full-material element stiffness

  std::vector<int> free_index_;       // dof -> free equation index, -1 if prescribed
  std::vector<double> dirichlet_;     // dof -> prescribed value (0 on free dofs)
  std::vector<char> is_prescribed_;   // dof -> flag
  int n_free_ = 0;

  Eigen::SparseMatrix<double> K_;             // reduced tangent (free x free)
  std::vector<std::vector<int>> value_slot_;  // per element: 24x24 -> index into K values, -1 off
  bool pattern_ready_ = false;

  std::unique_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> ldlt_;
  bool factorized_ = false;
};

/// Load-displacement product S = sum_i R_i u*_i over the prescribed dofs; the
/// stiffness measure tracked by the optimization. Returns NaN for a degenerate
/// load (all prescribed values zero).
double stiffness_metric(const std::vector<double>& reactions,
                        const std::vector<double>& prescribed_values);

}  // namespace tto
