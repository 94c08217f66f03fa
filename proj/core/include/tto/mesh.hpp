#pragma once

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace tto {

/// 2x2x2 Gauss rule on the [-1,1]^3 reference cube.
struct QuadratureRule {
  std::array<Eigen::Vector3d, 8> points;
  std::array<double, 8> weights;

  static const QuadratureRule& gauss2();
};

/// Structured grid of axis-aligned cube elements (8-node trilinear hexahedra).
///
/// Nodes and elements are numbered lexicographically, x fastest, so ids are
/// deterministic. Element connectivity follows the usual hexahedron ordering
/// (bottom quad counter-clockwise, then top quad).
struct Mesh {
  std::vector<Eigen::Vector3d> nodes;          // coordinates [mm]
  std::vector<std::array<int, 8>> elements;    // node ids
  std::vector<std::array<int, 6>> neighbors;   // face neighbors (-x,+x,-y,+y,-z,+z), -1 if none
  std::array<int, 3> cells{0, 0, 0};           // element counts per axis
  Eigen::Vector3d dims = Eigen::Vector3d::Zero();  // box dimensions [mm]
  double elem_size = 0.0;                      // edge length [mm]

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_elements() const { return static_cast<int>(elements.size()); }
  double element_volume() const { return elem_size * elem_size * elem_size; }
  double volume() const { return n_elements() * element_volume(); }

  int node_index(int i, int j, int k) const
  {
    return i + (cells[0] + 1) * (j + (cells[1] + 1) * k);
  }
  int element_index(int i, int j, int k) const
  {
    return i + cells[0] * (j + cells[1] * k);
  }
  Eigen::Vector3d element_center(int e) const;
  int neighbor_count(int e) const;
};

/// Builds the box [0,dims] meshed with cubes of edge e_size. Each dimension
/// must be an integer multiple of e_size; offending axes are reported by name.
Mesh build_box_mesh(const Eigen::Vector3d& dims, double e_size);

/// Gradients of the 8 trilinear shape functions at local coordinates xi,
/// for a reference cube mapped to edge length elem_size. Row a holds
/// dN_a/dx [1/mm]; rows sum to the zero vector.
Eigen::Matrix<double, 8, 3> shape_gradients_local(const Eigen::Vector3d& xi,
                                                  double elem_size);

/// Same, for quadrature point qp of element e (all elements share the
/// geometry of the structured grid).
Eigen::Matrix<double, 8, 3> shape_gradients(const Mesh& mesh, int element, int qp);

}  // namespace tto
