#include "tto/mesh.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tto {

namespace {

// local corner signs, standard hexahedron ordering
constexpr int kCorner[8][3] = {
    {-1, -1, -1}, {1, -1, -1}, {1, 1, -1}, {-1, 1, -1},
    {-1, -1, 1},  {1, -1, 1},  {1, 1, 1},  {-1, 1, 1},
};

}  // namespace

const QuadratureRule& QuadratureRule::gauss2()
{
  static const QuadratureRule rule = [] {
    QuadratureRule r;
    const double a = 1.0 / std::sqrt(3.0);
    for (int q = 0; q < 8; ++q) {
      r.points[q] =
          Eigen::Vector3d(a * kCorner[q][0], a * kCorner[q][1], a * kCorner[q][2]);
      r.weights[q] = 1.0;
    }
    return r;
  }();
  return rule;
}

Eigen::Vector3d Mesh::element_center(int e) const
{
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (int a = 0; a < 8; ++a) c += nodes[elements[e][a]];
  return c / 8.0;
}

int Mesh::neighbor_count(int e) const
{
  int n = 0;
  for (int f = 0; f < 6; ++f)
    if (neighbors[e][f] >= 0) ++n;
  return n;
}

Mesh build_box_mesh(const Eigen::Vector3d& dims, double e_size)
{
  if (!(e_size > 0.0)) throw std::invalid_argument("element size must be positive");

  const char* axis_name[3] = {"x", "y", "z"};
  std::array<int, 3> n{};
  for (int d = 0; d < 3; ++d) {
    if (!(dims[d] > 0.0))
      throw std::invalid_argument(std::string("dimension along ") + axis_name[d] +
                                  " must be positive");
    const double ratio = dims[d] / e_size;
    n[d] = static_cast<int>(std::llround(ratio));
    if (n[d] < 1 || std::abs(ratio - n[d]) > 1e-6)
      throw std::invalid_argument(std::string("dimension along ") + axis_name[d] +
                                  " is not an integer multiple of the element size");
  }

  Mesh mesh;
  mesh.cells = n;
  mesh.dims = dims;
  mesh.elem_size = e_size;

  mesh.nodes.reserve(static_cast<size_t>(n[0] + 1) * (n[1] + 1) * (n[2] + 1));
  for (int k = 0; k <= n[2]; ++k)
    for (int j = 0; j <= n[1]; ++j)
      for (int i = 0; i <= n[0]; ++i)
        mesh.nodes.emplace_back(i * e_size, j * e_size, k * e_size);

  const int n_elem = n[0] * n[1] * n[2];
  mesh.elements.reserve(n_elem);
  mesh.neighbors.reserve(n_elem);
  for (int k = 0; k < n[2]; ++k) {
    for (int j = 0; j < n[1]; ++j) {
      for (int i = 0; i < n[0]; ++i) {
        std::array<int, 8> conn;
        for (int a = 0; a < 8; ++a) {
          conn[a] = mesh.node_index(i + (kCorner[a][0] + 1) / 2,
                                    j + (kCorner[a][1] + 1) / 2,
                                    k + (kCorner[a][2] + 1) / 2);
        }
        mesh.elements.push_back(conn);

        std::array<int, 6> nb;
        nb[0] = i > 0 ? mesh.element_index(i - 1, j, k) : -1;
        nb[1] = i < n[0] - 1 ? mesh.element_index(i + 1, j, k) : -1;
        nb[2] = j > 0 ? mesh.element_index(i, j - 1, k) : -1;
        nb[3] = j < n[1] - 1 ? mesh.element_index(i, j + 1, k) : -1;
        nb[4] = k > 0 ? mesh.element_index(i, j, k - 1) : -1;
        nb[5] = k < n[2] - 1 ? mesh.element_index(i, j, k + 1) : -1;
        mesh.neighbors.push_back(nb);
      }
    }
  }
  return mesh;
}

Eigen::Matrix<double, 8, 3> shape_gradients_local(const Eigen::Vector3d& xi,
                                                  double elem_size)
{
  // dN/dx = dN/dxi * 2/e for the affine map of an axis-aligned cube
  const double scale = 2.0 / elem_size;
  Eigen::Matrix<double, 8, 3> grad;
  for (int a = 0; a < 8; ++a) {
    const double sx = kCorner[a][0];
    const double sy = kCorner[a][1];
    const double sz = kCorner[a][2];
    grad(a, 0) = 0.125 * sx * (1.0 + sy * xi[1]) * (1.0 + sz * xi[2]) * scale;
    grad(a, 1) = 0.125 * sy * (1.0 + sx * xi[0]) * (1.0 + sz * xi[2]) * scale;
    grad(a, 2) = 0.125 * sz * (1.0 + sx * xi[0]) * (1.0 + sy * xi[1]) * scale;
  }
  return grad;
}

Eigen::Matrix<double, 8, 3> shape_gradients(const Mesh& mesh, int element, int qp)
{
  if (element < 0 || element >= mesh.n_elements())
    throw std::out_of_range("element id out of range");
  if (qp < 0 || qp >= 8) throw std::out_of_range("quadrature point out of range");
  return shape_gradients_local(QuadratureRule::gauss2().points[qp], mesh.elem_size);
}

}  // namespace tto
