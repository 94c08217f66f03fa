#include "tto/presets.hpp"

#include <cmath>
#include <stdexcept>

namespace tto {

namespace {

const std::vector<Preset>& all_presets()
{
  static const std::vector<Preset> presets = [] {
    std::vector<Preset> p;

    // beam clamped at both end faces, loaded centrally from above
    Preset clamped;
    clamped.name = "clamped_beam";
    clamped.dims = Eigen::Vector3d(2.0, 1.0, 0.02);  // 100 x 50 x 1 -> 5000 elements
    clamped.elem_size = 0.02;
    clamped.u_star = 0.05;
    clamped.v0 = 0.5;
    p.push_back(clamped);

    // simply supported beam, loaded centrally from above
    Preset mbb;
    mbb.name = "mbb";
    mbb.dims = Eigen::Vector3d(4.0, 0.75, 0.025);  // 160 x 30 x 1 -> 4800 elements
    mbb.elem_size = 0.025;
    mbb.u_star = 0.02;
    mbb.v0 = 0.5;
    p.push_back(mbb);

    // corners of one face fixed, loaded along the bottom edge of the far face
    Preset cant;
    cant.name = "cantilever3d";
    cant.dims = Eigen::Vector3d(1.5, 1.0, 1.0);  // 39 x 26 x 26 -> 26364 elements
    cant.elem_size = 1.0 / 26.0;
    cant.u_star = 0.06;
    cant.v0 = 0.15;
    cant.quasi_2d = false;
    p.push_back(cant);

    return p;
  }();
  return presets;
}

}  // namespace

const Preset& preset_by_name(const std::string& name)
{
  for (const Preset& p : all_presets())
    if (p.name == name) return p;
  throw std::invalid_argument("unknown preset: " + name);
}

std::vector<std::string> preset_names()
{
  std::vector<std::string> names;
  for (const Preset& p : all_presets()) names.push_back(p.name);
  return names;
}

Problem build_problem(const Preset& preset, double elem_size_override,
                      double u_star_override)
{
  const double h = elem_size_override > 0.0 ? elem_size_override : preset.elem_size;
  const double u_star = u_star_override != 0.0 ? u_star_override : preset.u_star;

  Problem problem;
  Eigen::Vector3d dims = preset.dims;
  if (preset.quasi_2d && elem_size_override > 0.0)
    dims[2] = h;  // keep the thickness at one element
  problem.mesh = build_box_mesh(dims, h);
  const Mesh& mesh = problem.mesh;
  const double tol = 0.25 * h;

  auto near = [tol](double a, double b) { return std::abs(a - b) <= tol; };

  if (preset.name == "clamped_beam") {
    const double mid = 0.5 * dims[0];
    for (int n = 0; n < mesh.n_nodes(); ++n) {
      const Eigen::Vector3d& x = mesh.nodes[n];
      if (near(x[0], 0.0) || near(x[0], dims[0])) {
        for (int d = 0; d < 3; ++d) problem.load.prescribed.push_back({n, d, 0.0});
      } else if (near(x[0], mid) && near(x[1], dims[1])) {
        problem.load.prescribed.push_back({n, 1, -u_star});
      }
    }
  } else if (preset.name == "mbb") {
    const double mid = 0.5 * dims[0];
    for (int n = 0; n < mesh.n_nodes(); ++n) {
      const Eigen::Vector3d& x = mesh.nodes[n];
      if (near(x[1], 0.0) && near(x[0], 0.0)) {
        // pinned corner
        for (int d = 0; d < 3; ++d) problem.load.prescribed.push_back({n, d, 0.0});
      } else if (near(x[1], 0.0) && near(x[0], dims[0])) {
        // roller corner, free to slide along the beam axis
        problem.load.prescribed.push_back({n, 1, 0.0});
        problem.load.prescribed.push_back({n, 2, 0.0});
      } else if (near(x[0], mid) && near(x[1], dims[1])) {
        problem.load.prescribed.push_back({n, 1, -u_star});
      }
    }
  } else if (preset.name == "cantilever3d") {
    for (int n = 0; n < mesh.n_nodes(); ++n) {
      const Eigen::Vector3d& x = mesh.nodes[n];
      const bool corner_y = near(x[1], 0.0) || near(x[1], dims[1]);
      const bool corner_z = near(x[2], 0.0) || near(x[2], dims[2]);
      if (near(x[0], 0.0) && corner_y && corner_z) {
        for (int d = 0; d < 3; ++d) problem.load.prescribed.push_back({n, d, 0.0});
      } else if (near(x[0], dims[0]) && near(x[1], 0.0)) {
        problem.load.prescribed.push_back({n, 1, -u_star});
      }
    }
  } else {
    throw std::invalid_argument("unknown preset: " + preset.name);
  }

  if (problem.load.prescribed.empty())
    throw std::logic_error("preset produced an empty load case");
  return problem;
}

}  // namespace tto
