#pragma once

#include "tto/fem.hpp"
#include "tto/mesh.hpp"

#include <string>
#include <vector>

namespace tto {

/// Benchmark boundary value problem. Dimensions and default discretizations
/// reproduce the reference element counts (5000 / 4800 / 26364). Loads are
/// applied as prescribed displacements.
struct Preset {
  std::string name;
  Eigen::Vector3d dims = Eigen::Vector3d::Zero();  // [mm]
  double elem_size = 0.0;                          // default edge length [mm]
  double u_star = 0.0;                             // load magnitude [mm], applied in -y
  double v0 = 0.5;
  double eta = 15.0;                               // [s]
  bool quasi_2d = true;
};

const Preset& preset_by_name(const std::string& name);
std::vector<std::string> preset_names();

struct Problem {
  Mesh mesh;
  LoadCase load;
};

/// Meshes the preset and tags its supports and load nodes. A positive
/// elem_size_override remeshes the same box at a different resolution
/// (dimensions must stay divisible); u_star_override != 0 replaces the load
/// magnitude.
Problem build_problem(const Preset& preset, double elem_size_override = 0.0,
                      double u_star_override = 0.0);

}  // namespace tto
