#pragma once

#include "tto/fem.hpp"
#include "tto/mesh.hpp"
#include "tto/optimizer.hpp"

#include <string>
#include <vector>

namespace tto {

/// Writes mesh and fields as a legacy ASCII VTK unstructured grid
/// (hexahedral cells). Cell data: chi, psi0, eps_p_vm (von Mises equivalent
/// plastic strain, quadrature-point average). Point data: displacement.
/// Values are printed with enough digits to round-trip exactly; ordering
/// follows the deterministic mesh numbering.
void write_vtk(const std::string& path, const Mesh& mesh,
               const std::vector<ElementState>& states, const Eigen::VectorXd& u,
               const Mat66& E0);

/// Reads one scalar cell-data array back from a legacy VTK file.
std::vector<double> read_vtk_cell_scalar(const std::string& path,
                                         const std::string& name);

/// Columns: iteration, stiffness, volume_error, max_eps_p, newton_max_iters,
/// newton_failures, lambda_chi, bounds_active, wall_s.
void write_convergence_csv(const std::string& path, const History& history);

void write_text_file(const std::string& path, const std::string& content);

void ensure_directory(const std::string& path);

/// True when the cells with value >= threshold form one face-connected
/// component (isolated below-threshold meshes count as disconnected).
bool thresholded_field_connected(const std::vector<double>& values, const Mesh& mesh,
                                 double threshold);

}  // namespace tto
