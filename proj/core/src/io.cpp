#include "tto/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace tto {

namespace {

void print_double(std::ostream& os, double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  os << buf;
}

}  // namespace

void write_vtk(const std::string& path, const Mesh& mesh,
               const std::vector<ElementState>& states, const Eigen::VectorXd& u,
               const Mat66& E0)
{
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write file: " + path);

  os << "# vtk DataFile Version 3.0\n";
  os << "tto fields\n";
  os << "ASCII\n";
  os << "DATASET UNSTRUCTURED_GRID\n";

  os << "POINTS " << mesh.n_nodes() << " double\n";
  for (const Eigen::Vector3d& x : mesh.nodes) {
    print_double(os, x[0]);
    os << ' ';
    print_double(os, x[1]);
    os << ' ';
    print_double(os, x[2]);
    os << '\n';
  }

  os << "CELLS " << mesh.n_elements() << ' ' << mesh.n_elements() * 9 << '\n';
  for (const auto& conn : mesh.elements) {
    os << 8;
    for (int a = 0; a < 8; ++a) os << ' ' << conn[a];
    os << '\n';
  }
  os << "CELL_TYPES " << mesh.n_elements() << '\n';
  for (int e = 0; e < mesh.n_elements(); ++e) os << "12\n";  // VTK_HEXAHEDRON

  os << "CELL_DATA " << mesh.n_elements() << '\n';

  auto cell_scalar = [&](const char* name, auto&& value_of) {
    os << "SCALARS " << name << " double 1\n";
    os << "LOOKUP_TABLE default\n";
    for (int e = 0; e < mesh.n_elements(); ++e) {
      print_double(os, value_of(states[e]));
      os << '\n';
    }
  };

  cell_scalar("chi", [](const ElementState& s) { return s.chi; });
  cell_scalar("psi0", [&](const ElementState& s) { return element_psi0(s, E0); });
  cell_scalar("eps_p_vm", [](const ElementState& s) {
    double acc = 0.0;
    for (const QpState& q : s.qp) acc += von_mises_strain(q.eps_p);
    return acc / 8.0;
  });

  os << "POINT_DATA " << mesh.n_nodes() << '\n';
  os << "VECTORS displacement double\n";
  for (int n = 0; n < mesh.n_nodes(); ++n) {
    print_double(os, u[3 * n + 0]);
    os << ' ';
    print_double(os, u[3 * n + 1]);
    os << ' ';
    print_double(os, u[3 * n + 2]);
    os << '\n';
  }
}

std::vector<double> read_vtk_cell_scalar(const std::string& path, const std::string& name)
{
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read file: " + path);

  std::string line;
  int n_cells = -1;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "CELL_DATA") {
      ls >> n_cells;
    } else if (tok == "SCALARS" && n_cells >= 0) {
      std::string this_name;
      ls >> this_name;
      if (this_name != name) continue;
      std::getline(is, line);  // LOOKUP_TABLE
      std::vector<double> values(n_cells);
      for (int i = 0; i < n_cells; ++i) is >> values[i];
      if (!is) throw std::runtime_error("truncated cell data in " + path);
      return values;
    }
  }
  throw std::runtime_error("cell array '" + name + "' not found in " + path);
}

void write_convergence_csv(const std::string& path, const History& history)
{
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write file: " + path);
  os << "iteration,stiffness,volume_error,max_eps_p,newton_max_iters,newton_failures,"
        "lambda_chi,bounds_active,wall_s\n";
  for (const IterationRecord& r : history) {
    os << r.iteration << ',';
    print_double(os, r.stiffness);
    os << ',';
    print_double(os, r.volume_error);
    os << ',';
    print_double(os, r.max_eps_p_norm);
    os << ',' << r.newton_max_iterations << ',' << r.newton_failures << ',';
    print_double(os, r.lambda_chi);
    os << ',' << r.bounds_active << ',';
    print_double(os, r.wall_seconds);
    os << '\n';
  }
}

void write_text_file(const std::string& path, const std::string& content)
{
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write file: " + path);
  os << content;
}

void ensure_directory(const std::string& path)
{
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw std::runtime_error("cannot create directory " + path + ": " + ec.message());
}

bool thresholded_field_connected(const std::vector<double>& values, const Mesh& mesh,
                                 double threshold)
{
  if (static_cast<int>(values.size()) != mesh.n_elements())
    throw std::invalid_argument("value vector size does not match the mesh");

  int first = -1;
  int total = 0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    if (values[e] >= threshold) {
      if (first < 0) first = e;
      ++total;
    }
  }
  if (total == 0) return false;

  std::vector<char> seen(mesh.n_elements(), 0);
  std::queue<int> frontier;
  frontier.push(first);
  seen[first] = 1;
  int reached = 0;
  while (!frontier.empty()) {
    const int e = frontier.front();
    frontier.pop();
    ++reached;
    for (int f = 0; f < 6; ++f) {
      const int nb = mesh.neighbors[e][f];
      if (nb >= 0 && !seen[nb] && values[nb] >= threshold) {
        seen[nb] = 1;
        frontier.push(nb);
      }
    }
  }
  return reached == total;
}

}  // namespace tto
