#include "sharpib/field_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "sharpib/errors.hpp"

namespace sharpib {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << std::setprecision(17);
  return out;
}

void structured_points_header(std::ostream& out, const GridSpec& g, const std::string& title) {
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << g.nx + 1 << ' ' << g.ny + 1 << " 1\n";
  out << "ORIGIN " << g.lower.x() << ' ' << g.lower.y() << " 0\n";
  out << "SPACING " << g.h << ' ' << g.h << " 1\n";
  out << "CELL_DATA " << g.num_cells() << '\n';
}

}  // namespace

void write_vtk(const CellScalarField& field, const std::string& name, const std::string& path) {
  std::ofstream out = open_out(path);
  const GridSpec& g = field.grid();
  structured_points_header(out, g, name);
  out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out << field(i, j) << '\n';
}

void write_vtk(const FaceVectorField& field, const std::string& name, const std::string& path) {
  std::ofstream out = open_out(path);
  const GridSpec& g = field.grid();
  structured_points_header(out, g, name);
  out << "VECTORS " << name << " double\n";
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      out << 0.5 * (field.x(i, j) + field.x(i + 1, j)) << ' ' << 0.5 * (field.y(i, j) + field.y(i, j + 1))
          << " 0\n";
}

void write_csv(const CellScalarField& field, const std::string& path) {
  std::ofstream out = open_out(path);
  const GridSpec& g = field.grid();
  out << "i,j,value\n";
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out << i << ',' << j << ',' << field(i, j) << '\n';
}

void write_csv(const FaceVectorField& field, const std::string& path_x, const std::string& path_y) {
  const GridSpec& g = field.grid();
  {
    std::ofstream out = open_out(path_x);
    out << "i,j,value\n";
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i) out << i << ',' << j << ',' << field.x(i, j) << '\n';
  }
  std::ofstream out = open_out(path_y);
  out << "i,j,value\n";
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out << i << ',' << j << ',' << field.y(i, j) << '\n';
}

CellScalarField read_csv(const GridSpec& grid, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  CellScalarField f(grid);
  std::string line;
  std::getline(in, line);
  if (line != "i,j,value") throw Error("'" + path + "': unexpected header");
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    int i = 0, j = 0;
    double v = 0.0;
    char c1 = 0, c2 = 0;
    if (!(ss >> i >> c1 >> j >> c2 >> v) || c1 != ',' || c2 != ',')
      throw Error("'" + path + "': malformed row '" + line + "'");
    if (i < 0 || i >= grid.nx || j < 0 || j >= grid.ny) throw Error("'" + path + "': index out of range");
    f(i, j) = v;
    ++rows;
  }
  if (rows != grid.num_cells()) throw Error("'" + path + "': wrong number of rows");
  return f;
}

void write_mesh_vtk(const SolidMesh& mesh, const std::string& path, const std::vector<NamedValues>& point_data,
                    const std::vector<NamedValues>& cell_data) {
  std::ofstream out = open_out(path);
  out << "# vtk DataFile Version 3.0\nsolid mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_nodes() << " double\n";
  for (const Vec2& x : mesh.position) out << x.x() << ' ' << x.y() << " 0\n";
  out << "CELLS " << mesh.num_elements() << ' ' << 5 * mesh.num_elements() << '\n';
  for (const Quad& q : mesh.elements) out << "4 " << q[0] << ' ' << q[1] << ' ' << q[2] << ' ' << q[3] << '\n';
  out << "CELL_TYPES " << mesh.num_elements() << '\n';
  for (int e = 0; e < mesh.num_elements(); ++e) out << "9\n";
  if (!point_data.empty()) {
    out << "POINT_DATA " << mesh.num_nodes() << '\n';
    for (const auto& [name, values] : point_data) {
      if (static_cast<int>(values.size()) != mesh.num_nodes())
        throw Error("write_mesh_vtk: point array '" + name + "' has the wrong size");
      out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : values) out << v << '\n';
    }
  }
  if (!cell_data.empty()) {
    out << "CELL_DATA " << mesh.num_elements() << '\n';
    for (const auto& [name, values] : cell_data) {
      if (static_cast<int>(values.size()) != mesh.num_elements())
        throw Error("write_mesh_vtk: cell array '" + name + "' has the wrong size");
      out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : values) out << v << '\n';
    }
  }
}

}  // namespace sharpib
