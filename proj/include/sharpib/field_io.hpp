#pragma once

/// Legacy-VTK and CSV serialization. All numbers are written with 17
/// significant digits so fields round-trip exactly.

#include <string>
#include <utility>
#include <vector>

#include "sharpib/mac_grid.hpp"
#include "sharpib/solid_fem.hpp"

namespace sharpib {

/// STRUCTURED_POINTS with CELL_DATA.
void write_vtk(const CellScalarField& field, const std::string& name, const std::string& path);
/// STRUCTURED_POINTS with the face values averaged to cell centers as VECTORS.
void write_vtk(const FaceVectorField& field, const std::string& name, const std::string& path);

/// Header `i,j,value`, rows in row-major order (j outer, i inner).
void write_csv(const CellScalarField& field, const std::string& path);
/// Writes the x and y components to separate `i,j,value` files.
void write_csv(const FaceVectorField& field, const std::string& path_x, const std::string& path_y);

/// Reads a file written by write_csv into a field on the given grid.
CellScalarField read_csv(const GridSpec& grid, const std::string& path);

using NamedValues = std::pair<std::string, std::vector<double>>;

/// UNSTRUCTURED_GRID of VTK_QUAD cells at the current positions, with optional
/// per-node and per-element scalar arrays.
void write_mesh_vtk(const SolidMesh& mesh, const std::string& path, const std::vector<NamedValues>& point_data = {},
                    const std::vector<NamedValues>& cell_data = {});

}  // namespace sharpib
