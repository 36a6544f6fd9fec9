#pragma once

#include <random>

#include "sharpib/mac_grid.hpp"

namespace sharpib::testing {

inline CellScalarField random_cells(const GridSpec& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  CellScalarField p(g);
  for (double& v : p.values()) v = d(rng);
  return p;
}

inline FaceVectorField random_faces(const GridSpec& g, std::mt19937_64& rng, bool zero_normal_boundary) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  FaceVectorField u(g);
  for (double& v : u.x_values()) v = d(rng);
  for (double& v : u.y_values()) v = d(rng);
  if (zero_normal_boundary) {
    for (int j = 0; j < g.ny; ++j) u.x(0, j) = u.x(g.nx, j) = 0.0;
    for (int i = 0; i < g.nx; ++i) u.y(i, 0) = u.y(i, g.ny) = 0.0;
  }
  return u;
}

template <class F>
FaceVectorField sample_faces(const GridSpec& g, F f) {
  FaceVectorField u(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) u.x(i, j) = f(g.x_face(i, j)).x();
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) u.y(i, j) = f(g.y_face(i, j)).y();
  return u;
}

template <class F>
CellScalarField sample_cells(const GridSpec& g, F f) {
  CellScalarField p(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) p(i, j) = f(g.cell_center(i, j));
  return p;
}

}  // namespace sharpib::testing
