#pragma once

/// Uniform staggered (MAC) grid: pressure-like scalars at cell centers,
/// x-velocity on x-faces (normal to the x axis), y-velocity on y-faces.
///
///          y(i,j+1)
///             |
///   x(i,j) -- c(i,j) -- x(i+1,j)
///             |
///          y(i,j)
///
/// Cell indices run over [0,nx) x [0,ny); x-faces over [0,nx] x [0,ny);
/// y-faces over [0,nx) x [0,ny]. Fields do not store ghost values; boundary
/// closures are applied by the operators (or by the fluid solver).

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "sharpib/types.hpp"

namespace sharpib {

struct GridSpec {
  Vec2 lower{0.0, 0.0};
  Vec2 upper{1.0, 1.0};
  int nx = 0;
  int ny = 0;
  double h = 0.0;

  /// Validates the invariants (square cells, at least 4 cells per axis).
  static GridSpec create(const Vec2& lower, const Vec2& upper, int nx, int ny);
  static GridSpec square(double lo, double hi, int n) {
    return create(Vec2(lo, lo), Vec2(hi, hi), n, n);
  }

  int num_cells() const { return nx * ny; }
  int num_x_faces() const { return (nx + 1) * ny; }
  int num_y_faces() const { return nx * (ny + 1); }

  Vec2 cell_center(int i, int j) const {
    return {lower.x() + (i + 0.5) * h, lower.y() + (j + 0.5) * h};
  }
  Vec2 x_face(int i, int j) const { return {lower.x() + i * h, lower.y() + (j + 0.5) * h}; }
  Vec2 y_face(int i, int j) const { return {lower.x() + (i + 0.5) * h, lower.y() + j * h}; }

  double width() const { return upper.x() - lower.x(); }
  double height() const { return upper.y() - lower.y(); }
};

bool operator==(const GridSpec& a, const GridSpec& b);

class CellScalarField {
 public:
  CellScalarField() = default;
  explicit CellScalarField(const GridSpec& grid, double value = 0.0);

  const GridSpec& grid() const { return grid_; }

  double& operator()(int i, int j) { return values_[index(i, j)]; }
  double operator()(int i, int j) const { return values_[index(i, j)]; }
  int index(int i, int j) const { return i + grid_.nx * j; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  double max_abs() const;
  double mean() const;

  CellScalarField& operator+=(const CellScalarField& other);
  CellScalarField& operator-=(const CellScalarField& other);
  CellScalarField& operator*=(double s);

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

CellScalarField operator+(CellScalarField a, const CellScalarField& b);
CellScalarField operator-(CellScalarField a, const CellScalarField& b);
CellScalarField operator*(double s, CellScalarField a);

class FaceVectorField {
 public:
  FaceVectorField() = default;
  explicit FaceVectorField(const GridSpec& grid, double vx = 0.0, double vy = 0.0);

  const GridSpec& grid() const { return grid_; }

  double& x(int i, int j) { return x_[x_index(i, j)]; }
  double x(int i, int j) const { return x_[x_index(i, j)]; }
  double& y(int i, int j) { return y_[y_index(i, j)]; }
  double y(int i, int j) const { return y_[y_index(i, j)]; }

  int x_index(int i, int j) const { return i + (grid_.nx + 1) * j; }
  int y_index(int i, int j) const { return i + grid_.nx * j; }

  std::span<double> x_values() { return x_; }
  std::span<const double> x_values() const { return x_; }
  std::span<double> y_values() { return y_; }
  std::span<const double> y_values() const { return y_; }

  double max_abs() const;

  FaceVectorField& operator+=(const FaceVectorField& other);
  FaceVectorField& operator-=(const FaceVectorField& other);
  FaceVectorField& operator*=(double s);

 private:
  GridSpec grid_;
  std::vector<double> x_;
  std::vector<double> y_;
};

FaceVectorField operator+(FaceVectorField a, const FaceVectorField& b);
FaceVectorField operator-(FaceVectorField a, const FaceVectorField& b);
FaceVectorField operator*(double s, FaceVectorField a);

/// h^2-weighted inner products.
double inner(const CellScalarField& a, const CellScalarField& b);
double inner(const FaceVectorField& a, const FaceVectorField& b);

/// Centered two-point divergence per cell, reading every face including the
/// boundary faces.
CellScalarField divergence(const FaceVectorField& u);

/// Two-point gradient on interior faces; boundary faces are zero (homogeneous
/// Neumann, the no-slip wall convention).
FaceVectorField gradient(const CellScalarField& p);

/// Gradient with Dirichlet pressure values on the given sides (traction-open
/// walls): the boundary face uses the ghost 2 p_bc - p_interior. Sides without
/// a value keep the Neumann convention.
FaceVectorField gradient(const CellScalarField& p,
                         const std::array<std::optional<double>, kNumSides>& dirichlet);

/// 5-point Laplacian of each component, only on faces whose full stencil is
/// stored; all other faces are zero.
FaceVectorField face_laplacian_interior(const FaceVectorField& u);

/// 5-point Laplacian with homogeneous Dirichlet closure: tangential ghosts are
/// reflected (ghost = -adjacent), boundary normal faces are held at their
/// stored values and report zero.
FaceVectorField face_laplacian(const FaceVectorField& u);

/// Standard 5-point cell-centered Laplacian with homogeneous Neumann closure.
CellScalarField cell_laplacian(const CellScalarField& p);

/// p - mean(p).
CellScalarField mean_zero_normalize(const CellScalarField& p);

}  // namespace sharpib
