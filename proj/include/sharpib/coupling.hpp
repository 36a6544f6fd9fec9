#pragma once

/// Regularized-delta transfer between Lagrangian points and the MAC grid.
/// spread and interpolate use the same tensor-product kernel centered at each
/// face location, so they are discrete adjoints:
///   h^2 <spread(F), u> = sum_q F_q . U_q w_q.

#include <vector>

#include "sharpib/mac_grid.hpp"
#include "sharpib/solid_fem.hpp"

namespace sharpib {

enum class KernelType { IB4, Cosine, PiecewiseLinear };

const char* to_string(KernelType type);
KernelType kernel_from_string(const std::string& name);

struct DeltaKernel {
  KernelType type = KernelType::IB4;
  /// Support radius in length units; only used by Cosine.
  double radius = 0.1;
  /// Drop stencil nodes outside the grid instead of throwing PointOutOfDomain.
  bool clip_to_grid = false;

  /// One-dimensional weight phi(r) for a separation of r cells on a grid of
  /// spacing h; sums to one over integer shifts for IB4 and PiecewiseLinear.
  double weight(double r, double h) const;
  /// Support half-width in cells.
  int half_width(double h) const;
};

double ib4_kernel(double r);
double piecewise_linear_kernel(double r);

struct InteractionPoints {
  std::vector<Vec2> x;
  std::vector<double> w;
  std::vector<int> element;
  std::vector<Vec2> xi;

  std::size_t size() const { return x.size(); }
};

/// Gauss points of every element with per-element order chosen so the point
/// spacing in the current configuration is at most h/2 (never below
/// min_order); weights are reference measure.
InteractionPoints make_interaction_points(const SolidMesh& mesh, double h, int min_order = 2);

/// Q1 interpolation of nodal vectors at the interaction points.
std::vector<Vec2> evaluate_at_points(const SolidMesh& mesh, const std::vector<Vec2>& nodal,
                                     const InteractionPoints& points);

/// f(face) = sum_q F_q w_q phi_x phi_y / h^2, componentwise at face centers.
/// Throws PointOutOfDomain when a stencil leaves the stored faces.
FaceVectorField spread(const InteractionPoints& points, const std::vector<Vec2>& forces, const DeltaKernel& kernel,
                       const GridSpec& grid);

/// U_q = sum_faces u phi_x phi_y, componentwise.
std::vector<Vec2> interpolate(const FaceVectorField& u, const InteractionPoints& points, const DeltaKernel& kernel);
std::vector<Vec2> interpolate(const FaceVectorField& u, const std::vector<Vec2>& x, const DeltaKernel& kernel);
/// Cell-centered field sampled with the kernel on the cell-center lattice.
std::vector<double> interpolate(const CellScalarField& p, const std::vector<Vec2>& x, const DeltaKernel& kernel);

/// L2 projection of point velocities onto the Q1 space (consistent mass).
std::vector<Vec2> project_nodal_velocity(const std::vector<Vec2>& point_velocity, const InteractionPoints& points,
                                         const SolidMesh& mesh, const MassMatrix& mass);

}  // namespace sharpib
