#pragma once

/// Pressure splitting p = pi + phi. phi lives on the solid mesh and carries
/// the interface pressure jump through its Dirichlet data
///
///   phi = J^{-1} (F^{-T} N / |F^{-T} N|^2) . (P N - F_surf)   on the boundary,
///
/// extended into the solid either harmonically or by a diffusion equation in
/// the parameter coordinates. The solid stress is modified to
/// P - J phi F^{-T}, which removes the normal-normal part of the traction.

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "sharpib/linear_solvers.hpp"
#include "sharpib/mac_grid.hpp"
#include "sharpib/solid_fem.hpp"

namespace sharpib {

enum class PhiFormulation { SteadyHarmonic, Diffusion };

struct PhiBoundaryData {
  std::vector<int> nodes;
  std::vector<double> values;
};

/// Length-weighted average of the outward reference normals of the boundary
/// edges touching each boundary node, normalized; indexed like
/// mesh.boundary_nodes().
std::vector<Vec2> boundary_node_normals(const SolidMesh& mesh);

/// J^{-1} (F^{-T} N / |F^{-T} N|^2) . t with t the reference traction.
double phi_interface_value(const Mat2& F, const Vec2& N, const Vec2& traction);

/// Dirichlet data for phi at every boundary node. F and P are evaluated at the
/// node in each adjacent boundary element and averaged; surface loads are
/// subtracted from P N.
PhiBoundaryData phi_boundary_values(const SolidMesh& mesh, const ConstitutiveModel& model,
                                    const std::vector<SurfaceLoad>& loads = {}, double t = 0.0);

struct PhiField {
  std::vector<double> values;
  PhiBoundaryData bc;
  PhiFormulation formulation = PhiFormulation::SteadyHarmonic;
  double gamma = 0.0;
  int iterations = 0;
};

/// Q1 Laplacian (stiffness) in parameter coordinates.
SparseMatrix assemble_stiffness_matrix(const SolidMesh& mesh);

/// Penalty-Dirichlet Q1 solves for phi with ILU-preconditioned GMRES. The
/// matrices depend only on the parameter mesh and are built once.
class PhiSolver {
 public:
  explicit PhiSolver(const SolidMesh& mesh, const IluGmres::Options& options = {});

  PhiField solve_harmonic(const PhiBoundaryData& bc, const std::vector<double>* initial = nullptr);
  /// One Crank-Nicolson step of d(phi)/dt = gamma Laplacian(phi).
  PhiField step_diffusion(const PhiField& old, const PhiBoundaryData& bc, double gamma, double dt);

  static constexpr double kPenaltyScale = 1e10;

 private:
  struct System {
    SparseMatrix matrix;
    double penalty = 0.0;
    std::unique_ptr<IluGmres> solver;
  };
  System build(const SparseMatrix& base, const std::vector<int>& nodes) const;
  int solve(const System& sys, const PhiBoundaryData& bc, Vector rhs, std::vector<double>& x) const;

  int num_nodes_;
  std::vector<int> boundary_nodes_;
  IluGmres::Options options_;
  SparseMatrix stiffness_;
  SparseMatrix mass_;
  std::unique_ptr<System> harmonic_;
  std::map<std::pair<double, double>, std::unique_ptr<System>> diffusion_;
  std::map<std::pair<double, double>, SparseMatrix> explicit_part_;
};

PhiField solve_phi_harmonic(const SolidMesh& mesh, const PhiBoundaryData& bc);
PhiField step_phi_diffusion(const SolidMesh& mesh, const PhiField& old, const PhiBoundaryData& bc, double gamma,
                            double dt);

/// P - J phi F^{-T}.
Mat2 modified_stress(const Mat2& P, double phi, const Kinematics& kin);

struct Reconstruction {
  CellScalarField p;
  /// phi on the grid (zero outside the solid).
  CellScalarField phi;
  /// 1 where the cell center lies in the deformed mesh.
  std::vector<char> inside;
  int newton_failures = 0;
};

/// Inverse bilinear map: finds xi with x(xi) = target for the element corners
/// xe. Returns false when Newton does not converge.
bool inverse_bilinear(const std::array<Vec2, 4>& xe, const Vec2& target, Vec2& xi);

/// Cell centers inside the deformed mesh (ties on element edges count as
/// inside).
std::vector<char> inside_mask(const GridSpec& grid, const SolidMesh& mesh);

/// p = pi + phi(preimage) inside the deformed solid, p = pi outside.
Reconstruction reconstruct_pressure(const CellScalarField& pi, const SolidMesh& mesh,
                                    const std::vector<double>& phi);

}  // namespace sharpib
