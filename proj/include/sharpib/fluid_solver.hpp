#pragma once

/// Semi-implicit incompressible Navier-Stokes on the MAC grid.
///
/// Each step solves the saddle-point system
///
///   (rho/dt) V u - (mu/2) K u - B^T pi = r
///                               B u    = h^2 q - (fixed normal faces)
///
/// where V holds the face control volumes (h^2, or h^2/2 for normal faces on
/// a traction-open side), K is the flux-form Laplacian scaled by V, and
/// B = h^2 div. Diffusion is Crank-Nicolson, advection second-order
/// Adams-Bashforth (forward Euler on the first step). The pressure is found
/// by preconditioned CG on the Schur complement B A^{-1} B^T; velocity solves
/// use a cached sparse Cholesky factor.

#include <array>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "sharpib/linear_solvers.hpp"
#include "sharpib/mac_grid.hpp"

namespace sharpib {

struct FluidProperties {
  double rho = 1.0;
  double mu = 1.0;

  void validate() const;
};

enum class BoundaryKind { NoSlip, TractionOpen };

struct BoundaryCondition {
  std::array<BoundaryKind, kNumSides> kind{BoundaryKind::NoSlip, BoundaryKind::NoSlip, BoundaryKind::NoSlip,
                                           BoundaryKind::NoSlip};
  /// Imposed normal traction on TractionOpen sides, used as the boundary
  /// pressure value.
  std::array<double, kNumSides> traction{0.0, 0.0, 0.0, 0.0};
  /// Optional wall velocity on NoSlip sides (defaults to zero).
  std::function<Vec2(const Vec2& x, double t)> wall_velocity;

  static BoundaryCondition all(BoundaryKind kind);
  BoundaryKind side(Side s) const { return kind[static_cast<int>(s)]; }
  bool all_no_slip() const;
  /// Boundary pressure values for gradient(p, dirichlet).
  std::array<std::optional<double>, kNumSides> pressure_dirichlet() const;
};

struct DivergenceSource {
  CellScalarField q;
  /// Total volume injected so far.
  double injected_volume = 0.0;
};

/// Normalized cosine bump (1/(4a^2))(1+cos(pi dx/a))(1+cos(pi dy/a)) scaled
/// so that h^2 sum q = rate exactly.
CellScalarField cosine_source(const GridSpec& grid, const Vec2& center, double radius, double rate);

/// Volume injected during [t, t+dt] by a constant-rate injection of `volume`
/// over [0, duration], divided by dt.
double injection_rate(double volume, double duration, double t, double dt);

struct FluidState {
  FaceVectorField u;
  CellScalarField pi;
  double time = 0.0;
  std::optional<FaceVectorField> prev_advection;

  FluidState() = default;
  explicit FluidState(const GridSpec& grid) : u(grid), pi(grid) {}
};

/// Ghost-padded copy of a state: x-velocity on i in [-1, nx+1], j in [-1, ny];
/// y-velocity on i in [-1, nx], j in [-1, ny+1]; pressure on [-1, nx] x
/// [-1, ny].
class GhostedState {
 public:
  explicit GhostedState(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  double& ux(int i, int j) { return ux_[(i + 1) + (grid_.nx + 3) * (j + 1)]; }
  double ux(int i, int j) const { return ux_[(i + 1) + (grid_.nx + 3) * (j + 1)]; }
  double& uy(int i, int j) { return uy_[(i + 1) + (grid_.nx + 2) * (j + 1)]; }
  double uy(int i, int j) const { return uy_[(i + 1) + (grid_.nx + 2) * (j + 1)]; }
  double& p(int i, int j) { return p_[(i + 1) + (grid_.nx + 2) * (j + 1)]; }
  double p(int i, int j) const { return p_[(i + 1) + (grid_.nx + 2) * (j + 1)]; }

 private:
  GridSpec grid_;
  std::vector<double> ux_, uy_, p_;
};

/// Fills ghosts: tangential ghost = 2 u_wall - adjacent (both side kinds, wall
/// value zero on TractionOpen); normal ghost = 2 u_wall - second face on
/// NoSlip, zero-gradient on TractionOpen; pressure ghost = adjacent on NoSlip,
/// 2 p_bc - adjacent on TractionOpen.
GhostedState apply_boundary_conditions(const FluidState& state, const BoundaryCondition& bc);

enum class Advection { Centered, Upwind, None };

const char* to_string(Advection a);
Advection advection_from_string(const std::string& name);

/// Conservative advection div(u u) at every face, including the half control
/// volumes of boundary normal faces.
FaceVectorField advection_term(const GhostedState& g, const BoundaryCondition& bc, Advection scheme);

/// Control volume of every face (h^2, h^2/2 on boundary normal faces).
FaceVectorField face_volumes(const GridSpec& grid);

struct FluidOptions {
  Advection advection = Advection::Centered;
  double tolerance = 1e-12;
  /// 0 selects 10 * max(nx, ny).
  int max_iterations = 0;
  bool check_cfl = true;
};

struct StepReport {
  int iterations = 0;
  double relative_residual = 0.0;
  double max_velocity = 0.0;
  double divergence_error = 0.0;
  double wall_ms = 0.0;
};

class FluidSolver {
 public:
  FluidSolver(const GridSpec& grid, const FluidProperties& props, const BoundaryCondition& bc,
              const FluidOptions& options = {});
  ~FluidSolver();
  FluidSolver(FluidSolver&&) noexcept;
  FluidSolver& operator=(FluidSolver&&) noexcept;

  /// Advances state by dt with body force f (force per volume at faces) and
  /// optional divergence source q. Throws CflViolation or SolverDiverged.
  StepReport advance(FluidState& state, const FaceVectorField& f, const CellScalarField* q, double dt);

  const GridSpec& grid() const;
  const BoundaryCondition& boundary() const;
  const FluidProperties& properties() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Stateless convenience wrapper; builds and factors the operators per call.
FluidState advance(const FluidState& state, const FaceVectorField& f, const DivergenceSource* q,
                   const FluidProperties& props, const BoundaryCondition& bc, double dt,
                   const FluidOptions& options = {});

/// Kinetic energy (rho/2) sum V u^2 over all faces.
double kinetic_energy(const FaceVectorField& u, double rho);

/// Per-step diagnostics CSV: time,max_u,div_error,krylov_iterations,wall_ms.
class DiagnosticsLog {
 public:
  explicit DiagnosticsLog(const std::string& path);
  void append(double time, const StepReport& report);

 private:
  std::ofstream out_;
};

}  // namespace sharpib
