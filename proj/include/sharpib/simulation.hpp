#pragma once

/// Coupled fluid-structure time stepping and the scenario/sweep drivers.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sharpib/config.hpp"
#include "sharpib/coupling.hpp"
#include "sharpib/fluid_solver.hpp"
#include "sharpib/metrics.hpp"
#include "sharpib/pressure_split.hpp"
#include "sharpib/solid_fem.hpp"

namespace sharpib {

/// Grid, boundary conditions, mesh, material and loads of a scenario.
struct Scene {
  GridSpec grid;
  BoundaryCondition bc;
  SolidMesh mesh;
  ConstitutiveModel model;
  std::vector<SurfaceLoad> loads;
};

Scene build_scene(const SimulationConfig& cfg);

struct CoupledState {
  FluidState fluid;
  /// Mesh at the end of the last step.
  SolidMesh mesh;
  /// Mesh positions at the last half step, where phi and the force live.
  std::vector<Vec2> half_position;
  /// phi at the last half step (sharp methods only).
  std::optional<PhiField> phi;
  double phi_time = 0.0;
  int step = 0;
};

/// Velocity and pressure carried by the mesh nodes.
struct NodalFields {
  std::vector<Vec2> velocity;
  /// Kernel-interpolated pi, plus phi for the sharp methods.
  std::vector<double> pressure;
};

struct StepDiagnostics {
  StepReport fluid;
  int phi_iterations = 0;
};

class Simulation {
 public:
  explicit Simulation(const SimulationConfig& cfg);

  const SimulationConfig& config() const { return cfg_; }
  const Scene& scene() const { return scene_; }
  const GridSpec& grid() const { return scene_.grid; }
  CoupledState& state() { return state_; }
  const CoupledState& state() const { return state_; }
  bool sharp() const { return cfg_.method != Method::Original; }

  /// One midpoint predictor-corrector step of size dt (default cfg.dt()).
  StepDiagnostics step();
  StepDiagnostics step(double dt);

  /// Lagrangian force density G at the given configuration and time, with phi
  /// when the method is sharp. Exposed for tests.
  std::vector<Vec2> force_density(const SolidMesh& at, double t, PhiField* phi_out = nullptr);

  /// Pressure reconstruction of the current state; equals pi for Original.
  Reconstruction pressure() const;

  /// Projected nodal velocity and nodal pressure of the current state.
  NodalFields nodal_fields() const;

 private:
  PhiField compute_phi(const SolidMesh& at, double t);

  SimulationConfig cfg_;
  Scene scene_;
  DeltaKernel kernel_;
  FluidSolver fluid_;
  MassMatrix mass_;
  std::optional<PhiSolver> phi_solver_;
  CoupledState state_;
};

/// Exact static-ring pressure per cell, with the solid branch selected by the
/// discrete inside mask; mean-zero over the domain.
CellScalarField static_ring_reference_pressure(const SimulationConfig& cfg, const std::vector<char>& inside);

struct JumpMeasurement {
  double inside = 0.0;
  double outside = 0.0;
  double jump = 0.0;
  double exact = 0.0;
  double relative_error = 0.0;
};

/// Outer-interface jump of the static ring from one-sided averages over cell
/// bands centered two and three cells from r = R + w on each side, linearly
/// extrapolated to the interface.
JumpMeasurement static_ring_outer_jump_measurement(const SimulationConfig& cfg, const CellScalarField& p);

/// Cell field sampled bilinearly at the cell centers of a coarser grid, and the
/// face field at the coarse face centers.
CellScalarField restrict_bilinear(const CellScalarField& fine, const GridSpec& coarse);
FaceVectorField restrict_bilinear(const FaceVectorField& fine, const GridSpec& coarse);

struct RunResult {
  SimulationConfig config;
  bool ok = true;
  std::string failure;
  int failure_step = -1;
  int steps = 0;
  double time = 0.0;
  double wall_seconds = 0.0;
  bool steady_exit = false;

  std::vector<ErrorReport> errors;
  std::vector<int> fluid_iterations;
  std::vector<int> phi_iterations;
  double mean_phi_iterations = 0.0;
  JacobianStats jacobian;
  std::optional<double> center_pressure;
  std::optional<double> center_pressure_exact;
  std::optional<JumpMeasurement> outer_jump;

  FaceVectorField u;
  CellScalarField pi;
  CellScalarField p;
  std::vector<double> phi;
  SolidMesh mesh;
  NodalFields nodal;
  nlohmann::ordered_json manifest;
};

/// Builds the scene, integrates to T (or to steady state for the block),
/// computes error reports and writes outputs when cfg.output_dir is set. The
/// manifest is written before the first step and finalized on exit; solver
/// failures are rethrown after finalization.
RunResult run_scenario(const SimulationConfig& cfg);

struct RateEntry {
  std::string field;
  std::string norm;
  std::optional<RateFit> fit;
};

struct SweepResult {
  std::vector<RunResult> runs;
  std::vector<ErrorRow> rows;
  std::vector<RateEntry> rates;

  const RunResult* run(int N) const;
  /// Fitted rate for field/norm, NaN if unavailable.
  double rate(const std::string& field, const std::string& norm) const;
  /// Error at resolution N for field/norm, NaN if unavailable.
  double error(const std::string& field, const std::string& norm, int N) const;
};

/// Fine nodal values Q1-interpolated at the coarse nodes' reference positions.
std::vector<double> restrict_nodal(const SolidMesh& fine, const std::vector<double>& values, const SolidMesh& coarse);

/// Runs every resolution (failures are recorded and the sweep continues),
/// fits rates per field and norm, and writes errors.csv and rates.csv under
/// cfg.output_dir. The block uses pairwise Richardson differences between
/// consecutive levels: "velocity" and "pressure" on the coarse mesh nodes,
/// "velocity_grid" and "pressure_grid" on the coarse grid.
SweepResult run_convergence_sweep(const SimulationConfig& cfg, const std::vector<int>& resolutions);

}  // namespace sharpib
