#include "sharpib/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>

#include "sharpib/errors.hpp"
#include "sharpib/field_io.hpp"
#include "sharpib/oracles.hpp"

namespace sharpib {

namespace {

constexpr double kPi = std::numbers::pi;

int at_least(int lo, double v) { return std::max(lo, static_cast<int>(std::lround(v))); }

StaticRingParams ring_params(const SimulationConfig& cfg) {
  StaticRingParams p;
  p.R = cfg.ring_radius;
  p.w = cfg.ring_width;
  p.mu_e = cfg.mu_e;
  p.center = Vec2(0.5, 0.5);
  return p;
}

InflatingRingParams inflating_params(const SimulationConfig& cfg) {
  InflatingRingParams p;
  p.R_in = cfg.inner_radius;
  p.R_out = cfg.outer_radius;
  p.mu_e = cfg.mu_e;
  p.A_add = cfg.added_area;
  p.center = Vec2::Zero();
  return p;
}

const Vec2 kBlockLower(5.0, 10.0);
const Vec2 kBlockUpper(25.0, 20.0);

}  // namespace

Scene build_scene(const SimulationConfig& cfg) {
  cfg.validate();
  Scene s;
  const double h = cfg.h();
  const double mh = cfg.mesh_factor * h;
  switch (cfg.scenario) {
    case Scenario::StaticRing: {
      s.grid = GridSpec::square(0.0, 1.0, cfg.cells_per_axis());
      s.bc = BoundaryCondition::all(BoundaryKind::NoSlip);
      const int n1 = at_least(4, 2.0 * kPi * cfg.ring_radius / mh);
      const int n2 = at_least(1, cfg.ring_width / mh);
      s.mesh = make_static_ring_mesh(cfg.ring_radius, cfg.ring_width, Vec2(0.5, 0.5), n1, n2);
      s.model = CurvilinearRing{cfg.mu_e, cfg.ring_width};
      break;
    }
    case Scenario::InflatingRing: {
      s.grid = GridSpec::square(-1.0, 1.0, cfg.cells_per_axis());
      s.bc = BoundaryCondition::all(BoundaryKind::TractionOpen);
      const int n_r = at_least(1, (cfg.outer_radius - cfg.inner_radius) / mh);
      const int n_t = at_least(8, kPi * (cfg.inner_radius + cfg.outer_radius) / mh);
      s.mesh = make_annulus_mesh(cfg.inner_radius, cfg.outer_radius, Vec2::Zero(), n_r, n_t);
      s.model = PolarNeoHookeanRing{cfg.mu_e, Vec2::Zero()};
      break;
    }
    case Scenario::CompressedBlock: {
      s.grid = GridSpec::square(0.0, 30.0, cfg.cells_per_axis());
      s.bc = BoundaryCondition::all(BoundaryKind::TractionOpen);
      const Vec2 size = kBlockUpper - kBlockLower;
      s.mesh = make_block_mesh(kBlockLower, kBlockUpper, at_least(1, size.x() / mh), at_least(1, size.y() / mh));
      s.model = StabilizedNeoHookeanBlock{cfg.mu_e, cfg.nu};
      const double kappa = cfg.tether_stiffness();
      s.loads.push_back(TetherTop{kappa});
      s.loads.push_back(TetherBottom{kappa});
      if (cfg.block_load == BlockLoad::Smooth)
        s.loads.push_back(LoadPressureSmooth{cfg.load_max, cfg.load_time, cfg.load_a, cfg.load_b, kBlockLower.x()});
      else
        s.loads.push_back(
            LoadPressureDiscontinuous{cfg.load_max, cfg.load_time, cfg.load_a, cfg.load_b, kBlockLower.x()});
      break;
    }
  }
  s.mesh.quadrature_order = cfg.quadrature_order;
  s.mesh.validate();
  validate(s.model);
  for (const SurfaceLoad& l : s.loads) validate(l);
  return s;
}

namespace {

FluidOptions fluid_options(const SimulationConfig& cfg) {
  FluidOptions o;
  o.advection = cfg.advection;
  return o;
}

DeltaKernel make_kernel(const SimulationConfig& cfg) {
  DeltaKernel k;
  k.type = cfg.kernel;
  k.radius = 2.0 * cfg.h();
  k.clip_to_grid = cfg.kernel_clip_to_grid;
  return k;
}

}  // namespace

Simulation::Simulation(const SimulationConfig& cfg)
    : cfg_(cfg),
      scene_(build_scene(cfg)),
      kernel_(make_kernel(cfg)),
      fluid_(scene_.grid, FluidProperties{cfg.rho, cfg.mu}, scene_.bc, fluid_options(cfg)),
      mass_(scene_.mesh, cfg.lumped_mass) {
  state_.fluid = FluidState(scene_.grid);
  state_.mesh = scene_.mesh;
  state_.half_position = scene_.mesh.position;
  if (sharp()) phi_solver_.emplace(scene_.mesh);
}

PhiField Simulation::compute_phi(const SolidMesh& at, double t) {
  const PhiBoundaryData bc = phi_boundary_values(at, scene_.model, scene_.loads, t);
  if (cfg_.method == Method::SharpSteady || !state_.phi) {
    const std::vector<double>* initial = state_.phi ? &state_.phi->values : nullptr;
    return phi_solver_->solve_harmonic(bc, initial);
  }
  return phi_solver_->step_diffusion(*state_.phi, bc, cfg_.resolved_gamma(), t - state_.phi_time);
}

std::vector<Vec2> Simulation::force_density(const SolidMesh& at, double t, PhiField* phi_out) {
  ForceOptions opts;
  PhiField phi;
  if (sharp()) {
    phi = compute_phi(at, t);
    opts.phi = &phi.values;
  }
  std::vector<Vec2> G = internal_force_density(at, scene_.model, scene_.loads, t, mass_, opts);
  if (phi_out) *phi_out = std::move(phi);
  return G;
}

StepDiagnostics Simulation::step() { return step(cfg_.dt()); }

StepDiagnostics Simulation::step(double dt) {
  const GridSpec& g = scene_.grid;
  const double h = g.h;
  const double t = state_.fluid.time;
  StepDiagnostics diag;

  // The diffusion formulation starts from the harmonic extension of the
  // initial data.
  if (cfg_.method == Method::SharpDiffusion && !state_.phi) {
    state_.phi = phi_solver_->solve_harmonic(phi_boundary_values(state_.mesh, scene_.model, scene_.loads, t));
    state_.phi_time = t;
  }

  // Predictor: chi^{n+1/2} = chi^n + dt/2 U^n.
  const InteractionPoints pts_n = make_interaction_points(state_.mesh, h);
  const std::vector<Vec2> U_n =
      project_nodal_velocity(interpolate(state_.fluid.u, pts_n, kernel_), pts_n, state_.mesh, mass_);
  SolidMesh half = state_.mesh;
  for (int a = 0; a < half.num_nodes(); ++a) half.position[a] += 0.5 * dt * U_n[a];

  const double t_half = t + 0.5 * dt;
  PhiField phi;
  const std::vector<Vec2> G = force_density(half, t_half, &phi);
  if (sharp()) {
    diag.phi_iterations = phi.iterations;
    state_.phi = std::move(phi);
    state_.phi_time = t_half;
  }
  const InteractionPoints pts_half = make_interaction_points(half, h);
  const FaceVectorField f = spread(pts_half, evaluate_at_points(half, G, pts_half), kernel_, g);

  std::optional<CellScalarField> q;
  if (cfg_.scenario == Scenario::InflatingRing) {
    const double rate = injection_rate(cfg_.added_area, cfg_.injection_time, t, dt);
    if (rate != 0.0) q = cosine_source(g, Vec2::Zero(), cfg_.source_radius, rate);
  }

  const FaceVectorField u_old = state_.fluid.u;
  diag.fluid = fluid_.advance(state_.fluid, f, q ? &*q : nullptr, dt);

  // Corrector: chi^{n+1} = chi^n + dt U(chi^{n+1/2}, (u^n + u^{n+1})/2).
  FaceVectorField u_mid = u_old + state_.fluid.u;
  u_mid *= 0.5;
  const std::vector<Vec2> U_half =
      project_nodal_velocity(interpolate(u_mid, pts_half, kernel_), pts_half, half, mass_);
  for (int a = 0; a < state_.mesh.num_nodes(); ++a) state_.mesh.position[a] += dt * U_half[a];
  state_.half_position = half.position;
  ++state_.step;
  return diag;
}

Reconstruction Simulation::pressure() const {
  if (!sharp() || !state_.phi) {
    Reconstruction r;
    r.p = state_.fluid.pi;
    r.phi = CellScalarField(scene_.grid);
    r.inside = inside_mask(scene_.grid, state_.mesh);
    return r;
  }
  SolidMesh half = state_.mesh;
  half.position = state_.half_position;
  return reconstruct_pressure(state_.fluid.pi, half, state_.phi->values);
}

NodalFields Simulation::nodal_fields() const {
  const SolidMesh& mesh = state_.mesh;
  const InteractionPoints pts = make_interaction_points(mesh, scene_.grid.h);
  NodalFields out;
  out.velocity = project_nodal_velocity(interpolate(state_.fluid.u, pts, kernel_), pts, mesh, mass_);
  out.pressure = interpolate(state_.fluid.pi, mesh.position, kernel_);
  if (sharp() && state_.phi)
    for (int a = 0; a < mesh.num_nodes(); ++a) out.pressure[a] += state_.phi->values[a];
  return out;
}

CellScalarField static_ring_reference_pressure(const SimulationConfig& cfg, const std::vector<char>& inside) {
  const GridSpec g = GridSpec::square(0.0, 1.0, cfg.cells_per_axis());
  const StaticRingParams p = ring_params(cfg);
  const double inner = static_ring_pressure(0.0, p);
  const double outer = static_ring_pressure(10.0, p);
  CellScalarField e(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double r = (g.cell_center(i, j) - p.center).norm();
      if (inside[e.index(i, j)])
        e(i, j) = p.p0() + (p.mu_e / p.w) * ((p.R + p.w - r) / p.R + p.R / (p.R + p.w));
      else
        e(i, j) = r < p.R + 0.5 * p.w ? inner : outer;
    }
  return mean_zero_normalize(e);
}

JumpMeasurement static_ring_outer_jump_measurement(const SimulationConfig& cfg, const CellScalarField& p) {
  const GridSpec& g = p.grid();
  const StaticRingParams prm = ring_params(cfg);
  const double r_if = prm.R + prm.w;
  // Band k collects cells whose center lies k +- 1/2 cells from the interface.
  auto band = [&](double sign, int k, double& dist) {
    double sum = 0.0, dsum = 0.0;
    int count = 0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double d = sign * ((g.cell_center(i, j) - prm.center).norm() - r_if) / g.h;
        if (d >= k - 0.5 && d < k + 0.5) {
          sum += p(i, j);
          dsum += d;
          ++count;
        }
      }
    if (count == 0) throw Error("static_ring_outer_jump_measurement: empty band");
    dist = dsum / count;
    return sum / count;
  };
  auto extrapolate = [&](double sign) {
    double d2 = 0.0, d3 = 0.0;
    const double p2 = band(sign, 2, d2);
    const double p3 = band(sign, 3, d3);
    return p2 - d2 * (p3 - p2) / (d3 - d2);
  };
  JumpMeasurement m;
  m.outside = extrapolate(1.0);
  m.inside = extrapolate(-1.0);
  m.jump = m.outside - m.inside;
  m.exact = static_ring_outer_jump(prm);
  m.relative_error = std::abs(m.jump - m.exact) / std::abs(m.exact);
  return m;
}

namespace {

double bilinear_cell(const CellScalarField& f, const Vec2& x) {
  const GridSpec& g = f.grid();
  const double sx = (x.x() - g.lower.x()) / g.h - 0.5;
  const double sy = (x.y() - g.lower.y()) / g.h - 0.5;
  const int i0 = std::clamp(static_cast<int>(std::floor(sx)), 0, g.nx - 2);
  const int j0 = std::clamp(static_cast<int>(std::floor(sy)), 0, g.ny - 2);
  const double a = std::clamp(sx - i0, 0.0, 1.0);
  const double b = std::clamp(sy - j0, 0.0, 1.0);
  return (1 - a) * (1 - b) * f(i0, j0) + a * (1 - b) * f(i0 + 1, j0) + (1 - a) * b * f(i0, j0 + 1) +
         a * b * f(i0 + 1, j0 + 1);
}

// Bilinear interpolation on a lattice of nx x ny samples with origin offset.
template <class Get>
double bilinear_lattice(Get get, int nx, int ny, double sx, double sy) {
  const int i0 = std::clamp(static_cast<int>(std::floor(sx)), 0, nx - 2);
  const int j0 = std::clamp(static_cast<int>(std::floor(sy)), 0, ny - 2);
  const double a = std::clamp(sx - i0, 0.0, 1.0);
  const double b = std::clamp(sy - j0, 0.0, 1.0);
  return (1 - a) * (1 - b) * get(i0, j0) + a * (1 - b) * get(i0 + 1, j0) + (1 - a) * b * get(i0, j0 + 1) +
         a * b * get(i0 + 1, j0 + 1);
}

}  // namespace

CellScalarField restrict_bilinear(const CellScalarField& fine, const GridSpec& coarse) {
  CellScalarField c(coarse);
  for (int j = 0; j < coarse.ny; ++j)
    for (int i = 0; i < coarse.nx; ++i) c(i, j) = bilinear_cell(fine, coarse.cell_center(i, j));
  return c;
}

FaceVectorField restrict_bilinear(const FaceVectorField& fine, const GridSpec& coarse) {
  const GridSpec& g = fine.grid();
  FaceVectorField c(coarse);
  auto gx = [&](int i, int j) { return fine.x(i, j); };
  auto gy = [&](int i, int j) { return fine.y(i, j); };
  for (int j = 0; j < coarse.ny; ++j)
    for (int i = 0; i <= coarse.nx; ++i) {
      const Vec2 x = coarse.x_face(i, j);
      c.x(i, j) = bilinear_lattice(gx, g.nx + 1, g.ny, (x.x() - g.lower.x()) / g.h,
                                   (x.y() - g.lower.y()) / g.h - 0.5);
    }
  for (int j = 0; j <= coarse.ny; ++j)
    for (int i = 0; i < coarse.nx; ++i) {
      const Vec2 x = coarse.y_face(i, j);
      c.y(i, j) = bilinear_lattice(gy, g.nx, g.ny + 1, (x.x() - g.lower.x()) / g.h - 0.5,
                                   (x.y() - g.lower.y()) / g.h);
    }
  return c;
}

namespace {

namespace fs = std::filesystem;

class ManifestWriter {
 public:
  ManifestWriter(const std::string& dir, nlohmann::ordered_json& data) : data_(data) {
    if (!dir.empty()) path_ = (fs::path(dir) / "manifest.json").string();
  }
  void write() const {
    if (path_.empty()) return;
    std::ofstream out(path_);
    if (!out) throw Error("cannot write manifest '" + path_ + "'");
    out << data_.dump(2) << '\n';
  }

 private:
  nlohmann::ordered_json& data_;
  std::string path_;
};

ErrorReport tagged(ErrorReport r, const std::string& field, const SimulationConfig& cfg) {
  r.field = field;
  r.method = to_string(cfg.method);
  r.N = cfg.N;
  return r;
}

ErrorReport scalar_report(const std::string& field, const SimulationConfig& cfg, double e) {
  ErrorReport r;
  r.l1 = r.l2 = r.linf = std::abs(e);
  return tagged(r, field, cfg);
}

void compute_errors(const SimulationConfig& cfg, RunResult& res, const Reconstruction& rec) {
  switch (cfg.scenario) {
    case Scenario::StaticRing: {
      res.errors.push_back(
          tagged(grid_error_norms(res.u, [](const Vec2&) { return Vec2(0.0, 0.0); }), "velocity", cfg));
      res.errors.push_back(
          tagged(grid_error_norms(res.p, static_ring_reference_pressure(cfg, rec.inside), true), "pressure", cfg));
      res.outer_jump = static_ring_outer_jump_measurement(cfg, res.p);
      break;
    }
    case Scenario::InflatingRing: {
      const InflatingRingParams prm = inflating_params(cfg);
      res.center_pressure = kernel_sample(res.p, prm.center, cfg.sample_radius);
      res.center_pressure_exact = inflating_ring_inner_pressure(prm);
      res.errors.push_back(scalar_report("center_pressure", cfg, *res.center_pressure - *res.center_pressure_exact));
      ErrorReport jr;
      double s1 = 0.0, s2 = 0.0;
      for (double J : res.jacobian.per_element) {
        s1 += std::abs(J - 1.0);
        s2 += (J - 1.0) * (J - 1.0);
      }
      const double n = std::max<std::size_t>(1, res.jacobian.per_element.size());
      jr.l1 = s1 / n;
      jr.l2 = std::sqrt(s2 / n);
      jr.linf = res.jacobian.max_deviation;
      res.errors.push_back(tagged(jr, "jacobian", cfg));
      break;
    }
    case Scenario::CompressedBlock:
      break;
  }
}

void write_slices(const std::string& path, const CellScalarField& p, const CellScalarField& pi) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << std::setprecision(17) << "label,x,y,p,pi\n";
  const GridSpec& g = p.grid();
  // x = 15 in the fluid domain (the block's center line) and X1 = 15 measured
  // from the block's left edge.
  const std::pair<const char*, double> slices[] = {{"omega_x15", 15.0}, {"block_X15", kBlockLower.x() + 15.0}};
  for (const auto& [label, x] : slices)
    for (int j = 0; j < g.ny; ++j) {
      const Vec2 at(x, g.cell_center(0, j).y());
      out << label << ',' << at.x() << ',' << at.y() << ',' << bilinear_cell(p, at) << ',' << bilinear_cell(pi, at)
          << '\n';
    }
}

nlohmann::ordered_json report_json(const ErrorReport& r) {
  return {{"field", r.field}, {"N", r.N}, {"L1", r.l1}, {"L2", r.l2}, {"Linf", r.linf}};
}

}  // namespace

RunResult run_scenario(const SimulationConfig& cfg) {
  const auto wall_start = std::chrono::steady_clock::now();
  cfg.validate();
  RunResult res;
  res.config = cfg;
  nlohmann::ordered_json& man = res.manifest;
  man["code"] = {{"name", "sharpib"}, {"version", SHARPIB_VERSION}};
  man["config"] = cfg.to_json();
  man["status"] = "running";

  const std::string dir = cfg.output_dir;
  if (!dir.empty()) fs::create_directories(dir);
  auto out_path = [&](const std::string& name) { return (fs::path(dir) / name).string(); };
  ManifestWriter writer(dir, man);

  Simulation sim(cfg);
  const SolidMesh& mesh0 = sim.scene().mesh;
  man["mesh"] = {{"nodes", mesh0.num_nodes()},
                 {"elements", mesh0.num_elements()},
                 {"quadrature_order", mesh0.quadrature_order},
                 {"mesh_factor", cfg.mesh_factor}};
  if (cfg.scenario == Scenario::InflatingRing) man["added_area_mm2"] = cfg.added_area;
  std::optional<DiagnosticsLog> log;
  if (!dir.empty()) {
    man["diagnostics"] = "diagnostics.csv";
    log.emplace(out_path("diagnostics.csv"));
  }
  man["outputs"] = nlohmann::ordered_json::array();
  writer.write();

  const int steps = cfg.num_steps();
  const double steady_speed = cfg.steady_factor * cfg.domain_length() / cfg.final_time;
  try {
    for (int n = 0; n < steps; ++n) {
      const StepDiagnostics d = sim.step(cfg.step_size(n));
      res.fluid_iterations.push_back(d.fluid.iterations);
      if (sim.sharp()) res.phi_iterations.push_back(d.phi_iterations);
      if (log) log->append(sim.state().fluid.time, d.fluid);
      if (cfg.scenario == Scenario::CompressedBlock && cfg.steady_factor > 0.0 &&
          sim.state().fluid.time >= cfg.load_time && d.fluid.max_velocity < steady_speed) {
        res.steady_exit = true;
        break;
      }
    }
  } catch (const Error& e) {
    res.ok = false;
    res.failure = e.what();
    res.failure_step = sim.state().step + 1;
    man["status"] = "failed";
    man["failure"] = res.failure;
    man["failure_step"] = res.failure_step;
    man["iterations"] = {{"fluid", res.fluid_iterations}, {"phi", res.phi_iterations}};
    writer.write();
    throw;
  }
  res.steps = sim.state().step;
  res.time = sim.state().fluid.time;

  const Reconstruction rec = sim.pressure();
  res.u = sim.state().fluid.u;
  res.pi = sim.state().fluid.pi;
  res.p = rec.p;
  res.mesh = sim.state().mesh;
  if (sim.state().phi) res.phi = sim.state().phi->values;
  res.jacobian = jacobian_diagnostic(res.mesh);
  res.nodal = sim.nodal_fields();
  if (!res.phi_iterations.empty()) {
    double s = 0.0;
    for (int it : res.phi_iterations) s += it;
    res.mean_phi_iterations = s / res.phi_iterations.size();
  }
  compute_errors(cfg, res, rec);

  if (!dir.empty()) {
    auto& outputs = man["outputs"];
    auto add = [&](const std::string& name) { outputs.push_back(name); };
    if (cfg.write_fields) {
      write_vtk(res.u, "velocity", out_path("velocity.vtk"));
      write_csv(res.u, out_path("velocity_x.csv"), out_path("velocity_y.csv"));
      write_vtk(res.pi, "pi", out_path("pi.vtk"));
      write_csv(res.pi, out_path("pi.csv"));
      write_vtk(res.p, "p", out_path("p.vtk"));
      write_csv(res.p, out_path("p.csv"));
      for (const char* f : {"velocity.vtk", "velocity_x.csv", "velocity_y.csv", "pi.vtk", "pi.csv", "p.vtk", "p.csv"})
        add(f);
      if (sim.sharp()) {
        write_vtk(rec.phi, "phi", out_path("phi.vtk"));
        write_csv(rec.phi, out_path("phi.csv"));
        add("phi.vtk");
        add("phi.csv");
      }
      std::vector<NamedValues> point_data;
      if (!res.phi.empty()) point_data.push_back({"phi", res.phi});
      write_mesh_vtk(res.mesh, out_path("mesh.vtk"), point_data, {{"J", res.jacobian.per_element}});
      add("mesh.vtk");
    }
    if (cfg.scenario == Scenario::CompressedBlock) {
      write_slices(out_path("slices.csv"), res.p, res.pi);
      add("slices.csv");
    }
    if (!res.errors.empty()) {
      std::ofstream ecsv(out_path("errors.csv"));
      write_error_csv_header(ecsv);
      for (const ErrorReport& r : res.errors)
        for (const ErrorRow& row : error_rows(to_string(cfg.scenario), {r})) write_error_row(ecsv, row);
      add("errors.csv");
    }
  }

  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  man["status"] = "ok";
  man["steps"] = res.steps;
  man["final_time_s"] = res.time;
  man["steady_exit"] = res.steady_exit;
  man["wall_seconds"] = res.wall_seconds;
  man["iterations"] = {{"fluid", res.fluid_iterations}, {"phi", res.phi_iterations}};
  man["mean_phi_iterations"] = res.mean_phi_iterations;
  man["reconstruction_newton_failures"] = rec.newton_failures;
  man["jacobian"] = {{"min", res.jacobian.min},
                     {"max", res.jacobian.max},
                     {"max_abs_J_minus_1", res.jacobian.max_deviation},
                     {"inverted", res.jacobian.inverted}};
  nlohmann::ordered_json errs = nlohmann::ordered_json::array();
  for (const ErrorReport& r : res.errors) errs.push_back(report_json(r));
  man["errors"] = errs;
  if (res.center_pressure)
    man["center_pressure"] = {{"sampled", *res.center_pressure}, {"exact", *res.center_pressure_exact}};
  if (res.outer_jump)
    man["outer_jump"] = {{"inside", res.outer_jump->inside},
                         {"outside", res.outer_jump->outside},
                         {"measured", res.outer_jump->jump},
                         {"exact", res.outer_jump->exact},
                         {"relative_error", res.outer_jump->relative_error}};
  writer.write();
  return res;
}

const RunResult* SweepResult::run(int N) const {
  for (const RunResult& r : runs)
    if (r.ok && r.config.N == N) return &r;
  return nullptr;
}

double SweepResult::rate(const std::string& field, const std::string& norm) const {
  for (const RateEntry& e : rates)
    if (e.field == field && e.norm == norm && e.fit) return e.fit->series.rate;
  return std::numeric_limits<double>::quiet_NaN();
}

double SweepResult::error(const std::string& field, const std::string& norm, int N) const {
  for (const ErrorRow& r : rows)
    if (r.field == field && r.norm == norm && r.N == N) return r.error;
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> restrict_nodal(const SolidMesh& fine, const std::vector<double>& values, const SolidMesh& coarse) {
  if (static_cast<int>(values.size()) != fine.num_nodes()) throw Error("restrict_nodal: size mismatch");
  std::vector<double> out(coarse.num_nodes());
  for (int a = 0; a < coarse.num_nodes(); ++a) {
    const Vec2& X = coarse.reference[a];
    bool found = false;
    for (int e = 0; e < fine.num_elements() && !found; ++e) {
      const auto& xe = fine.element_reference[e];
      const double tol = 1e-9 * (xe[2] - xe[0]).norm();
      double lo_x = xe[0].x(), hi_x = xe[0].x(), lo_y = xe[0].y(), hi_y = xe[0].y();
      for (const Vec2& v : xe) {
        lo_x = std::min(lo_x, v.x());
        hi_x = std::max(hi_x, v.x());
        lo_y = std::min(lo_y, v.y());
        hi_y = std::max(hi_y, v.y());
      }
      if (X.x() < lo_x - tol || X.x() > hi_x + tol || X.y() < lo_y - tol || X.y() > hi_y + tol) continue;
      Vec2 xi;
      if (!inverse_bilinear(xe, X, xi) || xi.lpNorm<Eigen::Infinity>() > 1.0 + 1e-9) continue;
      const auto N = q1::shape(xi);
      double v = 0.0;
      for (int k = 0; k < 4; ++k) v += N[k] * values[fine.elements[e][k]];
      out[a] = v;
      found = true;
    }
    if (!found) throw Error("restrict_nodal: coarse node outside the fine mesh");
  }
  return out;
}

namespace {

ErrorReport labelled(ErrorReport r, const std::string& field, const RunResult& run) {
  r.field = field;
  r.method = to_string(run.config.method);
  r.N = run.config.N;
  return r;
}

std::vector<ErrorReport> richardson_reports(const std::vector<const RunResult*>& runs) {
  std::vector<ErrorReport> out;
  for (std::size_t k = 0; k + 1 < runs.size(); ++k) {
    const RunResult& c = *runs[k];
    const RunResult& f = *runs[k + 1];
    if (f.config.N != 2 * c.config.N) continue;

    const std::size_t n = c.mesh.num_nodes();
    std::vector<double> fx(n), fy(n), cu(n), zero(n, 0.0);
    {
      std::vector<double> ux, uy;
      for (const Vec2& v : f.nodal.velocity) {
        ux.push_back(v.x());
        uy.push_back(v.y());
      }
      fx = restrict_nodal(f.mesh, ux, c.mesh);
      fy = restrict_nodal(f.mesh, uy, c.mesh);
    }
    for (std::size_t a = 0; a < n; ++a) cu[a] = (c.nodal.velocity[a] - Vec2(fx[a], fy[a])).norm();
    out.push_back(labelled(nodal_error_norms(c.mesh, cu, zero), "velocity", c));
    out.push_back(
        labelled(nodal_error_norms(c.mesh, c.nodal.pressure, restrict_nodal(f.mesh, f.nodal.pressure, c.mesh)),
                 "pressure", c));

    const GridSpec& g = c.u.grid();
    out.push_back(labelled(grid_error_norms(c.u, restrict_bilinear(f.u, g)), "velocity_grid", c));
    out.push_back(labelled(grid_error_norms(c.p, restrict_bilinear(f.p, g), false), "pressure_grid", c));
  }
  return out;
}

}  // namespace

SweepResult run_convergence_sweep(const SimulationConfig& base, const std::vector<int>& resolutions) {
  if (resolutions.size() < 2) throw ConfigError("a sweep needs at least two resolutions");
  std::vector<int> Ns = resolutions;
  std::sort(Ns.begin(), Ns.end());
  SweepResult sweep;
  for (int N : Ns) {
    SimulationConfig cfg = base;
    cfg.N = N;
    if (!base.output_dir.empty()) cfg.output_dir = (fs::path(base.output_dir) / ("N" + std::to_string(N))).string();
    try {
      sweep.runs.push_back(run_scenario(cfg));
    } catch (const Error& e) {
      RunResult failed;
      failed.config = cfg;
      failed.ok = false;
      failed.failure = e.what();
      sweep.runs.push_back(std::move(failed));
    }
  }

  std::vector<ErrorReport> reports;
  if (base.scenario == Scenario::CompressedBlock) {
    std::vector<const RunResult*> ok;
    for (const RunResult& r : sweep.runs)
      if (r.ok) ok.push_back(&r);
    reports = richardson_reports(ok);
  } else {
    for (const RunResult& r : sweep.runs)
      for (const ErrorReport& e : r.errors) reports.push_back(e);
  }

  std::vector<std::string> fields;
  for (const ErrorReport& r : reports)
    if (std::find(fields.begin(), fields.end(), r.field) == fields.end()) fields.push_back(r.field);
  const std::string scenario = to_string(base.scenario);
  for (const std::string& field : fields) {
    std::vector<ErrorReport> series;
    for (const ErrorReport& r : reports)
      if (r.field == field) series.push_back(r);
    for (ErrorRow& row : error_rows(scenario, series)) sweep.rows.push_back(row);
    for (const char* norm : {"L1", "L2", "Linf"}) {
      RateEntry entry{field, norm, std::nullopt};
      std::vector<std::pair<int, double>> pts;
      for (const ErrorReport& r : series) {
        const std::string n = norm;
        pts.emplace_back(r.N, n == "L1" ? r.l1 : n == "L2" ? r.l2 : r.linf);
      }
      if (pts.size() >= 2) {
        try {
          entry.fit = fit_rate(pts);
        } catch (const NonPositiveError&) {
        }
      }
      sweep.rates.push_back(entry);
    }
  }

  if (!base.output_dir.empty()) {
    fs::create_directories(base.output_dir);
    std::ofstream ecsv((fs::path(base.output_dir) / "errors.csv").string());
    write_error_csv_header(ecsv);
    for (const ErrorRow& row : sweep.rows) write_error_row(ecsv, row);
    std::ofstream rcsv((fs::path(base.output_dir) / "rates.csv").string());
    rcsv << std::setprecision(17) << "scenario,method,field,norm,rate,residual\n";
    for (const RateEntry& e : sweep.rates) {
      rcsv << scenario << ',' << to_string(base.method) << ',' << e.field << ',' << e.norm << ',';
      if (e.fit)
        rcsv << e.fit->series.rate << ',' << e.fit->series.residual;
      else
        rcsv << ',';
      rcsv << '\n';
    }
  }
  return sweep;
}

}  // namespace sharpib
