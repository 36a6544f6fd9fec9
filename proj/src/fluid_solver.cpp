#include "sharpib/fluid_solver.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "sharpib/errors.hpp"

namespace sharpib {

void FluidProperties::validate() const {
  if (!(rho > 0.0)) throw ConfigError("fluid density must be positive");
  if (!(mu > 0.0)) throw ConfigError("fluid viscosity must be positive");
}

BoundaryCondition BoundaryCondition::all(BoundaryKind kind) {
  BoundaryCondition bc;
  bc.kind.fill(kind);
  return bc;
}

bool BoundaryCondition::all_no_slip() const {
  for (BoundaryKind k : kind)
    if (k != BoundaryKind::NoSlip) return false;
  return true;
}

std::array<std::optional<double>, kNumSides> BoundaryCondition::pressure_dirichlet() const {
  std::array<std::optional<double>, kNumSides> out;
  for (int s = 0; s < kNumSides; ++s)
    if (kind[s] == BoundaryKind::TractionOpen) out[s] = traction[s];
  return out;
}

CellScalarField cosine_source(const GridSpec& grid, const Vec2& center, double radius, double rate) {
  CellScalarField q(grid);
  double total = 0.0;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const Vec2 d = grid.cell_center(i, j) - center;
      if (std::abs(d.x()) >= radius || std::abs(d.y()) >= radius) continue;
      const double b = (1.0 + std::cos(std::numbers::pi * d.x() / radius)) *
                       (1.0 + std::cos(std::numbers::pi * d.y() / radius));
      q(i, j) = b;
      total += b;
    }
  if (!(total > 0.0)) throw ConfigError("cosine_source: radius does not cover any cell center");
  const double scale = rate / (total * grid.h * grid.h);
  for (double& v : q.values()) v *= scale;
  return q;
}

double injection_rate(double volume, double duration, double t, double dt) {
  const double overlap = std::max(0.0, std::min(t + dt, duration) - std::max(t, 0.0));
  return volume / duration * overlap / dt;
}

const char* to_string(Advection a) {
  switch (a) {
    case Advection::Centered: return "centered";
    case Advection::Upwind: return "upwind";
    case Advection::None: return "none";
  }
  return "unknown";
}

Advection advection_from_string(const std::string& name) {
  if (name == "centered") return Advection::Centered;
  if (name == "upwind") return Advection::Upwind;
  if (name == "none" || name == "stokes") return Advection::None;
  throw ConfigError("unknown advection scheme '" + name + "'");
}

// --- ghosts ------------------------------------------------------------------

GhostedState::GhostedState(const GridSpec& grid)
    : grid_(grid),
      ux_(static_cast<std::size_t>((grid.nx + 3) * (grid.ny + 2)), 0.0),
      uy_(static_cast<std::size_t>((grid.nx + 2) * (grid.ny + 3)), 0.0),
      p_(static_cast<std::size_t>((grid.nx + 2) * (grid.ny + 2)), 0.0) {}

namespace {

Vec2 wall_value(const BoundaryCondition& bc, Side s, const Vec2& x, double t) {
  if (bc.side(s) != BoundaryKind::NoSlip || !bc.wall_velocity) return Vec2::Zero();
  return bc.wall_velocity(x, t);
}

}  // namespace

GhostedState apply_boundary_conditions(const FluidState& state, const BoundaryCondition& bc) {
  const GridSpec& grid = state.u.grid();
  const int nx = grid.nx, ny = grid.ny;
  const double t = state.time;
  GhostedState g(grid);

  // x-velocity
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i <= nx; ++i) g.ux(i, j) = state.u.x(i, j);
  for (int j = 0; j < ny; ++j) {
    g.ux(-1, j) = bc.side(Side::Left) == BoundaryKind::NoSlip ? 2.0 * g.ux(0, j) - g.ux(1, j) : g.ux(0, j);
    g.ux(nx + 1, j) =
        bc.side(Side::Right) == BoundaryKind::NoSlip ? 2.0 * g.ux(nx, j) - g.ux(nx - 1, j) : g.ux(nx, j);
  }
  for (int i = -1; i <= nx + 1; ++i) {
    const double x = grid.lower.x() + i * grid.h;
    const double ub = wall_value(bc, Side::Bottom, Vec2(x, grid.lower.y()), t).x();
    const double ut = wall_value(bc, Side::Top, Vec2(x, grid.upper.y()), t).x();
    g.ux(i, -1) = 2.0 * ub - g.ux(i, 0);
    g.ux(i, ny) = 2.0 * ut - g.ux(i, ny - 1);
  }

  // y-velocity
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i < nx; ++i) g.uy(i, j) = state.u.y(i, j);
  for (int i = 0; i < nx; ++i) {
    g.uy(i, -1) = bc.side(Side::Bottom) == BoundaryKind::NoSlip ? 2.0 * g.uy(i, 0) - g.uy(i, 1) : g.uy(i, 0);
    g.uy(i, ny + 1) =
        bc.side(Side::Top) == BoundaryKind::NoSlip ? 2.0 * g.uy(i, ny) - g.uy(i, ny - 1) : g.uy(i, ny);
  }
  for (int j = -1; j <= ny + 1; ++j) {
    const double y = grid.lower.y() + j * grid.h;
    const double vl = wall_value(bc, Side::Left, Vec2(grid.lower.x(), y), t).y();
    const double vr = wall_value(bc, Side::Right, Vec2(grid.upper.x(), y), t).y();
    g.uy(-1, j) = 2.0 * vl - g.uy(0, j);
    g.uy(nx, j) = 2.0 * vr - g.uy(nx - 1, j);
  }

  // pressure
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) g.p(i, j) = state.pi(i, j);
  auto ghost_p = [&](Side s, double adjacent) {
    const int k = static_cast<int>(s);
    return bc.kind[k] == BoundaryKind::NoSlip ? adjacent : 2.0 * bc.traction[k] - adjacent;
  };
  for (int i = 0; i < nx; ++i) {
    g.p(i, -1) = ghost_p(Side::Bottom, g.p(i, 0));
    g.p(i, ny) = ghost_p(Side::Top, g.p(i, ny - 1));
  }
  for (int j = -1; j <= ny; ++j) {
    g.p(-1, j) = ghost_p(Side::Left, g.p(0, j));
    g.p(nx, j) = ghost_p(Side::Right, g.p(nx - 1, j));
  }
  return g;
}

FaceVectorField face_volumes(const GridSpec& grid) {
  const double h2 = grid.h * grid.h;
  FaceVectorField v(grid, h2, h2);
  for (int j = 0; j < grid.ny; ++j) {
    v.x(0, j) = 0.5 * h2;
    v.x(grid.nx, j) = 0.5 * h2;
  }
  for (int i = 0; i < grid.nx; ++i) {
    v.y(i, 0) = 0.5 * h2;
    v.y(i, grid.ny) = 0.5 * h2;
  }
  return v;
}

FaceVectorField advection_term(const GhostedState& g, const BoundaryCondition& /*bc*/, Advection scheme) {
  const GridSpec& grid = g.grid();
  const int nx = grid.nx, ny = grid.ny;
  const double h = grid.h;
  FaceVectorField n(grid);
  if (scheme == Advection::None) return n;
  const bool upwind = scheme == Advection::Upwind;
  // Flux of transported quantity (values qa, qb on either side) by velocity a.
  auto flux = [upwind](double a, double qa, double qb) {
    const double q = upwind ? (a > 0.0 ? qa : qb) : 0.5 * (qa + qb);
    return a * q;
  };

  for (int j = 0; j < ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const double u0 = g.ux(i, j);
      const double fr = i == nx ? u0 * u0 : flux(0.5 * (u0 + g.ux(i + 1, j)), u0, g.ux(i + 1, j));
      const double fl = i == 0 ? u0 * u0 : flux(0.5 * (g.ux(i - 1, j) + u0), g.ux(i - 1, j), u0);
      const double vt = 0.5 * (g.uy(i - 1, j + 1) + g.uy(std::min(i, nx), j + 1));
      const double vb = 0.5 * (g.uy(i - 1, j) + g.uy(std::min(i, nx), j));
      const double gt = flux(vt, u0, g.ux(i, j + 1));
      const double gb = flux(vb, g.ux(i, j - 1), u0);
      const double dx = (i == 0 || i == nx) ? 0.5 * h : h;
      n.x(i, j) = (fr - fl) / dx + (gt - gb) / h;
    }

  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double v0 = g.uy(i, j);
      const double ft = j == ny ? v0 * v0 : flux(0.5 * (v0 + g.uy(i, j + 1)), v0, g.uy(i, j + 1));
      const double fb = j == 0 ? v0 * v0 : flux(0.5 * (g.uy(i, j - 1) + v0), g.uy(i, j - 1), v0);
      const double ur = 0.5 * (g.ux(i + 1, j - 1) + g.ux(i + 1, std::min(j, ny)));
      const double ul = 0.5 * (g.ux(i, j - 1) + g.ux(i, std::min(j, ny)));
      const double gr = flux(ur, v0, g.uy(i + 1, j));
      const double gl = flux(ul, g.uy(i - 1, j), v0);
      const double dy = (j == 0 || j == ny) ? 0.5 * h : h;
      n.y(i, j) = (ft - fb) / dy + (gr - gl) / h;
    }
  return n;
}

double kinetic_energy(const FaceVectorField& u, double rho) {
  const FaceVectorField v = face_volumes(u.grid());
  double e = 0.0;
  const auto ux = u.x_values();
  const auto vx = v.x_values();
  for (std::size_t k = 0; k < ux.size(); ++k) e += vx[k] * ux[k] * ux[k];
  const auto uy = u.y_values();
  const auto vy = v.y_values();
  for (std::size_t k = 0; k < uy.size(); ++k) e += vy[k] * uy[k] * uy[k];
  return 0.5 * rho * e;
}

// --- solver ------------------------------------------------------------------

struct FluidSolver::Impl {
  GridSpec grid;
  FluidProperties props;
  BoundaryCondition bc;
  FluidOptions options;

  // Unknown numbering per component; -1 marks a fixed (no-slip normal) face.
  std::vector<int> xid, yid;
  int nux = 0, nuy = 0;
  Vector vol_x, vol_y;
  SparseMatrix kx, ky;  // weighted Laplacian on unknowns
  SparseMatrix bx, by;  // h^2 div restricted to unknowns
  SparseMatrix bxt, byt;
  std::unique_ptr<CachedCholesky> lp_factor;
  bool singular = false;

  double factored_dt = -1.0;
  std::unique_ptr<CachedCholesky> ax_factor, ay_factor;

  Impl(const GridSpec& g, const FluidProperties& p, const BoundaryCondition& b, const FluidOptions& o)
      : grid(g), props(p), bc(b), options(o) {
    props.validate();
    number_unknowns();
    assemble_static();
  }

  bool fixed_x(int i) const {
    return (i == 0 && bc.side(Side::Left) == BoundaryKind::NoSlip) ||
           (i == grid.nx && bc.side(Side::Right) == BoundaryKind::NoSlip);
  }
  bool fixed_y(int j) const {
    return (j == 0 && bc.side(Side::Bottom) == BoundaryKind::NoSlip) ||
           (j == grid.ny && bc.side(Side::Top) == BoundaryKind::NoSlip);
  }

  void number_unknowns() {
    const FaceVectorField tmp(grid);
    xid.assign(grid.num_x_faces(), -1);
    yid.assign(grid.num_y_faces(), -1);
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i <= grid.nx; ++i)
        if (!fixed_x(i)) xid[tmp.x_index(i, j)] = nux++;
    for (int j = 0; j <= grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i)
        if (!fixed_y(j)) yid[tmp.y_index(i, j)] = nuy++;
  }

  Vec2 wall(Side s, const Vec2& x, double t) const { return wall_value(bc, s, x, t); }

  // Weighted flux-form Laplacian on x unknowns. Adds matrix entries when trip
  // is non-null and the boundary-data contribution at time t to affine.
  void laplacian_x(double t, std::vector<Eigen::Triplet<double>>* trip, Vector& affine) const {
    const FaceVectorField tmp(grid);
    const int nx = grid.nx, ny = grid.ny;
    affine = Vector::Zero(nux);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i <= nx; ++i) {
        const int row = xid[tmp.x_index(i, j)];
        if (row < 0) continue;
        const double c = (i == 0 || i == nx) ? 0.5 : 1.0;
        double diag = 0.0;
        for (int di : {-1, 1}) {
          const int ni = i + di;
          if (ni < 0 || ni > nx) continue;
          diag -= 1.0;
          const int col = xid[tmp.x_index(ni, j)];
          if (col >= 0) {
            if (trip) trip->emplace_back(row, col, 1.0);
          } else {
            const Side s = ni == 0 ? Side::Left : Side::Right;
            affine[row] += wall(s, grid.x_face(ni, j), t).x();
          }
        }
        const double x = grid.lower.x() + i * grid.h;
        for (int dj : {-1, 1}) {
          const int nj = j + dj;
          if (nj >= 0 && nj < ny) {
            diag -= c;
            if (trip) trip->emplace_back(row, xid[tmp.x_index(i, nj)], c);
          } else {
            diag -= 2.0 * c;
            const Side s = nj < 0 ? Side::Bottom : Side::Top;
            const double y = nj < 0 ? grid.lower.y() : grid.upper.y();
            affine[row] += 2.0 * c * wall(s, Vec2(x, y), t).x();
          }
        }
        if (trip) trip->emplace_back(row, row, diag);
      }
  }

  void laplacian_y(double t, std::vector<Eigen::Triplet<double>>* trip, Vector& affine) const {
    const FaceVectorField tmp(grid);
    const int nx = grid.nx, ny = grid.ny;
    affine = Vector::Zero(nuy);
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const int row = yid[tmp.y_index(i, j)];
        if (row < 0) continue;
        const double c = (j == 0 || j == ny) ? 0.5 : 1.0;
        double diag = 0.0;
        for (int dj : {-1, 1}) {
          const int nj = j + dj;
          if (nj < 0 || nj > ny) continue;
          diag -= 1.0;
          const int col = yid[tmp.y_index(i, nj)];
          if (col >= 0) {
            if (trip) trip->emplace_back(row, col, 1.0);
          } else {
            const Side s = nj == 0 ? Side::Bottom : Side::Top;
            affine[row] += wall(s, grid.y_face(i, nj), t).y();
          }
        }
        const double y = grid.lower.y() + j * grid.h;
        for (int di : {-1, 1}) {
          const int ni = i + di;
          if (ni >= 0 && ni < nx) {
            diag -= c;
            if (trip) trip->emplace_back(row, yid[tmp.y_index(ni, j)], c);
          } else {
            diag -= 2.0 * c;
            const Side s = ni < 0 ? Side::Left : Side::Right;
            const double x = ni < 0 ? grid.lower.x() : grid.upper.x();
            affine[row] += 2.0 * c * wall(s, Vec2(x, y), t).y();
          }
        }
        if (trip) trip->emplace_back(row, row, diag);
      }
  }

  void assemble_static() {
    const FaceVectorField tmp(grid);
    const FaceVectorField vol = face_volumes(grid);
    const int nx = grid.nx, ny = grid.ny;
    const double h = grid.h;
    vol_x.resize(nux);
    vol_y.resize(nuy);
    std::vector<Eigen::Triplet<double>> tb;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i <= nx; ++i) {
        const int k = xid[tmp.x_index(i, j)];
        if (k < 0) continue;
        vol_x[k] = vol.x(i, j);
        if (i > 0) tb.emplace_back(i - 1 + nx * j, k, h);
        if (i < nx) tb.emplace_back(i + nx * j, k, -h);
      }
    bx.resize(grid.num_cells(), nux);
    bx.setFromTriplets(tb.begin(), tb.end());
    tb.clear();
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const int k = yid[tmp.y_index(i, j)];
        if (k < 0) continue;
        vol_y[k] = vol.y(i, j);
        if (j > 0) tb.emplace_back(i + nx * (j - 1), k, h);
        if (j < ny) tb.emplace_back(i + nx * j, k, -h);
      }
    by.resize(grid.num_cells(), nuy);
    by.setFromTriplets(tb.begin(), tb.end());
    bxt = bx.transpose();
    byt = by.transpose();

    std::vector<Eigen::Triplet<double>> tk;
    Vector aff;
    laplacian_x(0.0, &tk, aff);
    kx.resize(nux, nux);
    kx.setFromTriplets(tk.begin(), tk.end());
    tk.clear();
    laplacian_y(0.0, &tk, aff);
    ky.resize(nuy, nuy);
    ky.setFromTriplets(tk.begin(), tk.end());

    // Pressure Laplacian B V^{-1} B^T for the Schur preconditioner.
    SparseMatrix lp = SparseMatrix(bx * vol_x.cwiseInverse().asDiagonal() * bxt) +
                      SparseMatrix(by * vol_y.cwiseInverse().asDiagonal() * byt);
    singular = bc.all_no_slip();
    if (singular) lp.coeffRef(0, 0) += 1.0;
    lp.makeCompressed();
    lp_factor = std::make_unique<CachedCholesky>(lp);
  }

  void factor(double dt) {
    if (dt == factored_dt) return;
    const double a = props.rho / dt;
    SparseMatrix ax = SparseMatrix(a * SparseMatrix(vol_x.asDiagonal())) - 0.5 * props.mu * kx;
    SparseMatrix ay = SparseMatrix(a * SparseMatrix(vol_y.asDiagonal())) - 0.5 * props.mu * ky;
    ax_factor = std::make_unique<CachedCholesky>(ax);
    ay_factor = std::make_unique<CachedCholesky>(ay);
    factored_dt = dt;
  }

  void remove_mean(Vector& v) const {
    if (singular) v.array() -= v.mean();
  }

  StepReport advance(FluidState& state, const FaceVectorField& f, const CellScalarField* q, double dt) {
    const auto start = std::chrono::steady_clock::now();
    if (!(dt > 0.0)) throw Error("FluidSolver::advance: dt must be positive");
    if (!(state.u.grid() == grid) || !(f.grid() == grid)) throw Error("FluidSolver::advance: grid mismatch");
    const double umax0 = state.u.max_abs();
    if (options.check_cfl && umax0 * dt / grid.h > 1.0) {
      std::ostringstream msg;
      msg << "CFL number " << umax0 * dt / grid.h << " exceeds 1 at t = " << state.time;
      throw CflViolation(msg.str());
    }
    factor(dt);

    const FaceVectorField tmp(grid);
    const int nx = grid.nx, ny = grid.ny;
    const double h = grid.h;
    const double t0 = state.time;
    const double t1 = state.time + dt;

    // Advection (AB2, forward Euler on the first step).
    FaceVectorField adv(grid);
    if (options.advection != Advection::None) {
      adv = advection_term(apply_boundary_conditions(state, bc), bc, options.advection);
    }
    FaceVectorField adv_star = adv;
    if (state.prev_advection && options.advection != Advection::None) {
      adv_star = 1.5 * adv - 0.5 * (*state.prev_advection);
    }

    // Gather unknown vectors.
    Vector ux(nux), uy(nuy), fx(nux), fy(nuy), nxv(nux), nyv(nuy);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i <= nx; ++i) {
        const int k = xid[tmp.x_index(i, j)];
        if (k < 0) continue;
        ux[k] = state.u.x(i, j);
        fx[k] = f.x(i, j);
        nxv[k] = adv_star.x(i, j);
      }
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const int k = yid[tmp.y_index(i, j)];
        if (k < 0) continue;
        uy[k] = state.u.y(i, j);
        fy[k] = f.y(i, j);
        nyv[k] = adv_star.y(i, j);
      }

    Vector aff0x, aff1x, aff0y, aff1y;
    laplacian_x(t0, nullptr, aff0x);
    laplacian_x(t1, nullptr, aff1x);
    laplacian_y(t0, nullptr, aff0y);
    laplacian_y(t1, nullptr, aff1y);

    const double a = props.rho / dt;
    const double m2 = 0.5 * props.mu;
    Vector rx = a * vol_x.cwiseProduct(ux) + m2 * (kx * ux + aff0x + aff1x) + vol_x.cwiseProduct(fx - nxv);
    Vector ry = a * vol_y.cwiseProduct(uy) + m2 * (ky * uy + aff0y + aff1y) + vol_y.cwiseProduct(fy - nyv);

    // Traction pressure on boundary normal faces.
    for (int j = 0; j < ny; ++j) {
      if (bc.side(Side::Left) == BoundaryKind::TractionOpen)
        rx[xid[tmp.x_index(0, j)]] += h * bc.traction[static_cast<int>(Side::Left)];
      if (bc.side(Side::Right) == BoundaryKind::TractionOpen)
        rx[xid[tmp.x_index(nx, j)]] -= h * bc.traction[static_cast<int>(Side::Right)];
    }
    for (int i = 0; i < nx; ++i) {
      if (bc.side(Side::Bottom) == BoundaryKind::TractionOpen)
        ry[yid[tmp.y_index(i, 0)]] += h * bc.traction[static_cast<int>(Side::Bottom)];
      if (bc.side(Side::Top) == BoundaryKind::TractionOpen)
        ry[yid[tmp.y_index(i, ny)]] -= h * bc.traction[static_cast<int>(Side::Top)];
    }

    // Continuity right-hand side h^2 q minus fixed normal faces.
    Vector g = Vector::Zero(grid.num_cells());
    if (q) {
      const auto qv = q->values();
      for (int c = 0; c < grid.num_cells(); ++c) g[c] = h * h * qv[c];
    }
    FaceVectorField fixed(grid);
    for (int j = 0; j < ny; ++j) {
      if (fixed_x(0)) {
        fixed.x(0, j) = wall(Side::Left, grid.x_face(0, j), t1).x();
        g[nx * j] += h * fixed.x(0, j);
      }
      if (fixed_x(nx)) {
        fixed.x(nx, j) = wall(Side::Right, grid.x_face(nx, j), t1).x();
        g[nx - 1 + nx * j] -= h * fixed.x(nx, j);
      }
    }
    for (int i = 0; i < nx; ++i) {
      if (fixed_y(0)) {
        fixed.y(i, 0) = wall(Side::Bottom, grid.y_face(i, 0), t1).y();
        g[i] += h * fixed.y(i, 0);
      }
      if (fixed_y(ny)) {
        fixed.y(i, ny) = wall(Side::Top, grid.y_face(i, ny), t1).y();
        g[i + nx * (ny - 1)] -= h * fixed.y(i, ny);
      }
    }

    // Schur complement S pi = g - B A^{-1} r.
    const Vector wx = ax_factor->solve(rx);
    const Vector wy = ay_factor->solve(ry);
    Vector b = g - bx * wx - by * wy;
    remove_mean(b);

    auto apply_s = [&](const Vector& p, Vector& out) {
      out = bx * ax_factor->solve(bxt * p) + by * ay_factor->solve(byt * p);
      remove_mean(out);
    };
    const double c_mass = props.rho / dt;
    const double c_visc = props.mu / (2.0 * h * h);
    auto apply_m = [&](const Vector& r, Vector& out) {
      Vector rr = r;
      remove_mean(rr);
      out = c_mass * lp_factor->solve(rr) + c_visc * rr;
      remove_mean(out);
    };

    Vector pi(grid.num_cells());
    {
      const auto pv = state.pi.values();
      for (int c = 0; c < grid.num_cells(); ++c) pi[c] = pv[c];
    }
    remove_mean(pi);
    const int cap = options.max_iterations > 0 ? options.max_iterations : 10 * std::max(nx, ny);
    const KrylovReport kr = preconditioned_cg(apply_s, apply_m, b, pi, options.tolerance, cap, "fluid Schur solve");
    remove_mean(pi);

    const Vector ux1 = ax_factor->solve(rx + bxt * pi);
    const Vector uy1 = ay_factor->solve(ry + byt * pi);

    for (int j = 0; j < ny; ++j)
      for (int i = 0; i <= nx; ++i) {
        const int k = xid[tmp.x_index(i, j)];
        state.u.x(i, j) = k >= 0 ? ux1[k] : fixed.x(i, j);
      }
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const int k = yid[tmp.y_index(i, j)];
        state.u.y(i, j) = k >= 0 ? uy1[k] : fixed.y(i, j);
      }
    {
      auto pv = state.pi.values();
      for (int c = 0; c < grid.num_cells(); ++c) pv[c] = pi[c];
    }
    state.time = t1;
    if (options.advection != Advection::None) state.prev_advection = adv;

    StepReport report;
    report.iterations = kr.iterations;
    report.relative_residual = kr.relative_residual;
    report.max_velocity = state.u.max_abs();
    CellScalarField d = divergence(state.u);
    if (q) d -= *q;
    report.divergence_error = d.max_abs();
    report.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return report;
  }
};

FluidSolver::FluidSolver(const GridSpec& grid, const FluidProperties& props, const BoundaryCondition& bc,
                         const FluidOptions& options)
    : impl_(std::make_unique<Impl>(grid, props, bc, options)) {}

FluidSolver::~FluidSolver() = default;
FluidSolver::FluidSolver(FluidSolver&&) noexcept = default;
FluidSolver& FluidSolver::operator=(FluidSolver&&) noexcept = default;

StepReport FluidSolver::advance(FluidState& state, const FaceVectorField& f, const CellScalarField* q, double dt) {
  return impl_->advance(state, f, q, dt);
}

const GridSpec& FluidSolver::grid() const { return impl_->grid; }
const BoundaryCondition& FluidSolver::boundary() const { return impl_->bc; }
const FluidProperties& FluidSolver::properties() const { return impl_->props; }

FluidState advance(const FluidState& state, const FaceVectorField& f, const DivergenceSource* q,
                   const FluidProperties& props, const BoundaryCondition& bc, double dt, const FluidOptions& options) {
  FluidSolver solver(state.u.grid(), props, bc, options);
  FluidState next = state;
  solver.advance(next, f, q ? &q->q : nullptr, dt);
  return next;
}

DiagnosticsLog::DiagnosticsLog(const std::string& path) : out_(path) {
  if (!out_) throw Error("cannot open diagnostics log '" + path + "'");
  out_ << "time,max_u,div_error,krylov_iterations,wall_ms\n";
  out_ << std::setprecision(17);
}

void DiagnosticsLog::append(double time, const StepReport& report) {
  out_ << time << ',' << report.max_velocity << ',' << report.divergence_error << ',' << report.iterations << ','
       << report.wall_ms << '\n';
  out_.flush();
}

}  // namespace sharpib
