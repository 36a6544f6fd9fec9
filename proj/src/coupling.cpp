#include "sharpib/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sharpib/errors.hpp"

namespace sharpib {

const char* to_string(KernelType type) {
  switch (type) {
    case KernelType::IB4: return "ib4";
    case KernelType::Cosine: return "cosine";
    case KernelType::PiecewiseLinear: return "piecewise_linear";
  }
  return "unknown";
}

KernelType kernel_from_string(const std::string& name) {
  if (name == "ib4" || name == "IB4") return KernelType::IB4;
  if (name == "cosine") return KernelType::Cosine;
  if (name == "piecewise_linear" || name == "linear") return KernelType::PiecewiseLinear;
  throw ConfigError("unknown kernel '" + name + "'");
}

double ib4_kernel(double r) {
  r = std::abs(r);
  if (r < 1.0) return 0.125 * (3.0 - 2.0 * r + std::sqrt(1.0 + 4.0 * r - 4.0 * r * r));
  if (r < 2.0) return 0.125 * (5.0 - 2.0 * r - std::sqrt(std::max(0.0, -7.0 + 12.0 * r - 4.0 * r * r)));
  return 0.0;
}

double piecewise_linear_kernel(double r) {
  r = std::abs(r);
  return r < 1.0 ? 1.0 - r : 0.0;
}

double DeltaKernel::weight(double r, double h) const {
  switch (type) {
    case KernelType::IB4: return ib4_kernel(r);
    case KernelType::PiecewiseLinear: return piecewise_linear_kernel(r);
    case KernelType::Cosine: {
      const double x = std::abs(r) * h;
      if (x >= radius) return 0.0;
      return h * (1.0 + std::cos(std::numbers::pi * x / radius)) / (2.0 * radius);
    }
  }
  return 0.0;
}

int DeltaKernel::half_width(double h) const {
  switch (type) {
    case KernelType::IB4: return 2;
    case KernelType::PiecewiseLinear: return 1;
    case KernelType::Cosine: return static_cast<int>(std::ceil(radius / h));
  }
  return 2;
}

namespace {

struct Stencil {
  int i0 = 0;
  int j0 = 0;
  int width = 0;
  double wx[64];
  double wy[64];
};

// Kernel weights for a point at p against a lattice whose node (i, j) sits at
// origin + (i, j) h.
Stencil make_stencil(const Vec2& p, const Vec2& origin, double h, const DeltaKernel& k) {
  Stencil s;
  const int hw = k.half_width(h);
  s.width = 2 * hw;
  if (s.width > 64) throw Error("DeltaKernel: support too wide for the grid spacing");
  const double fx = (p.x() - origin.x()) / h;
  const double fy = (p.y() - origin.y()) / h;
  s.i0 = static_cast<int>(std::floor(fx)) - hw + 1;
  s.j0 = static_cast<int>(std::floor(fy)) - hw + 1;
  for (int a = 0; a < s.width; ++a) {
    s.wx[a] = k.weight(fx - (s.i0 + a), h);
    s.wy[a] = k.weight(fy - (s.j0 + a), h);
  }
  return s;
}

void check_range(Stencil& s, int ni, int nj, const Vec2& p, bool clip) {
  if (clip) {
    for (int a = 0; a < s.width; ++a) {
      if (s.i0 + a < 0 || s.i0 + a >= ni) s.wx[a] = 0.0;
      if (s.j0 + a < 0 || s.j0 + a >= nj) s.wy[a] = 0.0;
    }
    return;
  }
  if (s.i0 < 0 || s.j0 < 0 || s.i0 + s.width > ni || s.j0 + s.width > nj) {
    std::ostringstream msg;
    msg << "kernel support around (" << p.x() << ", " << p.y() << ") leaves the grid";
    throw PointOutOfDomain(msg.str());
  }
}

Vec2 x_face_origin(const GridSpec& g) { return Vec2(g.lower.x(), g.lower.y() + 0.5 * g.h); }
Vec2 y_face_origin(const GridSpec& g) { return Vec2(g.lower.x() + 0.5 * g.h, g.lower.y()); }

}  // namespace

InteractionPoints make_interaction_points(const SolidMesh& mesh, double h, int min_order) {
  InteractionPoints pts;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto xe = mesh.element_position(e);
    double longest = 0.0;
    for (int a = 0; a < 4; ++a) longest = std::max(longest, (xe[(a + 1) % 4] - xe[a]).norm());
    longest = std::max({longest, (xe[2] - xe[0]).norm() / std::sqrt(2.0), (xe[3] - xe[1]).norm() / std::sqrt(2.0)});
    const int order = std::clamp(static_cast<int>(std::ceil(2.0 * longest / h)), min_order, 24);
    const GaussRule& g = GaussRule::legendre(order);
    for (int i = 0; i < order; ++i)
      for (int j = 0; j < order; ++j) {
        const Vec2 xi(g.points[i], g.points[j]);
        const ElementPoint p = evaluate_element(mesh, e, xi);
        pts.x.push_back(p.x);
        pts.w.push_back(g.weights[i] * g.weights[j] * p.detJ_ref);
        pts.element.push_back(e);
        pts.xi.push_back(xi);
      }
  }
  return pts;
}

std::vector<Vec2> evaluate_at_points(const SolidMesh& mesh, const std::vector<Vec2>& nodal,
                                     const InteractionPoints& points) {
  std::vector<Vec2> out(points.size());
  for (std::size_t q = 0; q < points.size(); ++q) {
    const auto N = q1::shape(points.xi[q]);
    const Quad& el = mesh.elements[points.element[q]];
    Vec2 v = Vec2::Zero();
    for (int a = 0; a < 4; ++a) v += N[a] * nodal[el[a]];
    out[q] = v;
  }
  return out;
}

FaceVectorField spread(const InteractionPoints& points, const std::vector<Vec2>& forces, const DeltaKernel& kernel,
                       const GridSpec& grid) {
  if (forces.size() != points.size()) throw Error("spread: force count does not match point count");
  FaceVectorField f(grid);
  const double inv_h2 = 1.0 / (grid.h * grid.h);
  const Vec2 ox = x_face_origin(grid);
  const Vec2 oy = y_face_origin(grid);
  for (std::size_t q = 0; q < points.size(); ++q) {
    const Vec2 F = forces[q] * (points.w[q] * inv_h2);
    Stencil sx = make_stencil(points.x[q], ox, grid.h, kernel);
    check_range(sx, grid.nx + 1, grid.ny, points.x[q], kernel.clip_to_grid);
    for (int b = 0; b < sx.width; ++b)
      for (int a = 0; a < sx.width; ++a)
        if (sx.wx[a] != 0.0 && sx.wy[b] != 0.0) f.x(sx.i0 + a, sx.j0 + b) += F.x() * sx.wx[a] * sx.wy[b];
    Stencil sy = make_stencil(points.x[q], oy, grid.h, kernel);
    check_range(sy, grid.nx, grid.ny + 1, points.x[q], kernel.clip_to_grid);
    for (int b = 0; b < sy.width; ++b)
      for (int a = 0; a < sy.width; ++a)
        if (sy.wx[a] != 0.0 && sy.wy[b] != 0.0) f.y(sy.i0 + a, sy.j0 + b) += F.y() * sy.wx[a] * sy.wy[b];
  }
  return f;
}

std::vector<Vec2> interpolate(const FaceVectorField& u, const std::vector<Vec2>& x, const DeltaKernel& kernel) {
  const GridSpec& grid = u.grid();
  const Vec2 ox = x_face_origin(grid);
  const Vec2 oy = y_face_origin(grid);
  std::vector<Vec2> out(x.size());
  for (std::size_t q = 0; q < x.size(); ++q) {
    double vx = 0.0, vy = 0.0;
    Stencil sx = make_stencil(x[q], ox, grid.h, kernel);
    check_range(sx, grid.nx + 1, grid.ny, x[q], kernel.clip_to_grid);
    for (int b = 0; b < sx.width; ++b)
      for (int a = 0; a < sx.width; ++a)
        if (sx.wx[a] != 0.0 && sx.wy[b] != 0.0) vx += u.x(sx.i0 + a, sx.j0 + b) * sx.wx[a] * sx.wy[b];
    Stencil sy = make_stencil(x[q], oy, grid.h, kernel);
    check_range(sy, grid.nx, grid.ny + 1, x[q], kernel.clip_to_grid);
    for (int b = 0; b < sy.width; ++b)
      for (int a = 0; a < sy.width; ++a)
        if (sy.wx[a] != 0.0 && sy.wy[b] != 0.0) vy += u.y(sy.i0 + a, sy.j0 + b) * sy.wx[a] * sy.wy[b];
    out[q] = Vec2(vx, vy);
  }
  return out;
}

std::vector<double> interpolate(const CellScalarField& p, const std::vector<Vec2>& x, const DeltaKernel& kernel) {
  const GridSpec& grid = p.grid();
  const Vec2 origin = grid.lower + Vec2::Constant(0.5 * grid.h);
  std::vector<double> out(x.size());
  for (std::size_t q = 0; q < x.size(); ++q) {
    Stencil s = make_stencil(x[q], origin, grid.h, kernel);
    check_range(s, grid.nx, grid.ny, x[q], kernel.clip_to_grid);
    double v = 0.0;
    for (int b = 0; b < s.width; ++b)
      for (int a = 0; a < s.width; ++a)
        if (s.wx[a] != 0.0 && s.wy[b] != 0.0) v += p(s.i0 + a, s.j0 + b) * s.wx[a] * s.wy[b];
    out[q] = v;
  }
  return out;
}

std::vector<Vec2> interpolate(const FaceVectorField& u, const InteractionPoints& points, const DeltaKernel& kernel) {
  return interpolate(u, points.x, kernel);
}

std::vector<Vec2> project_nodal_velocity(const std::vector<Vec2>& point_velocity, const InteractionPoints& points,
                                         const SolidMesh& mesh, const MassMatrix& mass) {
  if (point_velocity.size() != points.size()) throw Error("project_nodal_velocity: size mismatch");
  std::vector<Vec2> rhs(mesh.num_nodes(), Vec2::Zero());
  for (std::size_t q = 0; q < points.size(); ++q) {
    const auto N = q1::shape(points.xi[q]);
    const Quad& el = mesh.elements[points.element[q]];
    for (int a = 0; a < 4; ++a) rhs[el[a]] += (N[a] * points.w[q]) * point_velocity[q];
  }
  return mass.solve(rhs);
}

}  // namespace sharpib
