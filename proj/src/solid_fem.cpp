#include "sharpib/solid_fem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sharpib/errors.hpp"

namespace sharpib {

const char* to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Inner: return "inner";
    case BoundaryTag::Outer: return "outer";
    case BoundaryTag::Bottom: return "bottom";
    case BoundaryTag::Top: return "top";
    case BoundaryTag::Left: return "left";
    case BoundaryTag::Right: return "right";
  }
  return "unknown";
}

// --- Q1 basis ----------------------------------------------------------------

namespace q1 {

const std::array<Vec2, 4>& corners() {
  static const std::array<Vec2, 4> c{Vec2(-1, -1), Vec2(1, -1), Vec2(1, 1), Vec2(-1, 1)};
  return c;
}

std::array<double, 4> shape(const Vec2& xi) {
  const auto& c = corners();
  std::array<double, 4> n{};
  for (int a = 0; a < 4; ++a) n[a] = 0.25 * (1.0 + c[a].x() * xi.x()) * (1.0 + c[a].y() * xi.y());
  return n;
}

std::array<Vec2, 4> shape_grad(const Vec2& xi) {
  const auto& c = corners();
  std::array<Vec2, 4> g{};
  for (int a = 0; a < 4; ++a)
    g[a] = Vec2(0.25 * c[a].x() * (1.0 + c[a].y() * xi.y()), 0.25 * c[a].y() * (1.0 + c[a].x() * xi.x()));
  return g;
}

}  // namespace q1

const GaussRule& GaussRule::legendre(int n) {
  constexpr int kMax = 24;
  if (n < 1 || n > kMax) throw Error("GaussRule: order must be in [1, 24]");
  static const std::vector<GaussRule> rules = [] {
    std::vector<GaussRule> out(kMax + 1);
    for (int m = 1; m <= kMax; ++m) {
      GaussRule& r = out[m];
      r.points.resize(m);
      r.weights.resize(m);
      for (int k = 0; k < m; ++k) {
        // Newton iteration on P_m from the Chebyshev-like initial guess.
        double x = std::cos(std::numbers::pi * (k + 0.75) / (m + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
          double p0 = 1.0, p1 = x;
          for (int j = 2; j <= m; ++j) {
            const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
          }
          const double pm = m == 1 ? x : p1;
          const double pm1 = m == 1 ? 1.0 : p0;
          dp = m * (x * pm - pm1) / (x * x - 1.0);
          const double dx = pm / dp;
          x -= dx;
          if (std::abs(dx) < 1e-16) break;
        }
        r.points[m - 1 - k] = x;
        r.weights[m - 1 - k] = 2.0 / ((1.0 - x * x) * dp * dp);
      }
    }
    return out;
  }();
  return rules[n];
}

// --- mesh --------------------------------------------------------------------

std::array<Vec2, 4> SolidMesh::element_position(int e) const {
  const Quad& q = elements[e];
  return {position[q[0]], position[q[1]], position[q[2]], position[q[3]]};
}

void SolidMesh::validate() const {
  const int nn = num_nodes();
  if (static_cast<int>(position.size()) != nn) throw Error("SolidMesh: position/reference size mismatch");
  if (element_reference.size() != elements.size()) throw Error("SolidMesh: element_reference size mismatch");
  for (const Quad& q : elements)
    for (int a : q)
      if (a < 0 || a >= nn) throw Error("SolidMesh: element references a missing node");
  const GaussRule& g = GaussRule::legendre(2);
  for (int e = 0; e < num_elements(); ++e) {
    for (double xi : g.points)
      for (double eta : g.points) evaluate_element(*this, e, Vec2(xi, eta));
  }
  for (const Vec2& x : position)
    if (!x.allFinite()) throw Error("SolidMesh: non-finite nodal position");
}

std::vector<int> SolidMesh::boundary_nodes() const {
  std::vector<int> nodes;
  nodes.reserve(2 * boundary.size());
  for (const BoundaryEdge& b : boundary) {
    nodes.push_back(b.node_a);
    nodes.push_back(b.node_b);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

ElementPoint evaluate_element(const SolidMesh& mesh, int e, const Vec2& xi) {
  ElementPoint p;
  p.N = q1::shape(xi);
  const auto dN = q1::shape_grad(xi);
  const auto& Xe = mesh.element_reference[e];
  const Quad& q = mesh.elements[e];
  Mat2 dX_dxi = Mat2::Zero();
  for (int a = 0; a < 4; ++a) {
    dX_dxi += Xe[a] * dN[a].transpose();
    p.X += p.N[a] * Xe[a];
    p.x += p.N[a] * mesh.position[q[a]];
  }
  p.detJ_ref = dX_dxi.determinant();
  if (!(p.detJ_ref > 0.0)) {
    std::ostringstream msg;
    msg << "element " << e << ": det(dX/dxi) = " << p.detJ_ref;
    throw DegenerateElement(msg.str());
  }
  const Mat2 inv_t = dX_dxi.inverse().transpose();
  p.F.setZero();
  for (int a = 0; a < 4; ++a) {
    p.dN_dX[a] = inv_t * dN[a];
    p.F += mesh.position[q[a]] * p.dN_dX[a].transpose();
  }
  return p;
}

Kinematics make_kinematics(const Mat2& F, const Vec2& X, const Vec2& x) {
  Kinematics k;
  k.F = F;
  k.J = F.determinant();
  if (!(k.J > 0.0)) {
    std::ostringstream msg;
    msg << "J = " << k.J << " at X = (" << X.x() << ", " << X.y() << ")";
    throw InvertedElement(msg.str());
  }
  // Explicit 2x2 inverse transpose.
  k.FinvT << F(1, 1), -F(1, 0), -F(0, 1), F(0, 0);
  k.FinvT /= k.J;
  k.X = X;
  k.x = x;
  return k;
}

Kinematics deformation_gradient(const SolidMesh& mesh, int e, const Vec2& xi) {
  const ElementPoint p = evaluate_element(mesh, e, xi);
  return make_kinematics(p.F, p.X, p.x);
}

// --- constitutive models -----------------------------------------------------

void validate(const ConstitutiveModel& model) {
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if (!(m.mu_e >= 0.0)) throw ConfigError("constitutive model: mu_e must be non-negative");
        if constexpr (std::is_same_v<T, CurvilinearRing>) {
          if (!(m.w > 0.0)) throw ConfigError("CurvilinearRing: w must be positive");
        } else if constexpr (std::is_same_v<T, StabilizedNeoHookeanBlock>) {
          if (!(m.nu < 0.5)) throw ConfigError("StabilizedNeoHookeanBlock: nu must be < 0.5");
        }
      },
      model);
}

Mat2 givens(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Mat2 g;
  g << c, -s, s, c;
  return g;
}

Mat2 polar_deformation_gradient(const Mat2& F_cart, const Vec2& X, const Vec2& x, const Vec2& center) {
  const Vec2 dX = X - center;
  const Vec2 dx = x - center;
  const double R = dX.norm();
  const double Theta = std::atan2(dX.y(), dX.x());
  const double r = dx.norm();
  const double theta = std::atan2(dx.y(), dx.x());
  const double c = std::cos(theta), s = std::sin(theta);
  Mat2 dp_dx;
  dp_dx << c, s, -s / r, c / r;
  Mat2 dX_dP;
  dX_dP << std::cos(Theta), -R * std::sin(Theta), std::sin(Theta), R * std::cos(Theta);
  return dp_dx * F_cart * dX_dP;
}

Mat2 polar_to_cartesian_stress(const Mat2& P_polar, const Mat2& F_polar, const Mat2& F_cart, double theta) {
  const Mat2 g = givens(theta);
  const Mat2 sigma_cart = g * (P_polar * F_polar.transpose()) * g.transpose();
  return sigma_cart * F_cart.inverse().transpose();
}

Mat2 cartesian_to_polar_stress(const Mat2& P_cart, const Mat2& F_polar, const Mat2& F_cart, double theta) {
  const Mat2 g = givens(theta);
  const Mat2 sigma_polar = g.transpose() * (P_cart * F_cart.transpose()) * g;
  return sigma_polar * F_polar.inverse().transpose();
}

Mat2 first_piola_kirchhoff(const ConstitutiveModel& model, const Kinematics& kin) {
  return std::visit(
      [&](const auto& m) -> Mat2 {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, CurvilinearRing>) {
          return (m.mu_e / m.w) * kin.F;
        } else if constexpr (std::is_same_v<T, PolarNeoHookeanRing>) {
          const Mat2 Fp = polar_deformation_gradient(kin.F, kin.X, kin.x, m.center);
          const Mat2 Pp = m.mu_e * (Fp - Fp.inverse().transpose());
          const Vec2 dx = kin.x - m.center;
          return polar_to_cartesian_stress(Pp, Fp, kin.F, std::atan2(dx.y(), dx.x()));
        } else {
          const double I1 = (kin.F.transpose() * kin.F).trace();
          return m.mu_e * std::pow(kin.J, -2.0 / 3.0) * (kin.F - (I1 / 3.0) * kin.FinvT) +
                 m.lambda() * std::log(kin.J) * kin.FinvT;
        }
      },
      model);
}

double block_strain_energy(const StabilizedNeoHookeanBlock& model, const Mat2& F) {
  const double J = F.determinant();
  if (!(J > 0.0)) throw InvertedElement("block_strain_energy: J <= 0");
  const double I1 = (F.transpose() * F).trace();
  const double lj = std::log(J);
  return 0.5 * model.mu_e * (std::pow(J, -2.0 / 3.0) * I1 - 3.0) + 0.5 * model.lambda() * lj * lj;
}

// --- surface loads -----------------------------------------------------------

void validate(const SurfaceLoad& load) {
  std::visit(
      [](const auto& l) {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, TetherTop> || std::is_same_v<T, TetherBottom>) {
          if (!(l.kappa >= 0.0)) throw ConfigError("tether: kappa must be non-negative");
        } else {
          if (!(l.p_max >= 0.0)) throw ConfigError("load pressure: p_max must be non-negative");
          if (!(l.t_load > 0.0)) throw ConfigError("load pressure: t_load must be positive");
          if (!(l.a < l.b)) throw ConfigError("load pressure: a must be less than b");
        }
      },
      load);
}

double ramp_pressure(double p_max, double t_load, double t) {
  return t < t_load ? (t / t_load) * p_max : p_max;
}

double smooth_load_profile(double X1, double a, double b) {
  if (!(X1 > a && X1 < b)) return 0.0;
  const double d2 = (b - a) * (b - a);
  const double s = 2.0 * X1 - a - b;
  return std::exp(d2 / (s * s - d2) + 1.0);
}

Vec2 surface_force_density(const SurfaceLoad& load, BoundaryTag tag, const Vec2& X, const Vec2& x, double t) {
  return std::visit(
      [&](const auto& l) -> Vec2 {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, TetherTop>) {
          if (tag != BoundaryTag::Top) return Vec2::Zero();
          const Vec2 f = l.kappa * (X - x);
          return Vec2(f.x(), 0.0);
        } else if constexpr (std::is_same_v<T, TetherBottom>) {
          if (tag != BoundaryTag::Bottom) return Vec2::Zero();
          const Vec2 f = l.kappa * (X - x);
          return Vec2(0.0, f.y());
        } else if constexpr (std::is_same_v<T, LoadPressureSmooth>) {
          if (tag != BoundaryTag::Top) return Vec2::Zero();
          const double p = ramp_pressure(l.p_max, l.t_load, t) * smooth_load_profile(X.x() - l.x_origin, l.a, l.b);
          return Vec2(0.0, -p);
        } else {
          if (tag != BoundaryTag::Top) return Vec2::Zero();
          const double X1 = X.x() - l.x_origin;
          const double p = (X1 > l.a && X1 < l.b) ? ramp_pressure(l.p_max, l.t_load, t) : 0.0;
          return Vec2(0.0, -p);
        }
      },
      load);
}

Vec2 surface_force_density(const std::vector<SurfaceLoad>& loads, BoundaryTag tag, const Vec2& X, const Vec2& x,
                           double t) {
  Vec2 f = Vec2::Zero();
  for (const SurfaceLoad& l : loads) f += surface_force_density(l, tag, X, x, t);
  return f;
}

namespace {

// Accumulates  int F_surf . N_a dA  along boundary edges.
void add_boundary_loads(const SolidMesh& mesh, const std::vector<SurfaceLoad>& loads, double t,
                        std::vector<Vec2>& rhs) {
  if (loads.empty()) return;
  const GaussRule& g = GaussRule::legendre(std::max(mesh.quadrature_order, 2) + 2);
  for (const BoundaryEdge& be : mesh.boundary) {
    const int la = be.local_edge;
    const int lb = (la + 1) % 4;
    const Vec2 Xa = mesh.element_reference[be.element][la];
    const Vec2 Xb = mesh.element_reference[be.element][lb];
    const Vec2 xa = mesh.position[be.node_a];
    const Vec2 xb = mesh.position[be.node_b];
    const double half_len = 0.5 * (Xb - Xa).norm();
    for (std::size_t k = 0; k < g.points.size(); ++k) {
      const double na = 0.5 * (1.0 - g.points[k]);
      const double nb = 0.5 * (1.0 + g.points[k]);
      const Vec2 X = na * Xa + nb * Xb;
      const Vec2 x = na * xa + nb * xb;
      const Vec2 f = surface_force_density(loads, be.tag, X, x, t) * (g.weights[k] * half_len);
      rhs[be.node_a] += na * f;
      rhs[be.node_b] += nb * f;
    }
  }
}

}  // namespace

std::vector<Vec2> tether_and_load_forces(const SurfaceLoad& load, const SolidMesh& mesh, double t) {
  std::vector<Vec2> rhs(mesh.num_nodes(), Vec2::Zero());
  add_boundary_loads(mesh, {load}, t, rhs);
  return rhs;
}

// --- mass matrix -------------------------------------------------------------

SparseMatrix assemble_mass_matrix(const SolidMesh& mesh, bool lumped) {
  const int n = mesh.num_nodes();
  const GaussRule& g = GaussRule::legendre(std::max(mesh.quadrature_order, 3));
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(16 * mesh.elements.size());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    Eigen::Matrix4d me = Eigen::Matrix4d::Zero();
    for (std::size_t i = 0; i < g.points.size(); ++i)
      for (std::size_t j = 0; j < g.points.size(); ++j) {
        const ElementPoint p = evaluate_element(mesh, e, Vec2(g.points[i], g.points[j]));
        const double w = g.weights[i] * g.weights[j] * p.detJ_ref;
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) me(a, b) += w * p.N[a] * p.N[b];
      }
    const Quad& q = mesh.elements[e];
    for (int a = 0; a < 4; ++a) {
      if (lumped) {
        trip.emplace_back(q[a], q[a], me.row(a).sum());
      } else {
        for (int b = 0; b < 4; ++b) trip.emplace_back(q[a], q[b], me(a, b));
      }
    }
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  m.makeCompressed();
  return m;
}

MassMatrix::MassMatrix(const SolidMesh& mesh, bool lumped)
    : m_(assemble_mass_matrix(mesh, lumped)), lumped_(lumped) {
  if (lumped_) {
    diagonal_ = m_.diagonal();
  } else {
    factor_ = std::make_shared<CachedCholesky>(m_);
  }
}

Vector MassMatrix::solve(const Vector& rhs) const {
  if (lumped_) return rhs.cwiseQuotient(diagonal_);
  return factor_->solve(rhs);
}

std::vector<Vec2> MassMatrix::solve(const std::vector<Vec2>& rhs) const {
  const Eigen::Index n = m_.rows();
  Vector bx(n), by(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    bx[a] = rhs[a].x();
    by[a] = rhs[a].y();
  }
  const Vector gx = solve(bx);
  const Vector gy = solve(by);
  std::vector<Vec2> out(n);
  for (Eigen::Index a = 0; a < n; ++a) out[a] = Vec2(gx[a], gy[a]);
  return out;
}

// --- force density -----------------------------------------------------------

std::vector<Vec2> assemble_force_rhs(const SolidMesh& mesh, const ConstitutiveModel& model,
                                     const std::vector<SurfaceLoad>& loads, double t, const ForceOptions& options) {
  std::vector<Vec2> rhs(mesh.num_nodes(), Vec2::Zero());
  const GaussRule& g = GaussRule::legendre(std::max(mesh.quadrature_order, 2));
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Quad& q = mesh.elements[e];
    for (std::size_t i = 0; i < g.points.size(); ++i)
      for (std::size_t j = 0; j < g.points.size(); ++j) {
        const ElementPoint p = evaluate_element(mesh, e, Vec2(g.points[i], g.points[j]));
        const Kinematics kin = make_kinematics(p.F, p.X, p.x);
        Mat2 P = first_piola_kirchhoff(model, kin);
        if (options.phi) {
          double phi_q = 0.0;
          for (int a = 0; a < 4; ++a) phi_q += p.N[a] * (*options.phi)[q[a]];
          P -= kin.J * phi_q * kin.FinvT;
        }
        const double w = g.weights[i] * g.weights[j] * p.detJ_ref;
        for (int a = 0; a < 4; ++a) rhs[q[a]] -= w * (P * p.dN_dX[a]);
      }
  }
  add_boundary_loads(mesh, loads, t, rhs);
  return rhs;
}

std::vector<Vec2> internal_force_density(const SolidMesh& mesh, const ConstitutiveModel& model,
                                         const std::vector<SurfaceLoad>& loads, double t, const MassMatrix& mass,
                                         const ForceOptions& options) {
  return mass.solve(assemble_force_rhs(mesh, model, loads, t, options));
}

std::vector<Vec2> internal_force_density(const SolidMesh& mesh, const ConstitutiveModel& model,
                                         const std::vector<SurfaceLoad>& loads, double t) {
  const MassMatrix mass(mesh);
  return internal_force_density(mesh, model, loads, t, mass);
}

}  // namespace sharpib
