#pragma once

/// Q1 quadrilateral finite elements on the Lagrangian parameter domain.
///
/// Local node order is counter-clockwise starting at xi = (-1,-1):
///
///   3 ---- 2
///   |      |
///   0 ---- 1
///
/// Local edge k joins local nodes k and (k+1) % 4.

#include <array>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "sharpib/linear_solvers.hpp"
#include "sharpib/types.hpp"

namespace sharpib {

enum class BoundaryTag { Inner, Outer, Bottom, Top, Left, Right };

const char* to_string(BoundaryTag tag);

struct BoundaryEdge {
  int element = -1;
  int local_edge = -1;
  int node_a = -1;
  int node_b = -1;
  BoundaryTag tag = BoundaryTag::Outer;
};

using Quad = std::array<int, 4>;

struct SolidMesh {
  /// Nodal parameter/reference coordinates X.
  std::vector<Vec2> reference;
  std::vector<Quad> elements;
  /// Reference coordinates of each element's corners. Differs from
  /// reference[elements[e][a]] only across a periodic seam.
  std::vector<std::array<Vec2, 4>> element_reference;
  /// Current nodal positions chi.
  std::vector<Vec2> position;
  std::vector<BoundaryEdge> boundary;
  std::array<bool, 2> periodic{false, false};
  int quadrature_order = 2;

  int num_nodes() const { return static_cast<int>(reference.size()); }
  int num_elements() const { return static_cast<int>(elements.size()); }

  /// Throws DegenerateElement for a non-positive parameter-to-reference
  /// Jacobian at any Gauss point, Error for inconsistent connectivity.
  void validate() const;

  /// Sorted, unique nodes touched by boundary edges.
  std::vector<int> boundary_nodes() const;

  /// Current positions of an element's corners.
  std::array<Vec2, 4> element_position(int e) const;
};

namespace q1 {
std::array<double, 4> shape(const Vec2& xi);
std::array<Vec2, 4> shape_grad(const Vec2& xi);
/// Reference coordinates of the local corners.
const std::array<Vec2, 4>& corners();
}  // namespace q1

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> points;
  std::vector<double> weights;
  static const GaussRule& legendre(int n);
};

struct ElementPoint {
  std::array<double, 4> N{};
  std::array<Vec2, 4> dN_dX{};
  double detJ_ref = 0.0;
  Vec2 X = Vec2::Zero();
  Vec2 x = Vec2::Zero();
  Mat2 F = Mat2::Identity();
};

/// Shape data, reference position, current position and F at local coords xi.
/// Throws DegenerateElement when det(dX/dxi) <= 0.
ElementPoint evaluate_element(const SolidMesh& mesh, int e, const Vec2& xi);

struct Kinematics {
  Mat2 F = Mat2::Identity();
  double J = 1.0;
  Mat2 FinvT = Mat2::Identity();
  Vec2 X = Vec2::Zero();
  Vec2 x = Vec2::Zero();
};

/// Throws InvertedElement when det F <= 0.
Kinematics make_kinematics(const Mat2& F, const Vec2& X = Vec2::Zero(), const Vec2& x = Vec2::Zero());
Kinematics deformation_gradient(const SolidMesh& mesh, int e, const Vec2& xi);

// --- constitutive models -----------------------------------------------------

/// P = (mu_e / w) F, stress per unit parameter length.
struct CurvilinearRing {
  double mu_e = 1.0;
  double w = 0.0625;
};

/// P_polar = mu_e (F_polar - F_polar^{-T}) in polar components about center.
struct PolarNeoHookeanRing {
  double mu_e = 1e4;
  Vec2 center = Vec2::Zero();
};

/// P = mu_e J^{-2/3} (F - I1/3 F^{-T}) + lambda log J F^{-T}.
struct StabilizedNeoHookeanBlock {
  double mu_e = 80.194;
  double nu = 0.0;
  double lambda() const { return 2.0 * mu_e * (1.0 + nu) / (3.0 * (1.0 - 2.0 * nu)); }
};

using ConstitutiveModel = std::variant<CurvilinearRing, PolarNeoHookeanRing, StabilizedNeoHookeanBlock>;

/// Throws ConfigError on invalid parameters.
void validate(const ConstitutiveModel& model);

Mat2 first_piola_kirchhoff(const ConstitutiveModel& model, const Kinematics& kin);

/// W = (mu_e/2)(J^{-2/3} I1 - 3) + (lambda/2)(log J)^2.
double block_strain_energy(const StabilizedNeoHookeanBlock& model, const Mat2& F);

Mat2 givens(double theta);

/// F_polar = (dp/dx) F_cart (dX/dP) with P = (R, Theta), p = (r, theta).
Mat2 polar_deformation_gradient(const Mat2& F_cart, const Vec2& X, const Vec2& x, const Vec2& center);

/// Cartesian first Piola-Kirchhoff stress from polar components: the polar
/// Cauchy stress P_polar F_polar^T is rotated by G(theta) and pulled back with
/// F_cart^{-T}.
Mat2 polar_to_cartesian_stress(const Mat2& P_polar, const Mat2& F_polar, const Mat2& F_cart, double theta);
Mat2 cartesian_to_polar_stress(const Mat2& P_cart, const Mat2& F_polar, const Mat2& F_cart, double theta);

// --- surface loads -----------------------------------------------------------

/// kappa (X - chi) with the e2 component removed, on edges tagged Top.
struct TetherTop {
  double kappa = 0.0;
};
/// kappa (X - chi) with the e1 component removed, on edges tagged Bottom.
struct TetherBottom {
  double kappa = 0.0;
};
/// Dead load -P(X1, t) e2 per unit reference length on edges tagged Top,
/// P = P_ramp(t) * bump on (a, b); X1 measured from x_origin.
struct LoadPressureSmooth {
  double p_max = 200.0;
  double t_load = 10.0;
  double a = 4.0;
  double b = 16.0;
  double x_origin = 0.0;
};
/// As LoadPressureSmooth with an indicator of (a, b) in place of the bump.
struct LoadPressureDiscontinuous {
  double p_max = 200.0;
  double t_load = 10.0;
  double a = 5.0;
  double b = 15.0;
  double x_origin = 0.0;
};

using SurfaceLoad = std::variant<TetherTop, TetherBottom, LoadPressureSmooth, LoadPressureDiscontinuous>;

void validate(const SurfaceLoad& load);

double ramp_pressure(double p_max, double t_load, double t);
/// exp((b-a)^2 / ((2 X1 - a - b)^2 - (b-a)^2) + 1) on (a, b), zero outside.
double smooth_load_profile(double X1, double a, double b);

/// Surface force density of one load at a boundary point with reference
/// position X and current position x on an edge with the given tag.
Vec2 surface_force_density(const SurfaceLoad& load, BoundaryTag tag, const Vec2& X, const Vec2& x, double t);

/// Sum over all loads.
Vec2 surface_force_density(const std::vector<SurfaceLoad>& loads, BoundaryTag tag, const Vec2& X, const Vec2& x,
                           double t);

/// Boundary integrals  int F_surf . V dA  for every node (nodal load vector).
std::vector<Vec2> tether_and_load_forces(const SurfaceLoad& load, const SolidMesh& mesh, double t);

// --- mass matrix and force density -------------------------------------------

/// Scalar Q1 mass matrix in the parameter configuration, factored once.
class MassMatrix {
 public:
  explicit MassMatrix(const SolidMesh& mesh, bool lumped = false);

  const SparseMatrix& matrix() const { return m_; }
  bool lumped() const { return lumped_; }

  Vector solve(const Vector& rhs) const;
  std::vector<Vec2> solve(const std::vector<Vec2>& rhs) const;
  Vector multiply(const Vector& v) const { return m_ * v; }

 private:
  SparseMatrix m_;
  bool lumped_;
  Vector diagonal_;
  std::shared_ptr<CachedCholesky> factor_;
};

SparseMatrix assemble_mass_matrix(const SolidMesh& mesh, bool lumped = false);

/// Optional nodal phi: when present the stress at each quadrature point is
/// replaced by the modified stress P - J phi F^{-T}.
struct ForceOptions {
  const std::vector<double>* phi = nullptr;
};

/// Right-hand side  -int P : grad V dX + int F_surf . V dA  (nodal vectors).
std::vector<Vec2> assemble_force_rhs(const SolidMesh& mesh, const ConstitutiveModel& model,
                                     const std::vector<SurfaceLoad>& loads, double t,
                                     const ForceOptions& options = {});

/// Nodal force density G solving  M G = rhs.
std::vector<Vec2> internal_force_density(const SolidMesh& mesh, const ConstitutiveModel& model,
                                         const std::vector<SurfaceLoad>& loads, double t, const MassMatrix& mass,
                                         const ForceOptions& options = {});

std::vector<Vec2> internal_force_density(const SolidMesh& mesh, const ConstitutiveModel& model,
                                         const std::vector<SurfaceLoad>& loads, double t);

// --- mesh generation ---------------------------------------------------------

/// Curvilinear ring on s in [0, 2 pi R) x [0, w], periodic in s1, with
/// chi(s) = center + (R + s2)(cos(s1/R), -sin(s1/R)).
SolidMesh make_static_ring_mesh(double R, double w, const Vec2& center, int n1, int n2);
Vec2 static_ring_map(const Vec2& s, double R, const Vec2& center);

/// Annulus meshed in Cartesian reference coordinates (polar product); edges
/// tagged Inner and Outer.
SolidMesh make_annulus_mesh(double r_in, double r_out, const Vec2& center, int n_r, int n_theta);

/// Axis-aligned rectangle [lower, upper] with nx x ny elements; edges tagged
/// Left, Right, Bottom, Top.
SolidMesh make_block_mesh(const Vec2& lower, const Vec2& upper, int nx, int ny);

}  // namespace sharpib
