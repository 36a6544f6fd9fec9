#include "sharpib/pressure_split.hpp"

#include <algorithm>
#include <cmath>

#include "sharpib/errors.hpp"

namespace sharpib {

std::vector<Vec2> boundary_node_normals(const SolidMesh& mesh) {
  const std::vector<int> nodes = mesh.boundary_nodes();
  std::vector<int> slot(mesh.num_nodes(), -1);
  for (std::size_t k = 0; k < nodes.size(); ++k) slot[nodes[k]] = static_cast<int>(k);
  std::vector<Vec2> normals(nodes.size(), Vec2::Zero());
  for (const BoundaryEdge& be : mesh.boundary) {
    const auto& Xe = mesh.element_reference[be.element];
    const Vec2 t = Xe[(be.local_edge + 1) % 4] - Xe[be.local_edge];
    // Outward for counter-clockwise elements; |n| = edge length.
    const Vec2 n(t.y(), -t.x());
    normals[slot[be.node_a]] += n;
    normals[slot[be.node_b]] += n;
  }
  for (Vec2& n : normals) n.normalize();
  return normals;
}

double phi_interface_value(const Mat2& F, const Vec2& N, const Vec2& traction) {
  const double J = F.determinant();
  if (!(J > 0.0)) throw InvertedElement("phi_interface_value: J <= 0");
  const Vec2 m = F.inverse().transpose() * N;
  return m.dot(traction) / (J * m.squaredNorm());
}

PhiBoundaryData phi_boundary_values(const SolidMesh& mesh, const ConstitutiveModel& model,
                                    const std::vector<SurfaceLoad>& loads, double t) {
  PhiBoundaryData data;
  data.nodes = mesh.boundary_nodes();
  const std::vector<Vec2> normals = boundary_node_normals(mesh);
  std::vector<int> slot(mesh.num_nodes(), -1);
  for (std::size_t k = 0; k < data.nodes.size(); ++k) slot[data.nodes[k]] = static_cast<int>(k);

  const std::size_t nb = data.nodes.size();
  std::vector<Mat2> F_sum(nb, Mat2::Zero()), P_sum(nb, Mat2::Zero());
  std::vector<Vec2> f_sum(nb, Vec2::Zero());
  std::vector<int> count(nb, 0);
  const auto& corners = q1::corners();
  for (const BoundaryEdge& be : mesh.boundary) {
    for (int local : {be.local_edge, (be.local_edge + 1) % 4}) {
      const int node = mesh.elements[be.element][local];
      const ElementPoint p = evaluate_element(mesh, be.element, corners[local]);
      const Kinematics kin = make_kinematics(p.F, p.X, p.x);
      const int k = slot[node];
      F_sum[k] += kin.F;
      P_sum[k] += first_piola_kirchhoff(model, kin);
      f_sum[k] += surface_force_density(loads, be.tag, p.X, p.x, t);
      ++count[k];
    }
  }
  data.values.resize(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    const double inv = 1.0 / count[k];
    const Mat2 F = F_sum[k] * inv;
    const Mat2 P = P_sum[k] * inv;
    const Vec2 traction = P * normals[k] - f_sum[k] * inv;
    data.values[k] = phi_interface_value(F, normals[k], traction);
  }
  return data;
}

SparseMatrix assemble_stiffness_matrix(const SolidMesh& mesh) {
  const int n = mesh.num_nodes();
  const GaussRule& g = GaussRule::legendre(std::max(mesh.quadrature_order, 2));
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(16 * mesh.elements.size());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    Eigen::Matrix4d ke = Eigen::Matrix4d::Zero();
    for (std::size_t i = 0; i < g.points.size(); ++i)
      for (std::size_t j = 0; j < g.points.size(); ++j) {
        const ElementPoint p = evaluate_element(mesh, e, Vec2(g.points[i], g.points[j]));
        const double w = g.weights[i] * g.weights[j] * p.detJ_ref;
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) ke(a, b) += w * p.dN_dX[a].dot(p.dN_dX[b]);
      }
    const Quad& q = mesh.elements[e];
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) trip.emplace_back(q[a], q[b], ke(a, b));
  }
  SparseMatrix k(n, n);
  k.setFromTriplets(trip.begin(), trip.end());
  k.makeCompressed();
  return k;
}

PhiSolver::PhiSolver(const SolidMesh& mesh, const IluGmres::Options& options)
    : num_nodes_(mesh.num_nodes()),
      boundary_nodes_(mesh.boundary_nodes()),
      options_(options),
      stiffness_(assemble_stiffness_matrix(mesh)),
      mass_(assemble_mass_matrix(mesh)) {}

PhiSolver::System PhiSolver::build(const SparseMatrix& base, const std::vector<int>& nodes) const {
  System sys;
  sys.matrix = base;
  sys.penalty = kPenaltyScale * base.diagonal().mean();
  for (int b : nodes) sys.matrix.coeffRef(b, b) += sys.penalty;
  sys.matrix.makeCompressed();
  sys.solver = std::make_unique<IluGmres>(sys.matrix, options_);
  return sys;
}

int PhiSolver::solve(const System& sys, const PhiBoundaryData& bc, Vector rhs, std::vector<double>& x) const {
  if (bc.nodes.size() != bc.values.size()) throw Error("PhiSolver: boundary data size mismatch");
  for (std::size_t k = 0; k < bc.nodes.size(); ++k) rhs[bc.nodes[k]] += sys.penalty * bc.values[k];
  Vector sol = Vector::Zero(num_nodes_);
  if (static_cast<int>(x.size()) == num_nodes_) sol = Eigen::Map<const Vector>(x.data(), num_nodes_);
  const KrylovReport r = sys.solver->solve(rhs, sol);
  x.assign(sol.data(), sol.data() + num_nodes_);
  return r.iterations;
}

PhiField PhiSolver::solve_harmonic(const PhiBoundaryData& bc, const std::vector<double>* initial) {
  if (!harmonic_) harmonic_ = std::make_unique<System>(build(stiffness_, boundary_nodes_));
  PhiField out;
  out.bc = bc;
  out.formulation = PhiFormulation::SteadyHarmonic;
  if (initial) out.values = *initial;
  out.iterations = solve(*harmonic_, bc, Vector::Zero(num_nodes_), out.values);
  return out;
}

PhiField PhiSolver::step_diffusion(const PhiField& old, const PhiBoundaryData& bc, double gamma, double dt) {
  if (!(gamma > 0.0)) throw Error("step_phi_diffusion: gamma must be positive");
  if (!(dt > 0.0)) throw Error("step_phi_diffusion: dt must be positive");
  const auto key = std::make_pair(gamma, dt);
  auto it = diffusion_.find(key);
  if (it == diffusion_.end()) {
    const double c = 0.5 * dt * gamma;
    const SparseMatrix implicit = mass_ + c * stiffness_;
    it = diffusion_.emplace(key, std::make_unique<System>(build(implicit, boundary_nodes_))).first;
    explicit_part_.emplace(key, SparseMatrix(mass_ - c * stiffness_));
  }
  const SparseMatrix& expl = explicit_part_.at(key);
  const Vector old_v = Eigen::Map<const Vector>(old.values.data(), num_nodes_);
  PhiField out;
  out.bc = bc;
  out.formulation = PhiFormulation::Diffusion;
  out.gamma = gamma;
  out.values = old.values;
  out.iterations = solve(*it->second, bc, expl * old_v, out.values);
  return out;
}

PhiField solve_phi_harmonic(const SolidMesh& mesh, const PhiBoundaryData& bc) {
  PhiSolver solver(mesh);
  return solver.solve_harmonic(bc);
}

PhiField step_phi_diffusion(const SolidMesh& mesh, const PhiField& old, const PhiBoundaryData& bc, double gamma,
                            double dt) {
  PhiSolver solver(mesh);
  return solver.step_diffusion(old, bc, gamma, dt);
}

Mat2 modified_stress(const Mat2& P, double phi, const Kinematics& kin) { return P - kin.J * phi * kin.FinvT; }

// --- reconstruction ----------------------------------------------------------

bool inverse_bilinear(const std::array<Vec2, 4>& xe, const Vec2& target, Vec2& xi) {
  xi = Vec2::Zero();
  const double scale = std::max((xe[2] - xe[0]).norm(), (xe[3] - xe[1]).norm());
  for (int it = 0; it < 50; ++it) {
    const auto N = q1::shape(xi);
    const auto dN = q1::shape_grad(xi);
    Vec2 x = Vec2::Zero();
    Mat2 J = Mat2::Zero();
    for (int a = 0; a < 4; ++a) {
      x += N[a] * xe[a];
      J += xe[a] * dN[a].transpose();
    }
    const Vec2 r = target - x;
    const double det = J.determinant();
    if (det == 0.0 || !std::isfinite(det)) return false;
    const Vec2 step = J.inverse() * r;
    xi += step;
    if (step.lpNorm<Eigen::Infinity>() < 1e-12 || r.norm() < 1e-15 * scale) return xi.allFinite();
    if (xi.lpNorm<Eigen::Infinity>() > 1e6) return false;
  }
  return false;
}

namespace {

constexpr double kSnap = 1e-12;

template <class Visit>
void for_each_cell_in_element(const GridSpec& grid, const SolidMesh& mesh, Visit&& visit) {
  const double h = grid.h;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto xe = mesh.element_position(e);
    Vec2 lo = xe[0], hi = xe[0];
    for (const Vec2& p : xe) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    const int i0 = std::max(0, static_cast<int>(std::ceil((lo.x() - grid.lower.x()) / h - 0.5 - kSnap)));
    const int i1 = std::min(grid.nx - 1, static_cast<int>(std::floor((hi.x() - grid.lower.x()) / h - 0.5 + kSnap)));
    const int j0 = std::max(0, static_cast<int>(std::ceil((lo.y() - grid.lower.y()) / h - 0.5 - kSnap)));
    const int j1 = std::min(grid.ny - 1, static_cast<int>(std::floor((hi.y() - grid.lower.y()) / h - 0.5 + kSnap)));
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) visit(e, xe, i, j);
  }
}

}  // namespace

std::vector<char> inside_mask(const GridSpec& grid, const SolidMesh& mesh) {
  std::vector<char> inside(grid.num_cells(), 0);
  for_each_cell_in_element(grid, mesh, [&](int, const std::array<Vec2, 4>& xe, int i, int j) {
    const int c = i + grid.nx * j;
    if (inside[c]) return;
    Vec2 xi;
    if (inverse_bilinear(xe, grid.cell_center(i, j), xi) && xi.lpNorm<Eigen::Infinity>() <= 1.0 + kSnap)
      inside[c] = 1;
  });
  return inside;
}

Reconstruction reconstruct_pressure(const CellScalarField& pi, const SolidMesh& mesh,
                                    const std::vector<double>& phi) {
  const GridSpec& grid = pi.grid();
  if (static_cast<int>(phi.size()) != mesh.num_nodes()) throw Error("reconstruct_pressure: phi size mismatch");
  Reconstruction out{pi, CellScalarField(grid), std::vector<char>(grid.num_cells(), 0), 0};
  std::vector<char> failed(grid.num_cells(), 0);
  for_each_cell_in_element(grid, mesh, [&](int e, const std::array<Vec2, 4>& xe, int i, int j) {
    const int c = i + grid.nx * j;
    if (out.inside[c]) return;
    Vec2 xi;
    if (!inverse_bilinear(xe, grid.cell_center(i, j), xi)) {
      failed[c] = 1;
      return;
    }
    if (xi.lpNorm<Eigen::Infinity>() > 1.0 + kSnap) return;
    const auto N = q1::shape(xi);
    const Quad& q = mesh.elements[e];
    double v = 0.0;
    for (int a = 0; a < 4; ++a) v += N[a] * phi[q[a]];
    out.inside[c] = 1;
    out.phi(i, j) = v;
    out.p(i, j) = pi(i, j) + v;
  });
  for (int c = 0; c < grid.num_cells(); ++c)
    if (failed[c] && !out.inside[c]) ++out.newton_failures;
  return out;
}

}  // namespace sharpib
