#include "sharpib/verification.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "sharpib/coupling.hpp"
#include "sharpib/fluid_solver.hpp"
#include "sharpib/metrics.hpp"
#include "sharpib/oracles.hpp"
#include "sharpib/pressure_split.hpp"
#include "sharpib/solid_fem.hpp"

namespace sharpib {

namespace {

constexpr double kPi = std::numbers::pi;

PropertyResult at_most(const std::string& name, double value, double threshold) {
  return {name, value, threshold, "<=", value <= threshold};
}

PropertyResult at_least(const std::string& name, double value, double threshold) {
  return {name, value, threshold, ">=", value >= threshold};
}

}  // namespace

PropertyResult check_spread_interpolate_adjoint(unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(0.2, 0.8), val(-1.0, 1.0);
  const GridSpec g = GridSpec::square(0.0, 1.0, 32);
  InteractionPoints pts;
  std::vector<Vec2> F;
  for (int q = 0; q < 64; ++q) {
    pts.x.emplace_back(pos(rng), pos(rng));
    pts.w.push_back(0.5 + 0.5 * std::abs(val(rng)));
    pts.element.push_back(0);
    pts.xi.emplace_back(0.0, 0.0);
    F.emplace_back(val(rng), val(rng));
  }
  FaceVectorField u(g);
  for (double& v : u.x_values()) v = val(rng);
  for (double& v : u.y_values()) v = val(rng);
  double worst = 0.0;
  for (KernelType type : {KernelType::IB4, KernelType::PiecewiseLinear, KernelType::Cosine}) {
    const DeltaKernel k{type, 2.0 * g.h};
    const double lhs = inner(spread(pts, F, k, g), u);
    const std::vector<Vec2> U = interpolate(u, pts, k);
    double rhs = 0.0;
    for (std::size_t q = 0; q < pts.size(); ++q) rhs += F[q].dot(U[q]) * pts.w[q];
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs)));
  }
  return at_most("spread/interpolate adjointness (relative)", worst, 1e-12);
}

PropertyResult check_kernel_partition_of_unity(unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> off(0.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < 1000; ++s) {
    const double r = off(rng);
    double sum = 0.0;
    for (int k = -3; k <= 3; ++k) sum += ib4_kernel(r - k);
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return at_most("IB4 partition of unity", worst, 1e-12);
}

PropertyResult check_harmonic_annulus_rate() {
  std::vector<std::pair<int, double>> pts;
  for (int n : {4, 8, 16}) {
    const SolidMesh mesh = make_annulus_mesh(0.25, 0.5, Vec2::Zero(), n, 8 * n);
    PhiBoundaryData bc;
    bc.nodes = mesh.boundary_nodes();
    for (int a : bc.nodes) bc.values.push_back(std::log(mesh.reference[a].norm()));
    const PhiField phi = solve_phi_harmonic(mesh, bc);
    std::vector<double> exact;
    for (const Vec2& X : mesh.reference) exact.push_back(std::log(X.norm()));
    pts.emplace_back(n, nodal_error_norms(mesh, phi.values, exact).l2);
  }
  return at_least("harmonic annulus log-solution rate", fit_rate(pts).series.rate, 1.8);
}

PropertyResult check_block_stress_gradient(unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-0.3, 0.3);
  const StabilizedNeoHookeanBlock model{80.194, 0.4};
  const double eps = 1e-6;
  double worst = 0.0;
  int tested = 0;
  while (tested < 100) {
    Mat2 F = Mat2::Identity();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) F(i, j) += d(rng);
    if (F.determinant() < 0.3) continue;
    const Mat2 P = first_piola_kirchhoff(ConstitutiveModel(model), make_kinematics(F));
    Mat2 fd;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        Mat2 Fp = F, Fm = F;
        Fp(i, j) += eps;
        Fm(i, j) -= eps;
        fd(i, j) = (block_strain_energy(model, Fp) - block_strain_energy(model, Fm)) / (2.0 * eps);
      }
    worst = std::max(worst, (P - fd).norm() / std::max(P.norm(), 1.0));
    ++tested;
  }
  return at_most("block stress vs energy gradient (relative)", worst, 1e-6);
}

PropertyResult check_inflating_ring_jumps() {
  const InflatingRingParams p;
  const double ri = p.r_in(), ro = p.r_out();
  const double inf = std::numeric_limits<double>::infinity();
  const double jump_in = inflating_ring_pressure(0.0, p) - inflating_ring_pressure(std::nextafter(ri, inf), p);
  const double jump_out = inflating_ring_pressure(std::nextafter(ro, inf), p) -
                          inflating_ring_pressure(std::nextafter(ro, 0.0), p);
  const double e_in = std::abs(jump_in - inflating_ring_jump(ri, p)) / inflating_ring_jump(ri, p);
  const double e_out = std::abs(jump_out - inflating_ring_jump(ro, p)) / inflating_ring_jump(ro, p);
  return at_most("inflating-ring jump identities (relative)", std::max(e_in, e_out), 1e-12);
}

PropertyResult check_taylor_green_decay(int N) {
  const double mu = 0.01, T = 0.5;
  const double decay = 2.0 * kPi * kPi * mu;
  auto exact = [decay](const Vec2& x, double t) {
    const double s = std::exp(-decay * t);
    return Vec2(std::sin(kPi * x.x()) * std::cos(kPi * x.y()) * s,
                -std::cos(kPi * x.x()) * std::sin(kPi * x.y()) * s);
  };
  const GridSpec g = GridSpec::square(0.0, 1.0, N);
  BoundaryCondition bc = BoundaryCondition::all(BoundaryKind::NoSlip);
  bc.wall_velocity = exact;
  FluidSolver solver(g, FluidProperties{1.0, mu}, bc);
  FluidState s(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) s.u.x(i, j) = exact(g.x_face(i, j), 0.0).x();
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) s.u.y(i, j) = exact(g.y_face(i, j), 0.0).y();
  const double e0 = kinetic_energy(s.u, 1.0);
  const int steps = static_cast<int>(std::ceil(T / (0.25 * g.h)));
  const double dt = T / steps;
  const FaceVectorField zero(g);
  for (int n = 0; n < steps; ++n) solver.advance(s, zero, nullptr, dt);
  const double ratio = kinetic_energy(s.u, 1.0) / e0;
  const double expected = std::exp(-2.0 * decay * T);
  return at_most("Taylor-Green energy decay (relative)", std::abs(ratio / expected - 1.0), 0.01);
}

std::vector<PropertyResult> run_property_suite(unsigned seed) {
  return {check_spread_interpolate_adjoint(seed), check_kernel_partition_of_unity(seed + 1),
          check_harmonic_annulus_rate(),          check_block_stress_gradient(seed + 2),
          check_inflating_ring_jumps(),           check_taylor_green_decay(64)};
}

}  // namespace sharpib
