#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sharpib/errors.hpp"
#include "sharpib/metrics.hpp"
#include "sharpib/oracles.hpp"
#include "sharpib/pressure_split.hpp"

using namespace sharpib;

namespace {

constexpr double kPi = std::numbers::pi;

PhiBoundaryData boundary_from(const SolidMesh& mesh, const std::function<double(const Vec2&)>& f) {
  PhiBoundaryData bc;
  bc.nodes = mesh.boundary_nodes();
  for (int a : bc.nodes) bc.values.push_back(f(mesh.reference[a]));
  return bc;
}

double max_error(const SolidMesh& mesh, const std::vector<double>& v, const std::function<double(const Vec2&)>& f) {
  double m = 0.0;
  for (int a = 0; a < mesh.num_nodes(); ++a) m = std::max(m, std::abs(v[a] - f(mesh.reference[a])));
  return m;
}

}  // namespace

TEST_SUITE("pressure_split") {
  TEST_CASE("interface value formula") {
    const Mat2 P = Vec2(3.0, 7.0).asDiagonal();
    CHECK(phi_interface_value(Mat2::Identity(), Vec2(1, 0), P * Vec2(1, 0)) == doctest::Approx(3.0));
    CHECK(phi_interface_value(Mat2::Identity(), Vec2(0, 1), P * Vec2(0, 1)) == doctest::Approx(7.0));

    SolidMesh annulus = make_annulus_mesh(0.25, 0.3125, Vec2::Zero(), 2, 48);
    const PhiBoundaryData zero = phi_boundary_values(annulus, PolarNeoHookeanRing{1e4, Vec2::Zero()});
    CHECK(zero.nodes == annulus.boundary_nodes());
    for (double v : zero.values) CHECK(std::abs(v) < 1e-8);
  }

  TEST_CASE("inflated ring boundary value matches the exact normal stress") {
    const InflatingRingParams p;
    const double R = p.R_out, r = p.r_out();
    // Exact radial map at theta = 0: F = diag(R/r, r/R) in polar and Cartesian.
    const Mat2 F = Vec2(R / r, r / R).asDiagonal();
    const Vec2 X(R, 0.0), x(r, 0.0);
    const Mat2 P = first_piola_kirchhoff(PolarNeoHookeanRing{p.mu_e, Vec2::Zero()}, make_kinematics(F, X, x));
    const double exact = -p.mu_e * p.A_add / (kPi * r * r);
    CHECK(std::abs(phi_interface_value(F, Vec2(1, 0), P * Vec2(1, 0)) - exact) <= 1e-8 * std::abs(exact));

    // On a mesh moved by the exact map, the corner-evaluated value converges at
    // first order in the radial spacing.
    std::vector<std::pair<int, double>> errs;
    for (int n_r : {4, 8, 16}) {
      SolidMesh mesh = make_annulus_mesh(p.R_in, p.R_out, Vec2::Zero(), n_r, 64);
      for (int a = 0; a < mesh.num_nodes(); ++a)
        mesh.position[a] = mesh.reference[a] * (inflating_ring_radius(mesh.reference[a].norm(), p) / mesh.reference[a].norm());
      const PhiBoundaryData bc = phi_boundary_values(mesh, PolarNeoHookeanRing{p.mu_e, Vec2::Zero()});
      double err = 0.0;
      for (std::size_t k = 0; k < bc.nodes.size(); ++k)
        if (std::abs(mesh.reference[bc.nodes[k]].norm() - p.R_out) < 1e-12) err = std::max(err, std::abs(bc.values[k] - exact));
      errs.emplace_back(n_r, err);
    }
    CHECK(fit_rate(errs).series.rate == doctest::Approx(1.0).epsilon(0.1));
    CHECK(errs.back().second < 2e-2 * std::abs(exact));
  }

  TEST_CASE("harmonic solves reproduce constants and linear data") {
    const SolidMesh block = make_block_mesh(Vec2(0, 0), Vec2(2, 1), 8, 4);
    const PhiField c = solve_phi_harmonic(block, boundary_from(block, [](const Vec2&) { return 2.5; }));
    for (double v : c.values) CHECK(std::abs(v - 2.5) < 1e-9);
    auto lin = [](const Vec2& X) { return 0.3 * X.x() - 1.2 * X.y(); };
    CHECK(max_error(block, solve_phi_harmonic(block, boundary_from(block, lin)).values, lin) < 1e-9);
  }

  TEST_CASE("harmonic annulus converges at second order and obeys the maximum principle") {
    const double ri = 0.25, ro = 0.5;
    auto exact = [&](const Vec2& X) { return std::log(ro / X.norm()) / std::log(ro / ri); };
    std::vector<std::pair<int, double>> errs;
    for (int n : {4, 8, 16}) {
      const SolidMesh mesh = make_annulus_mesh(ri, ro, Vec2::Zero(), n, 8 * n);
      PhiBoundaryData bc = boundary_from(mesh, [&](const Vec2& X) { return X.norm() < 0.5 * (ri + ro) ? 1.0 : 0.0; });
      const PhiField phi = solve_phi_harmonic(mesh, bc);
      errs.emplace_back(n, max_error(mesh, phi.values, exact));
      for (double v : phi.values) {
        CHECK(v >= -1e-8);
        CHECK(v <= 1.0 + 1e-8);
      }
      CHECK(phi.iterations > 0);
    }
    CHECK(fit_rate(errs).series.rate >= 1.8);
  }

  TEST_CASE("harmonic solve is rotation invariant") {
    SolidMesh mesh = make_block_mesh(Vec2(0, 0), Vec2(2, 1), 8, 4);
    auto f = [](const Vec2& X) { return std::sin(X.x()) + X.y() * X.y(); };
    const PhiField a = solve_phi_harmonic(mesh, boundary_from(mesh, f));
    const Mat2 Q = givens(0.7);
    SolidMesh rot = mesh;
    for (Vec2& X : rot.reference) X = Q * X;
    for (auto& e : rot.element_reference)
      for (Vec2& X : e) X = Q * X;
    rot.position = rot.reference;
    const PhiField b = solve_phi_harmonic(rot, boundary_from(rot, [&](const Vec2& X) { return f(Q.transpose() * X); }));
    for (int k = 0; k < mesh.num_nodes(); ++k) CHECK(std::abs(a.values[k] - b.values[k]) < 1e-10);
  }

  TEST_CASE("diffusion steps") {
    const SolidMesh mesh = make_block_mesh(Vec2(0, 0), Vec2(1, 1), 6, 6);
    PhiSolver solver(mesh);
    const PhiBoundaryData cbc = boundary_from(mesh, [](const Vec2&) { return 4.0; });
    PhiField c;
    c.values.assign(mesh.num_nodes(), 4.0);
    for (double v : solver.step_diffusion(c, cbc, 1.0, 0.01).values) CHECK(std::abs(v - 4.0) < 1e-9);
    CHECK_THROWS_AS(solver.step_diffusion(c, cbc, 0.0, 0.01), Error);

    auto f = [](const Vec2& X) { return X.x() * X.x() - X.y() * X.y() + std::exp(X.x()) * std::cos(X.y()); };
    const PhiBoundaryData bc = boundary_from(mesh, f);
    const PhiField harmonic = solver.solve_harmonic(bc);
    PhiField start;
    start.values.assign(mesh.num_nodes(), 0.0);
    const PhiField fast = solver.step_diffusion(start, bc, 1e6, 1.0);
    double range = 0.0, err = 0.0;
    for (int a = 0; a < mesh.num_nodes(); ++a) {
      range = std::max(range, std::abs(harmonic.values[a]));
      err = std::max(err, std::abs(fast.values[a] - harmonic.values[a]));
    }
    CHECK(err <= 1e-4 * range);

    // Frozen data: iterates approach the harmonic solution geometrically.
    PhiField it = start;
    double previous = 1e300;
    for (int n = 0; n < 6; ++n) {
      it = solver.step_diffusion(it, bc, 1.0, 0.02);
      double e = 0.0;
      for (int a = 0; a < mesh.num_nodes(); ++a) e = std::max(e, std::abs(it.values[a] - harmonic.values[a]));
      CHECK(e < previous);
      previous = e;
    }
  }

  TEST_CASE("Crank-Nicolson update of the single interior node") {
    const SolidMesh mesh = make_block_mesh(Vec2(0, 0), Vec2(2, 2), 2, 2);
    int center = -1;
    for (int a = 0; a < mesh.num_nodes(); ++a)
      if ((mesh.reference[a] - Vec2(1, 1)).norm() < 1e-12) center = a;
    REQUIRE(center >= 0);
    const double dt = 0.1, gamma = 1.0, t0 = 0.3;
    auto g = [](const Vec2& X, double t) { return X.x() + 2.0 * X.y() * t + 0.5 * t; };
    PhiField old;
    old.values.resize(mesh.num_nodes());
    for (int a = 0; a < mesh.num_nodes(); ++a) old.values[a] = g(mesh.reference[a], t0);
    old.values[center] = 0.8;
    PhiBoundaryData bc;
    bc.nodes = mesh.boundary_nodes();
    for (int a : bc.nodes) bc.values.push_back(g(mesh.reference[a], t0 + dt));
    const PhiField next = step_phi_diffusion(mesh, old, bc, gamma, dt);

    // Unit square elements: the center couples to 4 edge neighbors (two
    // elements each) and 4 diagonal neighbors (one element each).
    const double Mcc = 16.0 / 36.0, Me = 4.0 / 36.0, Md = 1.0 / 36.0;
    const double Kcc = 16.0 / 6.0, Ke = -2.0 / 6.0, Kd = -2.0 / 6.0;
    const double c = 0.5 * dt * gamma;
    double rhs = (Mcc - c * Kcc) * old.values[center];
    double lhs_known = 0.0;
    for (int a = 0; a < mesh.num_nodes(); ++a) {
      if (a == center) continue;
      const Vec2 d = mesh.reference[a] - Vec2(1, 1);
      const bool diagonal = std::abs(d.x()) > 0.5 && std::abs(d.y()) > 0.5;
      const double M = diagonal ? Md : Me, K = diagonal ? Kd : Ke;
      rhs += (M - c * K) * old.values[a];
      lhs_known += (M + c * K) * g(mesh.reference[a], t0 + dt);
    }
    const double expected = (rhs - lhs_known) / (Mcc + c * Kcc);
    CHECK(next.values[center] == doctest::Approx(expected).epsilon(1e-9));
  }

  TEST_CASE("modified stress") {
    const Kinematics id = make_kinematics(Mat2::Identity());
    const Mat2 P = Vec2(3.0, 7.0).asDiagonal();
    CHECK((modified_stress(P, 0.0, id) - P).norm() == 0.0);
    const Mat2 Pt = modified_stress(P, 3.0, id);
    CHECK((Pt - Mat2(Vec2(0.0, 4.0).asDiagonal())).norm() < 1e-15);
    CHECK(std::abs(Vec2(1, 0).dot(Pt * Vec2(1, 0))) < 1e-15);

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> d(-0.4, 0.4);
    for (int k = 0; k < 20; ++k) {
      Mat2 F = Mat2::Identity(), Q;
      for (int q = 0; q < 4; ++q) {
        F(q / 2, q % 2) += d(rng);
        Q(q / 2, q % 2) = 10.0 * d(rng);
      }
      const Kinematics kin = make_kinematics(F);
      const double phi = 5.0 * d(rng);
      const Mat2 lhs = modified_stress(Q, phi, kin) * F.transpose() / kin.J;
      const Mat2 rhs = Q * F.transpose() / kin.J - phi * Mat2::Identity();
      CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, rhs.norm()));
    }
  }

  TEST_CASE("boundary values remove the normal traction") {
    SolidMesh mesh = make_block_mesh(Vec2(0, 0), Vec2(2, 1), 4, 2);
    Mat2 A;
    A << 1.1, 0.2, -0.15, 0.95;
    for (int a = 0; a < mesh.num_nodes(); ++a) mesh.position[a] = A * mesh.reference[a];
    const StabilizedNeoHookeanBlock model{80.194, 0.3};
    const PhiBoundaryData bc = phi_boundary_values(mesh, model);
    const Kinematics kin = make_kinematics(A);
    const Mat2 P = first_piola_kirchhoff(model, kin);
    const Mat2 sigma = P * A.transpose() / kin.J;
    const std::vector<Vec2> normals = boundary_node_normals(mesh);
    for (std::size_t k = 0; k < bc.nodes.size(); ++k) {
      const Vec2 n = (kin.FinvT * normals[k]).normalized();
      const Mat2 st = modified_stress(P, bc.values[k], kin) * A.transpose() / kin.J;
      CHECK(std::abs(n.dot(st * n)) <= 1e-8 * sigma.norm());
    }
  }

  TEST_CASE("reconstruction") {
    const GridSpec g = GridSpec::square(0.0, 1.0, 16);
    CellScalarField pi(g);
    for (int c = 0; c < g.num_cells(); ++c) pi.values()[c] = 0.01 * c;
    const SolidMesh square = make_block_mesh(Vec2(4 * g.h, 4 * g.h), Vec2(8 * g.h, 8 * g.h), 2, 2);

    const Reconstruction zero = reconstruct_pressure(pi, square, std::vector<double>(square.num_nodes(), 0.0));
    CHECK((zero.p - pi).max_abs() == 0.0);

    const Reconstruction five = reconstruct_pressure(pi, square, std::vector<double>(square.num_nodes(), 5.0));
    CHECK(five.newton_failures == 0);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const bool in = i >= 4 && i < 8 && j >= 4 && j < 8;
        CHECK(five.p(i, j) == pi(i, j) + (in ? 5.0 : 0.0));
        CHECK(static_cast<bool>(five.inside[pi.index(i, j)]) == in);
      }

    const std::array<Vec2, 4> quad{Vec2(0, 0), Vec2(2, 0.1), Vec2(2.2, 1.5), Vec2(-0.1, 1.2)};
    Vec2 xi;
    REQUIRE(inverse_bilinear(quad, Vec2(1.0, 0.7), xi));
    const auto N = q1::shape(xi);
    Vec2 x = Vec2::Zero();
    for (int a = 0; a < 4; ++a) x += N[a] * quad[a];
    CHECK((x - Vec2(1.0, 0.7)).norm() < 1e-12);
  }
}
