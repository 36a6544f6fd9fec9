#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sharpib/errors.hpp"
#include "sharpib/fluid_solver.hpp"
#include "sharpib/metrics.hpp"
#include "test_helpers.hpp"

using namespace sharpib;
using namespace sharpib::testing;

namespace {

constexpr double kPi = std::numbers::pi;

// Discretely divergence-free field from a node stream function vanishing on
// the boundary.
FaceVectorField curl_of(const GridSpec& g, const std::function<double(const Vec2&)>& psi) {
  auto node = [&](int i, int j) {
    if (i == 0 || j == 0 || i == g.nx || j == g.ny) return 0.0;
    return psi(g.lower + Vec2(i * g.h, j * g.h));
  };
  FaceVectorField u(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) u.x(i, j) = (node(i, j + 1) - node(i, j)) / g.h;
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) u.y(i, j) = -(node(i + 1, j) - node(i, j)) / g.h;
  return u;
}

}  // namespace

TEST_SUITE("fluid_solver") {
  TEST_CASE("rest state stays at rest") {
    const GridSpec g = GridSpec::square(0.0, 1.0, 16);
    FluidSolver solver(g, FluidProperties{1.0, 1.0}, BoundaryCondition::all(BoundaryKind::NoSlip));
    FluidState s(g);
    for (int n = 0; n < 3; ++n) solver.advance(s, FaceVectorField(g), nullptr, 0.01);
    CHECK(s.u.max_abs() == 0.0);
    CHECK(s.pi.max_abs() == 0.0);
  }

  TEST_CASE("invalid steps are rejected") {
    const GridSpec g = GridSpec::square(0.0, 1.0, 16);
    FluidSolver solver(g, FluidProperties{1.0, 1.0}, BoundaryCondition::all(BoundaryKind::NoSlip));
    FluidState s(g);
    CHECK_THROWS_AS(solver.advance(s, FaceVectorField(g), nullptr, 0.0), Error);
    s.u = FaceVectorField(g, 100.0, 0.0);
    CHECK_THROWS_AS(solver.advance(s, FaceVectorField(g), nullptr, 0.1), CflViolation);
    CHECK_THROWS_AS(FluidProperties({0.0, 1.0}).validate(), ConfigError);
  }

  TEST_CASE("ghost values follow the wall conventions") {
    const GridSpec g = GridSpec::square(0.0, 1.0, 8);
    FluidState s(g);
    s.u = FaceVectorField(g, 1.0, 0.0);
    for (int i = 0; i < g.nx; ++i) s.pi(i, 0) = 2.0;
    BoundaryCondition bc = BoundaryCondition::all(BoundaryKind::NoSlip);
    bc.kind[static_cast<int>(Side::Bottom)] = BoundaryKind::TractionOpen;
    const GhostedState gh = apply_boundary_conditions(s, bc);
    for (int i = 0; i <= g.nx; ++i) {
      // Tangential x-velocity at the top no-slip wall averages to zero.
      CHECK(gh.ux(i, g.ny) == doctest::Approx(-s.u.x(i, g.ny - 1)));
      CHECK(gh.ux(i, g.ny) + s.u.x(i, g.ny - 1) == doctest::Approx(0.0));
    }
    for (int i = 0; i < g.nx; ++i) CHECK(gh.p(i, -1) == doctest::Approx(-2.0));
    for (int j = 0; j < g.ny; ++j) CHECK(gh.p(-1, j) == doctest::Approx(s.pi(0, j)));
  }

  TEST_CASE("advection of a divergence-free field has no net wall flux") {
    const GridSpec g = GridSpec::square(0.0, 1.0, 8);
    FluidState s(g);
    s.u = curl_of(g, [](const Vec2& x) { return std::sin(kPi * x.x()) * std::sin(2 * kPi * x.y()) + x.x() * x.y(); });
    CHECK(divergence(s.u).max_abs() < 1e-12);
    const BoundaryCondition bc = BoundaryCondition::all(BoundaryKind::NoSlip);
    const FaceVectorField n = advection_term(apply_boundary_conditions(s, bc), bc, Advection::Centered);
    const FaceVectorField v = face_volumes(g);
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < n.x_values().size(); ++k) mx += v.x_values()[k] * n.x_values()[k];
    for (std::size_t k = 0; k < n.y_values().size(); ++k) my += v.y_values()[k] * n.y_values()[k];
    CHECK(std::abs(mx) < 1e-12);
    CHECK(std::abs(my) < 1e-12);
  }

  TEST_CASE("source outflow matches the injection rate") {
    // A closed no-slip box cannot absorb a net source, so the walls are open.
    const GridSpec g = GridSpec::square(-1.0, 1.0, 32);
    FluidSolver solver(g, FluidProperties{1.0, 1.0}, BoundaryCondition::all(BoundaryKind::TractionOpen));
    const double rate = injection_rate(1.0, 0.1, 0.0, 0.01);
    CHECK(rate == doctest::Approx(10.0));
    const CellScalarField q = cosine_source(g, Vec2::Zero(), 0.1, rate);
    double total = 0.0;
    for (double v : q.values()) total += v * g.h * g.h;
    CHECK(total == doctest::Approx(rate).epsilon(1e-12));

    FluidState s(g);
    const StepReport r = solver.advance(s, FaceVectorField(g), &q, 0.01);
    CHECK(r.divergence_error <= 1e-10 * std::max(1.0, r.max_velocity / g.h));
    // Contour along the faces bounding cells [8, 24)^2.
    double flux = 0.0;
    for (int j = 8; j < 24; ++j) flux += (s.u.x(24, j) - s.u.x(8, j)) * g.h;
    for (int i = 8; i < 24; ++i) flux += (s.u.y(i, 24) - s.u.y(i, 8)) * g.h;
    CHECK(std::abs(flux - rate) <= 1e-8 * rate);
  }

  TEST_CASE("injection rate spreads the volume evenly over the window") {
    CHECK(injection_rate(0.05, 0.1, 0.0, 0.01) == doctest::Approx(0.5));
    CHECK(injection_rate(0.05, 0.1, 0.095, 0.01) == doctest::Approx(0.25));
    CHECK(injection_rate(0.05, 0.1, 0.2, 0.01) == 0.0);
  }

  TEST_CASE("discrete incompressibility and energy decay from random states") {
    const GridSpec g = GridSpec::square(0.0, 1.0, 16);
    FluidSolver solver(g, FluidProperties{1.0, 1.0}, BoundaryCondition::all(BoundaryKind::NoSlip));
    std::mt19937_64 rng(42);
    int increases = 0;
    double worst_div = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      FluidState s(g);
      s.u = random_faces(g, rng, true);
      double e = kinetic_energy(s.u, 1.0);
      for (int n = 0; n < 3; ++n) {
        const StepReport r = solver.advance(s, FaceVectorField(g), nullptr, 0.25 * g.h);
        worst_div = std::max(worst_div, r.divergence_error / std::max(1.0, r.max_velocity / g.h));
        const double e1 = kinetic_energy(s.u, 1.0);
        if (e1 > e) ++increases;
        e = e1;
      }
    }
    CHECK(increases == 0);
    CHECK(worst_div <= 1e-10);
  }

  TEST_CASE("Stokes advance is linear") {
    const GridSpec g = GridSpec::square(0.0, 1.0, 16);
    FluidOptions opt;
    opt.advection = Advection::None;
    FluidSolver solver(g, FluidProperties{1.0, 0.5}, BoundaryCondition::all(BoundaryKind::NoSlip), opt);
    std::mt19937_64 rng(1);
    FluidState a(g), b(g), ab(g);
    a.u = random_faces(g, rng, true);
    b.u = random_faces(g, rng, true);
    ab.u = a.u + b.u;
    const FaceVectorField fa = random_faces(g, rng, false), fb = random_faces(g, rng, false);
    const double dt = 0.25 * g.h;
    solver.advance(a, fa, nullptr, dt);
    solver.advance(b, fb, nullptr, dt);
    solver.advance(ab, fa + fb, nullptr, dt);
    CHECK((ab.u - (a.u + b.u)).max_abs() < 1e-9);
  }

  TEST_CASE("Taylor-Green velocity converges at second order") {
    const double mu = 0.05, T = 0.1;
    auto exact = [mu](const Vec2& x, double t) {
      const double s = std::exp(-2.0 * kPi * kPi * mu * t);
      return Vec2(std::sin(kPi * x.x()) * std::cos(kPi * x.y()) * s, -std::cos(kPi * x.x()) * std::sin(kPi * x.y()) * s);
    };
    std::vector<std::pair<int, double>> errors;
    for (int N : {16, 32, 64}) {
      const GridSpec g = GridSpec::square(0.0, 1.0, N);
      BoundaryCondition bc = BoundaryCondition::all(BoundaryKind::NoSlip);
      bc.wall_velocity = exact;
      FluidSolver solver(g, FluidProperties{1.0, mu}, bc);
      FluidState s(g);
      s.u = sample_faces(g, [&](const Vec2& x) { return exact(x, 0.0); });
      const int steps = static_cast<int>(std::ceil(T / (0.25 * g.h)));
      for (int n = 0; n < steps; ++n) solver.advance(s, FaceVectorField(g), nullptr, T / steps);
      errors.emplace_back(N, grid_error_norms(s.u, [&](const Vec2& x) { return exact(x, T); }).linf);
    }
    CHECK(fit_rate(errors).series.rate >= 1.8);
  }
}
