#include <doctest.h>

#include <random>

#include "sharpib/coupling.hpp"
#include "sharpib/errors.hpp"
#include "test_helpers.hpp"

using namespace sharpib;
using namespace sharpib::testing;

namespace {

InteractionPoints single_point(const Vec2& x) {
  InteractionPoints p;
  p.x.push_back(x);
  p.w.push_back(1.0);
  p.element.push_back(0);
  p.xi.emplace_back(0.0, 0.0);
  return p;
}

Vec2 total_force(const FaceVectorField& f) {
  const double h2 = f.grid().h * f.grid().h;
  Vec2 s = Vec2::Zero();
  for (double v : f.x_values()) s.x() += v * h2;
  for (double v : f.y_values()) s.y() += v * h2;
  return s;
}

const DeltaKernel kKernels[] = {{KernelType::IB4, 0.0}, {KernelType::PiecewiseLinear, 0.0}, {KernelType::Cosine, 0.1}};

}  // namespace

TEST_SUITE("coupling") {
  TEST_CASE("kernel moments") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> off(0.0, 1.0);
    for (int s = 0; s < 1000; ++s) {
      const double r = off(rng);
      double m0 = 0.0, m0l = 0.0, m1 = 0.0;
      for (int k = -3; k <= 3; ++k) {
        m0 += ib4_kernel(r - k);
        m1 += (r - k) * ib4_kernel(r - k);
        m0l += piecewise_linear_kernel(r - k);
      }
      CHECK(std::abs(m0 - 1.0) < 1e-12);
      CHECK(std::abs(m1) < 1e-12);
      CHECK(std::abs(m0l - 1.0) < 1e-12);
    }
    CHECK(ib4_kernel(2.0) == 0.0);
    CHECK(kernel_from_string("ib4") == KernelType::IB4);
    CHECK_THROWS_AS(kernel_from_string("gaussian"), ConfigError);
  }

  TEST_CASE("spreading conserves force") {
    const GridSpec g = GridSpec::square(0.0, 1.0, 32);
    const InteractionPoints p = single_point(Vec2(0.4137, 0.5521));
    for (const DeltaKernel& k : kKernels) {
      const Vec2 t = total_force(spread(p, {Vec2(1.0, 0.0)}, k, g));
      // The cosine kernel is a discrete partition of unity only approximately.
      CHECK(std::abs(t.x() - 1.0) < (k.type == KernelType::Cosine ? 2e-3 : 1e-13));
      CHECK(std::abs(t.y()) < 1e-13);
      CHECK(spread(p, {Vec2::Zero()}, k, g).max_abs() == 0.0);
    }
    InteractionPoints two = single_point(Vec2(0.3, 0.6));
    two.x.push_back(two.x[0]);
    two.w.push_back(1.0);
    two.element.push_back(0);
    two.xi.emplace_back(0.0, 0.0);
    CHECK(spread(two, {Vec2(1.5, -2.0), Vec2(-1.5, 2.0)}, DeltaKernel{}, g).max_abs() == 0.0);
  }

  TEST_CASE("interpolation reproduces constant and linear fields") {
    const GridSpec g = GridSpec::square(0.0, 1.0, 16);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> pos(0.25, 0.75);
    std::vector<Vec2> x;
    for (int k = 0; k < 20; ++k) x.emplace_back(pos(rng), pos(rng));
    for (const DeltaKernel& k : {kKernels[0], kKernels[1]}) {
      for (const Vec2& U : interpolate(FaceVectorField(g, 3.0, -1.0), x, k)) CHECK((U - Vec2(3.0, -1.0)).norm() < 1e-12);
    }
    const FaceVectorField lin = sample_faces(g, [](const Vec2& y) { return Vec2(2.0 * y.x() + 1.0, -y.x()); });
    const std::vector<Vec2> U = interpolate(lin, x, DeltaKernel{});
    for (std::size_t q = 0; q < x.size(); ++q) CHECK((U[q] - Vec2(2.0 * x[q].x() + 1.0, -x[q].x())).norm() < 1e-12);
  }

  TEST_CASE("spread and interpolate are adjoint") {
    const GridSpec g = GridSpec::square(0.0, 1.0, 16);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> pos(0.2, 0.8), val(-1.0, 1.0);
    InteractionPoints p;
    std::vector<Vec2> F;
    for (int q = 0; q < 50; ++q) {
      p.x.emplace_back(pos(rng), pos(rng));
      p.w.push_back(0.1 + std::abs(val(rng)));
      p.element.push_back(0);
      p.xi.emplace_back(0.0, 0.0);
      F.emplace_back(val(rng), val(rng));
    }
    const FaceVectorField u = random_faces(g, rng, false);
    for (const DeltaKernel& k : kKernels) {
      const double lhs = inner(spread(p, F, k, g), u);
      const std::vector<Vec2> U = interpolate(u, p, k);
      double rhs = 0.0;
      for (std::size_t q = 0; q < p.size(); ++q) rhs += F[q].dot(U[q]) * p.w[q];
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
    }
  }

  TEST_CASE("shifting points by one cell shifts the spread field") {
    const GridSpec g = GridSpec::square(0.0, 1.0, 16);
    const Vec2 x0(0.41, 0.47);
    const FaceVectorField a = spread(single_point(x0), {Vec2(1.0, 2.0)}, DeltaKernel{}, g);
    const FaceVectorField b = spread(single_point(x0 + Vec2(g.h, 0.0)), {Vec2(1.0, 2.0)}, DeltaKernel{}, g);
    double worst = 0.0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) worst = std::max(worst, std::abs(b.x(i + 1, j) - a.x(i, j)));
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i + 1 < g.nx; ++i) worst = std::max(worst, std::abs(b.y(i + 1, j) - a.y(i, j)));
    CHECK(worst < 1e-10);
  }

  TEST_CASE("stencils leaving the grid raise") {
    const GridSpec g = GridSpec::square(0.0, 1.0, 16);
    CHECK_THROWS_AS(spread(single_point(Vec2(0.01, 0.5)), {Vec2(1.0, 0.0)}, DeltaKernel{}, g), PointOutOfDomain);
    CHECK_THROWS_AS(interpolate(FaceVectorField(g), {Vec2(0.5, 0.99)}, DeltaKernel{}), PointOutOfDomain);
    CHECK_THROWS_AS(interpolate(CellScalarField(g, 1.0), {Vec2(0.02, 0.5)}, DeltaKernel{}), PointOutOfDomain);
  }

  TEST_CASE("clipped stencils drop the weights outside the grid") {
    const GridSpec g = GridSpec::square(0.0, 1.0, 16);
    DeltaKernel k;
    k.clip_to_grid = true;
    const Vec2 x(0.01, 0.5);
    const Vec2 t = total_force(spread(single_point(x), {Vec2(1.0, 0.0)}, k, g));
    CHECK(t.x() > 0.5);
    CHECK(t.x() < 1.0);
    const double v = interpolate(CellScalarField(g, 1.0), {x}, k)[0];
    CHECK(v > 0.5);
    CHECK(v < 1.0);
    // Far from the edge clipping changes nothing.
    DeltaKernel plain;
    const Vec2 y(0.43, 0.61);
    CHECK(total_force(spread(single_point(y), {Vec2(1.0, 0.0)}, k, g)).x() ==
          doctest::Approx(total_force(spread(single_point(y), {Vec2(1.0, 0.0)}, plain, g)).x()).epsilon(1e-15));
  }

  TEST_CASE("cell field interpolation is exact for linear data") {
    const GridSpec g = GridSpec::square(0.0, 1.0, 32);
    CellScalarField p(g);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) p(i, j) = 0.4 - 1.3 * g.cell_center(i, j).x() + 2.1 * g.cell_center(i, j).y();
    const std::vector<Vec2> xs = {Vec2(0.31, 0.72), Vec2(0.5, 0.5), Vec2(0.2013, 0.35)};
    for (const DeltaKernel& k : {DeltaKernel{KernelType::IB4, 0.0}, DeltaKernel{KernelType::PiecewiseLinear, 0.0}}) {
      const std::vector<double> v = interpolate(p, xs, k);
      for (std::size_t q = 0; q < xs.size(); ++q)
        CHECK(v[q] == doctest::Approx(0.4 - 1.3 * xs[q].x() + 2.1 * xs[q].y()).epsilon(1e-13));
    }
  }

  TEST_CASE("nodal projection") {
    SolidMesh mesh = make_annulus_mesh(0.25, 0.3125, Vec2(0.5, 0.5), 2, 24);
    const InteractionPoints pts = make_interaction_points(mesh, 1.0 / 64.0);
    for (double w : pts.w) CHECK(w > 0.0);
    const MassMatrix mass(mesh);

    const std::vector<Vec2> constant(pts.size(), Vec2(0.7, -0.2));
    for (const Vec2& v : project_nodal_velocity(constant, pts, mesh, mass)) CHECK((v - Vec2(0.7, -0.2)).norm() < 1e-10);

    std::vector<Vec2> nodal;
    for (const Vec2& X : mesh.reference) nodal.emplace_back(std::sin(7 * X.x()), X.x() * X.y());
    const std::vector<Vec2> back = project_nodal_velocity(evaluate_at_points(mesh, nodal, pts), pts, mesh, mass);
    for (int a = 0; a < mesh.num_nodes(); ++a) CHECK((back[a] - nodal[a]).norm() < 1e-10);

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::vector<Vec2> data;
    for (std::size_t q = 0; q < pts.size(); ++q) data.emplace_back(val(rng), val(rng));
    const std::vector<Vec2> proj = project_nodal_velocity(data, pts, mesh, mass);
    const std::vector<Vec2> at = evaluate_at_points(mesh, proj, pts);
    std::vector<Vec2> residual(mesh.num_nodes(), Vec2::Zero());
    for (std::size_t q = 0; q < pts.size(); ++q) {
      const auto N = q1::shape(pts.xi[q]);
      for (int a = 0; a < 4; ++a) residual[mesh.elements[pts.element[q]][a]] += N[a] * pts.w[q] * (data[q] - at[q]);
    }
    double worst = 0.0;
    for (const Vec2& r : residual) worst = std::max(worst, r.norm());
    CHECK(worst < 1e-10);
  }
}
