#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "sharpib/errors.hpp"
#include "sharpib/solid_fem.hpp"

using namespace sharpib;

namespace {

constexpr double kPi = std::numbers::pi;

double max_diff(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, (a[k] - b[k]).norm());
  return m;
}

double max_norm(const std::vector<Vec2>& a) {
  double m = 0.0;
  for (const Vec2& v : a) m = std::max(m, v.norm());
  return m;
}

}  // namespace

TEST_SUITE("solid_fem") {
  TEST_CASE("deformation gradient of simple motions") {
    SolidMesh mesh = make_block_mesh(Vec2(0, 0), Vec2(1, 1), 2, 2);
    Kinematics k = deformation_gradient(mesh, 0, Vec2(0.3, -0.2));
    CHECK((k.F - Mat2::Identity()).norm() < 1e-14);
    CHECK(k.J == doctest::Approx(1.0));
    for (Vec2& x : mesh.position) x *= 2.0;
    k = deformation_gradient(mesh, 3, Vec2(-0.5, 0.1));
    CHECK((k.F - 2.0 * Mat2::Identity()).norm() < 1e-14);
    CHECK(k.J == doctest::Approx(4.0));
    CHECK((k.FinvT * k.F.transpose() - Mat2::Identity()).norm() < 1e-12);
  }

  TEST_CASE("inverted and degenerate elements raise") {
    SolidMesh mesh = make_block_mesh(Vec2(0, 0), Vec2(1, 1), 1, 1);
    for (Vec2& x : mesh.position) x.x() = -x.x();
    CHECK_THROWS_AS(deformation_gradient(mesh, 0, Vec2::Zero()), InvertedElement);
    SolidMesh bad = make_block_mesh(Vec2(0, 0), Vec2(1, 1), 1, 1);
    std::swap(bad.elements[0][1], bad.elements[0][3]);
    bad.element_reference[0] = {bad.reference[bad.elements[0][0]], bad.reference[bad.elements[0][1]],
                                bad.reference[bad.elements[0][2]], bad.reference[bad.elements[0][3]]};
    CHECK_THROWS_AS(bad.validate(), DegenerateElement);
  }

  TEST_CASE("static ring map has J = (R + s2) / R") {
    const double R = 0.25, w = 0.0625, eps = 1e-6;
    const Vec2 c(0.5, 0.5);
    for (double s2 : {0.0, w}) {
      for (double s1 : {0.0, 0.3, 1.2}) {
        const Vec2 s(s1, s2);
        Mat2 F;
        F.col(0) = (static_ring_map(s + Vec2(eps, 0), R, c) - static_ring_map(s - Vec2(eps, 0), R, c)) / (2 * eps);
        F.col(1) = (static_ring_map(s + Vec2(0, eps), R, c) - static_ring_map(s - Vec2(0, eps), R, c)) / (2 * eps);
        CHECK(F.determinant() == doctest::Approx((R + s2) / R).epsilon(1e-8));
      }
    }
    // The Q1 interpolant of the map approaches the same J at the inner and
    // outer edges.
    const SolidMesh mesh = make_static_ring_mesh(R, w, c, 256, 1);
    const double J_in = deformation_gradient(mesh, 0, Vec2(0.0, -1.0)).J;
    const double J_out = deformation_gradient(mesh, 0, Vec2(0.0, 1.0)).J;
    CHECK(J_in == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(J_out == doctest::Approx((R + w) / R).epsilon(1e-3));
  }

  TEST_CASE("constitutive models at the identity") {
    const Kinematics id = make_kinematics(Mat2::Identity(), Vec2(0.3, 0.1), Vec2(0.3, 0.1));
    CHECK(first_piola_kirchhoff(PolarNeoHookeanRing{1e4, Vec2::Zero()}, id).norm() < 1e-9);
    for (double nu : {-1.0, 0.0, 0.4}) {
      const Mat2 P = first_piola_kirchhoff(StabilizedNeoHookeanBlock{80.194, nu}, id);
      CHECK((P - (80.194 / 3.0) * Mat2::Identity()).norm() < 1e-12);
    }
    CHECK((first_piola_kirchhoff(CurvilinearRing{1.0, 0.0625}, id) - 16.0 * Mat2::Identity()).norm() < 1e-12);
    CHECK(StabilizedNeoHookeanBlock{3.0, 0.0}.lambda() == doctest::Approx(2.0));
    CHECK_THROWS_AS(validate(ConstitutiveModel(StabilizedNeoHookeanBlock{1.0, 0.5})), ConfigError);
  }

  TEST_CASE("block stress is the gradient of its energy") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> d(-0.5, 0.5);
    for (double nu : {-1.0, 0.0, 0.4}) {
      const StabilizedNeoHookeanBlock model{80.194, nu};
      int tested = 0;
      while (tested < 100) {
        Mat2 F = Mat2::Identity();
        for (int k = 0; k < 4; ++k) F(k / 2, k % 2) += d(rng);
        const double J = F.determinant();
        if (J < 0.5 || J > 2.0) continue;
        const Mat2 P = first_piola_kirchhoff(ConstitutiveModel(model), make_kinematics(F));
        const double eps = 1e-6;
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            Mat2 Fp = F, Fm = F;
            Fp(i, j) += eps;
            Fm(i, j) -= eps;
            const double fd = (block_strain_energy(model, Fp) - block_strain_energy(model, Fm)) / (2 * eps);
            CHECK(std::abs(P(i, j) - fd) <= 1e-6 * std::max(1.0, P.norm()));
          }
        ++tested;
      }
    }
  }

  TEST_CASE("polar stress conversion round trip") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> d(-0.2, 0.2), ang(0.0, 2 * kPi), rad(0.2, 0.4);
    for (int k = 0; k < 50; ++k) {
      const double R = rad(rng), T = ang(rng);
      const Vec2 X(R * std::cos(T), R * std::sin(T));
      Mat2 F = Mat2::Identity();
      for (int q = 0; q < 4; ++q) F(q / 2, q % 2) += d(rng);
      const Vec2 x = X + Vec2(d(rng), d(rng)) * 0.1;
      const Mat2 Fp = polar_deformation_gradient(F, X, x, Vec2::Zero());
      const Mat2 Pp = 1e4 * (Fp - Fp.inverse().transpose());
      const double theta = std::atan2(x.y(), x.x());
      const Mat2 Pc = polar_to_cartesian_stress(Pp, Fp, F, theta);
      CHECK((cartesian_to_polar_stress(Pc, Fp, F, theta) - Pp).norm() <= 1e-12 * Pp.norm());
      const Mat2 model = first_piola_kirchhoff(PolarNeoHookeanRing{1e4, Vec2::Zero()}, make_kinematics(F, X, x));
      CHECK((model - Pc).norm() <= 1e-12 * std::max(1.0, Pc.norm()));
    }
    CHECK((givens(0.3) * givens(-0.3) - Mat2::Identity()).norm() < 1e-15);
  }

  TEST_CASE("force density of unstressed and closed bodies") {
    SolidMesh annulus = make_annulus_mesh(0.25, 0.3125, Vec2::Zero(), 3, 40);
    const std::vector<Vec2> G0 = internal_force_density(annulus, PolarNeoHookeanRing{1e4, Vec2::Zero()}, {}, 0.0);
    CHECK(max_norm(G0) < 1e-6);

    // Any stress field has zero resultant on a body without surface loads.
    for (Vec2& x : annulus.position) x = 1.1 * x + Vec2(0.01 * x.y(), 0.0);
    const MassMatrix mass(annulus);
    const std::vector<Vec2> G = internal_force_density(annulus, PolarNeoHookeanRing{1e4, Vec2::Zero()}, {}, 0.0, mass);
    Vec2 total = Vec2::Zero();
    for (int d = 0; d < 2; ++d) {
      Vector g(annulus.num_nodes());
      for (int a = 0; a < annulus.num_nodes(); ++a) g[a] = G[a][d];
      total[d] = mass.multiply(g).sum();
    }
    CHECK(total.norm() <= 1e-10 * max_norm(G));

    const SolidMesh ring = make_static_ring_mesh(0.25, 0.0625, Vec2(0.5, 0.5), 64, 4);
    const std::vector<Vec2> rhs = assemble_force_rhs(ring, CurvilinearRing{1.0, 0.0625}, {}, 0.0);
    Vec2 sum = Vec2::Zero();
    for (const Vec2& r : rhs) sum += r;
    CHECK(sum.norm() <= 1e-10 * max_norm(rhs));
  }

  TEST_CASE("patch test against a dense assembly") {
    SolidMesh mesh = make_block_mesh(Vec2(0, 0), Vec2(1, 1), 2, 2);
    Mat2 A;
    A << 1.2, 0.3, -0.1, 0.9;
    for (int a = 0; a < mesh.num_nodes(); ++a) mesh.position[a] = A * mesh.reference[a] + Vec2(0.5, -0.2);
    const CurvilinearRing model{1.0, 0.0625};
    const std::vector<Vec2> G = internal_force_density(mesh, model, {}, 0.0);

    // Dense oracle: nodes on a 3x3 lattice, h = 1/2, 2x2 Gauss.
    const int n = 9;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, 2);
    const Mat2 P = (1.0 / 0.0625) * A;
    const double g = 1.0 / std::sqrt(3.0), he = 0.5;
    for (int ey = 0; ey < 2; ++ey)
      for (int ex = 0; ex < 2; ++ex) {
        const int nodes[4] = {ex + 3 * ey, ex + 1 + 3 * ey, ex + 1 + 3 * (ey + 1), ex + 3 * (ey + 1)};
        const double sx[4] = {-1, 1, 1, -1}, sy[4] = {-1, -1, 1, 1};
        for (double qx : {-g, g})
          for (double qy : {-g, g}) {
            const double wq = he * he / 4.0;
            for (int a = 0; a < 4; ++a) {
              const double Na = 0.25 * (1 + sx[a] * qx) * (1 + sy[a] * qy);
              const Vec2 dNa(0.25 * sx[a] * (1 + sy[a] * qy) * 2 / he, 0.25 * sy[a] * (1 + sx[a] * qx) * 2 / he);
              const Vec2 f = -P * dNa * wq;
              rhs(nodes[a], 0) += f.x();
              rhs(nodes[a], 1) += f.y();
              for (int b = 0; b < 4; ++b)
                M(nodes[a], nodes[b]) += Na * 0.25 * (1 + sx[b] * qx) * (1 + sy[b] * qy) * wq;
            }
          }
      }
    const Eigen::MatrixXd Gd = M.ldlt().solve(rhs);
    // Map the lattice to the mesh node numbering by reference position.
    for (int a = 0; a < mesh.num_nodes(); ++a) {
      const Vec2 X = mesh.reference[a];
      const int k = static_cast<int>(std::lround(X.x() * 2)) + 3 * static_cast<int>(std::lround(X.y() * 2));
      CHECK((G[a] - Vec2(Gd(k, 0), Gd(k, 1))).norm() <= 1e-10 * Gd.norm());
    }
  }

  TEST_CASE("force density is translation invariant") {
    SolidMesh block = make_block_mesh(Vec2(5, 10), Vec2(25, 20), 8, 4);
    for (Vec2& x : block.position) x += Vec2(0.1 * std::sin(x.y()), -0.05 * std::cos(x.x()));
    SolidMesh moved = block;
    for (Vec2& x : moved.position) x += Vec2(1.5, -0.7);
    const StabilizedNeoHookeanBlock bm{80.194, 0.4};
    const std::vector<Vec2> a = internal_force_density(block, bm, {}, 0.0);
    const std::vector<Vec2> b = internal_force_density(moved, bm, {}, 0.0);
    CHECK(max_diff(a, b) <= 1e-10 * max_norm(a));

    SolidMesh ring = make_annulus_mesh(0.25, 0.3125, Vec2::Zero(), 2, 32);
    for (Vec2& x : ring.position) x *= 1.05;
    SolidMesh shifted = ring;
    const Vec2 shift(0.2, 0.1);
    for (Vec2& x : shifted.position) x += shift;
    for (Vec2& X : shifted.reference) X += shift;
    for (auto& corners : shifted.element_reference)
      for (Vec2& X : corners) X += shift;
    const std::vector<Vec2> c = internal_force_density(ring, PolarNeoHookeanRing{1e4, Vec2::Zero()}, {}, 0.0);
    const std::vector<Vec2> e = internal_force_density(shifted, PolarNeoHookeanRing{1e4, shift}, {}, 0.0);
    CHECK(max_diff(c, e) <= 1e-9 * max_norm(c));
  }

  TEST_CASE("mass matrix is symmetric positive definite") {
    const SolidMesh mesh = make_block_mesh(Vec2(0, 0), Vec2(1, 1), 4, 4);
    const Eigen::MatrixXd M(assemble_mass_matrix(mesh));
    CHECK((M - M.transpose()).norm() < 1e-15);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
    CHECK(M.sum() == doctest::Approx(1.0));
    const Eigen::MatrixXd L(assemble_mass_matrix(mesh, true));
    CHECK(L.sum() == doctest::Approx(1.0));
  }

  TEST_CASE("surface loads") {
    SolidMesh block = make_block_mesh(Vec2(5, 10), Vec2(25, 20), 8, 4);
    for (const SurfaceLoad& l : {SurfaceLoad(TetherTop{3.0}), SurfaceLoad(TetherBottom{3.0})})
      CHECK(max_norm(tether_and_load_forces(l, block, 1.0)) == 0.0);
    CHECK(ramp_pressure(200.0, 10.0, 5.0) == doctest::Approx(100.0));
    CHECK(ramp_pressure(200.0, 10.0, 20.0) == doctest::Approx(200.0));
    CHECK(smooth_load_profile(10.0, 4.0, 16.0) == doctest::Approx(1.0));
    CHECK(smooth_load_profile(4.0, 4.0, 16.0) == 0.0);

    const Vec2 X(12.0, 20.0), x(12.5, 19.0);
    const Vec2 top = surface_force_density(TetherTop{2.0}, BoundaryTag::Top, X, x, 0.0);
    CHECK(top.x() == doctest::Approx(-1.0));
    CHECK(top.y() == 0.0);
    const Vec2 bottom = surface_force_density(TetherBottom{2.0}, BoundaryTag::Bottom, X, x, 0.0);
    CHECK(bottom.x() == 0.0);
    CHECK(bottom.y() == doctest::Approx(2.0));
    const Vec2 load = surface_force_density(LoadPressureSmooth{200.0, 10.0, 4.0, 16.0, 5.0}, BoundaryTag::Top,
                                            Vec2(15.0, 20.0), x, 5.0);
    CHECK(load.y() == doctest::Approx(-100.0));

    // Total smooth load equals the integral of the profile.
    const std::vector<Vec2> f =
        tether_and_load_forces(LoadPressureDiscontinuous{200.0, 10.0, 5.0, 15.0, 5.0}, make_block_mesh(Vec2(5, 10), Vec2(25, 20), 20, 4), 10.0);
    Vec2 total = Vec2::Zero();
    for (const Vec2& v : f) total += v;
    CHECK(total.y() == doctest::Approx(-2000.0).epsilon(1e-9));
  }
}
