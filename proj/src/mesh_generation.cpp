#include <cmath>
#include <numbers>

#include "sharpib/errors.hpp"
#include "sharpib/solid_fem.hpp"

namespace sharpib {

Vec2 static_ring_map(const Vec2& s, double R, const Vec2& center) {
  // Clockwise in s1 so that det(d chi/ds) > 0 with s2 pointing outward.
  const double angle = -s.x() / R;
  return center + (R + s.y()) * Vec2(std::cos(angle), std::sin(angle));
}

SolidMesh make_static_ring_mesh(double R, double w, const Vec2& center, int n1, int n2) {
  if (!(R > 0.0 && w > 0.0)) throw ConfigError("static ring mesh: R and w must be positive");
  if (n1 < 3 || n2 < 1) throw ConfigError("static ring mesh: need n1 >= 3 and n2 >= 1");
  SolidMesh mesh;
  mesh.periodic = {true, false};
  const double ds1 = 2.0 * std::numbers::pi * R / n1;
  const double ds2 = w / n2;
  auto node = [&](int i, int j) { return (i % n1) + n1 * j; };
  for (int j = 0; j <= n2; ++j)
    for (int i = 0; i < n1; ++i) {
      const Vec2 s(i * ds1, j * ds2);
      mesh.reference.push_back(s);
      mesh.position.push_back(static_ring_map(s, R, center));
    }
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i < n1; ++i) {
      const int e = mesh.num_elements();
      mesh.elements.push_back({node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)});
      // Unwrapped corner coordinates so the seam element is not folded.
      mesh.element_reference.push_back({Vec2(i * ds1, j * ds2), Vec2((i + 1) * ds1, j * ds2),
                                        Vec2((i + 1) * ds1, (j + 1) * ds2), Vec2(i * ds1, (j + 1) * ds2)});
      const Quad& q = mesh.elements.back();
      if (j == 0) mesh.boundary.push_back({e, 0, q[0], q[1], BoundaryTag::Inner});
      if (j == n2 - 1) mesh.boundary.push_back({e, 2, q[2], q[3], BoundaryTag::Outer});
    }
  return mesh;
}

SolidMesh make_annulus_mesh(double r_in, double r_out, const Vec2& center, int n_r, int n_theta) {
  if (!(r_in > 0.0 && r_out > r_in)) throw ConfigError("annulus mesh: need 0 < r_in < r_out");
  if (n_r < 1 || n_theta < 3) throw ConfigError("annulus mesh: need n_r >= 1 and n_theta >= 3");
  SolidMesh mesh;
  auto node = [&](int i, int j) { return (i % n_theta) + n_theta * j; };
  for (int j = 0; j <= n_r; ++j) {
    const double r = r_in + (r_out - r_in) * j / n_r;
    for (int i = 0; i < n_theta; ++i) {
      const double th = 2.0 * std::numbers::pi * i / n_theta;
      const Vec2 X = center + r * Vec2(std::cos(th), std::sin(th));
      mesh.reference.push_back(X);
      mesh.position.push_back(X);
    }
  }
  for (int j = 0; j < n_r; ++j)
    for (int i = 0; i < n_theta; ++i) {
      const int e = mesh.num_elements();
      const Quad q{node(i, j), node(i, j + 1), node(i + 1, j + 1), node(i + 1, j)};
      mesh.elements.push_back(q);
      mesh.element_reference.push_back(
          {mesh.reference[q[0]], mesh.reference[q[1]], mesh.reference[q[2]], mesh.reference[q[3]]});
      if (j == 0) mesh.boundary.push_back({e, 3, q[3], q[0], BoundaryTag::Inner});
      if (j == n_r - 1) mesh.boundary.push_back({e, 1, q[1], q[2], BoundaryTag::Outer});
    }
  return mesh;
}

SolidMesh make_block_mesh(const Vec2& lower, const Vec2& upper, int nx, int ny) {
  if (!(upper.x() > lower.x() && upper.y() > lower.y())) throw ConfigError("block mesh: empty rectangle");
  if (nx < 1 || ny < 1) throw ConfigError("block mesh: need at least one element per axis");
  SolidMesh mesh;
  const double dx = (upper.x() - lower.x()) / nx;
  const double dy = (upper.y() - lower.y()) / ny;
  auto node = [&](int i, int j) { return i + (nx + 1) * j; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const Vec2 X(lower.x() + i * dx, lower.y() + j * dy);
      mesh.reference.push_back(X);
      mesh.position.push_back(X);
    }
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int e = mesh.num_elements();
      const Quad q{node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)};
      mesh.elements.push_back(q);
      mesh.element_reference.push_back(
          {mesh.reference[q[0]], mesh.reference[q[1]], mesh.reference[q[2]], mesh.reference[q[3]]});
      if (j == 0) mesh.boundary.push_back({e, 0, q[0], q[1], BoundaryTag::Bottom});
      if (i == nx - 1) mesh.boundary.push_back({e, 1, q[1], q[2], BoundaryTag::Right});
      if (j == ny - 1) mesh.boundary.push_back({e, 2, q[2], q[3], BoundaryTag::Top});
      if (i == 0) mesh.boundary.push_back({e, 3, q[3], q[0], BoundaryTag::Left});
    }
  return mesh;
}

}  // namespace sharpib
