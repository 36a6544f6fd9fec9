#include "sharpib/mac_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sharpib/errors.hpp"

namespace sharpib {

GridSpec GridSpec::create(const Vec2& lower, const Vec2& upper, int nx, int ny) {
  if (nx < 4 || ny < 4) throw ConfigError("GridSpec: at least 4 cells per axis are required");
  if (!(upper.x() > lower.x() && upper.y() > lower.y()))
    throw ConfigError("GridSpec: upper corner must exceed lower corner");
  const double hx = (upper.x() - lower.x()) / nx;
  const double hy = (upper.y() - lower.y()) / ny;
  if (std::abs(hx - hy) > 1e-12 * std::max(hx, hy)) {
    std::ostringstream msg;
    msg << "GridSpec: cells must be square (hx=" << hx << ", hy=" << hy << ")";
    throw ConfigError(msg.str());
  }
  GridSpec g;
  g.lower = lower;
  g.upper = upper;
  g.nx = nx;
  g.ny = ny;
  g.h = hx;
  return g;
}

bool operator==(const GridSpec& a, const GridSpec& b) {
  return a.nx == b.nx && a.ny == b.ny && a.lower == b.lower && a.upper == b.upper;
}

// --- CellScalarField ---------------------------------------------------------

CellScalarField::CellScalarField(const GridSpec& grid, double value)
    : grid_(grid), values_(static_cast<std::size_t>(grid.num_cells()), value) {}

double CellScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double CellScalarField::mean() const {
  if (values_.empty()) return 0.0;
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

CellScalarField& CellScalarField::operator+=(const CellScalarField& other) {
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

CellScalarField& CellScalarField::operator-=(const CellScalarField& other) {
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

CellScalarField& CellScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

CellScalarField operator+(CellScalarField a, const CellScalarField& b) { return a += b; }
CellScalarField operator-(CellScalarField a, const CellScalarField& b) { return a -= b; }
CellScalarField operator*(double s, CellScalarField a) { return a *= s; }

// --- FaceVectorField ---------------------------------------------------------

FaceVectorField::FaceVectorField(const GridSpec& grid, double vx, double vy)
    : grid_(grid),
      x_(static_cast<std::size_t>(grid.num_x_faces()), vx),
      y_(static_cast<std::size_t>(grid.num_y_faces()), vy) {}

double FaceVectorField::max_abs() const {
  double m = 0.0;
  for (double v : x_) m = std::max(m, std::abs(v));
  for (double v : y_) m = std::max(m, std::abs(v));
  return m;
}

FaceVectorField& FaceVectorField::operator+=(const FaceVectorField& other) {
  for (std::size_t k = 0; k < x_.size(); ++k) x_[k] += other.x_[k];
  for (std::size_t k = 0; k < y_.size(); ++k) y_[k] += other.y_[k];
  return *this;
}

FaceVectorField& FaceVectorField::operator-=(const FaceVectorField& other) {
  for (std::size_t k = 0; k < x_.size(); ++k) x_[k] -= other.x_[k];
  for (std::size_t k = 0; k < y_.size(); ++k) y_[k] -= other.y_[k];
  return *this;
}

FaceVectorField& FaceVectorField::operator*=(double s) {
  for (double& v : x_) v *= s;
  for (double& v : y_) v *= s;
  return *this;
}

FaceVectorField operator+(FaceVectorField a, const FaceVectorField& b) { return a += b; }
FaceVectorField operator-(FaceVectorField a, const FaceVectorField& b) { return a -= b; }
FaceVectorField operator*(double s, FaceVectorField a) { return a *= s; }

double inner(const CellScalarField& a, const CellScalarField& b) {
  const auto va = a.values();
  const auto vb = b.values();
  double s = 0.0;
  for (std::size_t k = 0; k < va.size(); ++k) s += va[k] * vb[k];
  return s * a.grid().h * a.grid().h;
}

double inner(const FaceVectorField& a, const FaceVectorField& b) {
  double s = 0.0;
  const auto ax = a.x_values();
  const auto bx = b.x_values();
  for (std::size_t k = 0; k < ax.size(); ++k) s += ax[k] * bx[k];
  const auto ay = a.y_values();
  const auto by = b.y_values();
  for (std::size_t k = 0; k < ay.size(); ++k) s += ay[k] * by[k];
  return s * a.grid().h * a.grid().h;
}

// --- operators ---------------------------------------------------------------

CellScalarField divergence(const FaceVectorField& u) {
  const GridSpec& g = u.grid();
  CellScalarField d(g);
  const double inv_h = 1.0 / g.h;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      d(i, j) = (u.x(i + 1, j) - u.x(i, j) + u.y(i, j + 1) - u.y(i, j)) * inv_h;
  return d;
}

FaceVectorField gradient(const CellScalarField& p) {
  return gradient(p, {std::nullopt, std::nullopt, std::nullopt, std::nullopt});
}

FaceVectorField gradient(const CellScalarField& p,
                         const std::array<std::optional<double>, kNumSides>& dirichlet) {
  const GridSpec& g = p.grid();
  FaceVectorField grad(g);
  const double inv_h = 1.0 / g.h;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) grad.x(i, j) = (p(i, j) - p(i - 1, j)) * inv_h;
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) grad.y(i, j) = (p(i, j) - p(i, j - 1)) * inv_h;

  const auto& left = dirichlet[static_cast<int>(Side::Left)];
  const auto& right = dirichlet[static_cast<int>(Side::Right)];
  const auto& bottom = dirichlet[static_cast<int>(Side::Bottom)];
  const auto& top = dirichlet[static_cast<int>(Side::Top)];
  for (int j = 0; j < g.ny; ++j) {
    if (left) grad.x(0, j) = 2.0 * (p(0, j) - *left) * inv_h;
    if (right) grad.x(g.nx, j) = 2.0 * (*right - p(g.nx - 1, j)) * inv_h;
  }
  for (int i = 0; i < g.nx; ++i) {
    if (bottom) grad.y(i, 0) = 2.0 * (p(i, 0) - *bottom) * inv_h;
    if (top) grad.y(i, g.ny) = 2.0 * (*top - p(i, g.ny - 1)) * inv_h;
  }
  return grad;
}

FaceVectorField face_laplacian_interior(const FaceVectorField& u) {
  const GridSpec& g = u.grid();
  FaceVectorField lap(g);
  const double inv_h2 = 1.0 / (g.h * g.h);
  for (int j = 1; j < g.ny - 1; ++j)
    for (int i = 1; i < g.nx; ++i)
      lap.x(i, j) = (u.x(i + 1, j) + u.x(i - 1, j) + u.x(i, j + 1) + u.x(i, j - 1) - 4.0 * u.x(i, j)) *
                    inv_h2;
  for (int j = 1; j < g.ny; ++j)
    for (int i = 1; i < g.nx - 1; ++i)
      lap.y(i, j) = (u.y(i + 1, j) + u.y(i - 1, j) + u.y(i, j + 1) + u.y(i, j - 1) - 4.0 * u.y(i, j)) *
                    inv_h2;
  return lap;
}

FaceVectorField face_laplacian(const FaceVectorField& u) {
  const GridSpec& g = u.grid();
  FaceVectorField lap(g);
  const double inv_h2 = 1.0 / (g.h * g.h);
  // Tangential neighbours beyond a wall are reflected: ghost = -adjacent.
  auto ux = [&](int i, int j) {
    if (j < 0) return -u.x(i, 0);
    if (j >= g.ny) return -u.x(i, g.ny - 1);
    return u.x(i, j);
  };
  auto uy = [&](int i, int j) {
    if (i < 0) return -u.y(0, j);
    if (i >= g.nx) return -u.y(g.nx - 1, j);
    return u.y(i, j);
  };
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i)
      lap.x(i, j) = (ux(i + 1, j) + ux(i - 1, j) + ux(i, j + 1) + ux(i, j - 1) - 4.0 * ux(i, j)) * inv_h2;
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      lap.y(i, j) = (uy(i + 1, j) + uy(i - 1, j) + uy(i, j + 1) + uy(i, j - 1) - 4.0 * uy(i, j)) * inv_h2;
  return lap;
}

CellScalarField cell_laplacian(const CellScalarField& p) {
  const GridSpec& g = p.grid();
  CellScalarField lap(g);
  const double inv_h2 = 1.0 / (g.h * g.h);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      double s = 0.0;
      const double c = p(i, j);
      if (i > 0) s += p(i - 1, j) - c;
      if (i < g.nx - 1) s += p(i + 1, j) - c;
      if (j > 0) s += p(i, j - 1) - c;
      if (j < g.ny - 1) s += p(i, j + 1) - c;
      lap(i, j) = s * inv_h2;
    }
  }
  return lap;
}

CellScalarField mean_zero_normalize(const CellScalarField& p) {
  CellScalarField out = p;
  const double m = p.mean();
  for (double& v : out.values()) v -= m;
  return out;
}

}  // namespace sharpib
