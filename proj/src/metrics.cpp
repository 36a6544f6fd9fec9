#include "sharpib/metrics.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "sharpib/errors.hpp"

namespace sharpib {

namespace {

struct Accumulator {
  double sum_abs = 0.0;
  double sum_sq = 0.0;
  double max_abs = 0.0;

  void add(double e) {
    sum_abs += std::abs(e);
    sum_sq += e * e;
    max_abs = std::max(max_abs, std::abs(e));
  }
  ErrorReport report(double area_weight, int N) const {
    ErrorReport r;
    r.N = N;
    r.l1 = area_weight * sum_abs;
    r.l2 = std::sqrt(area_weight * sum_sq);
    r.linf = max_abs;
    return r;
  }
};

}  // namespace

ErrorReport grid_error_norms(const CellScalarField& approx, const CellScalarField& exact, bool normalize_mean) {
  if (!(approx.grid() == exact.grid())) throw Error("grid_error_norms: grid mismatch");
  const double shift = normalize_mean ? approx.mean() - exact.mean() : 0.0;
  const auto a = approx.values();
  const auto b = exact.values();
  Accumulator acc;
  for (std::size_t k = 0; k < a.size(); ++k) acc.add(a[k] - b[k] - shift);
  const GridSpec& g = approx.grid();
  return acc.report(g.h * g.h, g.nx);
}

ErrorReport grid_error_norms(const CellScalarField& approx, const std::function<double(const Vec2&)>& exact,
                             bool normalize_mean) {
  const GridSpec& g = approx.grid();
  CellScalarField e(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) e(i, j) = exact(g.cell_center(i, j));
  return grid_error_norms(approx, e, normalize_mean);
}

ErrorReport grid_error_norms(const FaceVectorField& approx, const FaceVectorField& exact) {
  if (!(approx.grid() == exact.grid())) throw Error("grid_error_norms: grid mismatch");
  Accumulator acc;
  const auto ax = approx.x_values();
  const auto bx = exact.x_values();
  for (std::size_t k = 0; k < ax.size(); ++k) acc.add(ax[k] - bx[k]);
  const auto ay = approx.y_values();
  const auto by = exact.y_values();
  for (std::size_t k = 0; k < ay.size(); ++k) acc.add(ay[k] - by[k]);
  const GridSpec& g = approx.grid();
  return acc.report(g.h * g.h, g.nx);
}

ErrorReport grid_error_norms(const FaceVectorField& approx, const std::function<Vec2(const Vec2&)>& exact) {
  const GridSpec& g = approx.grid();
  FaceVectorField e(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) e.x(i, j) = exact(g.x_face(i, j)).x();
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) e.y(i, j) = exact(g.y_face(i, j)).y();
  return grid_error_norms(approx, e);
}

ErrorReport nodal_error_norms(const SolidMesh& mesh, const std::vector<double>& approx,
                              const std::vector<double>& exact) {
  if (approx.size() != exact.size() || static_cast<int>(approx.size()) != mesh.num_nodes())
    throw Error("nodal_error_norms: size mismatch");
  const SparseMatrix m = assemble_mass_matrix(mesh, true);
  ErrorReport r;
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t a = 0; a < approx.size(); ++a) {
    const double e = approx[a] - exact[a];
    const double w = m.coeff(a, a);
    s1 += w * std::abs(e);
    s2 += w * e * e;
    r.linf = std::max(r.linf, std::abs(e));
  }
  r.l1 = s1;
  r.l2 = std::sqrt(s2);
  return r;
}

RateFit fit_rate(const std::vector<std::pair<int, double>>& points) {
  if (points.size() < 2) throw Error("fit_rate: at least two points are required");
  RateFit fit;
  fit.points = points;
  std::vector<double> lx, ly;
  for (const auto& [N, e] : points) {
    if (!(e > 0.0)) {
      std::ostringstream msg;
      msg << "fit_rate: non-positive error " << e << " at N = " << N;
      throw NonPositiveError(msg.str());
    }
    if (N <= 0) throw NonPositiveError("fit_rate: N must be positive");
    lx.push_back(std::log(1.0 / N));
    ly.push_back(std::log(e));
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxy += (lx[k] - mx) * (ly[k] - my);
    sxx += (lx[k] - mx) * (lx[k] - mx);
  }
  fit.series.rate = sxy / sxx;
  const double intercept = my - fit.series.rate * mx;
  double res = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    const double d = ly[k] - (intercept + fit.series.rate * lx[k]);
    res += d * d;
  }
  fit.series.residual = std::sqrt(res);
  for (std::size_t k = 1; k < lx.size(); ++k)
    fit.series.pairwise.push_back((ly[k] - ly[k - 1]) / (lx[k] - lx[k - 1]));
  return fit;
}

JacobianStats jacobian_diagnostic(const SolidMesh& mesh) {
  JacobianStats s;
  s.min = std::numeric_limits<double>::infinity();
  s.max = -std::numeric_limits<double>::infinity();
  const GaussRule& g = GaussRule::legendre(std::max(mesh.quadrature_order, 2));
  s.per_element.resize(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    double jsum = 0.0, vol = 0.0;
    bool inverted = false;
    for (std::size_t i = 0; i < g.points.size(); ++i)
      for (std::size_t j = 0; j < g.points.size(); ++j) {
        const ElementPoint p = evaluate_element(mesh, e, Vec2(g.points[i], g.points[j]));
        const double J = p.F.determinant();
        if (!(J > 0.0)) inverted = true;
        const double w = g.weights[i] * g.weights[j] * p.detJ_ref;
        jsum += w * J;
        vol += w;
      }
    const double Je = jsum / vol;
    if (inverted) ++s.inverted;
    s.per_element[e] = Je;
    s.min = std::min(s.min, Je);
    s.max = std::max(s.max, Je);
    s.max_deviation = std::max(s.max_deviation, std::abs(Je - 1.0));
  }
  return s;
}

double kernel_sample(const CellScalarField& p, const Vec2& center, double radius) {
  const GridSpec& g = p.grid();
  if (center.x() - radius < g.lower.x() || center.x() + radius > g.upper.x() || center.y() - radius < g.lower.y() ||
      center.y() + radius > g.upper.y())
    throw PointOutOfDomain("kernel_sample: kernel support leaves the grid");
  double sum_k = 0.0, sum_pk = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const Vec2 d = g.cell_center(i, j) - center;
      if (std::abs(d.x()) >= radius || std::abs(d.y()) >= radius) continue;
      const double k = (1.0 + std::cos(std::numbers::pi * d.x() / radius)) *
                       (1.0 + std::cos(std::numbers::pi * d.y() / radius));
      sum_k += k;
      sum_pk += k * p(i, j);
    }
  if (!(sum_k > 0.0)) throw PointOutOfDomain("kernel_sample: no cell centers inside the kernel support");
  return sum_pk / sum_k;
}

void write_error_csv_header(std::ostream& out) { out << "scenario,method,field,norm,N,error,rate\n"; }

void write_error_row(std::ostream& out, const ErrorRow& row) {
  out << row.scenario << ',' << row.method << ',' << row.field << ',' << row.norm << ',' << row.N << ','
      << std::setprecision(17) << row.error << ',';
  if (std::isnan(row.rate))
    out << "";
  else
    out << row.rate;
  out << '\n';
}

std::vector<ErrorRow> error_rows(const std::string& scenario, const std::vector<ErrorReport>& reports) {
  std::vector<ErrorRow> rows;
  const char* names[3] = {"L1", "L2", "Linf"};
  for (int n = 0; n < 3; ++n) {
    for (std::size_t k = 0; k < reports.size(); ++k) {
      const ErrorReport& r = reports[k];
      const double e = n == 0 ? r.l1 : n == 1 ? r.l2 : r.linf;
      double rate = std::numeric_limits<double>::quiet_NaN();
      if (k > 0) {
        const ErrorReport& p = reports[k - 1];
        const double ep = n == 0 ? p.l1 : n == 1 ? p.l2 : p.linf;
        if (e > 0.0 && ep > 0.0) rate = std::log(ep / e) / std::log(static_cast<double>(r.N) / p.N);
      }
      rows.push_back({scenario, r.method, r.field, names[n], r.N, e, rate});
    }
  }
  return rows;
}

}  // namespace sharpib
