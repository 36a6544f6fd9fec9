#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "sharpib/mac_grid.hpp"
#include "sharpib/solid_fem.hpp"

namespace sharpib {

struct ErrorReport {
  std::string field;
  std::string method;
  int N = 0;
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

/// Norms of approx - exact over cell centers: L1 = h^2 sum|e|,
/// L2 = sqrt(h^2 sum e^2), Linf = max|e|. With normalize_mean both fields are
/// shifted to zero mean first.
ErrorReport grid_error_norms(const CellScalarField& approx, const CellScalarField& exact, bool normalize_mean);
ErrorReport grid_error_norms(const CellScalarField& approx, const std::function<double(const Vec2&)>& exact,
                             bool normalize_mean);
/// Face-centered errors, both components pooled.
ErrorReport grid_error_norms(const FaceVectorField& approx, const std::function<Vec2(const Vec2&)>& exact);
ErrorReport grid_error_norms(const FaceVectorField& approx, const FaceVectorField& exact);

/// Norms of nodal differences on a solid mesh, weighted by the lumped mass.
ErrorReport nodal_error_norms(const SolidMesh& mesh, const std::vector<double>& approx,
                              const std::vector<double>& exact);

struct RateSeries {
  double rate = 0.0;
  double residual = 0.0;
  std::vector<double> pairwise;
};

struct RateFit {
  std::vector<std::pair<int, double>> points;
  RateSeries series;
};

/// Least-squares slope of log(error) against log(h = 1/N), plus pairwise rates
/// between consecutive entries. Throws NonPositiveError for errors <= 0.
RateFit fit_rate(const std::vector<std::pair<int, double>>& points);

/// Fitted rates below this value are reported as non-convergent.
inline constexpr double kNonConvergenceRate = 0.2;

struct JacobianStats {
  double min = 0.0;
  double max = 0.0;
  double max_deviation = 0.0;
  int inverted = 0;
  std::vector<double> per_element;
};

/// Element-mean J by quadrature. Inverted elements are counted, not thrown.
JacobianStats jacobian_diagnostic(const SolidMesh& mesh);

/// h^2 sum p K(x - center) with K the 2D cosine bump of the given radius,
/// renormalized so that h^2 sum K = 1.
double kernel_sample(const CellScalarField& p, const Vec2& center, double radius);

struct ErrorRow {
  std::string scenario;
  std::string method;
  std::string field;
  std::string norm;
  int N = 0;
  double error = 0.0;
  /// NaN when no rate applies (first resolution).
  double rate = 0.0;
};

void write_error_csv_header(std::ostream& out);
void write_error_row(std::ostream& out, const ErrorRow& row);

/// Rows for every norm of a sequence of reports of one field, with pairwise
/// rates against the previous resolution.
std::vector<ErrorRow> error_rows(const std::string& scenario, const std::vector<ErrorReport>& reports);

}  // namespace sharpib
