#include "sharpib/linear_solvers.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <unsupported/Eigen/IterativeSolvers>

#ifdef SHARPIB_HAVE_CHOLMOD
#include <Eigen/CholmodSupport>
#endif

#include "sharpib/errors.hpp"

namespace sharpib {

struct CachedCholesky::Impl {
#ifdef SHARPIB_HAVE_CHOLMOD
  Eigen::CholmodSupernodalLLT<SparseMatrix> llt;
#else
  Eigen::SimplicialLLT<SparseMatrix> llt;
#endif
};

CachedCholesky::CachedCholesky(const SparseMatrix& a) : impl_(std::make_unique<Impl>()) {
  if (a.rows() != a.cols()) throw Error("CachedCholesky: matrix must be square");
  size_ = static_cast<int>(a.rows());
  impl_->llt.compute(a);
  if (impl_->llt.info() != Eigen::Success)
    throw SolverDiverged("CachedCholesky: factorization failed (matrix not SPD?)", 0, 1.0);
}

CachedCholesky::~CachedCholesky() = default;
CachedCholesky::CachedCholesky(CachedCholesky&&) noexcept = default;
CachedCholesky& CachedCholesky::operator=(CachedCholesky&&) noexcept = default;

Vector CachedCholesky::solve(const Vector& b) const {
  Vector x = impl_->llt.solve(b);
  if (impl_->llt.info() != Eigen::Success) throw SolverDiverged("CachedCholesky: solve failed", 0, 1.0);
  return x;
}

struct IluGmres::Impl {
  SparseMatrix a;
  Eigen::GMRES<SparseMatrix, Eigen::IncompleteLUT<double>> gmres;
  Options options;
};

IluGmres::IluGmres(const SparseMatrix& a, const Options& options) : impl_(std::make_unique<Impl>()) {
  impl_->a = a;
  impl_->a.makeCompressed();
  impl_->options = options;
  auto& g = impl_->gmres;
  g.preconditioner().setDroptol(options.drop_tolerance);
  g.preconditioner().setFillfactor(options.fill_factor);
  g.set_restart(options.restart);
  g.setTolerance(options.tolerance);
  g.setMaxIterations(options.max_iterations);
  g.compute(impl_->a);
  if (g.info() != Eigen::Success) throw SolverDiverged("IluGmres: ILUT factorization failed", 0, 1.0);
}

IluGmres::~IluGmres() = default;
IluGmres::IluGmres(IluGmres&&) noexcept = default;
IluGmres& IluGmres::operator=(IluGmres&&) noexcept = default;

KrylovReport IluGmres::solve(const Vector& b, Vector& x) const {
  auto& g = impl_->gmres;
  if (x.size() != b.size()) x = Vector::Zero(b.size());
  // Eigen measures convergence against the preconditioned initial residual; the
  // report carries the true residual relative to ||b|| as well.
  x = g.solveWithGuess(b, x);
  KrylovReport report;
  report.iterations = static_cast<int>(g.iterations());
  const double bn = b.norm();
  report.relative_residual = bn > 0.0 ? (b - impl_->a * x).norm() / bn : 0.0;
  if (g.info() != Eigen::Success)
    throw SolverDiverged("IluGmres: no convergence", report.iterations, g.error());
  return report;
}

KrylovReport preconditioned_cg(const LinearOperator& apply_a, const LinearOperator& apply_m_inv,
                               const Vector& b, Vector& x, double tolerance, int max_iterations,
                               const std::string& label) {
  const Eigen::Index n = b.size();
  if (x.size() != n) x = Vector::Zero(n);
  Vector r(n), z(n), p(n), q(n);
  apply_a(x, q);
  r = b - q;
  const double bnorm = std::max(b.norm(), 1e-300);
  KrylovReport report;
  double rnorm = r.norm();
  report.relative_residual = rnorm / bnorm;
  if (rnorm == 0.0 || rnorm <= tolerance * bnorm) return report;

  apply_m_inv(r, z);
  p = z;
  double rz = r.dot(z);
  for (int k = 1; k <= max_iterations; ++k) {
    apply_a(p, q);
    const double pq = p.dot(q);
    if (!(pq > 0.0)) {
      report.iterations = k;
      throw SolverDiverged(label + ": operator not positive definite", k, rnorm / bnorm);
    }
    const double alpha = rz / pq;
    x += alpha * p;
    r -= alpha * q;
    rnorm = r.norm();
    report.iterations = k;
    report.relative_residual = rnorm / bnorm;
    if (rnorm <= tolerance * bnorm) return report;
    apply_m_inv(r, z);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  throw SolverDiverged(label + ": iteration cap reached", report.iterations, report.relative_residual);
}

}  // namespace sharpib
