#pragma once

#include <functional>
#include <memory>
#include <string>

#include <Eigen/Sparse>

namespace sharpib {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

/// Sparse Cholesky factorization of an SPD matrix, factored once and reused.
/// Backed by CHOLMOD (supernodal) when available, otherwise Eigen's
/// simplicial LLT.
class CachedCholesky {
 public:
  explicit CachedCholesky(const SparseMatrix& a);
  ~CachedCholesky();
  CachedCholesky(CachedCholesky&&) noexcept;
  CachedCholesky& operator=(CachedCholesky&&) noexcept;

  Vector solve(const Vector& b) const;
  int size() const { return size_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int size_ = 0;
};

struct KrylovReport {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Restarted GMRES with an incomplete-LU (threshold) preconditioner built on
/// construction. Throws SolverDiverged when the tolerance is not reached.
class IluGmres {
 public:
  struct Options {
    double tolerance = 1e-12;
    int max_iterations = 2000;
    int restart = 60;
    double drop_tolerance = 1e-3;
    int fill_factor = 1;
  };

  explicit IluGmres(const SparseMatrix& a) : IluGmres(a, Options{}) {}
  IluGmres(const SparseMatrix& a, const Options& options);
  ~IluGmres();
  IluGmres(IluGmres&&) noexcept;
  IluGmres& operator=(IluGmres&&) noexcept;

  /// Solves A x = b starting from the supplied x.
  KrylovReport solve(const Vector& b, Vector& x) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

using LinearOperator = std::function<void(const Vector&, Vector&)>;

/// Preconditioned conjugate gradients on an SPD (or PSD with a known null
/// space handled by the callbacks) operator. Convergence when
/// ||r|| <= tolerance * max(||b||, floor).
KrylovReport preconditioned_cg(const LinearOperator& apply_a, const LinearOperator& apply_m_inv,
                               const Vector& b, Vector& x, double tolerance, int max_iterations,
                               const std::string& label);

}  // namespace sharpib
