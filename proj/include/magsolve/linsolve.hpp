#ifndef MAGSOLVE_LINSOLVE_HPP
#define MAGSOLVE_LINSOLVE_HPP

#include <memory>
#include <string>
#include <vector>

namespace magsolve {

using DenseVector = std::vector<double>;

/// Compressed sparse rows with a fixed symmetric pattern. Column indices are
/// strictly increasing within each row.
class CsrMatrix {
public:
  CsrMatrix() = default;

  /// Build the pattern from per-row column lists (need not be sorted or
  /// unique); all values start at zero.
  static CsrMatrix from_adjacency(int n, const std::vector<std::vector<int>> &rows);

  int dim() const { return n_; }
  std::size_t nnz() const { return cols_.size(); }

  void set_zero();
  /// Accumulate into an existing pattern entry; throws std::out_of_range if
  /// (i, j) is not part of the pattern.
  void add(int i, int j, double value);
  double coeff(int i, int j) const;  ///< 0 for entries outside the pattern

  const std::vector<int> &row_offsets() const { return row_offsets_; }
  const std::vector<int> &col_indices() const { return cols_; }
  const std::vector<double> &values() const { return vals_; }

private:
  int n_ = 0;
  std::vector<int> row_offsets_{0};
  std::vector<int> cols_;
  std::vector<double> vals_;
};

struct LinearSolveReport {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Exact sparse product A x. Throws std::invalid_argument on dimension mismatch.
DenseVector spmv(const CsrMatrix &A, const DenseVector &x);

/// Jacobi-preconditioned conjugate gradients for symmetric positive definite
/// systems, started from zero. On success ||A x - rhs|| <= tol ||rhs||.
/// Exceeding max_it returns a non-converged report; detected negative
/// curvature throws NumericalError.
std::pair<DenseVector, LinearSolveReport> cg_solve(const CsrMatrix &A, const DenseVector &rhs,
                                                   double tol, int max_it);

/// sqrt(x^T A x) for symmetric positive semi-definite A. A quadratic form
/// below -1e-12 ||x||^2 throws NumericalError.
double energy_norm(const CsrMatrix &A, const DenseVector &x);

/// Cached sparse LDLT factorization, reusable across right-hand sides.
/// This is the fast path behind the descent iteration; the fixed-point
/// metric factorizes once per run.
class DirectSolver {
public:
  DirectSolver();
  ~DirectSolver();
  DirectSolver(DirectSolver &&) noexcept;
  DirectSolver &operator=(DirectSolver &&) noexcept;

  /// Throws NumericalError if the matrix is not positive definite.
  void factorize(const CsrMatrix &A);
  bool ready() const;
  /// Solve with the cached factorization; the report carries the true
  /// relative residual of the returned solution.
  std::pair<DenseVector, LinearSolveReport> solve(const CsrMatrix &A, const DenseVector &rhs) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Matrix Market coordinate dump (general, 1-based) for debugging.
void write_matrix_market(const CsrMatrix &A, const std::string &path);

} // namespace magsolve

#endif
