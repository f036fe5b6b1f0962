#include "magsolve/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <Eigen/SparseCholesky>

#include "magsolve/errors.hpp"

namespace magsolve {

CsrMatrix CsrMatrix::from_adjacency(int n, const std::vector<std::vector<int>> &rows) {
  if (static_cast<int>(rows.size()) != n)
    throw std::invalid_argument("CsrMatrix: adjacency size mismatch");
  CsrMatrix A;
  A.n_ = n;
  A.row_offsets_.assign(n + 1, 0);
  std::vector<int> sorted;
  for (int i = 0; i < n; ++i) {
    sorted = rows[i];
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (int j : sorted) {
      if (j < 0 || j >= n)
        throw std::invalid_argument("CsrMatrix: column index out of range");
      A.cols_.push_back(j);
    }
    A.row_offsets_[i + 1] = static_cast<int>(A.cols_.size());
  }
  A.vals_.assign(A.cols_.size(), 0.0);
  return A;
}

void CsrMatrix::set_zero() { std::fill(vals_.begin(), vals_.end(), 0.0); }

void CsrMatrix::add(int i, int j, double value) {
  const auto begin = cols_.begin() + row_offsets_[i];
  const auto end = cols_.begin() + row_offsets_[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j)
    throw std::out_of_range("CsrMatrix::add: entry outside the pattern");
  vals_[it - cols_.begin()] += value;
}

double CsrMatrix::coeff(int i, int j) const {
  const auto begin = cols_.begin() + row_offsets_[i];
  const auto end = cols_.begin() + row_offsets_[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j)
    return 0.0;
  return vals_[it - cols_.begin()];
}

DenseVector spmv(const CsrMatrix &A, const DenseVector &x) {
  if (static_cast<int>(x.size()) != A.dim())
    throw std::invalid_argument("spmv: dimension mismatch");
  DenseVector y(A.dim(), 0.0);
  const auto &offs = A.row_offsets();
  const auto &cols = A.col_indices();
  const auto &vals = A.values();
  for (int i = 0; i < A.dim(); ++i) {
    double acc = 0.0;
    for (int k = offs[i]; k < offs[i + 1]; ++k)
      acc += vals[k] * x[cols[k]];
    y[i] = acc;
  }
  return y;
}

namespace {

double dot(const DenseVector &a, const DenseVector &b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    acc += a[i] * b[i];
  return acc;
}

double norm2(const DenseVector &a) { return std::sqrt(dot(a, a)); }

} // namespace

std::pair<DenseVector, LinearSolveReport> cg_solve(const CsrMatrix &A, const DenseVector &rhs,
                                                   double tol, int max_it) {
  if (static_cast<int>(rhs.size()) != A.dim())
    throw std::invalid_argument("cg_solve: dimension mismatch");
  if (!(tol > 0.0))
    throw std::invalid_argument("cg_solve: tolerance must be positive");

  const int n = A.dim();
  DenseVector x(n, 0.0);
  LinearSolveReport report;

  const double rhs_norm = norm2(rhs);
  if (rhs_norm == 0.0) {
    report.converged = true;
    return {x, report};
  }

  DenseVector diag_inv(n, 1.0);
  const auto &offs = A.row_offsets();
  const auto &cols = A.col_indices();
  const auto &vals = A.values();
  for (int i = 0; i < n; ++i) {
    for (int k = offs[i]; k < offs[i + 1]; ++k) {
      if (cols[k] == i) {
        if (!(vals[k] > 0.0))
          throw NumericalError("cg_solve: non-positive diagonal, matrix is not SPD");
        diag_inv[i] = 1.0 / vals[k];
      }
    }
  }

  DenseVector r = rhs;
  DenseVector z(n), p(n), q(n);
  for (int i = 0; i < n; ++i)
    z[i] = diag_inv[i] * r[i];
  p = z;
  double rz = dot(r, z);

  for (int it = 1; it <= max_it; ++it) {
    q = spmv(A, p);
    const double pq = dot(p, q);
    if (pq <= 0.0)
      throw NumericalError("cg_solve: negative curvature, matrix is not SPD");
    const double alpha = rz / pq;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    report.iterations = it;
    report.relative_residual = norm2(r) / rhs_norm;
    if (report.relative_residual <= tol) {
      report.converged = true;
      return {x, report};
    }
    for (int i = 0; i < n; ++i)
      z[i] = diag_inv[i] * r[i];
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (int i = 0; i < n; ++i)
      p[i] = z[i] + beta * p[i];
  }
  report.converged = false;
  return {x, report};
}

double energy_norm(const CsrMatrix &A, const DenseVector &x) {
  const DenseVector ax = spmv(A, x);
  const double q = dot(x, ax);
  if (q < -1e-12 * dot(x, x))
    throw NumericalError("energy_norm: quadratic form is negative");
  return std::sqrt(std::max(q, 0.0));
}

// ---------------------------------------------------------------------------
// DirectSolver
// ---------------------------------------------------------------------------

struct DirectSolver::Impl {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  bool ready = false;
};

DirectSolver::DirectSolver() : impl_(std::make_unique<Impl>()) {}
DirectSolver::~DirectSolver() = default;
DirectSolver::DirectSolver(DirectSolver &&) noexcept = default;
DirectSolver &DirectSolver::operator=(DirectSolver &&) noexcept = default;

namespace {

Eigen::SparseMatrix<double> to_eigen(const CsrMatrix &A) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(A.nnz());
  const auto &offs = A.row_offsets();
  const auto &cols = A.col_indices();
  const auto &vals = A.values();
  for (int i = 0; i < A.dim(); ++i)
    for (int k = offs[i]; k < offs[i + 1]; ++k)
      triplets.emplace_back(i, cols[k], vals[k]);
  Eigen::SparseMatrix<double> M(A.dim(), A.dim());
  M.setFromTriplets(triplets.begin(), triplets.end());
  return M;
}

} // namespace

void DirectSolver::factorize(const CsrMatrix &A) {
  impl_->ldlt.compute(to_eigen(A));
  if (impl_->ldlt.info() != Eigen::Success || impl_->ldlt.vectorD().minCoeff() <= 0.0)
    throw NumericalError("DirectSolver: factorization failed, matrix is not SPD");
  impl_->ready = true;
}

bool DirectSolver::ready() const { return impl_->ready; }

std::pair<DenseVector, LinearSolveReport> DirectSolver::solve(const CsrMatrix &A,
                                                              const DenseVector &rhs) const {
  if (!impl_->ready)
    throw NumericalError("DirectSolver: solve before factorize");
  Eigen::Map<const Eigen::VectorXd> b(rhs.data(), rhs.size());
  Eigen::VectorXd x = impl_->ldlt.solve(b);
  DenseVector result(x.data(), x.data() + x.size());

  LinearSolveReport report;
  report.iterations = 1;
  const double rhs_norm = b.norm();
  if (rhs_norm > 0.0) {
    const DenseVector ax = spmv(A, result);
    double res = 0.0;
    for (std::size_t i = 0; i < result.size(); ++i)
      res += (ax[i] - rhs[i]) * (ax[i] - rhs[i]);
    report.relative_residual = std::sqrt(res) / rhs_norm;
  }
  report.converged = true;
  return {result, report};
}

void write_matrix_market(const CsrMatrix &A, const std::string &path) {
  std::ofstream out(path);
  if (!out)
    throw ConfigError("cannot open matrix output file: " + path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.dim() << " " << A.dim() << " " << A.nnz() << "\n";
  out.precision(17);
  const auto &offs = A.row_offsets();
  const auto &cols = A.col_indices();
  const auto &vals = A.values();
  for (int i = 0; i < A.dim(); ++i)
    for (int k = offs[i]; k < offs[i + 1]; ++k)
      out << i + 1 << " " << cols[k] + 1 << " " << vals[k] << "\n";
}

} // namespace magsolve
