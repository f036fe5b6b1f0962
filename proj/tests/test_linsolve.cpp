#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "magsolve/errors.hpp"
#include "magsolve/linsolve.hpp"
#include "oracle/dense_oracle.hpp"

using namespace magsolve;

namespace {

CsrMatrix from_dense(const std::vector<std::vector<double>> &dense) {
  const int n = static_cast<int>(dense.size());
  std::vector<std::vector<int>> adjacency(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (dense[i][j] != 0.0)
        adjacency[i].push_back(j);
  CsrMatrix A = CsrMatrix::from_adjacency(n, adjacency);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (dense[i][j] != 0.0)
        A.add(i, j, dense[i][j]);
  return A;
}

CsrMatrix identity(int n) {
  std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    dense[i][i] = 1.0;
  return from_dense(dense);
}

/// Random SPD matrix A^T A + I with a dense pattern.
CsrMatrix random_spd(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  std::vector<std::vector<double>> raw(n, std::vector<double>(n));
  for (auto &row : raw)
    for (double &v : row)
      v = entry(rng);
  std::vector<std::vector<double>> spd(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k)
        spd[i][j] += raw[k][i] * raw[k][j];
      if (i == j)
        spd[i][j] += 1.0;
    }
  return from_dense(spd);
}

DenseVector random_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  DenseVector v(n);
  for (double &x : v)
    x = entry(rng);
  return v;
}

} // namespace

TEST_CASE("spmv basic and random against the dense oracle") {
  const CsrMatrix I = identity(4);
  const DenseVector x = random_vector(4, 11);
  const DenseVector y = spmv(I, x);
  for (int i = 0; i < 4; ++i)
    CHECK(y[i] == x[i]);

  std::vector<std::vector<double>> zero(3, std::vector<double>(3, 0.0));
  zero[0][1] = 0.0;
  const CsrMatrix Z = from_dense({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}});
  const DenseVector yz = spmv(Z, random_vector(3, 12));
  for (double v : yz)
    CHECK(v == 0.0);

  // sparse 5x5 against a hand dense multiply
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> entry(-2.0, 2.0);
  std::vector<std::vector<double>> dense(5, std::vector<double>(5, 0.0));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if ((i + j) % 2 == 0)
        dense[i][j] = entry(rng);
  const CsrMatrix A = from_dense(dense);
  const DenseVector v = random_vector(5, 14);
  const DenseVector got = spmv(A, v);
  for (int i = 0; i < 5; ++i) {
    double expect = 0.0;
    for (int j = 0; j < 5; ++j)
      expect += dense[i][j] * v[j];
    CHECK(got[i] == doctest::Approx(expect).epsilon(1e-14));
  }

  CHECK_THROWS_AS(spmv(A, random_vector(4, 15)), std::invalid_argument);
}

TEST_CASE("cg on the identity converges in one iteration") {
  const CsrMatrix I = identity(6);
  const DenseVector rhs = random_vector(6, 21);
  const auto [x, report] = cg_solve(I, rhs, 1e-12, 10);
  CHECK(report.converged);
  CHECK(report.iterations == 1);
  for (int i = 0; i < 6; ++i)
    CHECK(x[i] == doctest::Approx(rhs[i]).epsilon(1e-14));
}

TEST_CASE("cg with a zero right-hand side returns zero in zero iterations") {
  const CsrMatrix A = random_spd(8, 22);
  const auto [x, report] = cg_solve(A, DenseVector(8, 0.0), 1e-12, 10);
  CHECK(report.converged);
  CHECK(report.iterations == 0);
  for (double v : x)
    CHECK(v == 0.0);
}

TEST_CASE("cg matches the dense factorization oracle on random SPD systems") {
  for (unsigned seed : {31u, 32u, 33u}) {
    const CsrMatrix A = random_spd(20, seed);
    const DenseVector rhs = random_vector(20, seed + 100);
    const auto [x, report] = cg_solve(A, rhs, 1e-12, 500);
    CHECK(report.converged);
    CHECK(report.relative_residual <= 1e-12);
    const auto exact = oracle::dense_solve(A, rhs);
    for (int i = 0; i < 20; ++i)
      CHECK(x[i] == doctest::Approx(exact[i]).epsilon(1e-8));
  }
}

TEST_CASE("cg reports non-convergence when the budget is too small") {
  const CsrMatrix A = random_spd(30, 41);
  const DenseVector rhs = random_vector(30, 42);
  const auto [x, report] = cg_solve(A, rhs, 1e-14, 2);
  (void)x;
  CHECK(!report.converged);
  CHECK(report.iterations == 2);
}

TEST_CASE("cg detects an indefinite matrix") {
  // symmetric but indefinite: eigenvalues +1 and -1
  const CsrMatrix A = from_dense({{0.0, 1.0}, {1.0, 0.0}});
  CHECK_THROWS_AS(cg_solve(A, {1.0, 2.0}, 1e-10, 10), NumericalError);

  const CsrMatrix B = from_dense({{1.0, 0.0}, {0.0, -1.0}});
  CHECK_THROWS_AS(cg_solve(B, {1.0, 2.0}, 1e-10, 10), NumericalError);
}

TEST_CASE("energy norm") {
  const CsrMatrix I = identity(5);
  CHECK(energy_norm(I, DenseVector(5, 0.0)) == 0.0);

  const DenseVector x = random_vector(5, 51);
  double euclid = 0.0;
  for (double v : x)
    euclid += v * v;
  CHECK(energy_norm(I, x) == doctest::Approx(std::sqrt(euclid)).epsilon(1e-14));

  const CsrMatrix A = random_spd(12, 52);
  const DenseVector y = random_vector(12, 53);
  const DenseVector ay = spmv(A, y);
  double quad = 0.0;
  for (int i = 0; i < 12; ++i)
    quad += y[i] * ay[i];
  CHECK(energy_norm(A, y) * energy_norm(A, y) == doctest::Approx(quad).epsilon(1e-12));

  const CsrMatrix neg = from_dense({{-1.0, 0.0}, {0.0, -1.0}});
  CHECK_THROWS_AS(energy_norm(neg, {1.0, 1.0}), NumericalError);
}

TEST_CASE("direct solver agrees with the dense oracle and reports residuals") {
  const CsrMatrix A = random_spd(25, 61);
  const DenseVector rhs = random_vector(25, 62);
  DirectSolver solver;
  CHECK(!solver.ready());
  CHECK_THROWS_AS(solver.solve(A, rhs), NumericalError);
  solver.factorize(A);
  CHECK(solver.ready());
  const auto [x, report] = solver.solve(A, rhs);
  CHECK(report.converged);
  CHECK(report.relative_residual < 1e-12);
  const auto exact = oracle::dense_solve(A, rhs);
  for (int i = 0; i < 25; ++i)
    CHECK(x[i] == doctest::Approx(exact[i]).epsilon(1e-9));

  DirectSolver bad;
  const CsrMatrix indefinite = from_dense({{1.0, 0.0}, {0.0, -1.0}});
  CHECK_THROWS_AS(bad.factorize(indefinite), NumericalError);
}

TEST_CASE("matrix market dump") {
  const CsrMatrix A = from_dense({{2.0, -1.0, 0.0}, {-1.0, 2.0, -1.0}, {0.0, -1.0, 2.0}});
  const std::string path = "test_matrix.mtx";
  write_matrix_market(A, path);

  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "%%MatrixMarket matrix coordinate real general");
  int rows = 0, cols = 0, nnz = 0;
  in >> rows >> cols >> nnz;
  CHECK(rows == 3);
  CHECK(cols == 3);
  CHECK(nnz == 7);
  int count = 0;
  int i = 0, j = 0;
  double v = 0.0;
  while (in >> i >> j >> v) {
    CHECK(A.coeff(i - 1, j - 1) == doctest::Approx(v).epsilon(1e-15));
    ++count;
  }
  CHECK(count == nnz);
  std::remove(path.c_str());
}
