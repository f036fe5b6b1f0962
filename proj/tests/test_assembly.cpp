#include <doctest.h>

#include <cmath>
#include <random>

#include "magsolve/assembly.hpp"
#include "magsolve/certify.hpp"
#include "magsolve/errors.hpp"
#include "oracle/dense_oracle.hpp"
#include "test_problems.hpp"

using namespace magsolve;
using test::desk_geometry;
using test::desk_laws;
using test::desk_source;
using test::interpolate;
using test::unit_square_geometry;

namespace {

std::vector<double> random_full(const DofMap &dm, double amplitude, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> coeff(-amplitude, amplitude);
  std::vector<double> full(dm.num_dofs, 0.0);
  for (int f = 0; f < dm.num_free; ++f)
    full[dm.free_to_global[f]] = coeff(rng);
  return full;
}

/// Exact integral of x^a y^b over the reference triangle: a! b! / (a+b+2)!.
double monomial_integral(int a, int b) {
  auto fact = [](int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i)
      r *= i;
    return r;
  };
  return fact(a) * fact(b) / fact(a + b + 2);
}

} // namespace

TEST_CASE("quadrature rules integrate monomials to their stated degree") {
  for (int degree : {2, 4}) {
    const QuadratureRule &rule = triangle_rule(degree);
    double wsum = 0.0;
    for (const auto &n : rule.nodes) {
      CHECK(n.weight > 0.0);
      wsum += n.weight;
    }
    CHECK(wsum == doctest::Approx(0.5).epsilon(1e-14));
    for (int a = 0; a + 0 <= rule.degree; ++a) {
      for (int b = 0; a + b <= rule.degree; ++b) {
        double got = 0.0;
        for (const auto &n : rule.nodes)
          got += n.weight * std::pow(n.x, a) * std::pow(n.y, b);
        CHECK(got == doctest::Approx(monomial_integral(a, b)).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("curl of interpolated linear and quadratic potentials") {
  const TriMesh mesh = generate_benchmark_mesh(1, unit_square_geometry());
  for (int order : {1, 2}) {
    const DofMap dm = build_dofmap(mesh, order);
    const auto ax = interpolate(dm, [](double x, double) { return x; });
    const auto ay = interpolate(dm, [](double, double y) { return y; });
    for (int k = 0; k < mesh.num_triangles(); ++k) {
      for (const auto &qp : assembly_rule(order).nodes) {
        const Flux2 bx = eval_curl(mesh, dm, ax, k, {qp.x, qp.y});
        CHECK(bx.bx == doctest::Approx(0.0).epsilon(1e-13));
        CHECK(bx.by == doctest::Approx(-1.0).epsilon(1e-13));
        const Flux2 by = eval_curl(mesh, dm, ay, k, {qp.x, qp.y});
        CHECK(by.bx == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(by.by == doctest::Approx(0.0).epsilon(1e-13));
      }
    }
  }

  // order 2 reproduces the quadratic x^2 exactly: curl = (0, -2x)
  const DofMap dm2 = build_dofmap(mesh, 2);
  const auto axx = interpolate(dm2, [](double x, double) { return x * x; });
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    for (const auto &qp : assembly_rule(2).nodes) {
      const auto &t = mesh.triangles[k];
      const Point2 &p0 = mesh.nodes[t[0]];
      const Point2 &p1 = mesh.nodes[t[1]];
      const Point2 &p2 = mesh.nodes[t[2]];
      const double x = p0.x + (p1.x - p0.x) * qp.x + (p2.x - p0.x) * qp.y;
      const Flux2 b = eval_curl(mesh, dm2, axx, k, {qp.x, qp.y});
      CHECK(b.bx == doctest::Approx(0.0).epsilon(1e-12));
      CHECK(b.by == doctest::Approx(-2.0 * x).epsilon(1e-12));
    }
  }
}

TEST_CASE("energy of simple states") {
  const GeometrySpec g = unit_square_geometry();
  const TriMesh mesh = generate_benchmark_mesh(1, g);
  const std::vector<MaterialLaw> laws{MaterialLaw::linear(nu0)};
  const SourceSpec no_source = SourceSpec::zero(1);

  for (int order : {1, 2}) {
    const DofMap dm = build_dofmap(mesh, order);
    CHECK(total_energy(mesh, dm, std::vector<double>(dm.num_dofs, 0.0), laws, no_source) == 0.0);

    // uniform b = (1, 0) imposed through a = y
    const auto ay = interpolate(dm, [](double, double y) { return y; });
    CHECK(total_energy(mesh, dm, ay, laws, no_source) ==
          doctest::Approx(397887.357729738).epsilon(1e-12));
  }
}

TEST_CASE("energy matches the independent dense reassembly oracle") {
  const GeometrySpec g = desk_geometry();
  const TriMesh mesh = generate_benchmark_mesh(0, g);
  const auto laws = desk_laws(g);
  const auto source = desk_source(g);

  // order 1: the nonlinear integrand is constant per element, so the
  // degree-7 Duffy oracle is exact and fully independent of the
  // production quadrature
  {
    const DofMap dm = build_dofmap(mesh, 1);
    const auto full = random_full(dm, 0.05, 7);
    const double got = total_energy(mesh, dm, full, laws, source);
    const double expect =
        oracle::dense_energy(mesh, dm, full, laws, source, oracle::OracleRule::Degree7);
    CHECK(got == doctest::Approx(expect).epsilon(1e-12));
  }

  // order 2, linear laws: integrands are polynomial and both rules are exact
  {
    const DofMap dm = build_dofmap(mesh, 2);
    const std::vector<MaterialLaw> linear_laws(3, MaterialLaw::linear(nu0));
    const auto full = random_full(dm, 0.05, 8);
    const double got = total_energy(mesh, dm, full, linear_laws, source);
    const double expect =
        oracle::dense_energy(mesh, dm, full, linear_laws, source, oracle::OracleRule::Degree7);
    CHECK(got == doctest::Approx(expect).epsilon(1e-12));
  }

  // order 2, spline law: the discrete energy is defined by the production
  // rule; the oracle reassembles it through the Vandermonde basis path
  {
    const DofMap dm = build_dofmap(mesh, 2);
    const auto full = random_full(dm, 0.05, 9);
    const double got = total_energy(mesh, dm, full, laws, source);
    const double expect =
        oracle::dense_energy(mesh, dm, full, laws, source, oracle::OracleRule::MatchAssembly);
    CHECK(got == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("residual is the gradient of the energy") {
  const GeometrySpec g = desk_geometry();
  const TriMesh mesh = generate_benchmark_mesh(0, g);
  const auto laws = desk_laws(g);
  const auto source = desk_source(g);

  for (int order : {1, 2}) {
    const DofMap dm = build_dofmap(mesh, order);
    const auto full = random_full(dm, 0.03, 17 + order);
    const DenseVector residual = assemble_residual(mesh, dm, full, laws, source);

    auto mutated = full;
    for (int f = 0; f < dm.num_free; ++f) {
      const int gdof = dm.free_to_global[f];
      const double step = 1e-6 * std::max(1.0, std::abs(full[gdof]));
      mutated[gdof] = full[gdof] + step;
      const double ep = total_energy(mesh, dm, mutated, laws, source);
      mutated[gdof] = full[gdof] - step;
      const double em = total_energy(mesh, dm, mutated, laws, source);
      mutated[gdof] = full[gdof];
      const double fd = (ep - em) / (2.0 * step);
      const double scale = std::max(1.0, std::abs(residual[f]));
      CHECK(std::abs(residual[f] - fd) / scale < 1e-6);
    }

    // and against the dense oracle gradient
    const Eigen::VectorXd oracle_grad =
        oracle::dense_gradient(mesh, dm, full, laws, source, oracle::OracleRule::MatchAssembly);
    for (int f = 0; f < dm.num_free; ++f)
      CHECK(residual[f] == doctest::Approx(oracle_grad[f]).epsilon(1e-11));
  }
}

TEST_CASE("linear law residual is the stiffness action minus the load") {
  const GeometrySpec g = desk_geometry();
  const TriMesh mesh = generate_benchmark_mesh(0, g);
  const std::vector<MaterialLaw> laws(3, MaterialLaw::linear(2.5));
  const auto source = desk_source(g);
  const DofMap dm = build_dofmap(mesh, 1);

  const CsrMatrix K = assemble_metric(mesh, dm, std::vector<double>(dm.num_dofs, 0.0),
                                      NewtonMetric{}, laws);
  const DenseVector minus_load =
      assemble_residual(mesh, dm, std::vector<double>(dm.num_dofs, 0.0), laws, source);

  const auto full = random_full(dm, 0.4, 23);
  const DenseVector residual = assemble_residual(mesh, dm, full, laws, source);
  const DenseVector k_action = spmv(K, restrict_free(dm, full));
  for (int f = 0; f < dm.num_free; ++f)
    CHECK(residual[f] == doctest::Approx(k_action[f] + minus_load[f]).epsilon(1e-11));
}

TEST_CASE("unit right triangle element matrix") {
  TriMesh tri;
  tri.nodes = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  tri.triangles = {{0, 1, 2}};
  tri.region = {0};
  tri.boundary_nodes = {0, 1, 2};

  // hand-built unconstrained dof map to expose the raw element matrix
  DofMap dm;
  dm.order = 1;
  dm.num_dofs = 3;
  dm.num_free = 3;
  dm.dofs_per_element = 3;
  dm.element_dofs = {{0, 1, 2, -1, -1, -1}};
  dm.global_to_free = {0, 1, 2};
  dm.free_to_global = {0, 1, 2};
  dm.dof_points = tri.nodes;

  const std::vector<MaterialLaw> laws{MaterialLaw::linear(1.0)};
  const CsrMatrix K =
      assemble_metric(tri, dm, std::vector<double>(3, 0.0), NewtonMetric{}, laws);

  const double expected[3][3] = {{1.0, -0.5, -0.5}, {-0.5, 0.5, 0.0}, {-0.5, 0.0, 0.5}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(K.coeff(i, j) == doctest::Approx(expected[i][j]).epsilon(1e-14));

  // independent confirmation through the physical-coordinate oracle
  const Eigen::MatrixXd H = oracle::dense_hessian(tri, dm, std::vector<double>(3, 0.0), laws,
                                                  oracle::OracleRule::Degree7);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(H(i, j) == doctest::Approx(expected[i][j]).epsilon(1e-12));
}

TEST_CASE("all three metrics coincide for linear laws") {
  const GeometrySpec g = desk_geometry();
  const TriMesh mesh = generate_benchmark_mesh(0, g);
  const std::vector<MaterialLaw> laws(3, MaterialLaw::linear(nu0));
  const DofMap dm = build_dofmap(mesh, 2);
  const auto full = random_full(dm, 0.1, 31);

  const CsrMatrix newton = assemble_metric(mesh, dm, full, NewtonMetric{}, laws);
  const CsrMatrix kacanov = assemble_metric(mesh, dm, full, KacanovMetric{}, laws);
  const CsrMatrix fixed = assemble_metric(mesh, dm, full, FixedPointMetric{nu0}, laws);
  REQUIRE(newton.nnz() == kacanov.nnz());
  REQUIRE(newton.nnz() == fixed.nnz());
  for (std::size_t k = 0; k < newton.nnz(); ++k) {
    CHECK(newton.values()[k] == doctest::Approx(kacanov.values()[k]).epsilon(1e-12));
    CHECK(newton.values()[k] == doctest::Approx(fixed.values()[k]).epsilon(1e-12));
  }
}

TEST_CASE("metric symmetry, definiteness, and the Newton metric as residual Jacobian") {
  const GeometrySpec g = desk_geometry();
  const TriMesh mesh = generate_benchmark_mesh(0, g);
  const auto laws = desk_laws(g);
  const auto source = desk_source(g);

  for (int order : {1, 2}) {
    const DofMap dm = build_dofmap(mesh, order);
    const auto full = random_full(dm, 0.03, 41 + order);
    const CsrMatrix K = assemble_metric(mesh, dm, full, NewtonMetric{}, laws);

    for (int i = 0; i < K.dim(); ++i)
      for (int k = K.row_offsets()[i]; k < K.row_offsets()[i + 1]; ++k) {
        const int j = K.col_indices()[k];
        const double kij = K.values()[k];
        CHECK(std::abs(kij - K.coeff(j, i)) <= 1e-12 * std::max(1.0, std::abs(kij)));
      }

    const Eigen::VectorXd eigs = oracle::dense_eigenvalues(K);
    CHECK(eigs.minCoeff() > 0.0);

    // matrix action against central differences of the residual
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> dir(-1.0, 1.0);
    for (int probe = 0; probe < 3; ++probe) {
      DenseVector v(dm.num_free);
      for (double &x : v)
        x = dir(rng);
      const DenseVector kv = spmv(K, v);
      const double step = 1e-6;
      auto shifted = full;
      for (int f = 0; f < dm.num_free; ++f)
        shifted[dm.free_to_global[f]] = full[dm.free_to_global[f]] + step * v[f];
      const DenseVector rp = assemble_residual(mesh, dm, shifted, laws, source);
      for (int f = 0; f < dm.num_free; ++f)
        shifted[dm.free_to_global[f]] = full[dm.free_to_global[f]] - step * v[f];
      const DenseVector rm = assemble_residual(mesh, dm, shifted, laws, source);
      double scale = 0.0;
      for (int f = 0; f < dm.num_free; ++f)
        scale = std::max(scale, std::abs(kv[f]));
      for (int f = 0; f < dm.num_free; ++f) {
        const double fd = (rp[f] - rm[f]) / (2.0 * step);
        CHECK(std::abs(kv[f] - fd) / scale < 1e-5);
      }
    }
  }
}

TEST_CASE("metric Rayleigh quotients against the unit stiffness respect the bounds") {
  const GeometrySpec g = desk_geometry();
  const TriMesh mesh = generate_benchmark_mesh(0, g);
  const auto laws = desk_laws(g);
  const auto [gamma, L] = global_material_bounds(laws);
  const DofMap dm = build_dofmap(mesh, 1);
  const auto full = random_full(dm, 0.05, 53);

  const std::vector<MaterialLaw> unit(3, MaterialLaw::linear(1.0));
  const CsrMatrix K1 = assemble_metric(mesh, dm, full, FixedPointMetric{1.0}, unit);

  std::mt19937 rng(54);
  std::uniform_real_distribution<double> dir(-1.0, 1.0);
  struct Case {
    MetricChoice metric;
    double lo, hi;
  };
  const double nu_bar = 4.0e5;
  const std::vector<Case> cases = {{NewtonMetric{}, gamma, L},
                                   {KacanovMetric{}, gamma, L},
                                   {FixedPointMetric{nu_bar}, nu_bar, nu_bar}};
  for (const auto &c : cases) {
    const CsrMatrix K = assemble_metric(mesh, dm, full, c.metric, laws);
    for (int probe = 0; probe < 20; ++probe) {
      DenseVector v(dm.num_free);
      for (double &x : v)
        x = dir(rng);
      const double top = energy_norm(K, v);
      const double bottom = energy_norm(K1, v);
      const double rayleigh = top * top / (bottom * bottom);
      CHECK(rayleigh >= c.lo * (1.0 - 1e-10));
      CHECK(rayleigh <= c.hi * (1.0 + 1e-10));
    }
  }
}

TEST_CASE("fixed-point metric ignores the iterate") {
  const GeometrySpec g = desk_geometry();
  const TriMesh mesh = generate_benchmark_mesh(0, g);
  const auto laws = desk_laws(g);
  const DofMap dm = build_dofmap(mesh, 1);

  const CsrMatrix a = assemble_metric(mesh, dm, random_full(dm, 0.1, 61),
                                      FixedPointMetric{1234.5}, laws);
  const CsrMatrix b = assemble_metric(mesh, dm, random_full(dm, 0.1, 62),
                                      FixedPointMetric{1234.5}, laws);
  REQUIRE(a.nnz() == b.nnz());
  for (std::size_t k = 0; k < a.nnz(); ++k)
    CHECK(a.values()[k] == b.values()[k]);
}

TEST_CASE("coarse functions keep their energy on the refined mesh") {
  // Exact nesting holds whenever the quadrature is exact on both levels:
  // order 1 has piecewise-constant curl (any law), order 2 needs a
  // polynomial energy density, so it runs with linear laws.
  const GeometrySpec g = desk_geometry();
  const TriMesh coarse = generate_benchmark_mesh(0, g);
  const TriMesh fine = refine_uniform(coarse);
  const auto nonlinear = desk_laws(g);
  const std::vector<MaterialLaw> linear(3, MaterialLaw::linear(nu0));
  const auto source = desk_source(g);

  for (int order : {1, 2}) {
    const auto &laws = order == 1 ? nonlinear : linear;
    const DofMap dm_coarse = build_dofmap(coarse, order);
    const DofMap dm_fine = build_dofmap(fine, order);
    const auto coarse_full = random_full(dm_coarse, 0.04, 71 + order);

    std::vector<double> fine_full(dm_fine.num_dofs);
    for (int gd = 0; gd < dm_fine.num_dofs; ++gd)
      fine_full[gd] = test::eval_fe(coarse, dm_coarse, coarse_full, dm_fine.dof_points[gd].x,
                                    dm_fine.dof_points[gd].y);

    const double e_coarse = total_energy(coarse, dm_coarse, coarse_full, laws, source);
    const double e_fine = total_energy(fine, dm_fine, fine_full, laws, source);
    CHECK(e_fine == doctest::Approx(e_coarse).epsilon(1e-12));
  }
}

TEST_CASE("assembly error paths") {
  const GeometrySpec g = desk_geometry();
  const TriMesh mesh = generate_benchmark_mesh(0, g);
  const DofMap dm = build_dofmap(mesh, 1);
  const std::vector<double> zeros(dm.num_dofs, 0.0);
  const auto source = desk_source(g);

  // missing law for a region
  const std::vector<MaterialLaw> too_few{MaterialLaw::linear(nu0)};
  CHECK_THROWS_AS(total_energy(mesh, dm, zeros, too_few, source), ConfigError);
  CHECK_THROWS_AS(assemble_residual(mesh, dm, zeros, too_few, source), ConfigError);

  // Kacanov with an anisotropic law
  std::vector<MaterialLaw> with_magnet(3, MaterialLaw::linear(nu0));
  with_magnet[1] = MaterialLaw::permanent_magnet(nu0, {0.5, 0.0});
  CHECK_THROWS_AS(assemble_metric(mesh, dm, zeros, KacanovMetric{}, with_magnet),
                  UnsupportedMethodError);

  // but Newton handles the permanent magnet fine
  const CsrMatrix K = assemble_metric(mesh, dm, zeros, NewtonMetric{}, with_magnet);
  CHECK(oracle::dense_eigenvalues(K).minCoeff() > 0.0);
}
