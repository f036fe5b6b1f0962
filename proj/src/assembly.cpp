#include "magsolve/assembly.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "magsolve/errors.hpp"

namespace magsolve {

namespace {

struct BasisEval {
  std::array<double, 6> value;
  std::array<double, 6> dxi;   ///< reference-coordinate gradients
  std::array<double, 6> deta;
};

/// Lagrange shape functions on the reference triangle. Order 2 appends edge
/// bubbles for local edges (01), (12), (20).
BasisEval eval_basis(int order, double xi, double eta) {
  BasisEval b{};
  const double l0 = 1.0 - xi - eta, l1 = xi, l2 = eta;
  if (order == 1) {
    b.value = {l0, l1, l2, 0, 0, 0};
    b.dxi = {-1, 1, 0, 0, 0, 0};
    b.deta = {-1, 0, 1, 0, 0, 0};
    return b;
  }
  b.value = {l0 * (2 * l0 - 1), l1 * (2 * l1 - 1), l2 * (2 * l2 - 1),
             4 * l0 * l1,       4 * l1 * l2,       4 * l2 * l0};
  b.dxi = {1 - 4 * l0, 4 * l1 - 1, 0, 4 * (l0 - l1), 4 * l2, -4 * l2};
  b.deta = {1 - 4 * l0, 0, 4 * l2 - 1, -4 * l1, 4 * l1, 4 * (l0 - l2)};
  return b;
}

struct ElementGeometry {
  double jac[2][2];     ///< d(x,y)/d(xi,eta)
  double inv_t[2][2];   ///< inverse transpose of the Jacobian
  double det;
};

ElementGeometry element_geometry(const TriMesh &mesh, int k) {
  const auto &t = mesh.triangles[k];
  const Point2 &p0 = mesh.nodes[t[0]];
  const Point2 &p1 = mesh.nodes[t[1]];
  const Point2 &p2 = mesh.nodes[t[2]];
  ElementGeometry g;
  g.jac[0][0] = p1.x - p0.x;
  g.jac[0][1] = p2.x - p0.x;
  g.jac[1][0] = p1.y - p0.y;
  g.jac[1][1] = p2.y - p0.y;
  g.det = g.jac[0][0] * g.jac[1][1] - g.jac[0][1] * g.jac[1][0];
  const double inv_det = 1.0 / g.det;
  g.inv_t[0][0] = g.jac[1][1] * inv_det;
  g.inv_t[0][1] = -g.jac[1][0] * inv_det;
  g.inv_t[1][0] = -g.jac[0][1] * inv_det;
  g.inv_t[1][1] = g.jac[0][0] * inv_det;
  return g;
}

/// Physical curl vectors (dphi/dy, -dphi/dx) of all local shape functions.
void physical_curls(const ElementGeometry &g, const BasisEval &b, int ndofs,
                    std::array<Flux2, 6> &curls) {
  for (int i = 0; i < ndofs; ++i) {
    const double gx = g.inv_t[0][0] * b.dxi[i] + g.inv_t[0][1] * b.deta[i];
    const double gy = g.inv_t[1][0] * b.dxi[i] + g.inv_t[1][1] * b.deta[i];
    curls[i] = {gy, -gx};
  }
}

void check_laws(const TriMesh &mesh, const std::vector<MaterialLaw> &laws) {
  for (RegionId r : mesh.region)
    if (r < 0 || r >= static_cast<RegionId>(laws.size()))
      throw ConfigError("assembly: no material law for region " + std::to_string(r));
}

} // namespace

const QuadratureRule &assembly_rule(int order) { return triangle_rule(order == 1 ? 2 : 4); }

Flux2 eval_curl(const TriMesh &mesh, const DofMap &dofmap, const std::vector<double> &full_values,
                int tri_index, Point2 ref) {
  if (tri_index < 0 || tri_index >= mesh.num_triangles())
    throw std::out_of_range("eval_curl: triangle index out of range");
  if (static_cast<int>(full_values.size()) != dofmap.num_dofs)
    throw std::invalid_argument("eval_curl: dof vector length mismatch");
  const ElementGeometry g = element_geometry(mesh, tri_index);
  const BasisEval b = eval_basis(dofmap.order, ref.x, ref.y);
  std::array<Flux2, 6> curls;
  physical_curls(g, b, dofmap.dofs_per_element, curls);
  Flux2 out;
  const auto &dofs = dofmap.element_dofs[tri_index];
  for (int i = 0; i < dofmap.dofs_per_element; ++i) {
    const double a = full_values[dofs[i]];
    out.bx += a * curls[i].bx;
    out.by += a * curls[i].by;
  }
  return out;
}

double total_energy(const TriMesh &mesh, const DofMap &dofmap,
                    const std::vector<double> &full_values,
                    const std::vector<MaterialLaw> &laws, const SourceSpec &source) {
  if (static_cast<int>(full_values.size()) != dofmap.num_dofs)
    throw std::invalid_argument("total_energy: dof vector length mismatch");
  check_laws(mesh, laws);
  const QuadratureRule &rule = assembly_rule(dofmap.order);
  const int nd = dofmap.dofs_per_element;

  std::vector<BasisEval> basis;
  for (const auto &qp : rule.nodes)
    basis.push_back(eval_basis(dofmap.order, qp.x, qp.y));

  double energy = 0.0;
  std::array<Flux2, 6> curls;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const ElementGeometry g = element_geometry(mesh, k);
    const MaterialLaw &law = laws[mesh.region[k]];
    const double j = source.at(mesh.region[k]);
    const auto &dofs = dofmap.element_dofs[k];
    double local = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      physical_curls(g, basis[q], nd, curls);
      Flux2 b;
      double a_val = 0.0;
      for (int i = 0; i < nd; ++i) {
        const double a = full_values[dofs[i]];
        b.bx += a * curls[i].bx;
        b.by += a * curls[i].by;
        a_val += a * basis[q].value[i];
      }
      local += rule.nodes[q].weight * (law.energy_density(b) - j * a_val);
    }
    energy += local * g.det;
  }
  return energy;
}

DenseVector assemble_residual(const TriMesh &mesh, const DofMap &dofmap,
                              const std::vector<double> &full_values,
                              const std::vector<MaterialLaw> &laws, const SourceSpec &source) {
  if (static_cast<int>(full_values.size()) != dofmap.num_dofs)
    throw std::invalid_argument("assemble_residual: dof vector length mismatch");
  check_laws(mesh, laws);
  const QuadratureRule &rule = assembly_rule(dofmap.order);
  const int nd = dofmap.dofs_per_element;

  std::vector<BasisEval> basis;
  for (const auto &qp : rule.nodes)
    basis.push_back(eval_basis(dofmap.order, qp.x, qp.y));

  DenseVector residual(dofmap.num_free, 0.0);
  std::array<Flux2, 6> curls;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const ElementGeometry g = element_geometry(mesh, k);
    const MaterialLaw &law = laws[mesh.region[k]];
    const double j = source.at(mesh.region[k]);
    const auto &dofs = dofmap.element_dofs[k];
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      physical_curls(g, basis[q], nd, curls);
      Flux2 b;
      for (int i = 0; i < nd; ++i) {
        const double a = full_values[dofs[i]];
        b.bx += a * curls[i].bx;
        b.by += a * curls[i].by;
      }
      const Field2 h = law.field_intensity(b);
      const double scale = rule.nodes[q].weight * g.det;
      for (int i = 0; i < nd; ++i) {
        const int f = dofmap.global_to_free[dofs[i]];
        if (f < 0)
          continue;
        residual[f] += scale * (h.hx * curls[i].bx + h.hy * curls[i].by -
                                j * basis[q].value[i]);
      }
    }
  }
  return residual;
}

CsrMatrix build_free_pattern(const TriMesh &mesh, const DofMap &dofmap) {
  std::vector<std::vector<int>> adjacency(dofmap.num_free);
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const auto &dofs = dofmap.element_dofs[k];
    for (int i = 0; i < dofmap.dofs_per_element; ++i) {
      const int fi = dofmap.global_to_free[dofs[i]];
      if (fi < 0)
        continue;
      for (int j = 0; j < dofmap.dofs_per_element; ++j) {
        const int fj = dofmap.global_to_free[dofs[j]];
        if (fj >= 0)
          adjacency[fi].push_back(fj);
      }
    }
  }
  return CsrMatrix::from_adjacency(dofmap.num_free, adjacency);
}

void assemble_metric_into(CsrMatrix &matrix, const TriMesh &mesh, const DofMap &dofmap,
                          const std::vector<double> &full_values, const MetricChoice &metric,
                          const std::vector<MaterialLaw> &laws) {
  if (static_cast<int>(full_values.size()) != dofmap.num_dofs)
    throw std::invalid_argument("assemble_metric: dof vector length mismatch");
  if (matrix.dim() != dofmap.num_free)
    throw std::invalid_argument("assemble_metric: matrix dimension mismatch");
  check_laws(mesh, laws);

  if (std::holds_alternative<KacanovMetric>(metric)) {
    for (const MaterialLaw &law : laws)
      if (!law.is_isotropic())
        throw UnsupportedMethodError("Kacanov metric requires isotropic material laws");
  }

  const QuadratureRule &rule = assembly_rule(dofmap.order);
  const int nd = dofmap.dofs_per_element;

  std::vector<BasisEval> basis;
  for (const auto &qp : rule.nodes)
    basis.push_back(eval_basis(dofmap.order, qp.x, qp.y));

  matrix.set_zero();
  std::array<Flux2, 6> curls;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const ElementGeometry g = element_geometry(mesh, k);
    const MaterialLaw &law = laws[mesh.region[k]];
    const auto &dofs = dofmap.element_dofs[k];
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      physical_curls(g, basis[q], nd, curls);

      SymTensor2 nu;
      if (const auto *fp = std::get_if<FixedPointMetric>(&metric)) {
        nu = {fp->nu_bar, 0.0, fp->nu_bar};
      } else {
        Flux2 b;
        for (int i = 0; i < nd; ++i) {
          const double a = full_values[dofs[i]];
          b.bx += a * curls[i].bx;
          b.by += a * curls[i].by;
        }
        if (std::holds_alternative<KacanovMetric>(metric)) {
          const double nu_ch = law.chord_reluctivity(std::hypot(b.bx, b.by));
          nu = {nu_ch, 0.0, nu_ch};
        } else {
          nu = law.differential_reluctivity(b);
        }
      }

      const double scale = rule.nodes[q].weight * g.det;
      for (int i = 0; i < nd; ++i) {
        const int fi = dofmap.global_to_free[dofs[i]];
        if (fi < 0)
          continue;
        for (int j = 0; j < nd; ++j) {
          const int fj = dofmap.global_to_free[dofs[j]];
          if (fj < 0)
            continue;
          // term-by-term symmetric in i and j, so the assembled matrix is
          // symmetric to the last bit
          const double entry = nu.xx * (curls[i].bx * curls[j].bx) +
                               nu.yy * (curls[i].by * curls[j].by) +
                               nu.xy * (curls[i].bx * curls[j].by + curls[i].by * curls[j].bx);
          matrix.add(fi, fj, scale * entry);
        }
      }
    }
  }
}

CsrMatrix assemble_metric(const TriMesh &mesh, const DofMap &dofmap,
                          const std::vector<double> &full_values, const MetricChoice &metric,
                          const std::vector<MaterialLaw> &laws) {
  CsrMatrix matrix = build_free_pattern(mesh, dofmap);
  assemble_metric_into(matrix, mesh, dofmap, full_values, metric, laws);
  return matrix;
}

} // namespace magsolve
