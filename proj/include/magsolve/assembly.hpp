#ifndef MAGSOLVE_ASSEMBLY_HPP
#define MAGSOLVE_ASSEMBLY_HPP

#include <variant>
#include <vector>

#include "magsolve/dofmap.hpp"
#include "magsolve/linsolve.hpp"
#include "magsolve/material.hpp"
#include "magsolve/mesh.hpp"
#include "magsolve/quadrature.hpp"

namespace magsolve {

/// Scalar current density per region (A/m^2), zero outside the coils.
struct SourceSpec {
  std::vector<double> current_density;  ///< indexed by RegionId

  static SourceSpec zero(int num_regions) { return {std::vector<double>(num_regions, 0.0)}; }
  double at(RegionId r) const { return current_density.at(r); }
};

/// Choice of the generalized reluctivity defining the descent metric.
struct FixedPointMetric {
  double nu_bar;  ///< constant scalar reluctivity, assembled once per run
};
struct KacanovMetric {};  ///< chord reluctivity at the current iterate; isotropic laws only
struct NewtonMetric {};   ///< differential reluctivity (energy Hessian) at the current iterate
using MetricChoice = std::variant<FixedPointMetric, KacanovMetric, NewtonMetric>;

/// Curl of the scalar potential, (da/dy, -da/dx), of the finite element
/// function with the given full dof values, at reference coordinates
/// ref inside triangle tri_index.
Flux2 eval_curl(const TriMesh &mesh, const DofMap &dofmap, const std::vector<double> &full_values,
                int tri_index, Point2 ref);

/// Total energy per unit depth: sum over elements and quadrature points of
/// w(curl a) - j a. Region ids must all have a law; otherwise ConfigError.
double total_energy(const TriMesh &mesh, const DofMap &dofmap,
                    const std::vector<double> &full_values,
                    const std::vector<MaterialLaw> &laws, const SourceSpec &source);

/// Gradient of the total energy with respect to the free dofs: component i is
/// <dw/db(curl a), curl phi_i> - <j, phi_i>.
DenseVector assemble_residual(const TriMesh &mesh, const DofMap &dofmap,
                              const std::vector<double> &full_values,
                              const std::vector<MaterialLaw> &laws, const SourceSpec &source);

/// Sparsity pattern of the free-dof Galerkin matrix; reusable across
/// assemble_metric_into calls on the same mesh and dof map.
CsrMatrix build_free_pattern(const TriMesh &mesh, const DofMap &dofmap);

/// Assemble <nu curl phi_i, curl phi_j> over the free dofs into a matrix that
/// was created by build_free_pattern. The fixed-point metric ignores the
/// current iterate; Kacanov requires every region law to be isotropic.
void assemble_metric_into(CsrMatrix &matrix, const TriMesh &mesh, const DofMap &dofmap,
                          const std::vector<double> &full_values, const MetricChoice &metric,
                          const std::vector<MaterialLaw> &laws);

/// Convenience wrapper: pattern plus assembly in one call.
CsrMatrix assemble_metric(const TriMesh &mesh, const DofMap &dofmap,
                          const std::vector<double> &full_values, const MetricChoice &metric,
                          const std::vector<MaterialLaw> &laws);

/// Quadrature rule matching the element order: degree 2 for order 1,
/// degree 4 for order 2.
const QuadratureRule &assembly_rule(int order);

} // namespace magsolve

#endif
