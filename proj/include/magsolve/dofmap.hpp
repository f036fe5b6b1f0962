#ifndef MAGSOLVE_DOFMAP_HPP
#define MAGSOLVE_DOFMAP_HPP

#include <array>
#include <vector>

#include "magsolve/mesh.hpp"

namespace magsolve {

/// Lagrange dof layout of order 1 or 2 on a TriMesh with the homogeneous
/// condition a = 0 on the whole outer boundary. Order 1 dofs sit at the
/// nodes; order 2 appends one dof per edge (midpoint), numbered after the
/// nodes in lexicographic edge order. Constrained dofs are those on the
/// boundary: boundary nodes, plus boundary-edge dofs for order 2.
struct DofMap {
  int order = 1;
  int num_dofs = 0;
  int num_free = 0;
  int dofs_per_element = 3;
  /// Local-to-global dof indices per triangle. Order 1 uses entries 0..2
  /// (the vertices); order 2 adds entries 3..5 for edges (v0v1, v1v2, v2v0).
  std::vector<std::array<int, 6>> element_dofs;
  std::vector<int> global_to_free;  ///< -1 for constrained dofs
  std::vector<int> free_to_global;
  std::vector<Point2> dof_points;   ///< coordinates of each dof (node or edge midpoint)
};

DofMap build_dofmap(const TriMesh &mesh, int order);

/// Expand free-dof coefficients to the full dof vector (zeros on the boundary).
std::vector<double> scatter_free(const DofMap &dofmap, const std::vector<double> &free_coeffs);

/// Restrict a full dof vector to the free dofs.
std::vector<double> restrict_free(const DofMap &dofmap, const std::vector<double> &full);

} // namespace magsolve

#endif
