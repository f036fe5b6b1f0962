#ifndef MAGSOLVE_VTK_EXPORT_HPP
#define MAGSOLVE_VTK_EXPORT_HPP

#include <string>
#include <vector>

#include "magsolve/dofmap.hpp"
#include "magsolve/mesh.hpp"

namespace magsolve {

/// Legacy-VTK unstructured grid with the vector potential on the nodes and
/// the flux magnitude |curl a| (evaluated at the centroid) per triangle.
void export_field(const TriMesh &mesh, const DofMap &dofmap,
                  const std::vector<double> &full_values, const std::string &path);

} // namespace magsolve

#endif
