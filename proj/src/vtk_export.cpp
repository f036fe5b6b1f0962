#include "magsolve/vtk_export.hpp"

#include <cmath>
#include <fstream>

#include "magsolve/assembly.hpp"
#include "magsolve/errors.hpp"

namespace magsolve {

void export_field(const TriMesh &mesh, const DofMap &dofmap,
                  const std::vector<double> &full_values, const std::string &path) {
  std::ofstream out(path);
  if (!out)
    throw ConfigError("cannot open field output file: " + path);
  out.precision(12);

  out << "# vtk DataFile Version 2.0\n";
  out << "magnetostatic vector potential and flux magnitude\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_nodes() << " double\n";
  for (const auto &p : mesh.nodes)
    out << p.x << " " << p.y << " 0\n";

  out << "CELLS " << mesh.num_triangles() << " " << 4 * mesh.num_triangles() << "\n";
  for (const auto &t : mesh.triangles)
    out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  out << "CELL_TYPES " << mesh.num_triangles() << "\n";
  for (int k = 0; k < mesh.num_triangles(); ++k)
    out << "5\n";

  // Node dofs come first in the dof numbering, aligned with the mesh nodes.
  out << "POINT_DATA " << mesh.num_nodes() << "\n";
  out << "SCALARS vector_potential double 1\n";
  out << "LOOKUP_TABLE default\n";
  for (int n = 0; n < mesh.num_nodes(); ++n)
    out << full_values[n] << "\n";

  out << "CELL_DATA " << mesh.num_triangles() << "\n";
  out << "SCALARS flux_magnitude double 1\n";
  out << "LOOKUP_TABLE default\n";
  const Point2 centroid_ref{1.0 / 3.0, 1.0 / 3.0};
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const Flux2 b = eval_curl(mesh, dofmap, full_values, k, centroid_ref);
    out << std::hypot(b.bx, b.by) << "\n";
  }

  out << "SCALARS region int 1\n";
  out << "LOOKUP_TABLE default\n";
  for (int k = 0; k < mesh.num_triangles(); ++k)
    out << mesh.region[k] << "\n";
}

} // namespace magsolve
