#include "magsolve/dofmap.hpp"

#include <map>
#include <stdexcept>

#include "magsolve/errors.hpp"

namespace magsolve {

DofMap build_dofmap(const TriMesh &mesh, int order) {
  if (order != 1 && order != 2)
    throw ConfigError("build_dofmap: order must be 1 or 2");

  DofMap dm;
  dm.order = order;
  dm.dofs_per_element = order == 1 ? 3 : 6;

  const int nn = mesh.num_nodes();
  dm.element_dofs.assign(mesh.num_triangles(), {-1, -1, -1, -1, -1, -1});
  for (int k = 0; k < mesh.num_triangles(); ++k)
    for (int v = 0; v < 3; ++v)
      dm.element_dofs[k][v] = mesh.triangles[k][v];

  dm.dof_points.assign(mesh.nodes.begin(), mesh.nodes.end());
  std::vector<bool> constrained(nn, false);
  for (int b : mesh.boundary_nodes)
    constrained[b] = true;

  if (order == 2) {
    // Edge dofs in lexicographic (min,max) order; count triangle usage to
    // recognize boundary edges.
    std::map<std::pair<int, int>, std::pair<int, int>> edges;  // key -> (id, use count)
    for (const auto &t : mesh.triangles) {
      const std::array<std::pair<int, int>, 3> keys = {
          std::make_pair(std::min(t[0], t[1]), std::max(t[0], t[1])),
          std::make_pair(std::min(t[1], t[2]), std::max(t[1], t[2])),
          std::make_pair(std::min(t[2], t[0]), std::max(t[2], t[0]))};
      for (const auto &key : keys)
        edges[key].second += 1;
    }
    int next = nn;
    for (auto &[key, val] : edges) {
      val.first = next++;
      const Point2 &a = mesh.nodes[key.first];
      const Point2 &b = mesh.nodes[key.second];
      dm.dof_points.push_back({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
      constrained.push_back(val.second == 1);
    }
    for (int k = 0; k < mesh.num_triangles(); ++k) {
      const auto &t = mesh.triangles[k];
      const std::array<std::pair<int, int>, 3> keys = {
          std::make_pair(std::min(t[0], t[1]), std::max(t[0], t[1])),
          std::make_pair(std::min(t[1], t[2]), std::max(t[1], t[2])),
          std::make_pair(std::min(t[2], t[0]), std::max(t[2], t[0]))};
      for (int e = 0; e < 3; ++e)
        dm.element_dofs[k][3 + e] = edges.at(keys[e]).first;
    }
  }

  dm.num_dofs = static_cast<int>(dm.dof_points.size());
  dm.global_to_free.assign(dm.num_dofs, -1);
  for (int g = 0; g < dm.num_dofs; ++g) {
    if (!constrained[g]) {
      dm.global_to_free[g] = static_cast<int>(dm.free_to_global.size());
      dm.free_to_global.push_back(g);
    }
  }
  dm.num_free = static_cast<int>(dm.free_to_global.size());
  return dm;
}

std::vector<double> scatter_free(const DofMap &dofmap, const std::vector<double> &free_coeffs) {
  if (static_cast<int>(free_coeffs.size()) != dofmap.num_free)
    throw std::invalid_argument("scatter_free: coefficient length mismatch");
  std::vector<double> full(dofmap.num_dofs, 0.0);
  for (int f = 0; f < dofmap.num_free; ++f)
    full[dofmap.free_to_global[f]] = free_coeffs[f];
  return full;
}

std::vector<double> restrict_free(const DofMap &dofmap, const std::vector<double> &full) {
  if (static_cast<int>(full.size()) != dofmap.num_dofs)
    throw std::invalid_argument("restrict_free: vector length mismatch");
  std::vector<double> free_coeffs(dofmap.num_free, 0.0);
  for (int f = 0; f < dofmap.num_free; ++f)
    free_coeffs[f] = full[dofmap.free_to_global[f]];
  return free_coeffs;
}

} // namespace magsolve
