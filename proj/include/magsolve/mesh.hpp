#ifndef MAGSOLVE_MESH_HPP
#define MAGSOLVE_MESH_HPP

#include <array>
#include <string>
#include <vector>

#include "magsolve/geometry.hpp"

namespace magsolve {

/// Conforming triangulation of a rectangular multi-region domain.
/// Immutable after construction; safe to share across threads.
struct TriMesh {
  std::vector<Point2> nodes;
  std::vector<std::array<int, 3>> triangles;  ///< node indices, counter-clockwise
  std::vector<RegionId> region;               ///< one label per triangle
  std::vector<int> boundary_nodes;            ///< sorted node indices on the outer boundary
  int h_level = 0;                            ///< refinement exponent, h = 2^-h_level

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  bool is_boundary_node(int n) const;

  double signed_area(int tri_index) const;
  Point2 centroid(int tri_index) const;
  double total_area() const;
};

/// Structured aligned mesh of the geometry at refinement level h_level:
/// the coarsest grid has geometry.base_division cells per side, each
/// refinement halves the element diameter, and every square cell is split
/// along the bottom-left/top-right diagonal. Triangle regions come from
/// centroid classification, which is exact for grid-aligned rectangles.
TriMesh generate_benchmark_mesh(int h_level, const GeometrySpec &geometry);

/// Uniform red refinement: every triangle splits into 4 congruent children
/// that inherit the parent region; h_level increases by one.
TriMesh refine_uniform(const TriMesh &mesh);

/// Stored region label of a triangle. Throws std::out_of_range for bad indices.
RegionId locate_region(const TriMesh &mesh, int tri_index);

/// Structural checks: positive areas, each edge in one or two triangles,
/// boundary_nodes consistent with the single-triangle edges.
/// Throws NumericalError with a description on the first violation.
void check_mesh(const TriMesh &mesh);

/// Plain-text dump: node coordinates, element connectivity, region labels.
void write_mesh_text(const TriMesh &mesh, const std::string &path);

} // namespace magsolve

#endif
