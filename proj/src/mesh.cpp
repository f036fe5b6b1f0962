#include "magsolve/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>

#include "magsolve/errors.hpp"

namespace magsolve {

bool TriMesh::is_boundary_node(int n) const {
  return std::binary_search(boundary_nodes.begin(), boundary_nodes.end(), n);
}

double TriMesh::signed_area(int tri_index) const {
  const auto &t = triangles.at(tri_index);
  const Point2 &a = nodes[t[0]];
  const Point2 &b = nodes[t[1]];
  const Point2 &c = nodes[t[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

Point2 TriMesh::centroid(int tri_index) const {
  const auto &t = triangles.at(tri_index);
  return {(nodes[t[0]].x + nodes[t[1]].x + nodes[t[2]].x) / 3.0,
          (nodes[t[0]].y + nodes[t[1]].y + nodes[t[2]].y) / 3.0};
}

double TriMesh::total_area() const {
  double area = 0.0;
  for (int k = 0; k < num_triangles(); ++k)
    area += signed_area(k);
  return area;
}

namespace {

/// Edge key with sorted endpoints.
std::pair<int, int> edge_key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

/// Count how many triangles use each edge; also used to recover the boundary.
std::map<std::pair<int, int>, int> edge_use_count(const TriMesh &mesh) {
  std::map<std::pair<int, int>, int> count;
  for (const auto &t : mesh.triangles) {
    ++count[edge_key(t[0], t[1])];
    ++count[edge_key(t[1], t[2])];
    ++count[edge_key(t[2], t[0])];
  }
  return count;
}

std::vector<int> boundary_nodes_from_edges(const TriMesh &mesh) {
  std::vector<int> result;
  for (const auto &[edge, n] : edge_use_count(mesh)) {
    if (n == 1) {
      result.push_back(edge.first);
      result.push_back(edge.second);
    }
  }
  std::sort(result.begin(), result.end());
  result.erase(std::unique(result.begin(), result.end()), result.end());
  return result;
}

} // namespace

TriMesh generate_benchmark_mesh(int h_level, const GeometrySpec &geometry) {
  if (h_level < 0)
    throw ConfigError("generate_benchmark_mesh: h_level must be >= 0");
  geometry.validate();

  const Rect &box = geometry.bounding_box();
  const int n = geometry.base_division << h_level;
  const double dx = box.width() / n;
  const double dy = box.height() / n;

  TriMesh mesh;
  mesh.h_level = h_level;
  mesh.nodes.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      mesh.nodes.push_back({box.xmin + i * dx, box.ymin + j * dy});

  auto node = [n](int i, int j) { return j * (n + 1) + i; };

  mesh.triangles.reserve(static_cast<std::size_t>(2) * n * n);
  mesh.region.reserve(static_cast<std::size_t>(2) * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = node(i, j), v10 = node(i + 1, j);
      const int v01 = node(i, j + 1), v11 = node(i + 1, j + 1);
      // Split along the v00-v11 diagonal, both children counter-clockwise.
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const Point2 c = mesh.centroid(k);
    mesh.region.push_back(geometry.classify(c.x, c.y));
  }
  mesh.boundary_nodes = boundary_nodes_from_edges(mesh);
  return mesh;
}

TriMesh refine_uniform(const TriMesh &mesh) {
  TriMesh fine;
  fine.h_level = mesh.h_level + 1;
  fine.nodes = mesh.nodes;

  // One new node per parent edge, numbered after the parent nodes in
  // lexicographic edge order so refinement is deterministic.
  std::map<std::pair<int, int>, int> midpoint;
  for (const auto &[edge, n] : edge_use_count(mesh)) {
    (void)n;
    const Point2 &a = mesh.nodes[edge.first];
    const Point2 &b = mesh.nodes[edge.second];
    midpoint[edge] = fine.num_nodes();
    fine.nodes.push_back({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
  }

  fine.triangles.reserve(static_cast<std::size_t>(4) * mesh.num_triangles());
  fine.region.reserve(static_cast<std::size_t>(4) * mesh.num_triangles());
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const auto &t = mesh.triangles[k];
    const int m01 = midpoint[edge_key(t[0], t[1])];
    const int m12 = midpoint[edge_key(t[1], t[2])];
    const int m20 = midpoint[edge_key(t[2], t[0])];
    fine.triangles.push_back({t[0], m01, m20});
    fine.triangles.push_back({m01, t[1], m12});
    fine.triangles.push_back({m20, m12, t[2]});
    fine.triangles.push_back({m01, m12, m20});
    for (int c = 0; c < 4; ++c)
      fine.region.push_back(mesh.region[k]);
  }
  fine.boundary_nodes = boundary_nodes_from_edges(fine);
  return fine;
}

RegionId locate_region(const TriMesh &mesh, int tri_index) {
  if (tri_index < 0 || tri_index >= mesh.num_triangles())
    throw std::out_of_range("locate_region: triangle index out of range");
  return mesh.region[tri_index];
}

void check_mesh(const TriMesh &mesh) {
  if (mesh.region.size() != mesh.triangles.size())
    throw NumericalError("mesh check: region/triangle count mismatch");
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    if (!(mesh.signed_area(k) > 0.0)) {
      std::ostringstream msg;
      msg << "mesh check: triangle " << k << " has non-positive area";
      throw NumericalError(msg.str());
    }
  }
  for (const auto &[edge, n] : edge_use_count(mesh)) {
    if (n != 1 && n != 2) {
      std::ostringstream msg;
      msg << "mesh check: edge (" << edge.first << "," << edge.second
          << ") used by " << n << " triangles";
      throw NumericalError(msg.str());
    }
  }
  if (boundary_nodes_from_edges(mesh) != mesh.boundary_nodes)
    throw NumericalError("mesh check: boundary_nodes inconsistent with edge structure");
}

void write_mesh_text(const TriMesh &mesh, const std::string &path) {
  std::ofstream out(path);
  if (!out)
    throw ConfigError("cannot open mesh output file: " + path);
  out.precision(17);
  out << "nodes " << mesh.num_nodes() << "\n";
  for (const auto &p : mesh.nodes)
    out << p.x << " " << p.y << "\n";
  out << "triangles " << mesh.num_triangles() << "\n";
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const auto &t = mesh.triangles[k];
    out << t[0] << " " << t[1] << " " << t[2] << " " << mesh.region[k] << "\n";
  }
  out << "boundary_nodes " << mesh.boundary_nodes.size() << "\n";
  for (int n : mesh.boundary_nodes)
    out << n << "\n";
}

} // namespace magsolve
