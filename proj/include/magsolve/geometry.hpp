#ifndef MAGSOLVE_GEOMETRY_HPP
#define MAGSOLVE_GEOMETRY_HPP

#include <string>
#include <vector>

namespace magsolve {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Small integer label identifying a material region. Every triangle carries
/// exactly one RegionId; the solver maps each id to one material law.
using RegionId = int;

/// Axis-aligned rectangle [xmin,xmax] x [ymin,ymax].
struct Rect {
  double xmin = 0.0, ymin = 0.0, xmax = 0.0, ymax = 0.0;

  bool contains(double x, double y) const {
    return x >= xmin && x <= xmax && y >= ymin && y <= ymax;
  }
  bool contains_strict(double x, double y) const {
    return x > xmin && x < xmax && y > ymin && y < ymax;
  }
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
};

/// A named rectangle of the domain decomposition. Rectangles listed later
/// paint over earlier ones, so the enclosing air box comes first.
struct RegionRect {
  std::string name;
  Rect rect;
};

/// Multi-region rectangular domain: an enclosing box plus nested material
/// rectangles, all with corners on the (1/base_division)-grid of the box.
struct GeometrySpec {
  int base_division = 8;            ///< coarsest aligned grid is base_division x base_division
  std::vector<RegionRect> regions;  ///< paint order; regions[0] must cover the whole box

  /// Distinct region names in first-appearance order; the index is the RegionId.
  std::vector<std::string> region_names() const;
  RegionId region_id(const std::string &name) const;

  /// Region of a point under the painter's rule.
  RegionId classify(double x, double y) const;

  /// Throws ConfigError if the description is unusable: empty, corners off
  /// the aligned grid, rectangles leaking outside the box, or rectangles of
  /// different non-background regions overlapping with positive area.
  void validate() const;

  const Rect &bounding_box() const { return regions.front().rect; }
};

/// The bundled stand-in problem geometry: a unit-square air box with a
/// C-shaped iron core (three bars) and a two-limb coil carrying +j / -j.
GeometrySpec benchmark_geometry();

} // namespace magsolve

#endif
