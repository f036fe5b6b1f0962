#include "magsolve/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "magsolve/errors.hpp"

namespace magsolve {

std::vector<std::string> GeometrySpec::region_names() const {
  std::vector<std::string> names;
  for (const auto &r : regions) {
    if (std::find(names.begin(), names.end(), r.name) == names.end())
      names.push_back(r.name);
  }
  return names;
}

RegionId GeometrySpec::region_id(const std::string &name) const {
  auto names = region_names();
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end())
    throw ConfigError("unknown region name: " + name);
  return static_cast<RegionId>(it - names.begin());
}

RegionId GeometrySpec::classify(double x, double y) const {
  auto names = region_names();
  RegionId id = 0;
  for (const auto &r : regions) {
    if (r.rect.contains(x, y)) {
      auto it = std::find(names.begin(), names.end(), r.name);
      id = static_cast<RegionId>(it - names.begin());
    }
  }
  return id;
}

namespace {

bool on_grid(double v, double origin, double extent, int n) {
  const double u = (v - origin) / extent * n;
  return std::abs(u - std::round(u)) < 1e-9 * n;
}

bool overlap_positive_area(const Rect &a, const Rect &b) {
  const double w = std::min(a.xmax, b.xmax) - std::max(a.xmin, b.xmin);
  const double h = std::min(a.ymax, b.ymax) - std::max(a.ymin, b.ymin);
  return w > 1e-12 && h > 1e-12;
}

} // namespace

void GeometrySpec::validate() const {
  std::ostringstream bad;
  if (regions.empty())
    throw ConfigError("geometry: no regions given");
  if (base_division < 1)
    bad << "geometry: base_division must be >= 1\n";

  const Rect &box = regions.front().rect;
  if (!(box.width() > 0.0) || !(box.height() > 0.0))
    bad << "geometry: enclosing box '" << regions.front().name << "' is degenerate\n";

  for (const auto &r : regions) {
    const Rect &q = r.rect;
    if (!(q.xmax > q.xmin) || !(q.ymax > q.ymin))
      bad << "geometry: rectangle '" << r.name << "' is degenerate\n";
    if (q.xmin < box.xmin - 1e-12 || q.xmax > box.xmax + 1e-12 ||
        q.ymin < box.ymin - 1e-12 || q.ymax > box.ymax + 1e-12)
      bad << "geometry: rectangle '" << r.name << "' leaks outside the enclosing box\n";
    for (double v : {q.xmin, q.xmax})
      if (!on_grid(v, box.xmin, box.width(), base_division))
        bad << "geometry: x-coordinate " << v << " of '" << r.name
            << "' is not on the 1/" << base_division << " grid\n";
    for (double v : {q.ymin, q.ymax})
      if (!on_grid(v, box.ymin, box.height(), base_division))
        bad << "geometry: y-coordinate " << v << " of '" << r.name
            << "' is not on the 1/" << base_division << " grid\n";
  }

  // Different materials must not fight over positive-area territory. Only the
  // background region may host nested rectangles.
  const std::string &background = regions.front().name;
  for (std::size_t i = 1; i < regions.size(); ++i) {
    for (std::size_t j = i + 1; j < regions.size(); ++j) {
      if (regions[i].name == regions[j].name)
        continue;
      if (regions[i].name == background || regions[j].name == background)
        continue;
      if (overlap_positive_area(regions[i].rect, regions[j].rect))
        bad << "geometry: rectangles of '" << regions[i].name << "' and '"
            << regions[j].name << "' overlap\n";
    }
  }

  const std::string msg = bad.str();
  if (!msg.empty())
    throw ConfigError(msg);
}

GeometrySpec benchmark_geometry() {
  GeometrySpec g;
  g.base_division = 16;
  g.regions = {
      {"air", {0.0, 0.0, 1.0, 1.0}},
      // C-core opening to the right: narrow left limb, wide window. The coil
      // is wound around the left limb, so the core circuit encircles the
      // in-window conductor and the narrow limb concentrates the flux.
      {"iron", {0.25, 0.125, 0.375, 0.875}},
      {"iron", {0.375, 0.625, 0.875, 0.875}},
      {"iron", {0.375, 0.125, 0.875, 0.375}},
      {"coil_pos", {0.125, 0.125, 0.25, 0.875}},
      {"coil_neg", {0.375, 0.375, 0.75, 0.625}},
  };
  g.validate();
  return g;
}

} // namespace magsolve
