#include "magsolve/quadrature.hpp"

#include "magsolve/errors.hpp"

namespace magsolve {

namespace {

// Midpoint rule, exact through degree 2.
QuadratureRule make_degree2() {
  QuadratureRule r;
  r.degree = 2;
  const double w = 1.0 / 6.0;
  r.nodes = {{0.5, 0.0, w}, {0.5, 0.5, w}, {0.0, 0.5, w}};
  return r;
}

// Two three-point orbits, exact through degree 4.
QuadratureRule make_degree4() {
  QuadratureRule r;
  r.degree = 4;
  const double a1 = 0.445948490915965;
  const double w1 = 0.223381589678011 * 0.5;
  const double a2 = 0.091576213509771;
  const double w2 = 0.109951743655322 * 0.5;
  r.nodes = {
      {a1, a1, w1},
      {1.0 - 2.0 * a1, a1, w1},
      {a1, 1.0 - 2.0 * a1, w1},
      {a2, a2, w2},
      {1.0 - 2.0 * a2, a2, w2},
      {a2, 1.0 - 2.0 * a2, w2},
  };
  return r;
}

} // namespace

const QuadratureRule &triangle_rule(int degree) {
  static const QuadratureRule deg2 = make_degree2();
  static const QuadratureRule deg4 = make_degree4();
  if (degree <= 2)
    return deg2;
  if (degree <= 4)
    return deg4;
  throw ConfigError("triangle_rule: no rule of degree > 4 is provided");
}

} // namespace magsolve
