#ifndef MAGSOLVE_QUADRATURE_HPP
#define MAGSOLVE_QUADRATURE_HPP

#include <vector>

namespace magsolve {

/// Symmetric quadrature rule on the reference triangle {(0,0),(1,0),(0,1)}.
/// Weights are positive and sum to the reference area 1/2.
struct QuadratureRule {
  struct Node {
    double x, y;   ///< reference coordinates
    double weight;
  };
  std::vector<Node> nodes;
  int degree = 0;  ///< highest polynomial degree integrated exactly
};

/// Fixed rules: degree 2 (3 points) for order-1 elements, degree 4
/// (6 points) for order-2 elements.
const QuadratureRule &triangle_rule(int degree);

} // namespace magsolve

#endif
