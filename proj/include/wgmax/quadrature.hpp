#pragma once

#include <vector>

#include <Eigen/Core>

namespace wgmax {

/// Points and weights on a reference element.
///
/// Triangle rules live on {(x, y) : x, y >= 0, x + y <= 1} (weights sum to 1/2);
/// line rules live on [-1/2, 1/2] (weights sum to 1).
struct QuadratureRule {
  std::vector<Eigen::Vector2d> points;
  std::vector<double> weights;
  int exactness = 0;

  int size() const { return static_cast<int>(weights.size()); }
};

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Line rule on [-1/2, 1/2] exact for polynomials of degree <= `degree`.
/// Points are stored in the x component.
QuadratureRule line_rule(int degree);

/// Collapsed (Duffy) Gauss product rule on the reference triangle, exact for
/// polynomials of total degree <= `degree`.
QuadratureRule triangle_rule(int degree);

}  // namespace wgmax
