#pragma once

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "wgmax/mesh.hpp"
#include "wgmax/quadrature.hpp"

namespace wgmax {

using ScalarField = std::function<double(const Point&)>;

enum class Support { Cell, Edge };

/// Dimension of P_k on a cell (2D) or an edge (1D).
int dim_P(int k, Support where);

/// Scaled monomials ((x - x_K)/h_K)^a ((y - y_K)/h_K)^b, a + b <= k, ordered
/// by total degree and then by decreasing a.
class CellBasis {
 public:
  CellBasis(int degree, Point center, double scale);
  CellBasis(const Mesh& mesh, int cell, int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(exponents_.size()); }
  const std::pair<int, int>& exponent(int i) const { return exponents_[i]; }

  Eigen::VectorXd values(const Point& x) const;
  /// Row i holds the gradient of basis function i.
  Eigen::MatrixX2d gradients(const Point& x) const;

 private:
  int degree_;
  Point center_;
  double scale_;
  std::vector<std::pair<int, int>> exponents_;
};

/// Monomials s^j, j <= k, in the edge parameter s in [-1/2, 1/2] running from
/// the edge's first vertex to its second.
class EdgeBasis {
 public:
  explicit EdgeBasis(int degree) : degree_(degree) {}
  int degree() const { return degree_; }
  int size() const { return degree_ + 1; }
  Eigen::VectorXd values(double s) const;

 private:
  int degree_;
};

/// Physical-space quadrature on one cell or edge. Weights include the measure.
struct PhysicalQuadrature {
  std::vector<Point> points;
  std::vector<double> weights;
  std::vector<double> params;  // edge parameter s (edge rules only)
  int size() const { return static_cast<int>(weights.size()); }
};

PhysicalQuadrature cell_quadrature(const Mesh& mesh, int cell, int degree);
PhysicalQuadrature edge_quadrature(const Mesh& mesh, int edge, int degree);

/// Edge parameter of a point lying on the edge.
double edge_parameter(const Mesh& mesh, int edge, const Point& x);

Eigen::MatrixXd cell_mass(const Mesh& mesh, int cell, int k);
Eigen::MatrixXd edge_mass(const Mesh& mesh, int edge, int k);

/// Quadrature degree used when projecting or integrating non-polynomial data.
int data_quadrature_degree(int k);

/// L2 projection onto P_k(K) (coefficients in CellBasis(mesh, cell, k)).
Eigen::VectorXd project_cell(const ScalarField& f, const Mesh& mesh, int cell, int k, int quad_degree = -1);
/// L2 projection onto P_k(E) (coefficients in EdgeBasis(k)).
Eigen::VectorXd project_edge(const ScalarField& f, const Mesh& mesh, int edge, int k, int quad_degree = -1);

/// Evaluate sum_i coeffs[i] phi_i(x) for the cell basis.
double eval_cell(const CellBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& coeffs, const Point& x);

/// L2(K) norm of f by quadrature.
double cell_l2_norm(const ScalarField& f, const Mesh& mesh, int cell, int quad_degree);
double edge_l2_norm(const ScalarField& f, const Mesh& mesh, int edge, int quad_degree);

}  // namespace wgmax
