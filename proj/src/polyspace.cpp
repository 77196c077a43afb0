#include "wgmax/polyspace.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>

namespace wgmax {

int dim_P(int k, Support where) {
  if (k < 0) throw std::invalid_argument("polynomial degree must be nonnegative");
  return where == Support::Cell ? (k + 1) * (k + 2) / 2 : k + 1;
}

CellBasis::CellBasis(int degree, Point center, double scale)
    : degree_(degree), center_(std::move(center)), scale_(scale) {
  for (int d = 0; d <= degree; ++d)
    for (int a = d; a >= 0; --a) exponents_.emplace_back(a, d - a);
}

CellBasis::CellBasis(const Mesh& mesh, int cell, int degree)
    : CellBasis(degree, mesh.centroid[cell], mesh.cell_diameter[cell]) {}

namespace {

// powers[p] = t^p for p = 0..n
inline void fill_powers(double t, int n, double* out) {
  out[0] = 1.0;
  for (int p = 1; p <= n; ++p) out[p] = out[p - 1] * t;
}

}  // namespace

Eigen::VectorXd CellBasis::values(const Point& x) const {
  double px[16], py[16];
  fill_powers((x.x() - center_.x()) / scale_, degree_, px);
  fill_powers((x.y() - center_.y()) / scale_, degree_, py);
  Eigen::VectorXd v(size());
  for (int i = 0; i < size(); ++i) v[i] = px[exponents_[i].first] * py[exponents_[i].second];
  return v;
}

Eigen::MatrixX2d CellBasis::gradients(const Point& x) const {
  double px[16], py[16];
  fill_powers((x.x() - center_.x()) / scale_, degree_, px);
  fill_powers((x.y() - center_.y()) / scale_, degree_, py);
  Eigen::MatrixX2d g(size(), 2);
  for (int i = 0; i < size(); ++i) {
    const auto [a, b] = exponents_[i];
    g(i, 0) = a > 0 ? a * px[a - 1] * py[b] / scale_ : 0.0;
    g(i, 1) = b > 0 ? b * px[a] * py[b - 1] / scale_ : 0.0;
  }
  return g;
}

Eigen::VectorXd EdgeBasis::values(double s) const {
  Eigen::VectorXd v(size());
  fill_powers(s, degree_, v.data());
  return v;
}

PhysicalQuadrature cell_quadrature(const Mesh& mesh, int cell, int degree) {
  const auto& tri = mesh.cells[cell];
  const Point& a = mesh.vertices[tri[0]];
  const Point e1 = mesh.vertices[tri[1]] - a;
  const Point e2 = mesh.vertices[tri[2]] - a;
  const double jac = 2.0 * mesh.cell_area[cell];
  const QuadratureRule ref = triangle_rule(degree);
  PhysicalQuadrature q;
  q.points.reserve(ref.size());
  q.weights.reserve(ref.size());
  for (int i = 0; i < ref.size(); ++i) {
    q.points.push_back(a + ref.points[i].x() * e1 + ref.points[i].y() * e2);
    q.weights.push_back(ref.weights[i] * jac);
  }
  return q;
}

PhysicalQuadrature edge_quadrature(const Mesh& mesh, int edge, int degree) {
  const Point mid = mesh.edge_midpoint(edge);
  const Point t = mesh.edge_tangent(edge);
  const double len = mesh.edge_length[edge];
  const QuadratureRule ref = line_rule(degree);
  PhysicalQuadrature q;
  for (int i = 0; i < ref.size(); ++i) {
    const double s = ref.points[i].x();
    q.points.push_back(mid + s * t);
    q.weights.push_back(ref.weights[i] * len);
    q.params.push_back(s);
  }
  return q;
}

double edge_parameter(const Mesh& mesh, int edge, const Point& x) {
  const Point t = mesh.edge_tangent(edge);
  return (x - mesh.edge_midpoint(edge)).dot(t) / t.squaredNorm();
}

Eigen::MatrixXd cell_mass(const Mesh& mesh, int cell, int k) {
  const CellBasis basis(mesh, cell, k);
  const auto q = cell_quadrature(mesh, cell, 2 * k);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(basis.size(), basis.size());
  for (int i = 0; i < q.size(); ++i) {
    const Eigen::VectorXd phi = basis.values(q.points[i]);
    m.noalias() += q.weights[i] * phi * phi.transpose();
  }
  return m;
}

Eigen::MatrixXd edge_mass(const Mesh& mesh, int edge, int k) {
  const EdgeBasis basis(k);
  const auto q = edge_quadrature(mesh, edge, 2 * k);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(basis.size(), basis.size());
  for (int i = 0; i < q.size(); ++i) {
    const Eigen::VectorXd phi = basis.values(q.params[i]);
    m.noalias() += q.weights[i] * phi * phi.transpose();
  }
  return m;
}

int data_quadrature_degree(int k) { return 2 * (k + 1) + 4; }

namespace {

Eigen::VectorXd spd_solve(const Eigen::MatrixXd& m, const Eigen::VectorXd& b, const char* what, int index) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error(std::string("singular ") + what + " mass matrix at index " + std::to_string(index));
  return llt.solve(b);
}

}  // namespace

Eigen::VectorXd project_cell(const ScalarField& f, const Mesh& mesh, int cell, int k, int quad_degree) {
  if (quad_degree < 0) quad_degree = data_quadrature_degree(k);
  const CellBasis basis(mesh, cell, k);
  const auto q = cell_quadrature(mesh, cell, quad_degree);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(basis.size());
  for (int i = 0; i < q.size(); ++i) rhs.noalias() += (q.weights[i] * f(q.points[i])) * basis.values(q.points[i]);
  return spd_solve(cell_mass(mesh, cell, k), rhs, "cell", cell);
}

Eigen::VectorXd project_edge(const ScalarField& f, const Mesh& mesh, int edge, int k, int quad_degree) {
  if (quad_degree < 0) quad_degree = data_quadrature_degree(k);
  const EdgeBasis basis(k);
  const auto q = edge_quadrature(mesh, edge, quad_degree);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(basis.size());
  for (int i = 0; i < q.size(); ++i) rhs.noalias() += (q.weights[i] * f(q.points[i])) * basis.values(q.params[i]);
  return spd_solve(edge_mass(mesh, edge, k), rhs, "edge", edge);
}

double eval_cell(const CellBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& coeffs, const Point& x) {
  return basis.values(x).dot(coeffs);
}

double cell_l2_norm(const ScalarField& f, const Mesh& mesh, int cell, int quad_degree) {
  const auto q = cell_quadrature(mesh, cell, quad_degree);
  double s = 0.0;
  for (int i = 0; i < q.size(); ++i) {
    const double v = f(q.points[i]);
    s += q.weights[i] * v * v;
  }
  return std::sqrt(s);
}

double edge_l2_norm(const ScalarField& f, const Mesh& mesh, int edge, int quad_degree) {
  const auto q = edge_quadrature(mesh, edge, quad_degree);
  double s = 0.0;
  for (int i = 0; i < q.size(); ++i) {
    const double v = f(q.points[i]);
    s += q.weights[i] * v * v;
  }
  return std::sqrt(s);
}

}  // namespace wgmax
