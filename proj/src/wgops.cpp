#include "wgmax/wgops.hpp"

#include <stdexcept>

#include <Eigen/Cholesky>

#include "wgmax/polyspace.hpp"

namespace wgmax {

DofLayout::DofLayout(const Mesh& mesh, int k)
    : k_(k),
      n_stress_(dim_P(k, Support::Cell)),
      n_velocity_(dim_P(k + 1, Support::Cell)),
      n_trace_(dim_P(k, Support::Edge)),
      num_cells_(mesh.num_cells()),
      num_interior_edges_(0) {
  if (k < 1) throw std::invalid_argument("polynomial degree k must be >= 1");
  edge_slot_.assign(mesh.num_edges(), -1);
  for (int e = 0; e < mesh.num_edges(); ++e)
    if (!mesh.edges[e].boundary) edge_slot_[e] = num_interior_edges_++;
  velocity_offset_ = num_cells_ * stress_per_cell();
  trace_offset_ = velocity_offset_ + num_cells_ * velocity_per_cell();
  total_ = trace_offset_ + num_interior_edges_ * trace_per_edge();
}

namespace {

// Right-hand side moments of the weak gradient (before the mass solve):
// row d*nk + i is the test function q = e_d phi_i.
Eigen::MatrixXd weak_gradient_moments(const Mesh& mesh, int cell, int k) {
  const CellBasis test(mesh, cell, k);
  const CellBasis interior(mesh, cell, k + 1);
  const EdgeBasis trace(k);
  const int nk = test.size();
  const int n1 = interior.size();
  const int nt = trace.size();
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(2 * nk, n1 + 3 * nt);

  const auto qc = cell_quadrature(mesh, cell, 2 * k + 1);
  for (int p = 0; p < qc.size(); ++p) {
    const Eigen::VectorXd psi = interior.values(qc.points[p]);
    const Eigen::MatrixX2d dphi = test.gradients(qc.points[p]);
    for (int d = 0; d < 2; ++d)
      r.block(d * nk, 0, nk, n1).noalias() -= qc.weights[p] * dphi.col(d) * psi.transpose();
  }
  for (int le = 0; le < 3; ++le) {
    const int e = mesh.cell_edges[cell][le];
    const Point& n = mesh.normals[cell][le];
    const auto qe = edge_quadrature(mesh, e, 2 * k);
    for (int p = 0; p < qe.size(); ++p) {
      const Eigen::VectorXd phi = test.values(qe.points[p]);
      const Eigen::VectorXd eb = trace.values(qe.params[p]);
      for (int d = 0; d < 2; ++d)
        r.block(d * nk, n1 + le * nt, nk, nt).noalias() += (qe.weights[p] * n[d]) * phi * eb.transpose();
    }
  }
  return r;
}

}  // namespace

Eigen::MatrixXd weak_gradient_matrix(const Mesh& mesh, int cell, int k) {
  const Eigen::MatrixXd r = weak_gradient_moments(mesh, cell, k);
  const int nk = dim_P(k, Support::Cell);
  const Eigen::LLT<Eigen::MatrixXd> mass(cell_mass(mesh, cell, k));
  Eigen::MatrixXd g(r.rows(), r.cols());
  g.topRows(nk) = mass.solve(r.topRows(nk));
  g.bottomRows(nk) = mass.solve(r.bottomRows(nk));
  return g;
}

WeakGradientTable::WeakGradientTable(const Mesh& mesh, int k) : k_(k) {
  local_.reserve(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) local_.push_back(weak_gradient_matrix(mesh, c, k));
}

namespace {

Eigen::VectorXd stack_scalar(const Eigen::VectorXd& v0, const std::array<Eigen::VectorXd, 3>& vb) {
  Eigen::VectorXd x(v0.size() + vb[0].size() + vb[1].size() + vb[2].size());
  x << v0, vb[0], vb[1], vb[2];
  return x;
}

}  // namespace

Eigen::VectorXd weak_gradient(const Mesh& mesh, int cell, int k, const Eigen::VectorXd& v0,
                              const std::array<Eigen::VectorXd, 3>& vb) {
  const Eigen::MatrixXd g = weak_gradient_matrix(mesh, cell, k);
  const Eigen::VectorXd x = stack_scalar(v0, vb);
  if (x.size() != g.cols()) throw std::invalid_argument("weak_gradient: coefficient block sizes do not match degree");
  return g * x;
}

Eigen::VectorXd weak_strain(const Mesh& mesh, int cell, int k, const LocalVectorField& v) {
  const Eigen::MatrixXd g = weak_gradient_matrix(mesh, cell, k);
  const int nk = dim_P(k, Support::Cell);
  const int n1 = dim_P(k + 1, Support::Cell);
  const int nt = k + 1;
  std::array<Eigen::VectorXd, 2> grads;
  for (int m = 0; m < 2; ++m) {
    std::array<Eigen::VectorXd, 3> vb;
    for (int le = 0; le < 3; ++le) vb[le] = v.traces[le].segment(m * nt, nt);
    grads[m] = g * stack_scalar(v.interior.segment(m * n1, n1), vb);
  }
  Eigen::VectorXd eps(3 * nk);
  eps.segment(T11 * nk, nk) = grads[0].head(nk);
  eps.segment(T22 * nk, nk) = grads[1].tail(nk);
  eps.segment(T12 * nk, nk) = 0.5 * (grads[0].tail(nk) + grads[1].head(nk));
  return eps;
}

Eigen::VectorXd weak_divergence(const Mesh& mesh, int cell, int k, const LocalVectorField& v, int j) {
  const CellBasis test(mesh, cell, j);
  const CellBasis interior(mesh, cell, k + 1);
  const EdgeBasis trace(k);
  const int n1 = interior.size();
  const int nt = trace.size();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(test.size());

  const auto qc = cell_quadrature(mesh, cell, j + k + 1);
  for (int p = 0; p < qc.size(); ++p) {
    const Eigen::VectorXd psi = interior.values(qc.points[p]);
    const Eigen::MatrixX2d dq = test.gradients(qc.points[p]);
    for (int m = 0; m < 2; ++m) {
      const double vm = psi.dot(v.interior.segment(m * n1, n1));
      rhs.noalias() -= (qc.weights[p] * vm) * dq.col(m);
    }
  }
  for (int le = 0; le < 3; ++le) {
    const int e = mesh.cell_edges[cell][le];
    const Point& n = mesh.normals[cell][le];
    const auto qe = edge_quadrature(mesh, e, j + k);
    for (int p = 0; p < qe.size(); ++p) {
      const Eigen::VectorXd eb = trace.values(qe.params[p]);
      const double vn = n.x() * eb.dot(v.traces[le].head(nt)) + n.y() * eb.dot(v.traces[le].tail(nt));
      rhs.noalias() += (qe.weights[p] * vn) * test.values(qe.points[p]);
    }
  }
  return Eigen::LLT<Eigen::MatrixXd>(cell_mass(mesh, cell, j)).solve(rhs);
}

LocalVectorField gather_velocity(const Mesh& mesh, const DofLayout& layout, int cell, const Eigen::VectorXd& x) {
  const int n1 = layout.scalar_velocity_dim();
  const int nt = layout.scalar_trace_dim();
  LocalVectorField v;
  v.interior = x.segment(layout.velocity_dof(cell, 0, 0), 2 * n1);
  for (int le = 0; le < 3; ++le) {
    const int e = mesh.cell_edges[cell][le];
    v.traces[le] = Eigen::VectorXd::Zero(2 * nt);
    if (layout.edge_slot(e) >= 0) v.traces[le] = x.segment(layout.trace_dof(e, 0, 0), 2 * nt);
  }
  return v;
}

}  // namespace wgmax
