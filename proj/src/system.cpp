#include "wgmax/system.hpp"

#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/SparseLU>

#include "wgmax/polyspace.hpp"

namespace wgmax {

IsotropicLaw::IsotropicLaw(double mu, double lambda) : mu_(mu), lambda_(lambda) {
  if (!(mu > 0.0) || !(mu + lambda > 0.0))
    throw std::invalid_argument("elasticity tensor is not positive definite (need mu > 0, mu + lambda > 0)");
}

SymTensor IsotropicLaw::apply_C(const SymTensor& eps) const {
  const double tr = eps[T11] + eps[T22];
  return {2.0 * mu_ * eps[T11] + lambda_ * tr, 2.0 * mu_ * eps[T22] + lambda_ * tr, 2.0 * mu_ * eps[T12]};
}

SymTensor IsotropicLaw::apply_Cinv(const SymTensor& sigma) const {
  const double tr = sigma[T11] + sigma[T22];
  const double c = lambda_ / (2.0 * mu_ * (2.0 * mu_ + 2.0 * lambda_));
  return {sigma[T11] / (2.0 * mu_) - c * tr, sigma[T22] / (2.0 * mu_) - c * tr, sigma[T12] / (2.0 * mu_)};
}

Eigen::Matrix3d IsotropicLaw::compliance_weight() const {
  Eigen::Matrix3d w;
  for (int j = 0; j < 3; ++j) w.col(j) = apply_Cinv(SymTensor::Unit(j));
  for (int i = 0; i < 3; ++i) w.row(i) *= kTensorWeight[i];
  return w;
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void add_block(Triplets& out, const std::vector<int>& rows, const std::vector<int>& cols, const Eigen::MatrixXd& m) {
  for (int j = 0; j < m.cols(); ++j) {
    if (cols[j] < 0) continue;
    for (int i = 0; i < m.rows(); ++i) {
      if (rows[i] < 0 || m(i, j) == 0.0) continue;
      out.emplace_back(rows[i], cols[j], m(i, j));
    }
  }
}

SparseMatrix to_sparse(int rows, int cols, const Triplets& t) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

}  // namespace

SystemBlocks assemble_blocks(const Mesh& mesh, const DofLayout& layout, const IsotropicLaw& law) {
  const int k = layout.degree();
  const int ns = layout.scalar_stress_dim();
  const int nv = layout.scalar_velocity_dim();
  const int nt = layout.scalar_trace_dim();
  const int cell_degree = 2 * (k + 1) + 2;
  const int edge_degree = 2 * k + 1;
  const Eigen::Matrix3d weight = law.compliance_weight();
  const EdgeBasis trace(k);

  Triplets t0, t1, t2, t3, t4, t5, t6;
  std::vector<int> sdofs(3 * ns), vdofs(2 * nv), tdofs(2 * nt);

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellBasis sb(mesh, c, k);
    const CellBasis vb(mesh, c, k + 1);
    for (int comp = 0; comp < 3; ++comp)
      for (int i = 0; i < ns; ++i) sdofs[comp * ns + i] = layout.stress_dof(c, comp, i);
    for (int m = 0; m < 2; ++m)
      for (int i = 0; i < nv; ++i) vdofs[m * nv + i] = layout.velocity_dof(c, m, i);

    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(ns, ns);
    // div-moments D[m](i, l) = int psi_l d_m phi_i
    Eigen::MatrixXd d1 = Eigen::MatrixXd::Zero(ns, nv);
    Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(ns, nv);
    const auto qc = cell_quadrature(mesh, c, cell_degree);
    for (int p = 0; p < qc.size(); ++p) {
      const Eigen::VectorXd phi = sb.values(qc.points[p]);
      const Eigen::MatrixX2d dphi = sb.gradients(qc.points[p]);
      const Eigen::VectorXd psi = vb.values(qc.points[p]);
      mass.noalias() += qc.weights[p] * phi * phi.transpose();
      d1.noalias() += qc.weights[p] * dphi.col(0) * psi.transpose();
      d2.noalias() += qc.weights[p] * dphi.col(1) * psi.transpose();
    }

    Eigen::MatrixXd m0(3 * ns, 3 * ns);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) m0.block(a * ns, b * ns, ns, ns) = weight(a, b) * mass;
    add_block(t0, sdofs, sdofs, m0);

    // div(Phi_11) = (d1 phi, 0), div(Phi_22) = (0, d2 phi), div(Phi_12) = (d2 phi, d1 phi)
    Eigen::MatrixXd m1 = Eigen::MatrixXd::Zero(3 * ns, 2 * nv);
    m1.block(T11 * ns, 0, ns, nv) = d1;
    m1.block(T22 * ns, nv, ns, nv) = d2;
    m1.block(T12 * ns, 0, ns, nv) = d2;
    m1.block(T12 * ns, nv, ns, nv) = d1;
    add_block(t1, sdofs, vdofs, m1);

    Eigen::MatrixXd m3 = Eigen::MatrixXd::Zero(2 * nv, 2 * nv);
    for (int le = 0; le < 3; ++le) {
      const int e = mesh.cell_edges[c][le];
      const Point& n = mesh.normals[c][le];
      const double alpha = 1.0 / mesh.edge_length[e];
      for (int m = 0; m < 2; ++m)
        for (int j = 0; j < nt; ++j) tdofs[m * nt + j] = layout.trace_dof(e, m, j);

      Eigen::MatrixXd emass = Eigen::MatrixXd::Zero(nt, nt);
      Eigen::MatrixXd trace_psi = Eigen::MatrixXd::Zero(nt, nv);  // int e_j psi_l
      Eigen::MatrixXd trace_phi = Eigen::MatrixXd::Zero(ns, nt);  // int phi_i e_j
      const auto qe = edge_quadrature(mesh, e, edge_degree);
      for (int p = 0; p < qe.size(); ++p) {
        const Eigen::VectorXd eb = trace.values(qe.params[p]);
        const Eigen::VectorXd phi = sb.values(qe.points[p]);
        const Eigen::VectorXd psi = vb.values(qe.points[p]);
        emass.noalias() += qe.weights[p] * eb * eb.transpose();
        trace_psi.noalias() += qe.weights[p] * eb * psi.transpose();
        trace_phi.noalias() += qe.weights[p] * phi * eb.transpose();
      }

      // M2 = -<phi_b, Phi n>: Phi_11 n = (phi n1, 0), Phi_22 n = (0, phi n2), Phi_12 n = (phi n2, phi n1)
      Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(3 * ns, 2 * nt);
      m2.block(T11 * ns, 0, ns, nt) = -n.x() * trace_phi;
      m2.block(T22 * ns, nt, ns, nt) = -n.y() * trace_phi;
      m2.block(T12 * ns, 0, ns, nt) = -n.y() * trace_phi;
      m2.block(T12 * ns, nt, ns, nt) = -n.x() * trace_phi;
      add_block(t2, sdofs, tdofs, m2);

      // <alpha Q psi_j, psi_i> = alpha B^T Me^{-1} B
      const Eigen::MatrixXd proj = Eigen::LLT<Eigen::MatrixXd>(emass).solve(trace_psi);
      const Eigen::MatrixXd s00 = alpha * trace_psi.transpose() * proj;
      const Eigen::MatrixXd s0b = -alpha * trace_psi.transpose();
      const Eigen::MatrixXd sb0 = -alpha * emass * proj;  // -<alpha Q psi_j, e_i>
      for (int m = 0; m < 2; ++m) m3.block(m * nv, m * nv, nv, nv) += s00;

      if (layout.edge_slot(e) >= 0) {
        Eigen::MatrixXd m4 = Eigen::MatrixXd::Zero(2 * nv, 2 * nt);
        Eigen::MatrixXd m5 = Eigen::MatrixXd::Zero(2 * nt, 2 * nv);
        Eigen::MatrixXd m6 = Eigen::MatrixXd::Zero(2 * nt, 2 * nt);
        for (int m = 0; m < 2; ++m) {
          m4.block(m * nv, m * nt, nv, nt) = s0b;
          m5.block(m * nt, m * nv, nt, nv) = sb0;
          m6.block(m * nt, m * nt, nt, nt) = alpha * emass;
        }
        add_block(t4, vdofs, tdofs, m4);
        add_block(t5, tdofs, vdofs, m5);
        add_block(t6, tdofs, tdofs, m6);
      }
    }
    add_block(t3, vdofs, vdofs, m3);
  }

  auto local = [&](int off, int dof) { return dof - off; };
  auto shift = [&](Triplets& t, int roff, int coff) {
    for (auto& x : t) x = Eigen::Triplet<double>(local(roff, x.row()), local(coff, x.col()), x.value());
  };
  const int so = layout.stress_offset(), vo = layout.velocity_offset(), to = layout.trace_offset();
  shift(t0, so, so);
  shift(t1, so, vo);
  shift(t2, so, to);
  shift(t3, vo, vo);
  shift(t4, vo, to);
  shift(t5, to, vo);
  shift(t6, to, to);

  SystemBlocks b;
  b.M0 = to_sparse(layout.num_stress(), layout.num_stress(), t0);
  b.M1 = to_sparse(layout.num_stress(), layout.num_velocity(), t1);
  b.M2 = to_sparse(layout.num_stress(), layout.num_trace(), t2);
  b.M3 = to_sparse(layout.num_velocity(), layout.num_velocity(), t3);
  b.M4 = to_sparse(layout.num_velocity(), layout.num_trace(), t4);
  b.M5 = to_sparse(layout.num_trace(), layout.num_velocity(), t5);
  b.M6 = to_sparse(layout.num_trace(), layout.num_trace(), t6);
  return b;
}

BlockView split(const DofLayout& layout, const Eigen::VectorXd& x) {
  return {x.segment(layout.stress_offset(), layout.num_stress()),
          x.segment(layout.velocity_offset(), layout.num_velocity()),
          x.segment(layout.trace_offset(), layout.num_trace())};
}

Eigen::VectorXd join(const DofLayout& layout, const Eigen::VectorXd& eta, const Eigen::VectorXd& beta,
                     const Eigen::VectorXd& gamma) {
  Eigen::VectorXd x(layout.total());
  x << eta, beta, gamma;
  return x;
}

double energy_norm2(const SystemBlocks& blocks, const Eigen::VectorXd& eta) { return eta.dot(blocks.M0 * eta); }

double stabilization_energy(const SystemBlocks& blocks, const Eigen::VectorXd& beta, const Eigen::VectorXd& gamma) {
  return beta.dot(blocks.M3 * beta) + beta.dot(blocks.M4 * gamma) + gamma.dot(blocks.M5 * beta) +
         gamma.dot(blocks.M6 * gamma);
}

double bh_boundary(const SystemBlocks& blocks, const Eigen::VectorXd& eta_tau, const Eigen::VectorXd& beta,
                   const Eigen::VectorXd& gamma) {
  return -eta_tau.dot(blocks.M1 * beta + blocks.M2 * gamma);
}

struct StepMatrix::Factor {
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
};

StepMatrix::StepMatrix(const SystemBlocks& blocks, const DofLayout& layout, double dt)
    : dt_(dt), factor_(std::make_unique<Factor>()) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const int so = layout.stress_offset(), vo = layout.velocity_offset(), to = layout.trace_offset();
  Triplets t;
  t.reserve(blocks.M0.nonZeros() + 2 * (blocks.M1.nonZeros() + blocks.M2.nonZeros()) + blocks.M3.nonZeros() +
            blocks.M4.nonZeros() + blocks.M5.nonZeros() + blocks.M6.nonZeros());
  auto put = [&t](const SparseMatrix& m, int roff, int coff, double scale, bool transpose) {
    for (int j = 0; j < m.outerSize(); ++j)
      for (SparseMatrix::InnerIterator it(m, j); it; ++it) {
        if (transpose)
          t.emplace_back(roff + static_cast<int>(it.col()), coff + static_cast<int>(it.row()), scale * it.value());
        else
          t.emplace_back(roff + static_cast<int>(it.row()), coff + static_cast<int>(it.col()), scale * it.value());
      }
  };
  put(blocks.M0, so, so, 1.0 / dt + 1.0, false);
  put(blocks.M1, so, vo, 1.0, false);
  put(blocks.M2, so, to, 1.0, false);
  put(blocks.M1, vo, so, -1.0, true);
  put(blocks.M3, vo, vo, 1.0, false);
  put(blocks.M4, vo, to, 1.0, false);
  put(blocks.M2, to, so, -1.0, true);
  put(blocks.M5, to, vo, 1.0, false);
  put(blocks.M6, to, to, 1.0, false);
  a_.resize(layout.total(), layout.total());
  a_.setFromTriplets(t.begin(), t.end());
  a_.makeCompressed();

  factor_->lu.analyzePattern(a_);
  factor_->lu.factorize(a_);
  if (factor_->lu.info() != Eigen::Success)
    throw std::runtime_error("step matrix factorization failed: " + factor_->lu.lastErrorMessage());
}

StepMatrix::~StepMatrix() = default;
StepMatrix::StepMatrix(StepMatrix&&) noexcept = default;
StepMatrix& StepMatrix::operator=(StepMatrix&&) noexcept = default;

Eigen::VectorXd StepMatrix::solve(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd x = factor_->lu.solve(rhs);
  if (factor_->lu.info() != Eigen::Success) throw std::runtime_error("step matrix solve failed");
  return x;
}

StepMatrix assemble_step_matrix(const SystemBlocks& blocks, const DofLayout& layout, double dt) {
  return StepMatrix(blocks, layout, dt);
}

LoadAssembler::LoadAssembler(const Mesh& mesh, const DofLayout& layout, int quad_degree) : layout_(&layout) {
  if (quad_degree < 0) quad_degree = data_quadrature_degree(layout.degree());
  const int nv = layout.scalar_velocity_dim();
  points_per_cell_ = triangle_rule(quad_degree).size();
  points_.reserve(static_cast<size_t>(points_per_cell_) * mesh.num_cells());
  weighted_basis_.resize(nv, points_per_cell_ * mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellBasis vb(mesh, c, layout.degree() + 1);
    const auto q = cell_quadrature(mesh, c, quad_degree);
    for (int p = 0; p < q.size(); ++p) {
      weighted_basis_.col(c * points_per_cell_ + p) = q.weights[p] * vb.values(q.points[p]);
      points_.push_back(q.points[p]);
    }
  }
}

Eigen::VectorXd LoadAssembler::assemble(const VectorField& f, double t) const {
  const DofLayout& layout = *layout_;
  const int nv = layout.scalar_velocity_dim();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(layout.total());
  Eigen::Matrix2Xd fv(2, points_per_cell_);
  for (int c = 0; c < layout.num_cells(); ++c) {
    for (int p = 0; p < points_per_cell_; ++p) fv.col(p) = f(points_[c * points_per_cell_ + p], t);
    const auto wb = weighted_basis_.middleCols(c * points_per_cell_, points_per_cell_);
    for (int m = 0; m < 2; ++m) rhs.segment(layout.velocity_dof(c, m, 0), nv).noalias() = wb * fv.row(m).transpose();
  }
  return rhs;
}

Eigen::VectorXd assemble_load(const Mesh& mesh, const DofLayout& layout, const VectorField& f, double t) {
  return LoadAssembler(mesh, layout).assemble(f, t);
}

}  // namespace wgmax
