#pragma once

#include <algorithm>
#include <functional>
#include <memory>

#include <Eigen/Core>
#include <Eigen/Sparse>

#include "wgmax/mesh.hpp"
#include "wgmax/wgops.hpp"

namespace wgmax {

using SparseMatrix = Eigen::SparseMatrix<double>;
/// Symmetric tensor in (11, 22, 12) order.
using SymTensor = Eigen::Vector3d;
using VectorField = std::function<Eigen::Vector2d(const Point&, double)>;
using TensorField = std::function<SymTensor(const Point&)>;

/// Isotropic elasticity tensor C e = 2 mu e + lambda tr(e) I in two dimensions.
class IsotropicLaw {
 public:
  IsotropicLaw(double mu, double lambda);

  double mu() const { return mu_; }
  double lambda() const { return lambda_; }

  SymTensor apply_C(const SymTensor& eps) const;
  SymTensor apply_Cinv(const SymTensor& sigma) const;
  /// Matrix W with a(s, t) = t^T W s in component storage (includes the
  /// factor 2 on the shear component).
  Eigen::Matrix3d compliance_weight() const;
  /// Bounds of C^{-1} t : t / t : t.
  double lower_bound() const { return std::min(1.0 / (2.0 * mu_ + 2.0 * lambda_), 1.0 / (2.0 * mu_)); }
  double upper_bound() const { return std::max(1.0 / (2.0 * mu_ + 2.0 * lambda_), 1.0 / (2.0 * mu_)); }

 private:
  double mu_, lambda_;
};

/// Sparse blocks of the semi-discrete system.
///
///   M0 eta' + M0 eta + M1 beta + M2 gamma = 0
///   -M1^T eta + M3 beta + M4 gamma = F
///   -M2^T eta + M5 beta + M6 gamma = 0
struct SystemBlocks {
  SparseMatrix M0, M1, M2, M3, M4, M5, M6;
};

SystemBlocks assemble_blocks(const Mesh& mesh, const DofLayout& layout, const IsotropicLaw& law);

/// Full coefficient vector split into its three blocks.
struct BlockView {
  Eigen::VectorXd eta, beta, gamma;
};
BlockView split(const DofLayout& layout, const Eigen::VectorXd& x);
Eigen::VectorXd join(const DofLayout& layout, const Eigen::VectorXd& eta, const Eigen::VectorXd& beta,
                     const Eigen::VectorXd& gamma);

/// a_h(sigma, sigma).
double energy_norm2(const SystemBlocks& blocks, const Eigen::VectorXd& eta);
/// s_h(v, v).
double stabilization_energy(const SystemBlocks& blocks, const Eigen::VectorXd& beta, const Eigen::VectorXd& gamma);
/// b_h(tau, w) in boundary form: -(w0, div tau) + <wb, tau n>.
double bh_boundary(const SystemBlocks& blocks, const Eigen::VectorXd& eta_tau, const Eigen::VectorXd& beta,
                   const Eigen::VectorXd& gamma);

/// Backward Euler system matrix for a fixed time step, factored once.
class StepMatrix {
 public:
  StepMatrix(const SystemBlocks& blocks, const DofLayout& layout, double dt);
  ~StepMatrix();
  StepMatrix(StepMatrix&&) noexcept;
  StepMatrix& operator=(StepMatrix&&) noexcept;

  double dt() const { return dt_; }
  const SparseMatrix& matrix() const { return a_; }
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

 private:
  struct Factor;
  double dt_;
  SparseMatrix a_;
  std::unique_ptr<Factor> factor_;
};

StepMatrix assemble_step_matrix(const SystemBlocks& blocks, const DofLayout& layout, double dt);

/// Precomputed cell quadrature and weighted interior-velocity basis values for
/// repeated load assembly.
class LoadAssembler {
 public:
  LoadAssembler(const Mesh& mesh, const DofLayout& layout, int quad_degree = -1);
  /// Full-length vector; only the interior velocity block is nonzero.
  Eigen::VectorXd assemble(const VectorField& f, double t) const;
  int num_points() const { return static_cast<int>(points_.size()); }

 private:
  const DofLayout* layout_;
  int points_per_cell_;
  std::vector<Point> points_;
  Eigen::MatrixXd weighted_basis_;  // rows: velocity scalar basis, cols: all points
};

Eigen::VectorXd assemble_load(const Mesh& mesh, const DofLayout& layout, const VectorField& f, double t);

}  // namespace wgmax
