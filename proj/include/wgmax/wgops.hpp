#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "wgmax/mesh.hpp"

namespace wgmax {

/// Symmetric tensor components are stored in the order (11, 22, 12). The
/// tensor inner product is s11 t11 + s22 t22 + 2 s12 t12.
enum TensorComponent : int { T11 = 0, T22 = 1, T12 = 2 };
inline constexpr std::array<double, 3> kTensorWeight{1.0, 1.0, 2.0};

/// Global numbering of the unknowns (eta, beta, gamma).
///
/// Stress coefficients come first, cell-major then component-major, then the
/// interior velocity, then the edge velocity on interior edges only (boundary
/// edges carry the homogeneous Dirichlet value and have no unknowns).
class DofLayout {
 public:
  DofLayout(const Mesh& mesh, int k);

  int degree() const { return k_; }
  int stress_per_cell() const { return 3 * n_stress_; }
  int velocity_per_cell() const { return 2 * n_velocity_; }
  int trace_per_edge() const { return 2 * n_trace_; }
  int scalar_stress_dim() const { return n_stress_; }      // dim P_k(K)
  int scalar_velocity_dim() const { return n_velocity_; }  // dim P_{k+1}(K)
  int scalar_trace_dim() const { return n_trace_; }        // dim P_k(E)

  int num_cells() const { return num_cells_; }
  int num_interior_edges() const { return num_interior_edges_; }

  int stress_offset() const { return 0; }
  int velocity_offset() const { return velocity_offset_; }
  int trace_offset() const { return trace_offset_; }
  int num_stress() const { return velocity_offset_; }
  int num_velocity() const { return trace_offset_ - velocity_offset_; }
  int num_trace() const { return total_ - trace_offset_; }
  int total() const { return total_; }

  int stress_dof(int cell, int component, int i) const {
    return cell * stress_per_cell() + component * n_stress_ + i;
  }
  int velocity_dof(int cell, int component, int i) const {
    return velocity_offset_ + cell * velocity_per_cell() + component * n_velocity_ + i;
  }
  /// -1 for boundary edges.
  int trace_dof(int edge, int component, int j) const {
    const int slot = edge_slot_[edge];
    return slot < 0 ? -1 : trace_offset_ + slot * trace_per_edge() + component * n_trace_ + j;
  }
  int edge_slot(int edge) const { return edge_slot_[edge]; }

 private:
  int k_;
  int n_stress_, n_velocity_, n_trace_;
  int num_cells_, num_interior_edges_;
  int velocity_offset_, trace_offset_, total_;
  std::vector<int> edge_slot_;
};

/// Per-cell matrix of the discrete weak gradient nabla_{w,k} on scalars.
///
/// Columns: interior P_{k+1} coefficients, then P_k trace coefficients of
/// local edges 0, 1, 2 (each in the global edge parameterization). Rows: the
/// two gradient components, each in the P_k cell basis.
Eigen::MatrixXd weak_gradient_matrix(const Mesh& mesh, int cell, int k);

/// Cached weak gradient matrices for every cell.
class WeakGradientTable {
 public:
  WeakGradientTable(const Mesh& mesh, int k);
  const Eigen::MatrixXd& operator[](int cell) const { return local_[cell]; }
  int degree() const { return k_; }

 private:
  int k_;
  std::vector<Eigen::MatrixXd> local_;
};

/// nabla_{w,k} of a scalar: returns [d/dx coeffs; d/dy coeffs] in P_k(K).
Eigen::VectorXd weak_gradient(const Mesh& mesh, int cell, int k, const Eigen::VectorXd& v0,
                              const std::array<Eigen::VectorXd, 3>& vb);

/// Vector-valued weak function on one cell: interior [comp0; comp1] in
/// P_{k+1}, and per local edge [comp0; comp1] in P_k.
struct LocalVectorField {
  Eigen::VectorXd interior;
  std::array<Eigen::VectorXd, 3> traces;
};

/// Symmetrized weak gradient as (e11, e22, e12) blocks in P_k(K).
Eigen::VectorXd weak_strain(const Mesh& mesh, int cell, int k, const LocalVectorField& v);

/// Discrete weak divergence into P_j(K). Interior data is in P_{k+1}, traces in P_k.
Eigen::VectorXd weak_divergence(const Mesh& mesh, int cell, int k, const LocalVectorField& v, int j);

/// Gather the local weak field of cell `cell` from a global (beta, gamma) vector.
LocalVectorField gather_velocity(const Mesh& mesh, const DofLayout& layout, int cell, const Eigen::VectorXd& x);

}  // namespace wgmax
