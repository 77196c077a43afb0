#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wgmax/mesh.hpp"
#include "wgmax/system.hpp"
#include "wgmax/wgops.hpp"

namespace wgmax {

/// Coefficients (eta, beta, gamma) of (sigma_h^n, v_h0^n, v_hb^n) at t_n = n dt.
struct StateVector {
  Eigen::VectorXd eta, beta, gamma;
  int step = 0;
  double time = 0.0;
};

/// Terms of the discrete energy balance, one entry per time step.
struct EnergyLedger {
  struct Entry {
    double jump2;    // ||sigma^n - sigma^{n-1}||_a^2
    double energy2;  // ||sigma^n||_a^2
    double stab;     // s_h(v^n, v^n)
    double forcing;  // (f^n, v_h0^n)
  };
  double initial_energy2 = 0.0;
  std::vector<Entry> entries;
};

/// sigma_h^0 = Q_k^0 psi0 componentwise, zero velocity.
StateVector initial_state(const Mesh& mesh, const DofLayout& layout, const TensorField& psi0);

/// Backward Euler time loop on a fixed (mesh, dt); the step matrix is factored
/// once by the caller and reused for every step.
class Evolver {
 public:
  Evolver(const Mesh& mesh, const DofLayout& layout, const SystemBlocks& blocks, const StepMatrix& step_matrix,
          VectorField f);

  double dt() const { return step_matrix_->dt(); }
  StateVector step(const StateVector& state);

  using Observer = std::function<void(const StateVector&)>;
  /// Advance `steps` steps from `state`, calling `observer` after each.
  StateVector run(StateVector state, int steps, const Observer& observer = {});

  const EnergyLedger& ledger() const { return ledger_; }
  void reset_ledger(const StateVector& initial);

 private:
  const DofLayout* layout_;
  const SystemBlocks* blocks_;
  const StepMatrix* step_matrix_;
  VectorField f_;
  LoadAssembler load_;
  EnergyLedger ledger_;
  bool ledger_started_ = false;
};

/// Relative residual of
///   sum ||s^n - s^{n-1}||_a^2 + ||s^J||_a^2 + 2 dt sum ||s^n||_a^2 + 2 dt sum s_h(v^n, v^n)
///     - ||s^0||_a^2 - 2 dt sum (f^n, v0^n)
/// normalized by the largest term. Zero when every term vanishes.
double check_energy_identity(const EnergyLedger& ledger, double dt);

/// Cell averages of the stress components and interior velocity, written as
/// legacy ASCII VTK.
void write_state_vtk(const std::string& path, const Mesh& mesh, const DofLayout& layout, const StateVector& state);

}  // namespace wgmax
