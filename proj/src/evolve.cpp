#include "wgmax/evolve.hpp"

#include <algorithm>
#include <cmath>

#include "wgmax/polyspace.hpp"
#include "wgmax/vtk.hpp"

namespace wgmax {

StateVector initial_state(const Mesh& mesh, const DofLayout& layout, const TensorField& psi0) {
  StateVector s;
  s.eta = Eigen::VectorXd::Zero(layout.num_stress());
  s.beta = Eigen::VectorXd::Zero(layout.num_velocity());
  s.gamma = Eigen::VectorXd::Zero(layout.num_trace());
  const int k = layout.degree();
  const int ns = layout.scalar_stress_dim();
  for (int c = 0; c < mesh.num_cells(); ++c)
    for (int comp = 0; comp < 3; ++comp) {
      const auto coeffs = project_cell([&](const Point& x) { return psi0(x)[comp]; }, mesh, c, k);
      s.eta.segment(layout.stress_dof(c, comp, 0), ns) = coeffs;
    }
  return s;
}

Evolver::Evolver(const Mesh& mesh, const DofLayout& layout, const SystemBlocks& blocks, const StepMatrix& step_matrix,
                 VectorField f)
    : layout_(&layout), blocks_(&blocks), step_matrix_(&step_matrix), f_(std::move(f)), load_(mesh, layout) {}

void Evolver::reset_ledger(const StateVector& initial) {
  ledger_ = EnergyLedger{};
  ledger_.initial_energy2 = energy_norm2(*blocks_, initial.eta);
  ledger_started_ = true;
}

StateVector Evolver::step(const StateVector& state) {
  if (!ledger_started_) reset_ledger(state);
  const DofLayout& layout = *layout_;
  const double dt = step_matrix_->dt();
  const double t_next = (state.step + 1) * dt;

  Eigen::VectorXd rhs = load_.assemble(f_, t_next);
  rhs.segment(layout.stress_offset(), layout.num_stress()) = (blocks_->M0 * state.eta) / dt;
  const Eigen::VectorXd x = step_matrix_->solve(rhs);

  StateVector next;
  next.eta = x.segment(layout.stress_offset(), layout.num_stress());
  next.beta = x.segment(layout.velocity_offset(), layout.num_velocity());
  next.gamma = x.segment(layout.trace_offset(), layout.num_trace());
  next.step = state.step + 1;
  next.time = t_next;

  const Eigen::VectorXd jump = next.eta - state.eta;
  ledger_.entries.push_back({energy_norm2(*blocks_, jump), energy_norm2(*blocks_, next.eta),
                             stabilization_energy(*blocks_, next.beta, next.gamma),
                             rhs.segment(layout.velocity_offset(), layout.num_velocity()).dot(next.beta)});
  return next;
}

StateVector Evolver::run(StateVector state, int steps, const Observer& observer) {
  for (int n = 0; n < steps; ++n) {
    state = step(state);
    if (observer) observer(state);
  }
  return state;
}

double check_energy_identity(const EnergyLedger& ledger, double dt) {
  double jumps = 0.0, energies = 0.0, stabs = 0.0, forcing = 0.0;
  for (const auto& e : ledger.entries) {
    jumps += e.jump2;
    energies += e.energy2;
    stabs += e.stab;
    forcing += e.forcing;
  }
  const double last = ledger.entries.empty() ? ledger.initial_energy2 : ledger.entries.back().energy2;
  const double terms[] = {jumps, last, 2.0 * dt * energies, 2.0 * dt * stabs, ledger.initial_energy2,
                          2.0 * dt * forcing};
  const double residual = terms[0] + terms[1] + terms[2] + terms[3] - terms[4] - terms[5];
  double scale = 0.0;
  for (double t : terms) scale = std::max(scale, std::abs(t));
  return scale == 0.0 ? 0.0 : std::abs(residual) / scale;
}

namespace {

// Mean of a P_j cell polynomial over the cell.
double cell_mean(const Mesh& mesh, int cell, int degree, const Eigen::Ref<const Eigen::VectorXd>& coeffs) {
  const CellBasis basis(mesh, cell, degree);
  const auto q = cell_quadrature(mesh, cell, degree);
  double s = 0.0;
  for (int p = 0; p < q.size(); ++p) s += q.weights[p] * basis.values(q.points[p]).dot(coeffs);
  return s / mesh.cell_area[cell];
}

}  // namespace

void write_state_vtk(const std::string& path, const Mesh& mesh, const DofLayout& layout, const StateVector& state) {
  const int k = layout.degree();
  const int ns = layout.scalar_stress_dim();
  const int nv = layout.scalar_velocity_dim();
  const int nc = mesh.num_cells();
  std::vector<VtkCellField> fields;
  const char* names[] = {"sigma11", "sigma22", "sigma12"};
  for (int comp = 0; comp < 3; ++comp) {
    VtkCellField f{names[comp], 1, std::vector<double>(nc)};
    for (int c = 0; c < nc; ++c)
      f.values[c] = cell_mean(mesh, c, k, state.eta.segment(layout.stress_dof(c, comp, 0), ns));
    fields.push_back(std::move(f));
  }
  VtkCellField v{"velocity", 3, std::vector<double>(3 * nc, 0.0)};
  const int vo = layout.velocity_offset();
  for (int c = 0; c < nc; ++c)
    for (int m = 0; m < 2; ++m)
      v.values[3 * c + m] = cell_mean(mesh, c, k + 1, state.beta.segment(layout.velocity_dof(c, m, 0) - vo, nv));
  fields.push_back(std::move(v));
  write_vtk(path, mesh, fields, "wgmaxwell state t=" + std::to_string(state.time));
}

}  // namespace wgmax
