#pragma once

#include <functional>
#include <string>

#include "wgmax/evolve.hpp"
#include "wgmax/mesh.hpp"
#include "wgmax/system.hpp"

namespace wgmax {

using TimeTensorField = std::function<SymTensor(const Point&, double)>;

/// Exact fields of a manufactured viscoelastic solution (mu = lambda = 1).
struct ManufacturedCase {
  std::string name;
  std::string smoothness;
  VectorField displacement;
  VectorField velocity;
  TimeTensorField stress;
  TimeTensorField velocity_strain;  // eps(v)
  VectorField force;                // -div sigma
  TensorField initial_stress;       // sigma(., 0)
};

/// Polynomial displacement times e^{-t}, stress proportional to t e^{-t}.
ManufacturedCase case_polynomial();
/// sin/cos displacement times e^{-t}, stress proportional to t e^{-t}.
ManufacturedCase case_trig();
/// Lookup by name ("polynomial" or "trig").
ManufacturedCase case_by_name(const std::string& name);

struct ErrorReport {
  double stress_rel = 0.0;          // ||sigma(T) - sigma_h||_0 / ||sigma(T)||_0
  double strain_rel = 0.0;          // ||eps(v(T)) - eps_h(v_h0)||_0 / ||eps(v(T))||_0
  double strain_scaled_rel = 0.0;   // sqrt(dt) * strain_rel
  double velocity_rel = 0.0;        // ||v(T) - v_h0||_0 / ||v(T)||_0
  double stress_abs = 0.0, strain_abs = 0.0, velocity_abs = 0.0;
  bool absolute = false;            // set when an exact norm vanished; *_rel then hold absolute values
};

int error_quadrature_degree(int k);

/// Errors of the discrete state against the exact fields at state.time.
ErrorReport error_norms(const StateVector& state, const ManufacturedCase& mcase, const Mesh& mesh,
                        const DofLayout& layout, double dt, int quad_degree = -1);

/// log(e_coarse / e_fine) / log(ratio).
double observed_order(double e_coarse, double e_fine, double ratio = 2.0);

}  // namespace wgmax
