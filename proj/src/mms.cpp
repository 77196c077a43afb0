#include "wgmax/mms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wgmax/polyspace.hpp"

namespace wgmax {

namespace {

constexpr double kPi = std::numbers::pi;

// q(x) = x^2 (x - 1)^2 and its derivatives
double q0(double x) { return x * x * (x - 1.0) * (x - 1.0); }
double q1(double x) { return 4.0 * x * x * x - 6.0 * x * x + 2.0 * x; }
double q2(double x) { return 12.0 * x * x - 12.0 * x + 2.0; }

}  // namespace

ManufacturedCase case_polynomial() {
  ManufacturedCase c;
  c.name = "polynomial";
  c.smoothness = "polynomial of degree 6 in space";
  c.displacement = [](const Point& x, double t) {
    const double s = -std::exp(-t);
    return Eigen::Vector2d(s * q0(x[0]) * q1(x[1]), s * q0(x[1]) * q1(x[0]));
  };
  c.velocity = [](const Point& x, double t) {
    const double s = std::exp(-t);
    return Eigen::Vector2d(s * q0(x[0]) * q1(x[1]), s * q0(x[1]) * q1(x[0]));
  };
  c.stress = [](const Point& x, double t) {
    const double s = t * std::exp(-t);
    const double normal = 4.0 * s * q1(x[0]) * q1(x[1]);
    const double shear = s * (q0(x[0]) * q2(x[1]) + q0(x[1]) * q2(x[0]));
    return SymTensor(normal, normal, shear);
  };
  c.velocity_strain = [](const Point& x, double t) {
    const double s = std::exp(-t);
    const double normal = s * q1(x[0]) * q1(x[1]);
    return SymTensor(normal, normal, 0.5 * s * (q0(x[0]) * q2(x[1]) + q0(x[1]) * q2(x[0])));
  };
  c.force = [](const Point& x, double t) {
    const double s = -4.0 * t * std::exp(-t);
    const double a = x[0], b = x[1];
    const double f1 = s * (2.0 * b - 1.0) *
                      (3.0 * a * a * a * a - 6.0 * a * a * a + 30.0 * a * a * b * b - 30.0 * a * a * b + 3.0 * a * a -
                       30.0 * a * b * b + 30.0 * a * b + 5.0 * b * b - 5.0 * b);
    const double f2 = s * (2.0 * a - 1.0) *
                      (3.0 * b * b * b * b - 6.0 * b * b * b + 30.0 * b * b * a * a - 30.0 * b * b * a + 3.0 * b * b -
                       30.0 * b * a * a + 30.0 * b * a + 5.0 * a * a - 5.0 * a);
    return Eigen::Vector2d(f1, f2);
  };
  c.initial_stress = [](const Point&) { return SymTensor::Zero().eval(); };
  return c;
}

ManufacturedCase case_trig() {
  ManufacturedCase c;
  c.name = "trig";
  c.smoothness = "analytic (sin/cos)";
  c.displacement = [](const Point& x, double t) {
    const double u = -std::exp(-t) * std::sin(kPi * x[0]) * std::sin(kPi * x[1]);
    return Eigen::Vector2d(u, u);
  };
  c.velocity = [](const Point& x, double t) {
    const double v = std::exp(-t) * std::sin(kPi * x[0]) * std::sin(kPi * x[1]);
    return Eigen::Vector2d(v, v);
  };
  c.stress = [](const Point& x, double t) {
    const double s = kPi * t * std::exp(-t);
    const double s1 = std::sin(kPi * x[0]), c1 = std::cos(kPi * x[0]);
    const double s2 = std::sin(kPi * x[1]), c2 = std::cos(kPi * x[1]);
    return SymTensor(s * (3.0 * c1 * s2 + s1 * c2), s * (3.0 * s1 * c2 + c1 * s2), s * (s1 * c2 + c1 * s2));
  };
  c.velocity_strain = [](const Point& x, double t) {
    const double s = kPi * std::exp(-t);
    const double s1 = std::sin(kPi * x[0]), c1 = std::cos(kPi * x[0]);
    const double s2 = std::sin(kPi * x[1]), c2 = std::cos(kPi * x[1]);
    return SymTensor(s * c1 * s2, s * s1 * c2, 0.5 * s * (s1 * c2 + c1 * s2));
  };
  c.force = [](const Point& x, double t) {
    const double f = -kPi * kPi * t * std::exp(-t) *
                     (3.0 * std::cos(kPi * (x[0] + x[1])) - std::cos(kPi * (x[0] - x[1])));
    return Eigen::Vector2d(f, f);
  };
  c.initial_stress = [](const Point&) { return SymTensor::Zero().eval(); };
  return c;
}

ManufacturedCase case_by_name(const std::string& name) {
  if (name == "polynomial") return case_polynomial();
  if (name == "trig") return case_trig();
  throw std::invalid_argument("unknown example '" + name + "' (expected polynomial or trig)");
}

int error_quadrature_degree(int k) { return 2 * k + 8; }

ErrorReport error_norms(const StateVector& state, const ManufacturedCase& mcase, const Mesh& mesh,
                        const DofLayout& layout, double dt, int quad_degree) {
  const int k = layout.degree();
  if (quad_degree < 0) quad_degree = error_quadrature_degree(k);
  const int ns = layout.scalar_stress_dim();
  const int nv = layout.scalar_velocity_dim();
  const int vo = layout.velocity_offset();
  const double t = state.time;

  double es = 0.0, ns2 = 0.0, ee = 0.0, ne = 0.0, ev = 0.0, nvel = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellBasis sb(mesh, c, k);
    const CellBasis vb(mesh, c, k + 1);
    const auto q = cell_quadrature(mesh, c, quad_degree);
    Eigen::Matrix3Xd eta(3, ns);
    for (int comp = 0; comp < 3; ++comp)
      eta.row(comp) = state.eta.segment(layout.stress_dof(c, comp, 0), ns).transpose();
    Eigen::Matrix2Xd beta(2, nv);
    for (int m = 0; m < 2; ++m) beta.row(m) = state.beta.segment(layout.velocity_dof(c, m, 0) - vo, nv).transpose();

    for (int p = 0; p < q.size(); ++p) {
      const Point& x = q.points[p];
      const double w = q.weights[p];
      const SymTensor sig = mcase.stress(x, t);
      const SymTensor dsig = sig - eta * sb.values(x);
      const Eigen::Vector2d v = mcase.velocity(x, t);
      const Eigen::Vector2d dv = v - beta * vb.values(x);
      const Eigen::Matrix2d grad = beta * vb.gradients(x);  // grad(i, j) = d v_i / d x_j
      const SymTensor eps = mcase.velocity_strain(x, t);
      const SymTensor deps = eps - SymTensor(grad(0, 0), grad(1, 1), 0.5 * (grad(0, 1) + grad(1, 0)));
      for (int comp = 0; comp < 3; ++comp) {
        es += w * kTensorWeight[comp] * dsig[comp] * dsig[comp];
        ns2 += w * kTensorWeight[comp] * sig[comp] * sig[comp];
        ee += w * kTensorWeight[comp] * deps[comp] * deps[comp];
        ne += w * kTensorWeight[comp] * eps[comp] * eps[comp];
      }
      ev += w * dv.squaredNorm();
      nvel += w * v.squaredNorm();
    }
  }

  ErrorReport r;
  r.stress_abs = std::sqrt(es);
  r.strain_abs = std::sqrt(ee);
  r.velocity_abs = std::sqrt(ev);
  r.absolute = ns2 == 0.0 || ne == 0.0 || nvel == 0.0;
  r.stress_rel = ns2 > 0.0 ? r.stress_abs / std::sqrt(ns2) : r.stress_abs;
  r.strain_rel = ne > 0.0 ? r.strain_abs / std::sqrt(ne) : r.strain_abs;
  r.velocity_rel = nvel > 0.0 ? r.velocity_abs / std::sqrt(nvel) : r.velocity_abs;
  r.strain_scaled_rel = std::sqrt(dt) * r.strain_rel;
  return r;
}

double observed_order(double e_coarse, double e_fine, double ratio) {
  if (!(e_coarse > 0.0) || !(e_fine > 0.0)) throw std::invalid_argument("observed_order: errors must be positive");
  if (!(ratio > 1.0)) throw std::invalid_argument("observed_order: refinement ratio must exceed 1");
  return std::log(e_coarse / e_fine) / std::log(ratio);
}

}  // namespace wgmax
