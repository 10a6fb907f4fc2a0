#pragma once

#include "thermogeo/fields.hpp"
#include "thermogeo/thermal_metric.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace thermogeo {

// Psi = mu (tr C - 2), incompressible.
struct NeoHookean2D {
  double mu = 1.0;
};

enum class AxisymBC {
  paper_datum,    // p(R1) = 0
  traction_free,  // P^{rR} = 0 at R1 and R2
};

std::string_view to_string(AxisymBC bc);
AxisymBC axisym_bc_from_string(std::string_view name);

struct AxisymProblem {
  double R1 = 1.0;
  double R2 = 2.0;
  std::function<double(double)> T;
  std::function<double(double)> dT;  // optional, central differences of T otherwise
  ExpansionLaw law = ExpansionLaw::constant_alpha(0.0, 0.0);
  NeoHookean2D material;
  AxisymBC bc = AxisymBC::traction_free;
  std::optional<double> r1;  // paper_datum only; default R1 exp(omega(T(R1)))
  int panels = 2048;
};

struct AxisymSolution {
  // Panel end points R1 = R[0] < ... < R[panels] = R2 and the profiles there.
  std::vector<double> R, r, p, P_rR, P_thTh;
  double r1 = 0.0;
  double p1 = 0.0;  // p(R1)
  int iterations = 0;
  // sup over interior samples of |d P^{rR}/dR + (1/R + 2 omega') P^{rR} - r P^{thTh}|, derivative by differences.
  double residual_equilibrium = 0.0;
  // traction_free: max |P^{rR}| at both ends; paper_datum: |p(R1)|.
  double residual_bc = 0.0;
  // sup |r r' / (R e^{2 omega}) - 1| with r' by differences of the samples.
  double incompressibility = 0.0;

  // Continuous profiles, valid on [R1, R2].
  std::function<double(double)> r_of, p_of, omega_of, domega_of;
};

AxisymSolution solve_axisym(const AxisymProblem& problem);

// Header R,r,p,P_rR,P_thTh then one row per sample.
std::string axisym_csv(const AxisymSolution& solution);

// P(a, A) = 2 mu F^a_B G^{AB} - p (F^-1)^A_b g^{ab}; g is the spatial metric at the deformed points.
MatrixField pk1_neo_hookean(const MatrixField& F, const MetricField& G, const MatrixField& g_at_placement, double mu,
                            const ScalarField& p);

// (P^{aA})_{|A} = d_A P^{aA} + Gamma^A_{AB} P^{aB} + gamma^a_{bc} F^c_A P^{bA}.
// gamma_spatial holds the spatial coefficients evaluated at the deformed points, on the material chart.
Field<Vec> divergence_pk1(const MatrixField& P, const ConnectionField& Gamma_material,
                          const ConnectionField& gamma_spatial, const MatrixField& F);

// The solution as fields on a polar material chart (R, Theta).
struct AxisymFields {
  MetricField G;
  MatrixField F, g, P;
  ScalarField pressure;
  ConnectionField gamma_spatial;
};
AxisymFields axisym_fields(const AxisymSolution& solution, const AxisymProblem& problem, const Chart& polar);

}  // namespace thermogeo
