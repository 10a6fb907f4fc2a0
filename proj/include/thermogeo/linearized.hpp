#pragma once

#include "thermogeo/fields.hpp"
#include "thermogeo/thermal_metric.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace thermogeo {

struct SVKModuli {
  double lambda = 1.0;
  double mu = 1.0;
  void validate() const;  // mu > 0 and 3 lambda + 2 mu > 0
};

// Tangents of the first Piola-Kirchhoff stress in Cartesian components with g = delta.
struct ElasticTensors {
  Tensor4 A;        // A(a, A, b, B) = dP^{aA} / dF^b_B
  Tensor4 B;        // B(a, A, C, D) = dP^{aA} / dG_CD, symmetric in (C, D)
  Tensor4 C_elast;  // C_elast(A, B, C, D) = dS^{AB} / dC_CD
  int dim = 3;

  // B(a, A, C, C) summed over C.
  Mat B_trace() const;
};

// S = lambda tr(E) G^-1 + 2 mu G^-1 E G^-1 with E = (C - G) / 2 and tr E = G^-1 : E.
Mat svk_second_pk(const SVKModuli& moduli, const Mat& C, const Mat& G);
// P = F S(F^T F, G).
Mat svk_pk1(const SVKModuli& moduli, const Mat& F, const Mat& G);
// Exact tangents at an arbitrary (F, G).
ElasticTensors svk_tangents(const SVKModuli& moduli, const Mat& F, const Mat& G);
// Tangents at the stress-free Cartesian reference F = G = I.
ElasticTensors svk_tensors(const SVKModuli& moduli, int dim = 3);

struct LinearizedLoad {
  ScalarField beta;                      // dG/d eps = beta G
  std::optional<MatrixField> prestress;  // P at the reference, zero when absent
};

// beta = 2 alpha(T) dT/d eps, with chain-rule partials when T and dT/d eps carry them.
ScalarField beta_field(const ScalarField& temperature, const ScalarField& temperature_rate, const ExpansionLaw& law);
// beta = 2 alpha deltaT for constant alpha.
ScalarField beta_field(const ScalarField& delta_T, double alpha);

// (A U_{,B})_{,A} + (B G beta)_{,A} + (N/2) beta_{,B} P^{aB} for constant tensors on a Cartesian chart.
Field<Vec> linearized_operator(const ElasticTensors& tensors, const LinearizedLoad& load, const VectorField& U);

// C_ijkl eps_kl,j - C_ijkk alpha deltaT_,j with the isotropic stiffness.
Field<Vec> classical_navier_residual(const SVKModuli& moduli, double alpha, const ScalarField& delta_T,
                                     const VectorField& u);

// d/d eps of Gamma^A_AB for G_eps = e^{eps beta} G, by a 4th-order stencil in eps. Equals (N/2) d_B beta.
Field<Vec> trace_connection_rate(const MetricField& G, const ScalarField& beta, double step = 1e-3);

enum class EndKind { displacement, stress };
struct EndCondition {
  EndKind kind = EndKind::stress;
  double value = 0.0;  // u, or sigma at that end
};

struct Rod1D {
  std::vector<double> x, u, sigma;
};

// (lambda + 2 mu) u'' = (3 lambda + 2 mu) alpha deltaT' on [x0, x1] by second-order finite volumes.
// Two stress ends must carry the same value (sigma is constant); the translation is then fixed by u(x0) = 0.
Rod1D solve_linearized_1d(const SVKModuli& moduli, double alpha, const std::function<double(double)>& delta_T,
                          EndCondition left, EndCondition right, int n, double x0 = 0.0, double x1 = 1.0);

std::string rod_csv(const Rod1D& rod);

using FreeEnergy = std::function<double(const Mat& C, const Mat& G)>;

struct BCConditionReport {
  Mat B_trace;  // B_ljkk at C = G = I, F = I
  Mat C_trace;  // C_ljkk
  double residual = 0.0;  // sup |B_ljkk + C_ljkk|
};

// Mixed second derivatives of Psi at the Euclidean reference by nested Ridders extrapolation.
BCConditionReport bc_condition_check(const FreeEnergy& psi, int dim = 3);

// Ridders-extrapolated central difference; throws NonDifferentiable when the estimate does not settle.
double ridders_derivative(const std::function<double(double)>& f, double x, double h, double tolerance = 1e-6);

}  // namespace thermogeo
