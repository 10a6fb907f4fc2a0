#pragma once

#include "thermogeo/fields.hpp"
#include "thermogeo/thermal_metric.hpp"

#include <array>
#include <functional>

namespace thermogeo {

// Orthonormal material frame. Row A of the matrix holds the coordinate components of the frame
// vector E_A, i.e. F(A, B) = F_A^B and E_A = F_A^B d_B. The dual coframe is F^{-T}.
class FrameField {
 public:
  using Evaluator = std::function<Mat(const Point&)>;
  using Partials = std::function<std::array<Mat, 3>(const Point&)>;  // [E] = d_E F

  FrameField(Chart chart, Evaluator frame, Partials partials = {});

  // F = I / vartheta, exact partials when vartheta carries a gradient.
  static FrameField conformal(const ScalarField& vartheta);

  const Chart& chart() const { return chart_; }
  Mat operator()(const Point& p) const { return frame_(p); }
  Mat inverse(const Point& p) const;  // (C, D) = F^C_D
  std::array<Mat, 3> partials(const Point& p) const;
  bool has_analytic_partials() const { return static_cast<bool>(partials_); }

  // F' = Lambda F for a rotation field Lambda.
  FrameField gauged(const std::function<Mat(const Point&)>& rotation) const;

 private:
  Chart chart_;
  Evaluator frame_;
  Partials partials_;
};

// Inverse Cholesky factor of G (scalar multiples of the identity give I / sqrt(scalar)), then the gauge.
FrameField orthonormal_frame(const MetricField& G, const std::function<Mat(const Point&)>& gauge = {});

// vartheta = exp(omega(T)) with chain-rule partials.
ScalarField vartheta_from_temperature(const ScalarField& temperature, const ExpansionLaw& law);

// F_e(a, A) = F_A^B F^a_B.
MatrixField elastic_part(const MatrixField& F, const FrameField& frame);

// c(A, B, C) = c_AB^C with [E_A, E_B] = c_AB^C E_C.
Tensor3Field commutation_coefficients(const FrameField& frame);

// Gbar(A, B, C) = F_A^D F^C_F (d_D F_B^F + F_B^E Gamma^F_DE) with nabla_{E_A} E_B = Gbar(A, B, C) E_C.
Tensor3Field frame_connection(const FrameField& frame, const ConnectionField& connection);

// T(C, A, B) = Gbar(A, B, C) - Gbar(B, A, C) - c(A, B, C).
Tensor3Field noncoordinate_torsion(const Tensor3Field& frame_connection, const Tensor3Field& commutation);

// Connection in which every frame vector is parallel: Gamma^I_JK = -F^A_K d_J F_A^I.
ConnectionField ap_connection(const FrameField& frame);

// sup over interior samples of |d_J F_A^I + Gamma^I_JK F_A^K|.
double parallel_transport_residual(const FrameField& frame, const ConnectionField& connection);

}  // namespace thermogeo
