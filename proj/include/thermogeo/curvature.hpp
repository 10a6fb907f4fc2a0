#pragma once

#include "thermogeo/fields.hpp"

#include <functional>
#include <map>
#include <string>

namespace thermogeo {

// Index conventions used throughout:
//   gamma(a, b, c) = Gamma^a_{bc} with nabla_{d_b} d_c = Gamma^a_{bc} d_a,
//   riemann(a, b, c, d) = R^a_{bcd} = d_c Gamma^a_{db} - d_d Gamma^a_{cb}
//                         + Gamma^a_{ce} Gamma^e_{db} - Gamma^a_{de} Gamma^e_{cb},
//   ricci(b, d) = R^c_{bcd},  scalar = G^{bd} ricci(b, d),
//   torsion(a, b, c) = Gamma^a_{bc} - Gamma^a_{cb}.
// For symmetric connections this is the textbook formula; with torsion the slot order is the one
// that makes the curvature of a connection with a parallel frame vanish.

ConnectionField levi_civita(const MetricField& metric);

Tensor3 christoffel(const Mat& g, const std::array<Mat, 3>& dg, const Mat& ginv);
ConnectionJet christoffel_jet(const MetricJet& jet, const Mat& ginv);

struct CurvatureSample {
  Tensor4 riemann;
  Mat ricci;
  double scalar = 0.0;
  Tensor3 torsion;
};

CurvatureSample curvature_at(const ConnectionJet& jet, const Mat& ginv);

struct CurvatureBundle {
  explicit CurvatureBundle(Chart c) : chart(std::move(c)) {}

  Chart chart;
  std::function<Tensor4(const Point&)> riemann;  // empty when only Ricci is available
  std::function<Mat(const Point&)> ricci;
  std::function<double(const Point&)> scalar;
  std::function<Tensor3(const Point&)> torsion;        // empty when torsion-free by construction
  std::function<Tensor3(const Point&)> weyl_schouten;  // (i, j, k) = C_{ijk}; 3D only
  std::map<std::string, double> sup_norms;             // over interior samples
};

CurvatureBundle curvature(const ConnectionField& connection, const MetricField& metric);

// Scalar curvature of exp(2 omega) * (flat metric of the chart), 2D only.
ScalarField conformal_scalar_2d(const ScalarField& omega);

// Ricci tensor of exp(2 omega) * base from the conformal transformation rule.
CurvatureBundle conformal_ricci(const MetricField& base, const ScalarField& omega);

// C_IJK = nabla_K R_IJ - nabla_J R_IK - (G_IJ d_K R - G_IK d_J R) / 4, 3D only.
CurvatureBundle weyl_schouten(const CurvatureBundle& bundle, const MetricField& metric);

// sup_norm(ricci) * diameter^2 of the bundle's chart.
double scaled_ricci_residual(const CurvatureBundle& bundle);

}  // namespace thermogeo
