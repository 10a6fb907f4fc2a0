#pragma once

#include "thermogeo/fields.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace thermogeo {

// Scalar thermal expansion law: omega(T) with omega(T0) = 0 and alpha = d omega / dT.
class ExpansionLaw {
 public:
  using Function = std::function<double(double)>;

  // omega is shifted so that omega(T0) = 0. Missing alpha / alpha' come from central differences.
  static ExpansionLaw from_omega(Function omega, double T0, Function alpha = {}, Function alpha_prime = {});
  // omega is the adaptive-Simpson integral of alpha from T0.
  static ExpansionLaw from_alpha(Function alpha, double T0, Function alpha_prime = {});
  static ExpansionLaw constant_alpha(double alpha0, double T0);
  // alpha linear between (T, alpha) nodes, constant outside; omega integrated exactly.
  static ExpansionLaw piecewise_linear_alpha(std::vector<std::pair<double, double>> nodes, double T0);

  double omega(double T) const { return omega_(T); }
  double alpha(double T) const { return alpha_(T); }
  double alpha_prime(double T) const { return alpha_prime_(T); }
  double reference_temperature() const { return T0_; }
  // Integral of alpha from T_from to T_to.
  double integrate_alpha(double T_from, double T_to) const;

 private:
  ExpansionLaw(Function omega, Function alpha, Function alpha_prime, double T0, bool omega_is_integral);

  Function omega_, alpha_, alpha_prime_;
  double T0_;
  bool omega_is_integral_;
};

// omega(T(X)) with chain-rule partials whenever T carries partials.
ScalarField thermal_exponent(const ScalarField& temperature, const ExpansionLaw& law);

// G = exp(2 omega(T)) H.
MetricField build_material_metric(const MetricField& H, const ScalarField& temperature, const ExpansionLaw& law);

struct AnisotropicExpansion {
  // Row I holds the components of the covector E^I.
  std::function<Mat(const Point&)> covectors;
  std::vector<ExpansionLaw> laws;  // one per direction
};

// G = sum_I exp(2 omega_I(T)) E^I (x) E^I.
MetricField build_anisotropic_metric(const AnisotropicExpansion& expansion, const ScalarField& temperature);

// sqrt(det G).
ScalarField volume_form(const MetricField& G);

// Factor rho(T_to) / rho(T_from) = exp(-N int_{T_from}^{T_to} alpha).
double density_at_temperature(const ExpansionLaw& law, double T_from, double T_to, int dimension);

// rho(X) = rho0(X) exp(-N int_{T0}^{T(X)} alpha).
ScalarField density_field(const ScalarField& rho0, const ExpansionLaw& law, const ScalarField& temperature);

// J = det F sqrt(det g / det G); g is the spatial metric evaluated at the deformed points.
ScalarField jacobian(const MatrixField& F, const MetricField& G, const MatrixField& g_at_placement);

}  // namespace thermogeo
