#pragma once

#include "thermogeo/fields.hpp"
#include "thermogeo/thermal_metric.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace thermogeo {

enum class FlatnessVerdict { flat, not_flat, flat_local_only };

std::string_view to_string(FlatnessVerdict verdict);

struct FlatnessReport {
  std::map<std::string, double> residual_norms;  // sup norms scaled by diameter^2
  FlatnessVerdict verdict = FlatnessVerdict::not_flat;
  double tolerance = 0.0;
  std::string notes;
};

// Flatness of exp(2 omega) * (flat metric of the chart) in 2D: residual sup|lap omega| * diam^2.
FlatnessReport check_stress_free_2d(const ScalarField& omega, std::optional<double> tolerance = std::nullopt);

// exp(2 Omega) = gamma R^(2 beta) on R0 <= R <= R1.
struct RadialFamily {
  double beta = 0.0;
  double R0 = 1.0;
  double R1 = 2.0;
  std::optional<double> gamma;  // defaults to R0^(-2 beta), making T(R0) = T0

  double gamma_value() const { return gamma.value_or(std::pow(R0, -2.0 * beta)); }
};

Chart radial_family_chart(const RadialFamily& family, int n = 33, double theta_extent = 2.0 * 3.14159265358979323846);

// Temperature whose constant-alpha metric reproduces the family: T = T0 + (beta ln R + ln(gamma) / 2) / alpha0.
ScalarField radial_family_to_temperature(const RadialFamily& family, double alpha0, double T0, const Chart& chart);

// Conformal factor omega = beta ln R + ln(gamma) / 2 with exact partials.
ScalarField radial_family_omega(const RadialFamily& family, const Chart& chart);

struct ConeDescriptor {
  double c = 0.0;
  double deficit_angle = 0.0;
  bool embeddable_in_R3 = false;
};

ConeDescriptor cone_from_beta(double beta);

struct InverseAlpha {
  std::function<double(double)> alpha_of_R;
  std::function<double(double)> alpha_of_T;  // monotone cubic interpolation in T
  double T_min = 0.0, T_max = 0.0;
};

// alpha(R) = beta / (R T'(R)) so that omega' = beta / R.
InverseAlpha inverse_alpha_radial(std::function<double(double)> T, std::function<double(double)> dT, double beta,
                                  double R0, double R1, int samples = 512);

// alpha'(T) |grad T|^2 + alpha(T) lap T.
ScalarField zero_stress_residual(const ScalarField& temperature, const ExpansionLaw& law);

// The six second-order equations whose vanishing is equivalent to Ric(exp(2 Omega) delta) = 0 in 3D.
std::array<ScalarField, 6> flatness_system_residuals_3d(const ScalarField& omega);

// Ricci, six-equation and linearized (Hessian-only) residuals, all scaled by diameter^2.
FlatnessReport check_stress_free_3d(const ScalarField& omega, std::optional<double> tolerance = std::nullopt);

// Omega = -ln(c0 |X - b|^2) on a Cartesian chart that must not contain b.
ScalarField closed_form_3d(double c0, const Point& center, const Chart& chart);

// Temperature reproducing closed_form_3d under a constant-alpha law.
ScalarField closed_form_3d_temperature(double c0, const Point& center, double alpha0, double T0, const Chart& chart);

// Inversion X -> (X - b) / (c0 |X - b|^2): an isometry from exp(2 Omega) delta to delta.
Point inversion_map(const Point& X, double c0, const Point& center);
Mat inversion_gradient(const Point& X, double c0, const Point& center);

}  // namespace thermogeo
