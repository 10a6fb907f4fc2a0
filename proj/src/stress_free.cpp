#include "thermogeo/stress_free.hpp"

#include "thermogeo/curvature.hpp"
#include "thermogeo/error.hpp"

// pchip.hpp in Boost 1.74 calls isnan unqualified and needs boost::math::isnan in scope.
#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/pchip.hpp>

#include <algorithm>
#include <cstdio>
#include <memory>
#include <numbers>

namespace thermogeo {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double scaled_sup(const ScalarField& f, int band) {
  double m = 0.0;
  for (const Point& p : f.chart().interior_samples(band)) m = std::max(m, std::abs(f(p)));
  return m * std::pow(f.chart().diameter(), 2);
}

// Notes on the global picture for a radial conformal factor on a polar chart.
void classify_annulus(const ScalarField& omega, FlatnessReport& report) {
  const Chart& chart = omega.chart();
  if (chart.kind() != CoordinateKind::polar || !(chart.bounds(0).lo > 0.0)) return;
  double radial = 0.0, angular = 0.0, beta_sum = 0.0;
  const auto pts = chart.interior_samples(chart.band());
  for (const Point& p : pts) {
    const Vec g = omega.gradient(p);
    radial = std::max(radial, std::abs(p[0] * g[0]));
    angular = std::max(angular, std::abs(g[1]));
    beta_sum += p[0] * g[0];
  }
  if (angular > 1e-8 * std::max(1.0, radial) || radial < 1e-12) return;
  const double beta = beta_sum / static_cast<double>(pts.size());
  const double deficit = 2.0 * std::numbers::pi * (1.0 - std::abs(beta + 1.0));
  const bool full_turn = chart.bounds(1).length() >= 2.0 * std::numbers::pi - 1e-9;
  if (full_turn && std::abs(deficit) < 1e-8) {
    report.notes = "radial factor with beta=" + fmt(beta) + " closes up without deficit on the full annulus";
    return;
  }
  report.verdict = FlatnessVerdict::flat_local_only;
  if (full_turn)
    report.notes = "full annulus: radial factor with beta=" + fmt(beta) + " is a cone with deficit angle " +
                   fmt(deficit) + ", so a global stress-free placement in the plane is obstructed";
  else
    report.notes = "angular sector: radial factor with beta=" + fmt(beta) +
                   " is globally fine here; the full annulus would be a cone with deficit angle " + fmt(deficit);
}

Mat inverse_flat_metric(const Chart& chart, const Point& p) {
  return spd_inverse(MetricField::euclidean(chart)(p), p);
}

}  // namespace

std::string_view to_string(FlatnessVerdict verdict) {
  switch (verdict) {
    case FlatnessVerdict::flat: return "flat";
    case FlatnessVerdict::not_flat: return "not_flat";
    case FlatnessVerdict::flat_local_only: return "flat_local_only";
  }
  return "not_flat";
}

FlatnessReport check_stress_free_2d(const ScalarField& omega, std::optional<double> tolerance) {
  const Chart& chart = omega.chart();
  if (chart.dim() != 2) throw Error(ErrorKind::DimensionMismatch, "2D flatness check needs a 2D chart");
  FlatnessReport report;
  report.tolerance = flatness_tolerance(chart, tolerance);
  const ScalarField lap(chart, [omega](const Point& p) { return omega.laplacian(p); });
  report.residual_norms["laplacian"] = scaled_sup(lap, chart.band());
  if (report.residual_norms["laplacian"] >= report.tolerance) {
    report.verdict = FlatnessVerdict::not_flat;
    return report;
  }
  report.verdict = FlatnessVerdict::flat;
  classify_annulus(omega, report);
  return report;
}

Chart radial_family_chart(const RadialFamily& family, int n, double theta_extent) {
  if (!(family.R0 > 0.0) || !(family.R1 > family.R0))
    throw Error(ErrorKind::InvalidArgument, "radial family needs 0 < R0 < R1");
  return Chart(2, CoordinateKind::polar, {{family.R0, family.R1}, {0.0, theta_extent}}, {n, n});
}

ScalarField radial_family_omega(const RadialFamily& family, const Chart& chart) {
  const double gamma = family.gamma_value();
  if (!(gamma > 0.0)) throw Error(ErrorKind::InvalidArgument, "radial family needs gamma > 0");
  const double b = family.beta, shift = 0.5 * std::log(gamma);
  return radial_field(
      chart, [b, shift](double R) { return b * std::log(R) + shift; }, [b](double R) { return b / R; },
      [b](double R) { return -b / (R * R); });
}

ScalarField radial_family_to_temperature(const RadialFamily& family, double alpha0, double T0, const Chart& chart) {
  if (!(alpha0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "alpha0 must be positive");
  return radial_family_omega(family, chart).scaled(1.0 / alpha0) + ScalarField::constant(chart, T0);
}

ConeDescriptor cone_from_beta(double beta) {
  if (beta == -1.0) throw Error(ErrorKind::DegenerateCone, "beta = -1 collapses the cone");
  ConeDescriptor d;
  d.c = 1.0 / (beta + 1.0);
  d.deficit_angle = 2.0 * std::numbers::pi * (1.0 - 1.0 / std::abs(d.c));
  d.embeddable_in_R3 = beta > -2.0 && beta < 0.0;
  return d;
}

InverseAlpha inverse_alpha_radial(std::function<double(double)> T, std::function<double(double)> dT, double beta,
                                  double R0, double R1, int samples) {
  if (!(R0 > 0.0) || !(R1 > R0)) throw Error(ErrorKind::InvalidArgument, "inverse alpha needs 0 < R0 < R1");
  if (samples < 4) throw Error(ErrorKind::InvalidArgument, "inverse alpha needs at least 4 samples");
  std::vector<double> Ts(samples), alphas(samples);
  double sign = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double R = R0 + (R1 - R0) * i / (samples - 1);
    const double d = dT(R);
    if (d == 0.0 || !std::isfinite(d) || (sign != 0.0 && d * sign < 0.0))
      throw Error(ErrorKind::NonMonotoneTemperature, "T'(R) vanishes or changes sign near R=" + fmt(R));
    sign = d > 0.0 ? 1.0 : -1.0;
    Ts[i] = T(R);
    alphas[i] = beta / (R * d);
    if (i > 0 && !((Ts[i] - Ts[i - 1]) * sign > 0.0))
      throw Error(ErrorKind::NonMonotoneTemperature, "T(R) is not strictly monotone near R=" + fmt(R));
  }
  if (sign < 0.0) {
    std::reverse(Ts.begin(), Ts.end());
    std::reverse(alphas.begin(), alphas.end());
  }
  InverseAlpha out;
  out.T_min = Ts.front();
  out.T_max = Ts.back();
  using Spline = boost::math::interpolators::pchip<std::vector<double>>;
  auto spline = std::make_shared<Spline>(std::move(Ts), std::move(alphas));
  out.alpha_of_R = [dT, beta](double R) { return beta / (R * dT(R)); };
  out.alpha_of_T = [spline, lo = out.T_min, hi = out.T_max](double t) {
    if (t < lo || t > hi)
      throw Error(ErrorKind::InvalidArgument, "temperature " + fmt(t) + " outside the sampled profile");
    return (*spline)(t);
  };
  return out;
}

ScalarField zero_stress_residual(const ScalarField& temperature, const ExpansionLaw& law) {
  const Chart chart = temperature.chart();
  return ScalarField(chart, [temperature, law, chart](const Point& p) {
    const double T = temperature(p);
    const Vec g = temperature.gradient(p);
    const double grad2 = g.dot(inverse_flat_metric(chart, p) * g);
    return law.alpha_prime(T) * grad2 + law.alpha(T) * temperature.laplacian(p);
  });
}

std::array<ScalarField, 6> flatness_system_residuals_3d(const ScalarField& omega) {
  const Chart& chart = omega.chart();
  if (chart.dim() != 3) throw Error(ErrorKind::DimensionMismatch, "flatness system needs a 3D chart");
  if (chart.kind() != CoordinateKind::cartesian)
    throw Error(ErrorKind::InvalidArgument, "flatness system is written in Cartesian coordinates");
  // Ordering: (1,2), (1,3), (2,3) products, then the three diagonal equations.
  static constexpr std::array<std::array<int, 2>, 6> slots{{{0, 1}, {0, 2}, {1, 2}, {0, 0}, {1, 1}, {2, 2}}};
  std::array<ScalarField, 6> out{ScalarField::constant(chart, 0.0), ScalarField::constant(chart, 0.0),
                                 ScalarField::constant(chart, 0.0), ScalarField::constant(chart, 0.0),
                                 ScalarField::constant(chart, 0.0), ScalarField::constant(chart, 0.0)};
  for (std::size_t k = 0; k < slots.size(); ++k) {
    const int i = slots[k][0], j = slots[k][1];
    out[k] = ScalarField(chart, [omega, i, j](const Point& p) {
      const Vec g = omega.gradient(p);
      const Mat h = omega.hessian(p);
      if (i != j) return h(i, j) - g[i] * g[j];
      return h(i, i) + h.trace() + g.squaredNorm() - g[i] * g[i];
    });
  }
  return out;
}

FlatnessReport check_stress_free_3d(const ScalarField& omega, std::optional<double> tolerance) {
  const Chart& chart = omega.chart();
  if (chart.dim() != 3) throw Error(ErrorKind::DimensionMismatch, "3D flatness check needs a 3D chart");
  FlatnessReport report;
  report.tolerance = flatness_tolerance(chart, tolerance);
  const MetricField G = MetricField::conformal(omega, MetricField::euclidean(chart));
  report.residual_norms["ricci"] = scaled_ricci_residual(curvature(levi_civita(G), G));
  if (chart.kind() == CoordinateKind::cartesian) {
    const auto system = flatness_system_residuals_3d(omega);
    double worst = 0.0;
    for (std::size_t k = 0; k < system.size(); ++k) {
      const double r = scaled_sup(system[k], chart.band());
      report.residual_norms["equation_" + std::to_string(k + 1)] = r;
      worst = std::max(worst, r);
    }
    report.residual_norms["system"] = worst;
    double lin = 0.0;
    for (const Point& p : chart.interior_samples(chart.band())) lin = std::max(lin, max_abs(omega.hessian(p)));
    report.residual_norms["linearized"] = lin * std::pow(chart.diameter(), 2);
    report.notes = "linearized residual drops the quadratic terms in the gradient";
  }
  report.verdict = report.residual_norms["ricci"] < report.tolerance ? FlatnessVerdict::flat : FlatnessVerdict::not_flat;
  return report;
}

ScalarField closed_form_3d(double c0, const Point& center, const Chart& chart) {
  if (!(c0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "c0 must be positive");
  if (chart.dim() != 3) throw Error(ErrorKind::DimensionMismatch, "closed-form solution lives in 3D");
  if (chart.kind() == CoordinateKind::spherical) {
    // Spherical shell centred on the singular point.
    if (center.norm() != 0.0) throw Error(ErrorKind::InvalidArgument, "spherical shells must be centred at b");
    if (!(chart.bounds(0).lo > 0.0)) throw Error(ErrorKind::OriginInDomain, "shell reaches r = 0");
    return radial_field(
        chart, [c0](double r) { return -std::log(c0 * r * r); }, [](double r) { return -2.0 / r; },
        [](double r) { return 2.0 / (r * r); });
  }
  if (chart.kind() != CoordinateKind::cartesian)
    throw Error(ErrorKind::InvalidArgument, "closed-form solution needs a Cartesian or spherical chart");
  if (chart.contains(center))
    throw Error(ErrorKind::OriginInDomain, "center (" + fmt(center[0]) + ", " + fmt(center[1]) + ", " +
                                               fmt(center[2]) + ") lies in the chart");
  auto value = [c0, center](const Point& p) { return -std::log(c0 * (p - center).squaredNorm()); };
  auto grad = [center](const Point& p) {
    const Point d = p - center;
    return Vec(-2.0 * d / d.squaredNorm());
  };
  auto hess = [center](const Point& p) {
    const Point d = p - center;
    const double r2 = d.squaredNorm();
    return Mat(-2.0 / r2 * Eigen::Matrix3d::Identity() + 4.0 / (r2 * r2) * d * d.transpose());
  };
  return ScalarField(chart, value, grad, hess);
}

ScalarField closed_form_3d_temperature(double c0, const Point& center, double alpha0, double T0, const Chart& chart) {
  if (!(alpha0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "alpha0 must be positive");
  return closed_form_3d(c0, center, chart).scaled(1.0 / alpha0) + ScalarField::constant(chart, T0);
}

Point inversion_map(const Point& X, double c0, const Point& center) {
  const Point d = X - center;
  return d / (c0 * d.squaredNorm());
}

Mat inversion_gradient(const Point& X, double c0, const Point& center) {
  const Point d = X - center;
  const double r2 = d.squaredNorm();
  return Mat((Eigen::Matrix3d::Identity() / r2 - 2.0 / (r2 * r2) * d * d.transpose()) / c0);
}

}  // namespace thermogeo
