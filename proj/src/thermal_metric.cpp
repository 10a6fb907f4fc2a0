#include "thermogeo/thermal_metric.hpp"

#include "thermogeo/error.hpp"
#include "thermogeo/finite_difference.hpp"
#include "thermogeo/quadrature.hpp"

#include <algorithm>
#include <memory>

namespace thermogeo {

namespace {

double step_for(double T) { return 1e-3 * std::max(1.0, std::abs(T)); }

}  // namespace

ExpansionLaw::ExpansionLaw(Function omega, Function alpha, Function alpha_prime, double T0, bool omega_is_integral)
    : omega_(std::move(omega)),
      alpha_(std::move(alpha)),
      alpha_prime_(std::move(alpha_prime)),
      T0_(T0),
      omega_is_integral_(omega_is_integral) {}

ExpansionLaw ExpansionLaw::from_omega(Function omega, double T0, Function alpha, Function alpha_prime) {
  if (!omega) throw Error(ErrorKind::InvalidArgument, "expansion law needs omega");
  const double offset = omega(T0);
  Function w = [omega, offset](double T) { return omega(T) - offset; };
  if (!alpha) alpha = [w](double T) { return fd::derivative(w, T, step_for(T)); };
  if (!alpha_prime) alpha_prime = [alpha](double T) { return fd::derivative(alpha, T, step_for(T)); };
  return ExpansionLaw(w, alpha, alpha_prime, T0, false);
}

ExpansionLaw ExpansionLaw::from_alpha(Function alpha, double T0, Function alpha_prime) {
  if (!alpha) throw Error(ErrorKind::InvalidArgument, "expansion law needs alpha");
  Function w = [alpha, T0](double T) { return adaptive_simpson(alpha, T0, T); };
  if (!alpha_prime) alpha_prime = [alpha](double T) { return fd::derivative(alpha, T, step_for(T)); };
  return ExpansionLaw(w, alpha, alpha_prime, T0, true);
}

ExpansionLaw ExpansionLaw::constant_alpha(double alpha0, double T0) {
  return ExpansionLaw([alpha0, T0](double T) { return alpha0 * (T - T0); }, [alpha0](double) { return alpha0; },
                      [](double) { return 0.0; }, T0, false);
}

ExpansionLaw ExpansionLaw::piecewise_linear_alpha(std::vector<std::pair<double, double>> nodes, double T0) {
  if (nodes.size() < 2) throw Error(ErrorKind::InvalidArgument, "piecewise-linear alpha needs two nodes");
  std::sort(nodes.begin(), nodes.end());
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (!(nodes[i].first > nodes[i - 1].first))
      throw Error(ErrorKind::InvalidArgument, "piecewise-linear alpha nodes must have distinct temperatures");
  struct Table {
    std::vector<std::pair<double, double>> nodes;
    std::vector<double> antiderivative;  // at nodes, relative to the first node
  };
  auto t = std::make_shared<Table>();
  t->nodes = nodes;
  t->antiderivative.assign(nodes.size(), 0.0);
  for (std::size_t i = 1; i < nodes.size(); ++i)
    t->antiderivative[i] = t->antiderivative[i - 1] +
                           0.5 * (nodes[i].second + nodes[i - 1].second) * (nodes[i].first - nodes[i - 1].first);

  auto segment = [t](double T) {
    const auto& n = t->nodes;
    const auto it = std::upper_bound(n.begin(), n.end(), T, [](double v, const auto& node) { return v < node.first; });
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(it - n.begin(), 1, static_cast<std::ptrdiff_t>(n.size()) - 1)) - 1;
  };
  auto alpha = [t, segment](double T) {
    const auto& n = t->nodes;
    if (T <= n.front().first) return n.front().second;
    if (T >= n.back().first) return n.back().second;
    const std::size_t i = segment(T);
    const double s = (T - n[i].first) / (n[i + 1].first - n[i].first);
    return (1.0 - s) * n[i].second + s * n[i + 1].second;
  };
  auto alpha_prime = [t, segment](double T) {
    const auto& n = t->nodes;
    if (T < n.front().first || T >= n.back().first) return 0.0;
    const std::size_t i = segment(T);
    return (n[i + 1].second - n[i].second) / (n[i + 1].first - n[i].first);
  };
  auto primitive = [t, alpha](double T) {
    const auto& n = t->nodes;
    if (T <= n.front().first) return n.front().second * (T - n.front().first);
    if (T >= n.back().first) return t->antiderivative.back() + n.back().second * (T - n.back().first);
    std::size_t i = 0;
    while (n[i + 1].first < T) ++i;
    return t->antiderivative[i] + 0.5 * (n[i].second + alpha(T)) * (T - n[i].first);
  };
  const double base = primitive(T0);
  return ExpansionLaw([primitive, base](double T) { return primitive(T) - base; }, alpha, alpha_prime, T0, false);
}

double ExpansionLaw::integrate_alpha(double T_from, double T_to) const {
  if (omega_is_integral_) return adaptive_simpson(alpha_, T_from, T_to);
  return omega_(T_to) - omega_(T_from);
}

ScalarField thermal_exponent(const ScalarField& temperature, const ExpansionLaw& law) {
  auto value = [temperature, law](const Point& p) { return law.omega(temperature(p)); };
  ScalarField::Gradient gradient;
  ScalarField::Hessian hessian;
  if (temperature.has_analytic_gradient()) {
    gradient = [temperature, law](const Point& p) { return Vec(law.alpha(temperature(p)) * temperature.gradient(p)); };
    if (temperature.has_analytic_hessian())
      hessian = [temperature, law](const Point& p) {
        const double T = temperature(p);
        const Vec g = temperature.gradient(p);
        return Mat(law.alpha_prime(T) * g * g.transpose() + law.alpha(T) * temperature.hessian(p));
      };
  }
  return ScalarField(temperature.chart(), value, gradient, hessian);
}

MetricField build_material_metric(const MetricField& H, const ScalarField& temperature, const ExpansionLaw& law) {
  require_same_region(H.chart(), temperature.chart(), "reference metric and temperature");
  return MetricField::conformal(thermal_exponent(temperature.on_chart(H.chart()), law), H);
}

MetricField build_anisotropic_metric(const AnisotropicExpansion& expansion, const ScalarField& temperature) {
  const Chart& chart = temperature.chart();
  const int d = chart.dim();
  if (static_cast<int>(expansion.laws.size()) != d)
    throw Error(ErrorKind::DimensionMismatch, "need one expansion law per frame direction");
  auto frame = expansion.covectors;
  auto check = [d](const Mat& a, const Point& p) {
    if (a.rows() != d || a.cols() != d) throw Error(ErrorKind::DimensionMismatch, "frame size differs from chart");
    double scale = 1.0;
    for (int i = 0; i < d; ++i) scale *= a.row(i).norm();
    if (!(scale > 0.0) || std::abs(a.determinant()) <= 1e-12 * scale)
      throw Error(ErrorKind::DegenerateFrame, "frame covectors are linearly dependent near X=(" +
                                                  std::to_string(p[0]) + ", " + std::to_string(p[1]) + ", " +
                                                  std::to_string(p[2]) + ")");
  };
  for (const Point& p : chart.samples()) check(frame(p), p);
  auto laws = expansion.laws;
  return MetricField(chart, [frame, laws, temperature, check, d](const Point& p) {
    const Mat a = frame(p);
    check(a, p);
    const double T = temperature(p);
    Mat g = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i) {
      const Vec e = a.row(i).transpose();
      g += std::exp(2.0 * laws[i].omega(T)) * e * e.transpose();
    }
    return g;
  });
}

ScalarField volume_form(const MetricField& G) {
  return ScalarField(G.chart(), [G](const Point& p) {
    const Mat g = G(p);
    spd_inverse(g, p);
    return std::sqrt(g.determinant());
  });
}

double density_at_temperature(const ExpansionLaw& law, double T_from, double T_to, int dimension) {
  return std::exp(-dimension * law.integrate_alpha(T_from, T_to));
}

ScalarField density_field(const ScalarField& rho0, const ExpansionLaw& law, const ScalarField& temperature) {
  require_same_region(rho0.chart(), temperature.chart(), "reference density and temperature");
  const int n = rho0.chart().dim();
  const double T0 = law.reference_temperature();
  return ScalarField(rho0.chart(), [rho0, law, temperature, n, T0](const Point& p) {
    return rho0(p) * density_at_temperature(law, T0, temperature(p), n);
  });
}

ScalarField jacobian(const MatrixField& F, const MetricField& G, const MatrixField& g_at_placement) {
  require_same_region(F.chart, G.chart(), "deformation gradient and material metric");
  require_same_region(g_at_placement.chart, G.chart(), "spatial metric and material metric");
  return ScalarField(G.chart(), [F, G, g_at_placement](const Point& p) {
    const Mat f = F(p);
    const Mat gm = G(p);
    const Mat gs = g_at_placement(p);
    if (f.rows() != gm.rows() || f.cols() != gm.cols() || gs.rows() != gm.rows())
      throw Error(ErrorKind::DimensionMismatch, "deformation gradient and metrics differ in size");
    spd_inverse(gm, p);
    spd_inverse(gs, p);
    return f.determinant() * std::sqrt(gs.determinant() / gm.determinant());
  });
}

}  // namespace thermogeo
