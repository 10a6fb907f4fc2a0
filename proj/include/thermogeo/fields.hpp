#pragma once

#include "thermogeo/chart.hpp"
#include "thermogeo/tensor.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace thermogeo {

// A field is a total map from chart coordinates to values.
template <class V>
struct Field {
  Chart chart;
  std::function<V(const Point&)> eval;

  V operator()(const Point& p) const { return eval(p); }
};

using MatrixField = Field<Mat>;
using Tensor3Field = Field<Tensor3>;

template <class V>
double sup_norm(const Field<V>& f, int band) {
  double m = 0.0;
  for (const Point& p : f.chart.interior_samples(band)) m = std::max(m, max_abs(f(p)));
  return m;
}

class ScalarField {
 public:
  using Evaluator = std::function<double(const Point&)>;
  using Gradient = std::function<Vec(const Point&)>;
  using Hessian = std::function<Mat(const Point&)>;

  ScalarField(Chart chart, Evaluator value, Gradient gradient = {}, Hessian hessian = {});

  static ScalarField constant(const Chart& chart, double value);
  // Grid-sampled values (row-major over axes), multilinearly interpolated between nodes.
  static ScalarField from_samples(const Chart& chart, std::vector<double> values);

  const Chart& chart() const { return chart_; }
  double operator()(const Point& p) const { return value_(p); }
  Vec gradient(const Point& p) const;
  Mat hessian(const Point& p) const;
  double laplacian(const Point& p) const;  // flat Laplacian in the chart's coordinates

  bool has_analytic_gradient() const { return static_cast<bool>(gradient_); }
  bool has_analytic_hessian() const { return static_cast<bool>(hessian_); }

  ScalarField on_chart(const Chart& chart) const;
  ScalarField without_partials() const;

  ScalarField operator+(const ScalarField& o) const;
  ScalarField scaled(double s) const;

 private:
  bool use_analytic() const;

  Chart chart_;
  Evaluator value_;
  Gradient gradient_;
  Hessian hessian_;
};

// Radially symmetric field built from f(R) and its first two derivatives. On Cartesian charts
// R = |X - center|, on polar/cylindrical/spherical charts R is the first coordinate.
ScalarField radial_field(const Chart& chart, std::function<double(double)> f, std::function<double(double)> df,
                         std::function<double(double)> d2f, const Point& center = Point::Zero());

class VectorField {
 public:
  using Evaluator = std::function<Vec(const Point&)>;
  using Jacobian = std::function<Mat(const Point&)>;  // (i, j) = d_j U^i
  using SecondPartials = std::function<std::array<Mat, 3>(const Point&)>;  // [i](j, k) = d_j d_k U^i

  VectorField(Chart chart, Evaluator value, Jacobian jacobian = {}, SecondPartials second = {});

  const Chart& chart() const { return chart_; }
  Vec operator()(const Point& p) const { return value_(p); }
  Mat jacobian(const Point& p) const;
  std::array<Mat, 3> second_partials(const Point& p) const;

 private:
  bool use_analytic() const;

  Chart chart_;
  Evaluator value_;
  Jacobian jacobian_;
  SecondPartials second_;
};

struct MetricJet {
  Mat g;
  std::array<Mat, 3> dg;                 // dg[c] = d_c G
  std::array<std::array<Mat, 3>, 3> ddg;  // ddg[c][d] = d_c d_d G
};

class MetricField {
 public:
  using Evaluator = std::function<Mat(const Point&)>;
  using Partials = std::function<std::array<Mat, 3>(const Point&)>;
  using SecondPartials = std::function<std::array<std::array<Mat, 3>, 3>(const Point&)>;

  MetricField(Chart chart, Evaluator value, Partials partials = {}, SecondPartials second = {});

  static MetricField constant(const Chart& chart, const Mat& g);
  // Flat metric of the chart's coordinate kind.
  static MetricField euclidean(const Chart& chart);
  // exp(2 omega) * base, with exact partials when both ingredients carry them.
  static MetricField conformal(const ScalarField& omega, const MetricField& base);

  const Chart& chart() const { return chart_; }
  Mat operator()(const Point& p) const { return value_(p); }
  std::array<Mat, 3> partials(const Point& p) const;
  MetricJet jet(const Point& p) const;
  bool has_analytic_partials() const { return static_cast<bool>(partials_); }
  bool has_analytic_second_partials() const { return static_cast<bool>(second_); }

  MetricField on_chart(const Chart& chart) const;

  // Throws SingularMetric at the first sample where G is not symmetric positive definite.
  void validate() const;

 private:
  bool use_analytic() const;

  Chart chart_;
  Evaluator value_;
  Partials partials_;
  SecondPartials second_;
};

// Inverse of a symmetric positive-definite matrix; throws SingularMetric otherwise.
Mat spd_inverse(const Mat& g, const Point& where);

struct ConnectionJet {
  Tensor3 gamma;   // gamma(a, b, c) = Gamma^a_{bc}, b is the differentiation slot
  Tensor4 dgamma;  // dgamma(a, b, c, e) = d_e Gamma^a_{bc}
};

class ConnectionField {
 public:
  using Coefficients = std::function<Tensor3(const Point&)>;
  using JetEvaluator = std::function<ConnectionJet(const Point&)>;

  ConnectionField(Chart chart, Coefficients coefficients, JetEvaluator jet = {});

  static ConnectionField zero(const Chart& chart);

  const Chart& chart() const { return chart_; }
  Tensor3 operator()(const Point& p) const { return coefficients_(p); }
  ConnectionJet jet(const Point& p) const;

 private:
  Chart chart_;
  Coefficients coefficients_;
  JetEvaluator jet_;
};

}  // namespace thermogeo
