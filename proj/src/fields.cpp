#include "thermogeo/fields.hpp"

#include "thermogeo/error.hpp"
#include "thermogeo/finite_difference.hpp"

#include <sstream>

namespace thermogeo {

namespace {

std::string describe(const Point& p, int dim) {
  std::ostringstream os;
  os << "X=(";
  for (int a = 0; a < dim; ++a) os << (a ? ", " : "") << p[a];
  os << ")";
  return os.str();
}

Mat zero_mat(int d) { return Mat::Zero(d, d); }

}  // namespace

// ---------------------------------------------------------------- ScalarField

ScalarField::ScalarField(Chart chart, Evaluator value, Gradient gradient, Hessian hessian)
    : chart_(std::move(chart)), value_(std::move(value)), gradient_(std::move(gradient)), hessian_(std::move(hessian)) {
  if (!value_) throw Error(ErrorKind::InvalidArgument, "scalar field needs an evaluator");
}

ScalarField ScalarField::constant(const Chart& chart, double value) {
  const int d = chart.dim();
  return ScalarField(
      chart, [value](const Point&) { return value; }, [d](const Point&) { return Vec(Vec::Zero(d)); },
      [d](const Point&) { return zero_mat(d); });
}

ScalarField ScalarField::from_samples(const Chart& chart, std::vector<double> values) {
  if (values.size() != chart.sample_count())
    throw Error(ErrorKind::DimensionMismatch, "sample count does not match the chart grid");
  auto data = std::make_shared<const std::vector<double>>(std::move(values));
  Chart c = chart;
  auto eval = [c, data](const Point& p) {
    const int d = c.dim();
    std::array<int, 3> base{0, 0, 0};
    std::array<double, 3> frac{0.0, 0.0, 0.0};
    std::array<int, 3> shape{1, 1, 1};
    for (int a = 0; a < d; ++a) {
      shape[a] = c.grid_shape(a);
      const double t = (p[a] - c.bounds(a).lo) / c.spacing(a);
      const double r = std::round(t);
      if (std::abs(t - r) < 1e-9) {
        base[a] = std::clamp(static_cast<int>(r), 0, shape[a] - 1);
        frac[a] = 0.0;
      } else {
        base[a] = std::clamp(static_cast<int>(std::floor(t)), 0, shape[a] - 2);
        frac[a] = std::clamp(t - base[a], 0.0, 1.0);
      }
    }
    double out = 0.0;
    for (int corner = 0; corner < (1 << d); ++corner) {
      double w = 1.0;
      std::array<int, 3> idx = base;
      for (int a = 0; a < d; ++a) {
        const int bit = (corner >> a) & 1;
        if (bit && frac[a] == 0.0) {
          w = 0.0;
          break;
        }
        idx[a] += bit;
        w *= bit ? frac[a] : 1.0 - frac[a];
      }
      if (w == 0.0) continue;
      const std::size_t flat =
          (static_cast<std::size_t>(idx[0]) * shape[1] + static_cast<std::size_t>(idx[1])) * shape[2] + idx[2];
      out += w * (*data)[flat];
    }
    return out;
  };
  return ScalarField(chart, eval);
}

bool ScalarField::use_analytic() const { return chart_.mode() == DerivativeMode::analytic; }

Vec ScalarField::gradient(const Point& p) const {
  if (use_analytic() && gradient_) return gradient_(p);
  const auto g = fd::gradient(value_, p, chart_);
  Vec out(chart_.dim());
  for (int a = 0; a < chart_.dim(); ++a) out[a] = g[a];
  return out;
}

Mat ScalarField::hessian(const Point& p) const {
  const int d = chart_.dim();
  if (use_analytic() && hessian_) return hessian_(p);
  Mat out(d, d);
  if (use_analytic() && gradient_) {
    const auto g = fd::gradient(gradient_, p, chart_);
    for (int a = 0; a < d; ++a) out.col(a) = g[a];
    return 0.5 * (out + out.transpose());
  }
  const auto h = fd::hessian(value_, p, chart_);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) out(a, b) = h[a][b];
  return out;
}

double ScalarField::laplacian(const Point& p) const {
  const Vec g = gradient(p);
  const Mat h = hessian(p);
  switch (chart_.kind()) {
    case CoordinateKind::cartesian: return h.trace();
    case CoordinateKind::polar: return h(0, 0) + g[0] / p[0] + h(1, 1) / (p[0] * p[0]);
    case CoordinateKind::cylindrical: return h(0, 0) + g[0] / p[0] + h(1, 1) / (p[0] * p[0]) + h(2, 2);
    case CoordinateKind::spherical: {
      const double r = p[0], s = std::sin(p[1]), c = std::cos(p[1]);
      return h(0, 0) + 2.0 * g[0] / r + (h(1, 1) + c / s * g[1]) / (r * r) + h(2, 2) / (r * r * s * s);
    }
  }
  return h.trace();
}

ScalarField ScalarField::on_chart(const Chart& chart) const {
  require_same_region(chart_, chart, "scalar field and target chart");
  return ScalarField(chart, value_, gradient_, hessian_);
}

ScalarField ScalarField::without_partials() const { return ScalarField(chart_, value_); }

ScalarField ScalarField::operator+(const ScalarField& o) const {
  require_same_region(chart_, o.chart_, "summands");
  auto fa = value_, fb = o.value_;
  Gradient g;
  Hessian h;
  if (gradient_ && o.gradient_) {
    auto ga = gradient_, gb = o.gradient_;
    g = [ga, gb](const Point& p) { return Vec(ga(p) + gb(p)); };
  }
  if (hessian_ && o.hessian_) {
    auto ha = hessian_, hb = o.hessian_;
    h = [ha, hb](const Point& p) { return Mat(ha(p) + hb(p)); };
  }
  return ScalarField(chart_, [fa, fb](const Point& p) { return fa(p) + fb(p); }, g, h);
}

ScalarField ScalarField::scaled(double s) const {
  auto f = value_;
  Gradient g;
  Hessian h;
  if (gradient_) {
    auto ga = gradient_;
    g = [ga, s](const Point& p) { return Vec(s * ga(p)); };
  }
  if (hessian_) {
    auto ha = hessian_;
    h = [ha, s](const Point& p) { return Mat(s * ha(p)); };
  }
  return ScalarField(chart_, [f, s](const Point& p) { return s * f(p); }, g, h);
}

ScalarField radial_field(const Chart& chart, std::function<double(double)> f, std::function<double(double)> df,
                         std::function<double(double)> d2f, const Point& center) {
  const int d = chart.dim();
  if (chart.kind() != CoordinateKind::cartesian) {
    auto value = [f](const Point& p) { return f(p[0]); };
    auto grad = [df, d](const Point& p) {
      Vec g = Vec::Zero(d);
      g[0] = df(p[0]);
      return g;
    };
    auto hess = [d2f, d](const Point& p) {
      Mat h = zero_mat(d);
      h(0, 0) = d2f(p[0]);
      return h;
    };
    return ScalarField(chart, value, grad, hess);
  }
  auto radius = [center, d](const Point& p) { return (p - center).head(d).norm(); };
  auto value = [f, radius](const Point& p) { return f(radius(p)); };
  auto grad = [df, center, d, radius](const Point& p) {
    const double r = radius(p);
    if (r == 0.0) throw Error(ErrorKind::OriginInDomain, "radial field differentiated at its center");
    return Vec(df(r) / r * (p - center).head(d));
  };
  auto hess = [df, d2f, center, d, radius](const Point& p) {
    const double r = radius(p);
    if (r == 0.0) throw Error(ErrorKind::OriginInDomain, "radial field differentiated at its center");
    const Vec n = (p - center).head(d) / r;
    const Mat nn = n * n.transpose();
    return Mat(d2f(r) * nn + df(r) / r * (Mat::Identity(d, d) - nn));
  };
  return ScalarField(chart, value, grad, hess);
}

// ---------------------------------------------------------------- VectorField

VectorField::VectorField(Chart chart, Evaluator value, Jacobian jacobian, SecondPartials second)
    : chart_(std::move(chart)), value_(std::move(value)), jacobian_(std::move(jacobian)), second_(std::move(second)) {}

bool VectorField::use_analytic() const { return chart_.mode() == DerivativeMode::analytic; }

Mat VectorField::jacobian(const Point& p) const {
  if (use_analytic() && jacobian_) return jacobian_(p);
  const int d = chart_.dim();
  const auto g = fd::gradient(value_, p, chart_);
  Mat out(d, d);
  for (int j = 0; j < d; ++j) out.col(j) = g[j];
  return out;
}

std::array<Mat, 3> VectorField::second_partials(const Point& p) const {
  if (use_analytic() && second_) return second_(p);
  const int d = chart_.dim();
  std::array<Mat, 3> out;
  for (int i = 0; i < d; ++i) out[i] = zero_mat(d);
  if (use_analytic() && jacobian_) {
    const auto g = fd::gradient(jacobian_, p, chart_);  // g[k](i, j) = d_k d_j U^i
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) out[i](j, k) = 0.5 * (g[k](i, j) + g[j](i, k));
    return out;
  }
  const auto h = fd::hessian(value_, p, chart_);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) out[i](j, k) = h[j][k][i];
  return out;
}

// ---------------------------------------------------------------- MetricField

MetricField::MetricField(Chart chart, Evaluator value, Partials partials, SecondPartials second)
    : chart_(std::move(chart)), value_(std::move(value)), partials_(std::move(partials)), second_(std::move(second)) {
  if (!value_) throw Error(ErrorKind::InvalidArgument, "metric field needs an evaluator");
}

bool MetricField::use_analytic() const { return chart_.mode() == DerivativeMode::analytic; }

MetricField MetricField::constant(const Chart& chart, const Mat& g) {
  const int d = chart.dim();
  if (g.rows() != d || g.cols() != d) throw Error(ErrorKind::DimensionMismatch, "metric size differs from chart");
  auto partials = [d](const Point&) {
    std::array<Mat, 3> out;
    for (int c = 0; c < d; ++c) out[c] = zero_mat(d);
    return out;
  };
  auto second = [d](const Point&) {
    std::array<std::array<Mat, 3>, 3> out;
    for (int c = 0; c < d; ++c)
      for (int e = 0; e < d; ++e) out[c][e] = zero_mat(d);
    return out;
  };
  return MetricField(chart, [g](const Point&) { return g; }, partials, second);
}

MetricField MetricField::euclidean(const Chart& chart) {
  const int d = chart.dim();
  switch (chart.kind()) {
    case CoordinateKind::cartesian: return constant(chart, Mat::Identity(d, d));
    case CoordinateKind::polar:
    case CoordinateKind::cylindrical: {
      auto value = [d](const Point& p) {
        Mat g = Mat::Identity(d, d);
        g(1, 1) = p[0] * p[0];
        return g;
      };
      auto partials = [d](const Point& p) {
        std::array<Mat, 3> out;
        for (int c = 0; c < d; ++c) out[c] = zero_mat(d);
        out[0](1, 1) = 2.0 * p[0];
        return out;
      };
      auto second = [d](const Point&) {
        std::array<std::array<Mat, 3>, 3> out;
        for (int c = 0; c < d; ++c)
          for (int e = 0; e < d; ++e) out[c][e] = zero_mat(d);
        out[0][0](1, 1) = 2.0;
        return out;
      };
      return MetricField(chart, value, partials, second);
    }
    case CoordinateKind::spherical: {
      auto value = [](const Point& p) {
        Mat g = Mat::Identity(3, 3);
        const double s = std::sin(p[1]);
        g(1, 1) = p[0] * p[0];
        g(2, 2) = p[0] * p[0] * s * s;
        return g;
      };
      auto partials = [](const Point& p) {
        std::array<Mat, 3> out;
        for (auto& m : out) m = zero_mat(3);
        const double r = p[0], s = std::sin(p[1]);
        out[0](1, 1) = 2.0 * r;
        out[0](2, 2) = 2.0 * r * s * s;
        out[1](2, 2) = r * r * std::sin(2.0 * p[1]);
        return out;
      };
      auto second = [](const Point& p) {
        std::array<std::array<Mat, 3>, 3> out;
        for (auto& row : out)
          for (auto& m : row) m = zero_mat(3);
        const double r = p[0], s = std::sin(p[1]);
        out[0][0](1, 1) = 2.0;
        out[0][0](2, 2) = 2.0 * s * s;
        out[0][1](2, 2) = out[1][0](2, 2) = 2.0 * r * std::sin(2.0 * p[1]);
        out[1][1](2, 2) = 2.0 * r * r * std::cos(2.0 * p[1]);
        return out;
      };
      return MetricField(chart, value, partials, second);
    }
  }
  return constant(chart, Mat::Identity(d, d));
}

MetricField MetricField::conformal(const ScalarField& omega, const MetricField& base) {
  require_same_region(omega.chart(), base.chart(), "conformal factor and base metric");
  const int d = base.chart().dim();
  auto bv = base.value_;
  auto value = [omega, bv](const Point& p) { return Mat(std::exp(2.0 * omega(p)) * bv(p)); };
  Partials partials;
  SecondPartials second;
  if (omega.has_analytic_gradient() && base.has_analytic_partials()) {
    auto bp = base.partials_;
    partials = [omega, bv, bp, d](const Point& p) {
      const double e = std::exp(2.0 * omega(p));
      const Vec w = omega.gradient(p);
      const Mat b = bv(p);
      const auto db = bp(p);
      std::array<Mat, 3> out;
      for (int c = 0; c < d; ++c) out[c] = e * (2.0 * w[c] * b + db[c]);
      return out;
    };
    if (omega.has_analytic_hessian() && base.has_analytic_second_partials()) {
      auto bs = base.second_;
      second = [omega, bv, bp, bs, d](const Point& p) {
        const double e = std::exp(2.0 * omega(p));
        const Vec w = omega.gradient(p);
        const Mat h = omega.hessian(p);
        const Mat b = bv(p);
        const auto db = bp(p);
        const auto ddb = bs(p);
        std::array<std::array<Mat, 3>, 3> out;
        for (int c = 0; c < d; ++c)
          for (int f = 0; f < d; ++f)
            out[c][f] = e * ((4.0 * w[c] * w[f] + 2.0 * h(c, f)) * b + 2.0 * w[c] * db[f] + 2.0 * w[f] * db[c] +
                             ddb[c][f]);
        return out;
      };
    }
  }
  return MetricField(base.chart(), value, partials, second);
}

std::array<Mat, 3> MetricField::partials(const Point& p) const {
  if (use_analytic() && partials_) return partials_(p);
  return fd::gradient(value_, p, chart_);
}

MetricJet MetricField::jet(const Point& p) const {
  MetricJet j;
  j.g = value_(p);
  j.dg = partials(p);
  const int d = chart_.dim();
  if (use_analytic() && second_) {
    j.ddg = second_(p);
  } else if (use_analytic() && partials_) {
    std::array<std::array<Mat, 3>, 3> g;  // g[c][e] = d_e d_c G
    for (int c = 0; c < d; ++c) g[c] = fd::gradient([&](const Point& q) { return partials_(q)[c]; }, p, chart_);
    for (int c = 0; c < d; ++c)
      for (int e = 0; e < d; ++e) j.ddg[c][e] = 0.5 * (g[c][e] + g[e][c]);
  } else {
    j.ddg = fd::hessian(value_, p, chart_);
  }
  return j;
}

MetricField MetricField::on_chart(const Chart& chart) const {
  require_same_region(chart_, chart, "metric and target chart");
  return MetricField(chart, value_, partials_, second_);
}

void MetricField::validate() const {
  for (const Point& p : chart_.samples()) spd_inverse(value_(p), p);
}

Mat spd_inverse(const Mat& g, const Point& where) {
  const int d = static_cast<int>(g.rows());
  const double scale = g.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || !g.allFinite())
    throw Error(ErrorKind::SingularMetric, "degenerate metric at " + describe(where, d));
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw Error(ErrorKind::SingularMetric, "asymmetric metric at " + describe(where, d));
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::SingularMetric, "metric not positive definite at " + describe(where, d));
  const Mat L = llt.matrixL();
  if (L.diagonal().minCoeff() <= 1e-12 * std::sqrt(scale))
    throw Error(ErrorKind::SingularMetric, "metric nearly singular at " + describe(where, d));
  return llt.solve(Mat::Identity(d, d));
}

// ---------------------------------------------------------------- ConnectionField

ConnectionField::ConnectionField(Chart chart, Coefficients coefficients, JetEvaluator jet)
    : chart_(std::move(chart)), coefficients_(std::move(coefficients)), jet_(std::move(jet)) {}

ConnectionField ConnectionField::zero(const Chart& chart) {
  const int d = chart.dim();
  return ConnectionField(
      chart, [d](const Point&) { return Tensor3(d); },
      [d](const Point&) { return ConnectionJet{Tensor3(d), Tensor4(d)}; });
}

ConnectionJet ConnectionField::jet(const Point& p) const {
  if (jet_) return jet_(p);
  ConnectionJet j{coefficients_(p), Tensor4(chart_.dim())};
  const int d = chart_.dim();
  const auto g = fd::gradient(coefficients_, p, chart_);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) j.dgamma(a, b, c, e) = g[e](a, b, c);
  return j;
}

}  // namespace thermogeo
