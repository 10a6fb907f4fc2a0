#include "thermogeo/curvature.hpp"

#include "thermogeo/error.hpp"
#include "thermogeo/finite_difference.hpp"

namespace thermogeo {

Tensor3 christoffel(const Mat& g, const std::array<Mat, 3>& dg, const Mat& ginv) {
  const int d = static_cast<int>(g.rows());
  Tensor3 gamma(d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = b; c < d; ++c) {
        double s = 0.0;
        for (int l = 0; l < d; ++l) s += ginv(a, l) * (dg[b](c, l) + dg[c](b, l) - dg[l](b, c));
        gamma(a, b, c) = gamma(a, c, b) = 0.5 * s;
      }
  return gamma;
}

ConnectionJet christoffel_jet(const MetricJet& jet, const Mat& ginv) {
  const int d = static_cast<int>(jet.g.rows());
  ConnectionJet out{christoffel(jet.g, jet.dg, ginv), Tensor4(d)};
  // First-kind symbols S_{l bc} and their derivatives.
  Tensor3 first(d);
  Tensor4 dfirst(d);
  for (int l = 0; l < d; ++l)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) {
        first(l, b, c) = 0.5 * (jet.dg[b](c, l) + jet.dg[c](b, l) - jet.dg[l](b, c));
        for (int e = 0; e < d; ++e)
          dfirst(l, b, c, e) = 0.5 * (jet.ddg[b][e](c, l) + jet.ddg[c][e](b, l) - jet.ddg[l][e](b, c));
      }
  for (int e = 0; e < d; ++e) {
    const Mat dginv = -ginv * jet.dg[e] * ginv;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c) {
          double s = 0.0;
          for (int l = 0; l < d; ++l) s += dginv(a, l) * first(l, b, c) + ginv(a, l) * dfirst(l, b, c, e);
          out.dgamma(a, b, c, e) = s;
        }
  }
  return out;
}

ConnectionField levi_civita(const MetricField& metric) {
  auto coefficients = [metric](const Point& p) {
    const Mat g = metric(p);
    return christoffel(g, metric.partials(p), spd_inverse(g, p));
  };
  auto jet = [metric](const Point& p) {
    const MetricJet j = metric.jet(p);
    return christoffel_jet(j, spd_inverse(j.g, p));
  };
  return ConnectionField(metric.chart(), coefficients, jet);
}

CurvatureSample curvature_at(const ConnectionJet& jet, const Mat& ginv) {
  const int d = static_cast<int>(ginv.rows());
  const Tensor3& G = jet.gamma;
  CurvatureSample s{Tensor4(d), Mat::Zero(d, d), 0.0, Tensor3(d)};
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) {
          double v = jet.dgamma(a, e, b, c) - jet.dgamma(a, c, b, e);
          for (int f = 0; f < d; ++f) v += G(a, c, f) * G(f, e, b) - G(a, e, f) * G(f, c, b);
          s.riemann(a, b, c, e) = v;
        }
  for (int b = 0; b < d; ++b)
    for (int e = 0; e < d; ++e) {
      double v = 0.0;
      for (int c = 0; c < d; ++c) v += s.riemann(c, b, c, e);
      s.ricci(b, e) = v;
    }
  s.scalar = (ginv.cwiseProduct(s.ricci)).sum();
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) s.torsion(a, b, c) = G(a, b, c) - G(a, c, b);
  return s;
}

namespace {

void check_pair(const ConnectionField& connection, const MetricField& metric) {
  require_same_region(connection.chart(), metric.chart(), "connection and metric");
}

}  // namespace

CurvatureBundle curvature(const ConnectionField& connection, const MetricField& metric) {
  check_pair(connection, metric);
  auto sample = [connection, metric](const Point& p) {
    return curvature_at(connection.jet(p), spd_inverse(metric(p), p));
  };
  CurvatureBundle b(metric.chart());
  b.riemann = [sample](const Point& p) { return sample(p).riemann; };
  b.ricci = [sample](const Point& p) { return sample(p).ricci; };
  b.scalar = [sample](const Point& p) { return sample(p).scalar; };
  b.torsion = [sample](const Point& p) { return sample(p).torsion; };
  double r = 0.0, ric = 0.0, sc = 0.0, t = 0.0;
  for (const Point& p : b.chart.interior_samples(b.chart.band(1))) {
    const CurvatureSample s = sample(p);
    r = std::max(r, s.riemann.max_abs());
    ric = std::max(ric, max_abs(s.ricci));
    sc = std::max(sc, std::abs(s.scalar));
    t = std::max(t, s.torsion.max_abs());
  }
  b.sup_norms = {{"riemann", r}, {"ricci", ric}, {"scalar", sc}, {"torsion", t}};
  return b;
}

ScalarField conformal_scalar_2d(const ScalarField& omega) {
  if (omega.chart().dim() != 2) throw Error(ErrorKind::DimensionMismatch, "conformal scalar curvature is 2D only");
  return ScalarField(omega.chart(),
                     [omega](const Point& p) { return -2.0 * std::exp(-2.0 * omega(p)) * omega.laplacian(p); });
}

CurvatureBundle conformal_ricci(const MetricField& base, const ScalarField& omega) {
  require_same_region(base.chart(), omega.chart(), "base metric and conformal factor");
  const int n = base.chart().dim();
  const ConnectionField base_connection = levi_civita(base);
  auto ricci = [base, omega, base_connection, n](const Point& p) {
    const Mat b = base(p);
    const Mat binv = spd_inverse(b, p);
    const ConnectionJet jet = base_connection.jet(p);
    const Mat r0 = curvature_at(jet, binv).ricci;
    const Vec w = omega.gradient(p);
    Mat hess = omega.hessian(p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) hess(i, j) -= jet.gamma(k, i, j) * w[k];
    const double lap = binv.cwiseProduct(hess).sum();
    const double grad2 = w.dot(binv * w);
    return Mat(r0 - (n - 2) * (hess - w * w.transpose()) - (lap + (n - 2) * grad2) * b);
  };
  CurvatureBundle out(base.chart());
  out.ricci = ricci;
  out.scalar = [base, omega, ricci](const Point& p) {
    return std::exp(-2.0 * omega(p)) * spd_inverse(base(p), p).cwiseProduct(ricci(p)).sum();
  };
  double ric = 0.0, sc = 0.0;
  for (const Point& p : out.chart.interior_samples(out.chart.band(1))) {
    ric = std::max(ric, max_abs(out.ricci(p)));
    sc = std::max(sc, std::abs(out.scalar(p)));
  }
  out.sup_norms = {{"ricci", ric}, {"scalar", sc}};
  return out;
}

CurvatureBundle weyl_schouten(const CurvatureBundle& bundle, const MetricField& metric) {
  require_same_region(bundle.chart, metric.chart(), "curvature bundle and metric");
  if (bundle.chart.dim() != 3) throw Error(ErrorKind::DimensionMismatch, "the Weyl-Schouten tensor is 3D only");
  const Chart chart = bundle.chart;
  const ConnectionField connection = levi_civita(metric);
  auto ricci = bundle.ricci;
  auto scalar = bundle.scalar;
  auto field = [chart, connection, metric, ricci, scalar](const Point& p) {
    const auto dric = fd::gradient(ricci, p, chart);  // dric[k](i, j) = d_k R_ij
    const auto dscal = fd::gradient(scalar, p, chart);
    const Mat ric = ricci(p);
    const Mat g = metric(p);
    const Tensor3 gamma = connection(p);
    auto cov = [&](int i, int j, int k) {  // nabla_k R_ij
      double v = dric[k](i, j);
      for (int m = 0; m < 3; ++m) v -= gamma(m, k, i) * ric(m, j) + gamma(m, k, j) * ric(i, m);
      return v;
    };
    Tensor3 c(3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          c(i, j, k) = cov(i, j, k) - cov(i, k, j) - 0.25 * (g(i, j) * dscal[k] - g(i, k) * dscal[j]);
    return c;
  };
  CurvatureBundle out = bundle;
  out.weyl_schouten = field;
  double m = 0.0;
  for (const Point& p : chart.interior_samples(chart.band(2))) m = std::max(m, field(p).max_abs());
  out.sup_norms["weyl_schouten"] = m;
  return out;
}

double scaled_ricci_residual(const CurvatureBundle& bundle) {
  const double d = bundle.chart.diameter();
  return bundle.sup_norms.at("ricci") * d * d;
}

}  // namespace thermogeo
