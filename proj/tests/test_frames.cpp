#include "support.hpp"
#include "thermogeo/curvature.hpp"
#include "thermogeo/finite_difference.hpp"
#include "thermogeo/frames.hpp"

#include <doctest.h>

using namespace thermogeo;
using namespace testing_support;

namespace {

// Symmetric G_ij = S_ij + a_ij sin(k_ij . X + phi_ij) with exact first partials.
struct WavyMetric {
  Mat S;
  double a[3][3], phi[3][3];
  Vec k[3][3];
  int d;

  Mat value(const Point& p) const {
    Mat g = S;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) g(i, j) += a[i][j] * std::sin(k[i][j].dot(p.head(d)) + phi[i][j]);
    return g;
  }
  std::array<Mat, 3> partials(const Point& p) const {
    std::array<Mat, 3> out{};
    for (int e = 0; e < d; ++e) {
      out[e] = Mat::Zero(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out[e](i, j) = a[i][j] * std::cos(k[i][j].dot(p.head(d)) + phi[i][j]) * k[i][j][e];
    }
    return out;
  }
};

WavyMetric random_metric(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  WavyMetric m;
  m.d = d;
  Mat A(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) A(i, j) = u(rng);
  m.S = A * A.transpose() + 1.5 * Mat::Identity(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) {
      m.a[i][j] = m.a[j][i] = 0.2 * u(rng);
      m.phi[i][j] = m.phi[j][i] = 3.0 * u(rng);
      Vec kk(d);
      for (int e = 0; e < d; ++e) kk[e] = 1.5 * u(rng);
      m.k[i][j] = m.k[j][i] = kk;
    }
  return m;
}

MetricField as_metric(const Chart& chart, const WavyMetric& m, bool partials = true) {
  if (!partials) return MetricField(chart, [m](const Point& p) { return m.value(p); });
  return MetricField(chart, [m](const Point& p) { return m.value(p); }, [m](const Point& p) { return m.partials(p); });
}

// Rotation by angles depending on position.
std::function<Mat(const Point&)> rotation_field(int d, double s) {
  return [d, s](const Point& p) {
    if (d == 2) {
      const double t = s * (p[0] + 2.0 * p[1]);
      Mat r(2, 2);
      r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
      return r;
    }
    const Eigen::Matrix3d r = (Eigen::AngleAxisd(s * p[0], Eigen::Vector3d::UnitZ()) *
                               Eigen::AngleAxisd(s * p[1] * p[2], Eigen::Vector3d::UnitX()))
                                  .toRotationMatrix();
    return Mat(r);
  };
}

ScalarField bump_vartheta(const Chart& chart) {
  // vartheta = 1 + 0.1 |X|^2
  const int d = chart.dim();
  return ScalarField(
      chart, [d](const Point& p) { return 1.0 + 0.1 * p.head(d).squaredNorm(); },
      [d](const Point& p) { return Vec(0.2 * p.head(d)); }, [d](const Point&) { return Mat(0.2 * Mat::Identity(d, d)); });
}

double orthonormality_error(const FrameField& frame, const MetricField& G) {
  double worst = 0.0;
  for (const Point& p : G.chart().samples()) {
    const Mat F = frame(p);
    const int d = static_cast<int>(F.rows());
    worst = std::max(worst, max_abs(Mat(F * G(p) * F.transpose() - Mat::Identity(d, d))));
    worst = std::max(worst, max_abs(Mat(F * frame.inverse(p).transpose() - Mat::Identity(d, d))) * 1e2);
  }
  return worst;
}

double neo_hookean(const Mat& G, const Mat& F, const Mat& g, double mu, double lambda) {
  const double J = F.determinant() * std::sqrt(g.determinant() / G.determinant());
  const Mat C = F.transpose() * g * F;
  const double I1 = (C * G.inverse()).trace();
  return 0.5 * mu * (I1 - F.rows()) - mu * std::log(J) + 0.5 * lambda * std::log(J) * std::log(J);
}

}  // namespace

TEST_CASE("orthonormal frames") {
  const Chart chart = Chart::box(3, 0.0, 1.0, 5);
  const FrameField id = orthonormal_frame(MetricField::euclidean(chart));
  CHECK(max_abs(Mat(id(Point(0.3, 0.2, 0.1)) - Mat::Identity(3, 3))) == 0.0);

  const ScalarField theta = bump_vartheta(chart);
  const ScalarField omega(
      chart, [theta](const Point& p) { return std::log(theta(p)); },
      [theta](const Point& p) { return Vec(theta.gradient(p) / theta(p)); });
  const MetricField G = MetricField::conformal(omega, MetricField::euclidean(chart));
  const FrameField conf = orthonormal_frame(G);
  const FrameField closed = FrameField::conformal(theta);
  for (const Point& p : chart.samples()) {
    CHECK(max_abs(Mat(conf(p) - Mat::Identity(3, 3) / theta(p))) < 1e-15);
    const auto a = conf.partials(p), b = closed.partials(p);
    for (int e = 0; e < 3; ++e) CHECK(max_abs(Mat(a[e] - b[e])) < 1e-14);
  }

  std::mt19937_64 rng(11);
  for (int d : {2, 3}) {
    const Chart c = Chart::box(d, -1.0, 1.0, 5);
    for (int trial = 0; trial < 10; ++trial) {
      const WavyMetric m = random_metric(rng, d);
      const MetricField Gm = as_metric(c, m);
      const FrameField plain = orthonormal_frame(Gm);
      const FrameField turned = orthonormal_frame(Gm, rotation_field(d, 0.7));
      CHECK(orthonormality_error(plain, Gm) < 1e-10);
      CHECK(orthonormality_error(turned, Gm) < 1e-10);
      // Lower-triangular inverse Cholesky.
      CHECK(std::abs(plain(Point::Zero())(0, 1)) == 0.0);
      // Differentiated Cholesky against differences of frame values.
      const FrameField fd_frame(c, [plain](const Point& p) { return plain(p); });
      for (const Point& p : c.interior_samples(1)) {
        const auto a = plain.partials(p), b = fd_frame.partials(p);
        for (int e = 0; e < d; ++e) CHECK(max_abs(Mat(a[e] - b[e])) < 1e-9);
      }
    }
  }
  const Chart c2 = Chart::box(2, 0.0, 1.0, 3);
  Mat bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;
  CHECK(throws_kind([&] { orthonormal_frame(MetricField::constant(c2, bad))(Point::Zero()); },
                    ErrorKind::SingularMetric));
  CHECK(throws_kind([&] {
    orthonormal_frame(MetricField::euclidean(c2), [](const Point&) { return Mat(2.0 * Mat::Identity(2, 2)); })(
        Point::Zero());
  }, ErrorKind::InvalidArgument));
}

TEST_CASE("elastic part and the local-relaxation energy") {
  const Chart chart = Chart::box(3, 0.0, 1.0, 3);
  const ScalarField theta = bump_vartheta(chart);
  const FrameField frame = FrameField::conformal(theta);
  const MatrixField expansion{chart, [theta](const Point& p) { return Mat(theta(p) * Mat::Identity(3, 3)); }};
  for (const Point& p : chart.samples())
    CHECK(max_abs(Mat(elastic_part(expansion, frame)(p) - Mat::Identity(3, 3))) < 1e-15);

  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  auto random_F = [&] {
    Mat F = Mat::Identity(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) F(i, j) += u(rng);
    return F;
  };
  const MatrixField anyF{chart, [F = random_F()](const Point&) { return F; }};
  CHECK(max_abs(Mat(elastic_part(anyF, orthonormal_frame(MetricField::euclidean(chart)))(Point::Zero()) -
                    anyF(Point::Zero()))) == 0.0);

  const double mu = 1.3, lambda = 2.1;
  const Mat I = Mat::Identity(3, 3);
  for (int trial = 0; trial < 25; ++trial) {
    const WavyMetric m = random_metric(rng, 3);
    const MetricField G = as_metric(chart, m);
    const MatrixField F{chart, [Fm = random_F()](const Point&) { return Fm; }};
    const auto rot = rotation_field(3, 1.1);
    const MatrixField Fe = elastic_part(F, orthonormal_frame(G));
    const MatrixField Fe_rot = elastic_part(F, orthonormal_frame(G, rot));
    for (const Point& p : chart.samples()) {
      const double riem = neo_hookean(G(p), F(p), I, mu, lambda);
      CHECK(std::abs(neo_hookean(I, Fe(p), I, mu, lambda) - riem) < 1e-12 * (1.0 + std::abs(riem)));
      CHECK(std::abs(neo_hookean(I, Fe_rot(p), I, mu, lambda) - riem) < 1e-12 * (1.0 + std::abs(riem)));
      // The gauge acts on the frame index only.
      CHECK(max_abs(Mat(Fe_rot(p) - Fe(p) * rot(p).transpose())) < 1e-13);
    }
  }
  CHECK(throws_kind([&] { elastic_part(MatrixField{Chart::box(3, 0.0, 2.0, 3), anyF.eval}, frame); },
                    ErrorKind::ChartMismatch));
}

TEST_CASE("commutation coefficients") {
  const Chart chart = Chart::box(3, 0.0, 1.0, 5);
  const FrameField constant(chart, [](const Point&) {
    Mat f(3, 3);
    f << 1, 2, 0, 0, 1, 0, 0.5, 0, 3;
    return f;
  });
  CHECK(sup_norm(commutation_coefficients(constant), 1) < 1e-12);

  const ScalarField theta = bump_vartheta(chart);
  const auto c = commutation_coefficients(FrameField::conformal(theta));
  for (const Point& p : chart.samples()) {
    const Tensor3 t = c(p);
    const Vec g = theta.gradient(p);
    const double th = theta(p);
    for (int A = 0; A < 3; ++A)
      for (int B = 0; B < 3; ++B)
        for (int C = 0; C < 3; ++C) {
          const double expect = (g[B] * (A == C) - g[A] * (B == C)) / (th * th);
          CHECK(std::abs(t(A, B, C) - expect) < 1e-15);
        }
  }

  // Coframe oracle: d theta^C (E_A, E_B) = -c_AB^C.
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 5; ++trial) {
    const FrameField frame = orthonormal_frame(as_metric(chart, random_metric(rng, 3)), rotation_field(3, 0.4));
    const auto cc = commutation_coefficients(frame);
    for (const Point& p : chart.interior_samples(1)) {
      const Tensor3 t = cc(p);
      const Mat F = frame(p);
      const auto dcof = fd::gradient([&](const Point& q) { return frame.inverse(q); }, p, chart);
      for (int A = 0; A < 3; ++A)
        for (int B = 0; B < 3; ++B) {
          CHECK(std::abs(t(A, B, 0) + t(B, A, 0)) < 1e-12);
          for (int C = 0; C < 3; ++C) {
            double dtheta = 0.0;
            for (int D = 0; D < 3; ++D)
              for (int E = 0; E < 3; ++E) dtheta += F(A, D) * F(B, E) * (dcof[D](C, E) - dcof[E](C, D));
            CHECK(std::abs(dtheta + t(A, B, C)) < 1e-7);
          }
        }
    }
  }
}

TEST_CASE("frame connection and torsion in both bases") {
  const Chart chart = Chart::box(3, 0.0, 1.0, 5);
  CHECK(sup_norm(frame_connection(orthonormal_frame(MetricField::euclidean(chart)), ConnectionField::zero(chart)), 0) ==
        0.0);

  const ScalarField theta = bump_vartheta(chart);
  const ScalarField omega(
      chart, [theta](const Point& p) { return std::log(theta(p)); },
      [theta](const Point& p) { return Vec(theta.gradient(p) / theta(p)); },
      [theta](const Point& p) {
        const Vec g = theta.gradient(p);
        return Mat(theta.hessian(p) / theta(p) - g * g.transpose() / (theta(p) * theta(p)));
      });
  const MetricField G = MetricField::conformal(omega, MetricField::euclidean(chart));
  const FrameField frame = FrameField::conformal(theta);
  const auto gbar = frame_connection(frame, levi_civita(G));
  for (const Point& p : chart.samples()) {
    const Tensor3 t = gbar(p);
    const Vec g = theta.gradient(p);
    const double th2 = theta(p) * theta(p);
    for (int A = 0; A < 3; ++A)
      for (int B = 0; B < 3; ++B)
        for (int C = 0; C < 3; ++C) {
          // -(vartheta_A / vartheta^2) delta_BC + Gamma^C_AB / vartheta
          const double expect = (g[B] * (A == C) - g[C] * (A == B)) / th2;
          CHECK(std::abs(t(A, B, C) - expect) < 1e-14);
        }
  }
  const auto cc = commutation_coefficients(frame);
  CHECK(sup_norm(noncoordinate_torsion(gbar, cc), 0) < 1e-14);
  CHECK(curvature(levi_civita(G), G).sup_norms.at("torsion") < 1e-10);

  // Vanishing frame coefficients: torsion is minus the commutation coefficients.
  const auto t0 = noncoordinate_torsion(Tensor3Field{chart, [](const Point&) { return Tensor3(3); }}, cc);
  for (const Point& p : chart.samples()) {
    const Tensor3 a = t0(p), b = cc(p);
    for (int A = 0; A < 3; ++A)
      for (int B = 0; B < 3; ++B)
        for (int C = 0; C < 3; ++C) CHECK(a(C, A, B) == -b(A, B, C));
  }
  // The zero coordinate connection is torsion-free, so it stays torsion-free in the frame.
  CHECK(sup_norm(noncoordinate_torsion(frame_connection(frame, ConnectionField::zero(chart)), cc), 0) < 1e-15);

  // Random metrics and gauges, plus the polar chart: Levi-Civita is torsion-free and compatible in any frame.
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const MetricField Gm = as_metric(chart, random_metric(rng, 3));
    const FrameField f = orthonormal_frame(Gm, rotation_field(3, 0.9));
    const auto gb = frame_connection(f, levi_civita(Gm));
    CHECK(sup_norm(noncoordinate_torsion(gb, commutation_coefficients(f)), 1) < 1e-8);
    CHECK(curvature(levi_civita(Gm), Gm).sup_norms.at("torsion") < 1e-10);
    for (const Point& p : chart.interior_samples(1)) {
      const Tensor3 t = gb(p);
      for (int A = 0; A < 3; ++A)
        for (int B = 0; B < 3; ++B)
          for (int C = 0; C < 3; ++C) CHECK(std::abs(t(A, B, C) + t(A, C, B)) < 1e-8);
    }
  }
  const Chart polar(2, CoordinateKind::polar, {{1.0, 2.0}, {0.0, 6.0}}, {5, 5});
  const MetricField E = MetricField::euclidean(polar);
  const FrameField pf = orthonormal_frame(E);
  CHECK(sup_norm(noncoordinate_torsion(frame_connection(pf, levi_civita(E)), commutation_coefficients(pf)), 1) < 1e-12);
}

TEST_CASE("absolutely parallel connection") {
  const Chart chart = Chart::box(3, 0.0, 1.0, 7);
  const FrameField constant(chart, [](const Point&) { return Mat(2.0 * Mat::Identity(3, 3)); });
  CHECK(sup_norm(Tensor3Field{chart, [ap = ap_connection(constant)](const Point& p) { return ap(p); }}, 0) == 0.0);

  const ScalarField theta = bump_vartheta(chart);
  const FrameField frame = FrameField::conformal(theta);
  const ConnectionField ap = ap_connection(frame);
  const CurvatureBundle b = curvature(ap, MetricField::euclidean(chart));
  CHECK(b.sup_norms.at("riemann") < 1e-8);
  CHECK(b.sup_norms.at("torsion") > 1e-3);
  CHECK(parallel_transport_residual(frame, ap) < 1e-12);
  for (const Point& p : chart.samples()) {
    const Tensor3 g = ap(p);
    const Vec l = theta.gradient(p) / theta(p);
    for (int I = 0; I < 3; ++I)
      for (int J = 0; J < 3; ++J)
        for (int K = 0; K < 3; ++K) CHECK(std::abs(g(I, J, K) - l[J] * (I == K)) < 1e-15);
  }

  // The other sign convention, Gamma^I_JK = -(vartheta_J / vartheta) delta_IK, leaves the
  // orthonormal frame non-parallel; it is the parallel connection of the reciprocal frame vartheta I.
  const ConnectionField other(chart, [theta](const Point& p) {
    const Vec l = theta.gradient(p) / theta(p);
    Tensor3 g(3);
    for (int I = 0; I < 3; ++I)
      for (int J = 0; J < 3; ++J) g(I, J, I) = -l[J];
    return g;
  });
  CHECK(parallel_transport_residual(frame, other) > 1e-2);
  const FrameField reciprocal(chart, [theta](const Point& p) { return Mat(theta(p) * Mat::Identity(3, 3)); });
  CHECK(parallel_transport_residual(reciprocal, other) < 1e-10);

  // Any frame: zero curvature of its parallel connection.
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 3; ++trial) {
    const FrameField f = orthonormal_frame(as_metric(chart, random_metric(rng, 3)), rotation_field(3, 0.5));
    const ConnectionField c = ap_connection(f);
    CHECK(parallel_transport_residual(f, c) < 1e-12);
    CHECK(curvature(c, MetricField::euclidean(chart)).sup_norms.at("riemann") < 1e-6);
  }
}
