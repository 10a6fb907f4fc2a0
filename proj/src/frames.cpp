#include "thermogeo/frames.hpp"

#include "thermogeo/error.hpp"
#include "thermogeo/finite_difference.hpp"

namespace thermogeo {

namespace {

bool is_scalar_identity(const Mat& g) {
  const int d = static_cast<int>(g.rows());
  const double s = g(0, 0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double expect = i == j ? s : 0.0;
      if (std::abs(g(i, j) - expect) > 1e-14 * std::abs(s)) return false;
    }
  return true;
}

Mat lower_cholesky(const Mat& g, const Point& p) {
  spd_inverse(g, p);  // SingularMetric when not SPD
  return Eigen::LLT<Mat>(g).matrixL();
}

// Lower triangle with halved diagonal.
Mat phi(const Mat& x) {
  Mat out = x.triangularView<Eigen::StrictlyLower>();
  out.diagonal() = 0.5 * x.diagonal();
  return out;
}

}  // namespace

FrameField::FrameField(Chart chart, Evaluator frame, Partials partials)
    : chart_(std::move(chart)), frame_(std::move(frame)), partials_(std::move(partials)) {}

FrameField FrameField::conformal(const ScalarField& vartheta) {
  const int d = vartheta.chart().dim();
  auto value = [vartheta, d](const Point& p) {
    const double t = vartheta(p);
    if (!(t > 0.0)) throw Error(ErrorKind::DegenerateFrame, "vartheta must be positive");
    return Mat(Mat::Identity(d, d) / t);
  };
  Partials partials;
  if (vartheta.has_analytic_gradient())
    partials = [vartheta, d](const Point& p) {
      const double t = vartheta(p);
      const Vec g = vartheta.gradient(p);
      std::array<Mat, 3> out{};
      for (int e = 0; e < d; ++e) out[e] = Mat::Identity(d, d) * (-g[e] / (t * t));
      return out;
    };
  return FrameField(vartheta.chart(), value, partials);
}

Mat FrameField::inverse(const Point& p) const {
  const Mat f = frame_(p);
  Eigen::FullPivLU<Mat> lu(f);
  if (!lu.isInvertible()) throw Error(ErrorKind::DegenerateFrame, "frame matrix is singular");
  return lu.inverse().transpose();
}

std::array<Mat, 3> FrameField::partials(const Point& p) const {
  if (partials_ && chart_.mode() == DerivativeMode::analytic) return partials_(p);
  return fd::gradient(frame_, p, chart_);
}

FrameField FrameField::gauged(const std::function<Mat(const Point&)>& rotation) const {
  auto base = frame_;
  return FrameField(chart_, [base, rotation](const Point& p) {
    const Mat r = rotation(p);
    const Mat f = base(p);
    if (r.rows() != f.rows() || r.cols() != f.rows())
      throw Error(ErrorKind::DimensionMismatch, "gauge size differs from frame");
    if (max_abs(Mat(r * r.transpose() - Mat::Identity(r.rows(), r.rows()))) > 1e-10)
      throw Error(ErrorKind::InvalidArgument, "gauge is not orthogonal");
    return Mat(r * f);
  });
}

FrameField orthonormal_frame(const MetricField& G, const std::function<Mat(const Point&)>& gauge) {
  const int d = G.chart().dim();
  auto value = [G, d](const Point& p) {
    const Mat g = G(p);
    const Mat L = lower_cholesky(g, p);
    if (is_scalar_identity(g)) return Mat(Mat::Identity(d, d) / std::sqrt(g(0, 0)));
    return Mat(L.triangularView<Eigen::Lower>().solve(Mat::Identity(d, d)));
  };
  FrameField::Partials partials;
  if (G.has_analytic_partials())
    partials = [G, d](const Point& p) {
      // dL = L phi(L^-1 dG L^-T) and d(L^-1) = -L^-1 dL L^-1.
      const Mat L = lower_cholesky(G(p), p);
      const Mat Li = L.triangularView<Eigen::Lower>().solve(Mat::Identity(d, d));
      const auto dG = G.partials(p);
      std::array<Mat, 3> out{};
      for (int e = 0; e < d; ++e) {
        const Mat dL = L * phi(Li * dG[e] * Li.transpose());
        out[e] = -Li * dL * Li;
      }
      return out;
    };
  FrameField frame(G.chart(), value, partials);
  return gauge ? frame.gauged(gauge) : frame;
}

ScalarField vartheta_from_temperature(const ScalarField& temperature, const ExpansionLaw& law) {
  const ScalarField w = thermal_exponent(temperature, law);
  ScalarField::Gradient grad;
  ScalarField::Hessian hess;
  if (w.has_analytic_gradient()) {
    grad = [w](const Point& p) { return Vec(std::exp(w(p)) * w.gradient(p)); };
    if (w.has_analytic_hessian())
      hess = [w](const Point& p) {
        const Vec g = w.gradient(p);
        return Mat(std::exp(w(p)) * (w.hessian(p) + g * g.transpose()));
      };
  }
  return ScalarField(w.chart(), [w](const Point& p) { return std::exp(w(p)); }, grad, hess);
}

MatrixField elastic_part(const MatrixField& F, const FrameField& frame) {
  require_same_region(F.chart, frame.chart(), "deformation gradient and frame");
  return MatrixField{F.chart, [F, frame](const Point& p) {
                       const Mat f = F(p);
                       const Mat e = frame(p);
                       if (f.cols() != e.cols())
                         throw Error(ErrorKind::DimensionMismatch, "deformation gradient and frame differ in size");
                       return Mat(f * e.transpose());
                     }};
}

Tensor3Field commutation_coefficients(const FrameField& frame) {
  const int d = frame.chart().dim();
  return Tensor3Field{frame.chart(), [frame, d](const Point& p) {
                        const Mat F = frame(p), Fi = frame.inverse(p);
                        const auto dF = frame.partials(p);
                        Tensor3 c(d);
                        for (int A = 0; A < d; ++A)
                          for (int B = 0; B < d; ++B) {
                            Vec bracket = Vec::Zero(d);  // coordinate components of [E_A, E_B]
                            for (int D = 0; D < d; ++D)
                              for (int E = 0; E < d; ++E)
                                bracket[D] += F(A, E) * dF[E](B, D) - F(B, E) * dF[E](A, D);
                            for (int C = 0; C < d; ++C) c(A, B, C) = Fi.row(C).dot(bracket);
                          }
                        return c;
                      }};
}

Tensor3Field frame_connection(const FrameField& frame, const ConnectionField& connection) {
  require_same_region(frame.chart(), connection.chart(), "frame and connection");
  const int d = frame.chart().dim();
  return Tensor3Field{frame.chart(), [frame, connection, d](const Point& p) {
                        const Mat F = frame(p), Fi = frame.inverse(p);
                        const auto dF = frame.partials(p);
                        const Tensor3 gamma = connection(p);
                        Tensor3 out(d);
                        for (int B = 0; B < d; ++B)
                          for (int D = 0; D < d; ++D) {
                            // coordinate components of nabla_{d_D} E_B
                            Vec v(d);
                            for (int f = 0; f < d; ++f) {
                              v[f] = dF[D](B, f);
                              for (int e = 0; e < d; ++e) v[f] += F(B, e) * gamma(f, D, e);
                            }
                            for (int A = 0; A < d; ++A)
                              for (int C = 0; C < d; ++C) out(A, B, C) += F(A, D) * Fi.row(C).dot(v);
                          }
                        return out;
                      }};
}

Tensor3Field noncoordinate_torsion(const Tensor3Field& gbar, const Tensor3Field& commutation) {
  require_same_region(gbar.chart, commutation.chart, "frame connection and commutation coefficients");
  const int d = gbar.chart.dim();
  return Tensor3Field{gbar.chart, [gbar, commutation, d](const Point& p) {
                        const Tensor3 g = gbar(p), c = commutation(p);
                        Tensor3 t(d);
                        for (int C = 0; C < d; ++C)
                          for (int A = 0; A < d; ++A)
                            for (int B = 0; B < d; ++B) t(C, A, B) = g(A, B, C) - g(B, A, C) - c(A, B, C);
                        return t;
                      }};
}

ConnectionField ap_connection(const FrameField& frame) {
  const int d = frame.chart().dim();
  return ConnectionField(frame.chart(), [frame, d](const Point& p) {
    const Mat Fi = frame.inverse(p);
    const auto dF = frame.partials(p);
    Tensor3 gamma(d);
    for (int I = 0; I < d; ++I)
      for (int J = 0; J < d; ++J)
        for (int K = 0; K < d; ++K)
          for (int A = 0; A < d; ++A) gamma(I, J, K) -= Fi(A, K) * dF[J](A, I);
    return gamma;
  });
}

double parallel_transport_residual(const FrameField& frame, const ConnectionField& connection) {
  require_same_region(frame.chart(), connection.chart(), "frame and connection");
  const int d = frame.chart().dim();
  double worst = 0.0;
  for (const Point& p : frame.chart().interior_samples(frame.chart().band())) {
    const Mat F = frame(p);
    const auto dF = frame.partials(p);
    const Tensor3 gamma = connection(p);
    for (int A = 0; A < d; ++A)
      for (int I = 0; I < d; ++I)
        for (int J = 0; J < d; ++J) {
          double r = dF[J](A, I);
          for (int K = 0; K < d; ++K) r += gamma(I, J, K) * F(A, K);
          worst = std::max(worst, std::abs(r));
        }
  }
  return worst;
}

}  // namespace thermogeo
