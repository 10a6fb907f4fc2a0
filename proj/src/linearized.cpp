#include "thermogeo/linearized.hpp"

#include "thermogeo/curvature.hpp"
#include "thermogeo/error.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

namespace thermogeo {

namespace {

Mat sym_unit(int d, int c, int e) {
  Mat h = Mat::Zero(d, d);
  h(c, e) += 0.5;
  h(e, c) += 0.5;
  return h;
}

void require_square_pair(const Mat& a, const Mat& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw Error(ErrorKind::DimensionMismatch, "tensor arguments differ in size");
}

void require_cartesian(const Chart& chart, const char* what) {
  if (chart.kind() != CoordinateKind::cartesian)
    throw Error(ErrorKind::ChartMismatch, std::string(what) + " needs a Cartesian chart");
}

}  // namespace

void SVKModuli::validate() const {
  if (!(mu > 0.0)) throw Error(ErrorKind::InvalidArgument, "mu must be positive");
  if (!(3.0 * lambda + 2.0 * mu > 0.0)) throw Error(ErrorKind::InvalidArgument, "need 3 lambda + 2 mu > 0");
}

Mat ElasticTensors::B_trace() const {
  Mat t = Mat::Zero(dim, dim);
  for (int a = 0; a < dim; ++a)
    for (int A = 0; A < dim; ++A)
      for (int C = 0; C < dim; ++C) t(a, A) += B(a, A, C, C);
  return t;
}

Mat svk_second_pk(const SVKModuli& m, const Mat& C, const Mat& G) {
  require_square_pair(C, G);
  const Mat Gi = spd_inverse(G, Point::Zero());
  const Mat E = 0.5 * (C - G);
  const double trE = Gi.cwiseProduct(E).sum();
  return m.lambda * trE * Gi + 2.0 * m.mu * Gi * E * Gi;
}

Mat svk_pk1(const SVKModuli& m, const Mat& F, const Mat& G) {
  require_square_pair(F, G);
  return F * svk_second_pk(m, F.transpose() * F, G);
}

ElasticTensors svk_tangents(const SVKModuli& m, const Mat& F, const Mat& G) {
  require_square_pair(F, G);
  const int d = static_cast<int>(G.rows());
  const Mat Gi = spd_inverse(G, Point::Zero());
  const Mat E = 0.5 * (F.transpose() * F - G);
  const double trE = Gi.cwiseProduct(E).sum();
  const Mat S = m.lambda * trE * Gi + 2.0 * m.mu * Gi * E * Gi;

  // dS^{MA}/dE_XY
  auto dSdE = [&](int M, int A, int X, int Y) {
    return m.lambda * Gi(M, A) * Gi(X, Y) + m.mu * (Gi(M, X) * Gi(A, Y) + Gi(M, Y) * Gi(A, X));
  };

  ElasticTensors t;
  t.dim = d;
  t.A = Tensor4(d);
  t.B = Tensor4(d);
  t.C_elast = Tensor4(d);
  for (int A = 0; A < d; ++A)
    for (int B = 0; B < d; ++B)
      for (int C = 0; C < d; ++C)
        for (int D = 0; D < d; ++D) t.C_elast(A, B, C, D) = 0.5 * dSdE(A, B, C, D);

  for (int a = 0; a < d; ++a)
    for (int A = 0; A < d; ++A)
      for (int b = 0; b < d; ++b)
        for (int B = 0; B < d; ++B) {
          double v = a == b ? S(B, A) : 0.0;
          for (int M = 0; M < d; ++M)
            for (int Y = 0; Y < d; ++Y) v += F(a, M) * dSdE(M, A, B, Y) * F(b, Y);
          t.A(a, A, b, B) = v;
        }

  for (int C = 0; C < d; ++C)
    for (int D = 0; D < d; ++D) {
      const Mat H = sym_unit(d, C, D);
      const Mat dGi = -Gi * H * Gi;
      const Mat dE = -0.5 * H;
      const double dtrE = dGi.cwiseProduct(E).sum() + Gi.cwiseProduct(dE).sum();
      const Mat dS = m.lambda * (dtrE * Gi + trE * dGi) + 2.0 * m.mu * (dGi * E * Gi + Gi * dE * Gi + Gi * E * dGi);
      const Mat dP = F * dS;
      for (int a = 0; a < d; ++a)
        for (int A = 0; A < d; ++A) t.B(a, A, C, D) = dP(a, A);
    }
  return t;
}

ElasticTensors svk_tensors(const SVKModuli& moduli, int dim) {
  moduli.validate();
  if (dim < 1 || dim > 3) throw Error(ErrorKind::DimensionMismatch, "dimension must be 1, 2 or 3");
  return svk_tangents(moduli, Mat::Identity(dim, dim), Mat::Identity(dim, dim));
}

ScalarField beta_field(const ScalarField& T, const ScalarField& rate, const ExpansionLaw& law) {
  require_same_region(T.chart(), rate.chart(), "temperature and temperature rate");
  ScalarField::Gradient grad;
  if (T.has_analytic_gradient() && rate.has_analytic_gradient())
    grad = [T, rate, law](const Point& p) {
      const double t = T(p);
      return Vec(2.0 * (law.alpha_prime(t) * rate(p) * T.gradient(p) + law.alpha(t) * rate.gradient(p)));
    };
  return ScalarField(T.chart(), [T, rate, law](const Point& p) { return 2.0 * law.alpha(T(p)) * rate(p); }, grad);
}

ScalarField beta_field(const ScalarField& dT, double alpha) {
  ScalarField::Gradient grad;
  ScalarField::Hessian hess;
  if (dT.has_analytic_gradient()) grad = [dT, alpha](const Point& p) { return Vec(2.0 * alpha * dT.gradient(p)); };
  if (dT.has_analytic_hessian()) hess = [dT, alpha](const Point& p) { return Mat(2.0 * alpha * dT.hessian(p)); };
  return ScalarField(dT.chart(), [dT, alpha](const Point& p) { return 2.0 * alpha * dT(p); }, grad, hess);
}

Field<Vec> linearized_operator(const ElasticTensors& t, const LinearizedLoad& load, const VectorField& U) {
  require_cartesian(U.chart(), "linearized operator");
  require_same_region(U.chart(), load.beta.chart(), "displacement and beta");
  if (load.prestress) require_same_region(U.chart(), load.prestress->chart, "displacement and prestress");
  const int d = U.chart().dim();
  if (t.dim != d) throw Error(ErrorKind::DimensionMismatch, "elastic tensors and chart differ in dimension");
  const Mat BG = t.B_trace();  // reference metric is delta
  return Field<Vec>{U.chart(), [t, load, U, d, BG](const Point& p) {
                      const auto d2U = U.second_partials(p);
                      const Vec dbeta = load.beta.gradient(p);
                      Vec out = BG * dbeta;
                      for (int a = 0; a < d; ++a)
                        for (int A = 0; A < d; ++A)
                          for (int b = 0; b < d; ++b)
                            for (int B = 0; B < d; ++B) out[a] += t.A(a, A, b, B) * d2U[b](A, B);
                      if (load.prestress) out += 0.5 * d * ((*load.prestress)(p) * dbeta);
                      return out;
                    }};
}

Field<Vec> classical_navier_residual(const SVKModuli& m, double alpha, const ScalarField& dT, const VectorField& u) {
  require_cartesian(u.chart(), "Navier residual");
  require_same_region(u.chart(), dT.chart(), "displacement and temperature change");
  const int d = u.chart().dim();
  auto stiffness = [m](int i, int j, int k, int l) {
    return m.lambda * (i == j) * (k == l) + m.mu * ((i == k) * (j == l) + (i == l) * (j == k));
  };
  return Field<Vec>{u.chart(), [u, dT, alpha, d, stiffness](const Point& p) {
                      const auto d2u = u.second_partials(p);
                      const Vec g = dT.gradient(p);
                      Vec out = Vec::Zero(d);
                      for (int i = 0; i < d; ++i)
                        for (int j = 0; j < d; ++j)
                          for (int k = 0; k < d; ++k) {
                            for (int l = 0; l < d; ++l) {
                              const double strain_grad = 0.5 * (d2u[k](l, j) + d2u[l](k, j));
                              out[i] += stiffness(i, j, k, l) * strain_grad;
                            }
                            out[i] -= stiffness(i, j, k, k) * alpha * g[j];
                          }
                      return out;
                    }};
}

Field<Vec> trace_connection_rate(const MetricField& G, const ScalarField& beta, double step) {
  require_same_region(G.chart(), beta.chart(), "metric and beta");
  if (!(step > 0.0)) throw Error(ErrorKind::InvalidArgument, "step must be positive");
  const int d = G.chart().dim();
  std::vector<ConnectionField> family;
  for (double k : {-2.0, -1.0, 1.0, 2.0}) {
    const double eps = k * step;
    ScalarField::Gradient grad;
    if (beta.has_analytic_gradient())
      grad = [beta, eps](const Point& p) { return Vec(0.5 * eps * beta.gradient(p)); };
    const ScalarField omega(beta.chart(), [beta, eps](const Point& p) { return 0.5 * eps * beta(p); }, grad);
    family.push_back(levi_civita(MetricField::conformal(omega, G)));
  }
  return Field<Vec>{G.chart(), [family, d, step](const Point& p) {
                      std::array<Vec, 4> tr;
                      for (int i = 0; i < 4; ++i) {
                        const Tensor3 g = family[i](p);
                        tr[i] = Vec::Zero(d);
                        for (int A = 0; A < d; ++A)
                          for (int B = 0; B < d; ++B) tr[i][B] += g(A, A, B);
                      }
                      return Vec((tr[0] - tr[3] + 8.0 * (tr[2] - tr[1])) / (12.0 * step));
                    }};
}

Rod1D solve_linearized_1d(const SVKModuli& m, double alpha, const std::function<double(double)>& dT,
                          EndCondition left, EndCondition right, int n, double x0, double x1) {
  m.validate();
  if (n < 16) throw Error(ErrorKind::InvalidArgument, "need at least 16 grid points");
  if (!(x1 > x0)) throw Error(ErrorKind::InvalidArgument, "need x0 < x1");
  if (!dT) throw Error(ErrorKind::InvalidArgument, "temperature change missing");
  const double M = m.lambda + 2.0 * m.mu, K = 3.0 * m.lambda + 2.0 * m.mu;
  const double h = (x1 - x0) / (n - 1);
  bool pin_left = false;
  if (left.kind == EndKind::stress && right.kind == EndKind::stress) {
    if (std::abs(left.value - right.value) > 1e-12 * std::max({1.0, std::abs(left.value), std::abs(right.value)}))
      throw Error(ErrorKind::SingularSystem, "end stresses differ, no equilibrium without body force");
    pin_left = true;
  }

  std::vector<double> thermal(n - 1);  // K alpha deltaT at the midpoints
  for (int i = 0; i + 1 < n; ++i) thermal[i] = K * alpha * dT(x0 + (i + 0.5) * h);

  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> entries;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  const double c = M / h;
  if (left.kind == EndKind::displacement || pin_left) {
    entries.emplace_back(0, 0, 1.0);
    rhs[0] = pin_left ? 0.0 : left.value;
  } else {
    entries.emplace_back(0, 0, -c);
    entries.emplace_back(0, 1, c);
    rhs[0] = left.value + thermal[0];
  }
  for (int i = 1; i + 1 < n; ++i) {
    entries.emplace_back(i, i - 1, c);
    entries.emplace_back(i, i, -2.0 * c);
    entries.emplace_back(i, i + 1, c);
    rhs[i] = thermal[i] - thermal[i - 1];
  }
  if (right.kind == EndKind::displacement) {
    entries.emplace_back(n - 1, n - 1, 1.0);
    rhs[n - 1] = right.value;
  } else {
    entries.emplace_back(n - 1, n - 2, -c);
    entries.emplace_back(n - 1, n - 1, c);
    rhs[n - 1] = right.value + thermal[n - 2];
  }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(entries.begin(), entries.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success) throw Error(ErrorKind::SingularSystem, "rod system is singular");
  const Eigen::VectorXd u = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !u.allFinite()) throw Error(ErrorKind::SingularSystem, "rod solve failed");

  Rod1D rod;
  rod.x.resize(n);
  rod.u.assign(u.data(), u.data() + n);
  rod.sigma.resize(n);
  std::vector<double> flux(n - 1);
  for (int i = 0; i + 1 < n; ++i) flux[i] = c * (u[i + 1] - u[i]) - thermal[i];
  for (int i = 0; i < n; ++i) {
    rod.x[i] = i + 1 == n ? x1 : x0 + i * h;
    if (i == 0)
      rod.sigma[i] = flux[0];
    else if (i + 1 == n)
      rod.sigma[i] = flux[n - 2];
    else
      rod.sigma[i] = 0.5 * (flux[i - 1] + flux[i]);
  }
  return rod;
}

std::string rod_csv(const Rod1D& rod) {
  std::string out = "x,u,sigma\n";
  char line[128];
  for (std::size_t i = 0; i < rod.x.size(); ++i) {
    std::snprintf(line, sizeof line, "%.12e,%.12e,%.12e\n", rod.x[i], rod.u[i], rod.sigma[i]);
    out += line;
  }
  return out;
}

double ridders_derivative(const std::function<double(double)>& f, double x, double h, double tolerance) {
  constexpr int ntab = 10;
  constexpr double con = 1.4, con2 = con * con, safe = 2.0;
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "initial step must be positive");
  std::array<std::array<double, ntab>, ntab> a{};
  double err = std::numeric_limits<double>::infinity(), ans = std::numeric_limits<double>::quiet_NaN();
  a[0][0] = (f(x + h) - f(x - h)) / (2.0 * h);
  for (int i = 1; i < ntab; ++i) {
    h /= con;
    a[0][i] = (f(x + h) - f(x - h)) / (2.0 * h);
    double fac = con2;
    for (int j = 1; j <= i; ++j) {
      a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
      fac *= con2;
      const double errt = std::max(std::abs(a[j][i] - a[j - 1][i]), std::abs(a[j][i] - a[j - 1][i - 1]));
      if (errt <= err) {
        err = errt;
        ans = a[j][i];
      }
    }
    if (std::abs(a[i][i] - a[i - 1][i - 1]) >= safe * err) break;
  }
  if (!std::isfinite(ans) || !(err <= tolerance * std::max(1.0, std::abs(ans))))
    throw Error(ErrorKind::NonDifferentiable, "difference quotients do not settle (error estimate " +
                                                  std::to_string(err) + ")");
  return ans;
}

BCConditionReport bc_condition_check(const FreeEnergy& psi, int dim) {
  if (!psi) throw Error(ErrorKind::InvalidArgument, "free energy missing");
  if (dim < 1 || dim > 3) throw Error(ErrorKind::DimensionMismatch, "dimension must be 1, 2 or 3");
  constexpr double step = 1e-2;
  const Mat I = Mat::Identity(dim, dim);
  // S_lj(C, G) = 2 dPsi/dC_lj along the symmetric unit direction.
  auto S = [&](int l, int j, const Mat& C, const Mat& G) {
    const Mat H = sym_unit(dim, l, j);
    return 2.0 * ridders_derivative([&](double t) { return psi(C + t * H, G); }, 0.0, step);
  };
  BCConditionReport r;
  r.B_trace = Mat::Zero(dim, dim);
  r.C_trace = Mat::Zero(dim, dim);
  for (int l = 0; l < dim; ++l)
    for (int j = l; j < dim; ++j) {
      // With F = I, P = S, so B_ljkk is the derivative of S along G -> G + s I.
      r.B_trace(l, j) = r.B_trace(j, l) =
          ridders_derivative([&](double s) { return S(l, j, I, (1.0 + s) * I); }, 0.0, step);
      r.C_trace(l, j) = r.C_trace(j, l) =
          ridders_derivative([&](double s) { return S(l, j, (1.0 + s) * I, I); }, 0.0, step);
    }
  r.residual = max_abs(Mat(r.B_trace + r.C_trace));
  return r;
}

}  // namespace thermogeo
