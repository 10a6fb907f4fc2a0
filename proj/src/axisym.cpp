#include "thermogeo/axisym.hpp"

#include "thermogeo/error.hpp"
#include "thermogeo/finite_difference.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>

namespace thermogeo {

namespace {

struct Rule {
  std::array<double, 5> x, w;  // on [-1, 1]
};

const Rule& gl5() {
  static const Rule rule = [] {
    using G = boost::math::quadrature::gauss<double, 5>;
    const auto& a = G::abscissa();
    const auto& w = G::weights();
    return Rule{{-a[2], -a[1], a[0], a[1], a[2]}, {w[2], w[1], w[0], w[1], w[2]}};
  }();
  return rule;
}

template <class F>
double gl5_integrate(const F& f, double a, double b) {
  const Rule& q = gl5();
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double s = 0.0;
  for (int j = 0; j < 5; ++j) s += q.w[j] * f(mid + half * q.x[j]);
  return half * s;
}

struct Node {
  double xi, e2w, s, I;  // s = xi omega'(xi), I = int_{R1}^{xi} 2 t e^{2 omega} dt
};

// Everything that does not depend on the unknown data (r1, p(R1)).
struct Profile {
  double R1, R2, h, mu;
  int N;
  std::function<double(double)> omega, domega;
  std::vector<double> Icum;       // at panel ends
  std::vector<std::array<Node, 5>> nodes;

  double e2w(double R) const { return std::exp(2.0 * omega(R)); }

  double partial_I(double a, double b) const {
    return gl5_integrate([this](double t) { return 2.0 * t * e2w(t); }, a, b);
  }

  int panel(double R) const {
    const int k = static_cast<int>(std::floor((R - R1) / h));
    return std::clamp(k, 0, N - 1);
  }

  double pprime(double xi, double e2, double s, double r2) const {
    const double ratio = xi * xi * e2 / r2;
    return (2.0 * mu * xi / r2) * e2 * (2.0 * (1.0 + s) - ratio - 1.0 / ratio);
  }

  // p(R_k) - p(R1) at every panel end.
  std::vector<double> pressure_increments(double r1) const {
    const Rule& q = gl5();
    std::vector<double> out(N + 1, 0.0);
    for (int k = 0; k < N; ++k) {
      double s = 0.0;
      for (int j = 0; j < 5; ++j) {
        const Node& n = nodes[k][j];
        s += q.w[j] * pprime(n.xi, n.e2w, n.s, r1 * r1 + n.I);
      }
      out[k + 1] = out[k] + 0.5 * h * s;
    }
    return out;
  }

  double r_squared(double r1, double R) const {
    const int k = panel(R);
    return r1 * r1 + Icum[k] + partial_I(R1 + k * h, R);
  }

  double pressure(double r1, double p1, const std::vector<double>& Pcum, double R) const {
    const int k = panel(R);
    const double a = R1 + k * h;
    const double base = r1 * r1 + Icum[k];
    return p1 + Pcum[k] + gl5_integrate(
                              [&](double xi) {
                                return pprime(xi, e2w(xi), xi * domega(xi), base + partial_I(a, xi));
                              },
                              a, R);
  }

  double P_rR(double R, double r, double p) const { return 2.0 * mu * R / r - p * r / (R * e2w(R)); }
  double P_thTh(double R, double r, double p) const { return 2.0 * mu / (R * R * e2w(R)) - p / (r * r); }
};

std::shared_ptr<Profile> build_profile(const AxisymProblem& pb) {
  if (!pb.T) throw Error(ErrorKind::InvalidArgument, "temperature profile missing");
  if (!(pb.R1 > 0.0)) throw Error(ErrorKind::NonPositiveRadius, "inner radius must be positive");
  if (!(pb.R2 > pb.R1)) throw Error(ErrorKind::InvalidArgument, "need R1 < R2");
  if (!(pb.material.mu > 0.0)) throw Error(ErrorKind::InvalidArgument, "shear modulus must be positive");
  if (pb.panels < 4) throw Error(ErrorKind::InvalidArgument, "need at least 4 panels");

  auto prof = std::make_shared<Profile>();
  prof->R1 = pb.R1;
  prof->R2 = pb.R2;
  prof->N = pb.panels;
  prof->h = (pb.R2 - pb.R1) / pb.panels;
  prof->mu = pb.material.mu;
  const auto T = pb.T;
  const ExpansionLaw law = pb.law;
  std::function<double(double)> dT = pb.dT;
  if (!dT) {
    const double step = 5e-4 * (pb.R2 - pb.R1);
    dT = [T, step](double R) {
      return (T(R - 2.0 * step) - T(R + 2.0 * step) + 8.0 * (T(R + step) - T(R - step))) / (12.0 * step);
    };
  }
  prof->omega = [T, law](double R) {
    const double w = law.omega(T(R));
    if (!std::isfinite(w)) throw Error(ErrorKind::InvalidArgument, "thermal exponent not finite");
    return w;
  };
  prof->domega = [T, dT, law](double R) { return law.alpha(T(R)) * dT(R); };

  const Rule& q = gl5();
  prof->Icum.assign(prof->N + 1, 0.0);
  prof->nodes.resize(prof->N);
  for (int k = 0; k < prof->N; ++k) {
    const double a = pb.R1 + k * prof->h;
    const double b = k + 1 == prof->N ? pb.R2 : a + prof->h;
    double s = 0.0;
    for (int j = 0; j < 5; ++j) {
      Node& n = prof->nodes[k][j];
      n.xi = 0.5 * (a + b) + 0.5 * (b - a) * q.x[j];
      n.e2w = prof->e2w(n.xi);
      n.s = n.xi * prof->domega(n.xi);
      n.I = prof->Icum[k] + prof->partial_I(a, n.xi);
      s += q.w[j] * 2.0 * n.xi * n.e2w;
    }
    prof->Icum[k + 1] = prof->Icum[k] + 0.5 * (b - a) * s;
  }
  return prof;
}

// (P^{rR}(R1), P^{rR}(R2)) / mu.
std::array<double, 2> traction(const Profile& prof, double r1, double p1) {
  const double p2 = p1 + prof.pressure_increments(r1).back();
  const double r2 = std::sqrt(r1 * r1 + prof.Icum.back());
  return {prof.P_rR(prof.R1, r1, p1) / prof.mu, prof.P_rR(prof.R2, r2, p2) / prof.mu};
}

// Non-finite entries count as infinitely far from a root (std::max alone would drop a NaN).
double norm(const std::array<double, 2>& f) {
  if (!std::isfinite(f[0]) || !std::isfinite(f[1])) return std::numeric_limits<double>::infinity();
  return std::max(std::abs(f[0]), std::abs(f[1]));
}

// Damped Newton on (r1, p1) with a central-difference Jacobian.
std::array<double, 3> shoot(const Profile& prof, double r1, double p1) {
  constexpr int max_iterations = 200;
  auto f = traction(prof, r1, p1);
  for (int it = 0; it < max_iterations; ++it) {
    if (norm(f) < 1e-13) return {r1, p1, static_cast<double>(it)};
    const double dr = 1e-6 * r1, dp = 1e-6 * std::max(std::abs(p1), prof.mu);
    const auto fr_plus = traction(prof, r1 + dr, p1), fr_minus = traction(prof, r1 - dr, p1);
    const auto fp_plus = traction(prof, r1, p1 + dp), fp_minus = traction(prof, r1, p1 - dp);
    Eigen::Matrix2d J;
    for (int i = 0; i < 2; ++i) {
      J(i, 0) = (fr_plus[i] - fr_minus[i]) / (2.0 * dr);
      J(i, 1) = (fp_plus[i] - fp_minus[i]) / (2.0 * dp);
    }
    const Eigen::Vector2d step = J.fullPivLu().solve(Eigen::Vector2d(f[0], f[1]));
    if (!step.allFinite()) break;
    double lambda = 1.0;
    bool accepted = false;
    while (lambda > 1e-10) {
      const double rt = r1 - lambda * step[0], pt = p1 - lambda * step[1];
      if (rt > 0.0) {
        const auto ft = traction(prof, rt, pt);
        if (norm(ft) < norm(f)) {
          r1 = rt;
          p1 = pt;
          f = ft;
          accepted = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!accepted) {
      // Stalled at rounding level counts as converged.
      if (norm(f) < 1e-10) return {r1, p1, static_cast<double>(it)};
      break;
    }
  }
  throw Error(ErrorKind::ShootingDivergence, "traction-free shooting did not converge (residual " +
                                                 std::to_string(norm(f)) + ")");
}

double centered(const std::vector<double>& v, int k, double h) {
  return (v[k - 2] - v[k + 2] + 8.0 * (v[k + 1] - v[k - 1])) / (12.0 * h);
}

}  // namespace

std::string_view to_string(AxisymBC bc) {
  return bc == AxisymBC::paper_datum ? "paper_datum" : "traction_free";
}

AxisymBC axisym_bc_from_string(std::string_view name) {
  if (name == "paper_datum") return AxisymBC::paper_datum;
  if (name == "traction_free") return AxisymBC::traction_free;
  throw Error(ErrorKind::InvalidArgument, "unknown boundary condition '" + std::string(name) + "'");
}

AxisymSolution solve_axisym(const AxisymProblem& problem) {
  const auto prof = build_profile(problem);
  AxisymSolution sol;
  double r1 = problem.R1 * std::exp(prof->omega(problem.R1));
  double p1 = 0.0;
  if (problem.bc == AxisymBC::paper_datum) {
    if (problem.r1) r1 = *problem.r1;
    if (!(r1 > 0.0)) throw Error(ErrorKind::NonPositiveRadius, "inner deformed radius must be positive");
  } else {
    const auto [r, p, it] = shoot(*prof, r1, 2.0 * prof->mu);
    r1 = r;
    p1 = p;
    sol.iterations = static_cast<int>(it);
  }
  sol.r1 = r1;
  sol.p1 = p1;

  const int N = prof->N;
  const auto Pcum = prof->pressure_increments(r1);
  sol.R.resize(N + 1);
  sol.r.resize(N + 1);
  sol.p.resize(N + 1);
  sol.P_rR.resize(N + 1);
  sol.P_thTh.resize(N + 1);
  for (int k = 0; k <= N; ++k) {
    const double R = k == N ? problem.R2 : problem.R1 + k * prof->h;
    const double r2 = r1 * r1 + prof->Icum[k];
    if (!(r2 > 0.0)) throw Error(ErrorKind::NonPositiveRadius, "deformed radius collapsed");
    sol.R[k] = R;
    sol.r[k] = std::sqrt(r2);
    sol.p[k] = p1 + Pcum[k];
    sol.P_rR[k] = prof->P_rR(R, sol.r[k], sol.p[k]);
    sol.P_thTh[k] = prof->P_thTh(R, sol.r[k], sol.p[k]);
  }

  for (int k = 2; k + 2 <= N; ++k) {
    const double R = sol.R[k];
    const double balance = centered(sol.P_rR, k, prof->h) + (1.0 / R + 2.0 * prof->domega(R)) * sol.P_rR[k] -
                           sol.r[k] * sol.P_thTh[k];
    sol.residual_equilibrium = std::max(sol.residual_equilibrium, std::abs(balance));
    const double J = sol.r[k] * centered(sol.r, k, prof->h) / (R * prof->e2w(R));
    sol.incompressibility = std::max(sol.incompressibility, std::abs(J - 1.0));
  }
  sol.residual_bc = problem.bc == AxisymBC::paper_datum
                        ? std::abs(sol.p[0])
                        : std::max(std::abs(sol.P_rR.front()), std::abs(sol.P_rR.back()));

  sol.omega_of = prof->omega;
  sol.domega_of = prof->domega;
  sol.r_of = [prof, r1](double R) { return std::sqrt(prof->r_squared(r1, R)); };
  sol.p_of = [prof, r1, p1, Pcum](double R) { return prof->pressure(r1, p1, Pcum, R); };
  return sol;
}

std::string axisym_csv(const AxisymSolution& s) {
  std::string out = "R,r,p,P_rR,P_thTh\n";
  char line[160];
  for (std::size_t k = 0; k < s.R.size(); ++k) {
    std::snprintf(line, sizeof line, "%.12e,%.12e,%.12e,%.12e,%.12e\n", s.R[k], s.r[k], s.p[k], s.P_rR[k],
                  s.P_thTh[k]);
    out += line;
  }
  return out;
}

MatrixField pk1_neo_hookean(const MatrixField& F, const MetricField& G, const MatrixField& g_at_placement, double mu,
                            const ScalarField& p) {
  require_same_region(F.chart, G.chart(), "deformation gradient and material metric");
  require_same_region(g_at_placement.chart, G.chart(), "spatial metric and material metric");
  require_same_region(p.chart(), G.chart(), "pressure and material metric");
  return MatrixField{G.chart(), [F, G, g_at_placement, mu, p](const Point& X) {
                       const Mat f = F(X);
                       const int d = static_cast<int>(f.rows());
                       if (f.cols() != d) throw Error(ErrorKind::DimensionMismatch, "deformation gradient not square");
                       const double scale = std::pow(std::max(max_abs(f), 1e-300), d);
                       if (!(std::abs(f.determinant()) > 1e-14 * scale))
                         throw Error(ErrorKind::SingularF, "deformation gradient is singular");
                       const Mat Ginv = spd_inverse(G(X), X);
                       const Mat ginv = spd_inverse(g_at_placement(X), X);
                       const Mat finv = f.inverse();
                       return Mat(2.0 * mu * f * Ginv - p(X) * ginv * finv.transpose());
                     }};
}

Field<Vec> divergence_pk1(const MatrixField& P, const ConnectionField& Gamma_material,
                          const ConnectionField& gamma_spatial, const MatrixField& F) {
  require_same_region(P.chart, Gamma_material.chart(), "stress and material connection");
  require_same_region(P.chart, gamma_spatial.chart(), "stress and spatial connection");
  require_same_region(P.chart, F.chart, "stress and deformation gradient");
  const Chart chart = P.chart;
  return Field<Vec>{chart, [P, Gamma_material, gamma_spatial, F, chart](const Point& X) {
                      const int d = chart.dim();
                      const Mat Pv = P(X), f = F(X);
                      const auto dP = fd::gradient(P.eval, X, chart);
                      const Tensor3 Gm = Gamma_material(X), gs = gamma_spatial(X);
                      Vec out = Vec::Zero(d);
                      for (int a = 0; a < d; ++a)
                        for (int A = 0; A < d; ++A) {
                          out[a] += dP[A](a, A);
                          for (int B = 0; B < d; ++B) out[a] += Gm(A, A, B) * Pv(a, B);
                          // gamma^a_{bc} F^c_A P^{bA}, c is the direction of differentiation
                          for (int b = 0; b < d; ++b)
                            for (int c = 0; c < d; ++c) out[a] += gs(a, c, b) * f(c, A) * Pv(b, A);
                        }
                      return out;
                    }};
}

AxisymFields axisym_fields(const AxisymSolution& s, const AxisymProblem& problem, const Chart& polar) {
  if (polar.kind() != CoordinateKind::polar || polar.dim() != 2)
    throw Error(ErrorKind::ChartMismatch, "axisymmetric fields live on a 2D polar chart");
  if (polar.bounds(0).lo < problem.R1 - 1e-12 || polar.bounds(0).hi > problem.R2 + 1e-12)
    throw Error(ErrorKind::ChartMismatch, "chart radii outside the solved annulus");
  const auto w = s.omega_of, dw = s.domega_of, r = s.r_of, p = s.p_of;
  const ScalarField omega(
      polar, [w](const Point& X) { return w(X[0]); },
      [dw](const Point& X) {
        Vec g = Vec::Zero(2);
        g[0] = dw(X[0]);
        return g;
      });
  const MetricField G = MetricField::conformal(omega, MetricField::euclidean(polar));
  const MatrixField F{polar, [w, r](const Point& X) {
                        Mat f = Mat::Identity(2, 2);
                        f(0, 0) = X[0] * std::exp(2.0 * w(X[0])) / r(X[0]);
                        return f;
                      }};
  const MatrixField g{polar, [r](const Point& X) {
                        Mat m = Mat::Identity(2, 2);
                        const double rr = r(X[0]);
                        m(1, 1) = rr * rr;
                        return m;
                      }};
  const ScalarField pressure(polar, [p](const Point& X) { return p(X[0]); });
  const ConnectionField gamma(polar, [r](const Point& X) {
    const double rr = r(X[0]);
    Tensor3 t(2);
    t(0, 1, 1) = -rr;
    t(1, 0, 1) = 1.0 / rr;
    t(1, 1, 0) = 1.0 / rr;
    return t;
  });
  return AxisymFields{G, F, g, pk1_neo_hookean(F, G, g, problem.material.mu, pressure), pressure, gamma};
}

}  // namespace thermogeo
