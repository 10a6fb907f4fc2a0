#include "support.hpp"
#include "thermogeo/curvature.hpp"
#include "thermogeo/finite_difference.hpp"
#include "thermogeo/quadrature.hpp"
#include "thermogeo/stress_free.hpp"

#include <doctest.h>

#include <numbers>

using namespace thermogeo;
using namespace testing_support;

namespace {

constexpr double pi = std::numbers::pi;

ScalarField cartesian_radial(const Chart& chart, double a) {
  // a (x^2 + y^2 [+ z^2])
  return ScalarField(
      chart, [a](const Point& p) { return a * p.squaredNorm(); },
      [a, d = chart.dim()](const Point& p) { return Vec(2.0 * a * p.head(d)); },
      [a, d = chart.dim()](const Point&) { return Mat(2.0 * a * Mat::Identity(d, d)); });
}

}  // namespace

TEST_CASE("2D flatness verdicts") {
  const Chart square = Chart::box(2, 0.0, 1.0, 9);
  const FlatnessReport flat = check_stress_free_2d(ScalarField::constant(square, 0.3));
  CHECK(flat.verdict == FlatnessVerdict::flat);
  CHECK(flat.residual_norms.at("laplacian") == 0.0);

  // lap(x^2 + y^2) = 4 everywhere.
  const FlatnessReport bowl = check_stress_free_2d(cartesian_radial(square, 1.0));
  CHECK(bowl.verdict == FlatnessVerdict::not_flat);
  CHECK(bowl.residual_norms.at("laplacian") == doctest::Approx(4.0 * 2.0).epsilon(1e-14));

  // Harmonic but not radial: fine on a simply connected square.
  const ScalarField saddle(
      square, [](const Point& p) { return p[0] * p[0] - p[1] * p[1]; },
      [](const Point& p) { return Vec(Eigen::Vector2d(2.0 * p[0], -2.0 * p[1])); },
      [](const Point&) { return Mat(Eigen::Vector2d(2.0, -2.0).asDiagonal()); });
  CHECK(check_stress_free_2d(saddle).verdict == FlatnessVerdict::flat);

  CHECK(throws_kind([] { check_stress_free_2d(ScalarField::constant(Chart::box(3, 0.0, 1.0, 3), 0.0)); },
                    ErrorKind::DimensionMismatch));
}

TEST_CASE("radial family: annulus versus sector") {
  for (double beta : {-1.5, -0.5, 0.5, 1.0}) {
    CAPTURE(beta);
    const RadialFamily family{beta, 1.0, 2.0, {}};
    const ScalarField full = radial_family_omega(family, radial_family_chart(family));
    const FlatnessReport a = check_stress_free_2d(full);
    CHECK(a.verdict == FlatnessVerdict::flat_local_only);
    CHECK(a.residual_norms.at("laplacian") < 1e-12);
    CHECK(a.notes.find("obstructed") != std::string::npos);

    const ScalarField sector = radial_family_omega(family, radial_family_chart(family, 33, 1.0));
    const FlatnessReport b = check_stress_free_2d(sector);
    CHECK(b.verdict == FlatnessVerdict::flat_local_only);
    CHECK(b.notes.find("globally fine") != std::string::npos);

    // Grid mode reaches the same verdict from sampled values.
    const Chart grid = radial_family_chart(family, 33).with_mode(DerivativeMode::grid);
    CHECK(check_stress_free_2d(full.on_chart(grid)).verdict == FlatnessVerdict::flat_local_only);
  }
  // beta = -2 is the inversion R -> 1/R: no deficit, globally flat.
  const RadialFamily inversion{-2.0, 1.0, 2.0, {}};
  CHECK(check_stress_free_2d(radial_family_omega(inversion, radial_family_chart(inversion))).verdict ==
        FlatnessVerdict::flat);
  // A radial but non-harmonic factor is simply not flat.
  const Chart annulus = radial_family_chart({0.0, 1.0, 2.0, {}});
  const ScalarField quad = radial_field(
      annulus, [](double R) { return R * R; }, [](double R) { return 2.0 * R; }, [](double) { return 2.0; });
  CHECK(check_stress_free_2d(quad).verdict == FlatnessVerdict::not_flat);
}

TEST_CASE("radial family temperature round trip") {
  const double alpha0 = 2e-3, T0 = 300.0;
  for (const RadialFamily& family : {RadialFamily{0.5, 1.0, 3.0, {}}, RadialFamily{-0.5, 0.5, 2.0, 1.7}}) {
    const Chart chart = radial_family_chart(family, 9);
    const ScalarField T = radial_family_to_temperature(family, alpha0, T0, chart);
    const MetricField G =
        build_material_metric(MetricField::euclidean(chart), T, ExpansionLaw::constant_alpha(alpha0, T0));
    for (const Point& p : chart.samples()) {
      const double factor = family.gamma_value() * std::pow(p[0], 2.0 * family.beta);
      CHECK(std::abs(G(p)(0, 0) - factor) < 1e-12 * factor);
      CHECK(std::abs(G(p)(1, 1) - factor * p[0] * p[0]) < 1e-12 * factor * p[0] * p[0]);
    }
    CHECK(check_stress_free_2d(thermal_exponent(T, ExpansionLaw::constant_alpha(alpha0, T0))).verdict !=
          FlatnessVerdict::not_flat);
  }
  // With the default gamma the profile starts at T0; beta = alpha0 / 2 gives T0 + ln(R / R0) / 2.
  const RadialFamily half{alpha0 / 2.0, 1.5, 4.0, {}};
  const Chart chart = radial_family_chart(half, 5);
  const ScalarField T = radial_family_to_temperature(half, alpha0, T0, chart);
  CHECK(T(Point(1.5, 0.3, 0.0)) == doctest::Approx(T0).epsilon(1e-15));
  CHECK(std::abs(T(Point(3.0, 0.0, 0.0)) - (T0 + 0.5 * std::log(2.0))) < 1e-12);
  CHECK(throws_kind([&] { radial_family_to_temperature(half, 0.0, T0, chart); }, ErrorKind::InvalidArgument));
}

TEST_CASE("cone descriptor against measured circumference growth") {
  CHECK(cone_from_beta(0.0).deficit_angle == 0.0);
  const ConeDescriptor half = cone_from_beta(-0.5);
  CHECK(half.c == 2.0);
  CHECK(std::abs(half.deficit_angle - pi) < 1e-15);
  CHECK(half.embeddable_in_R3);
  const ConeDescriptor one = cone_from_beta(1.0);
  CHECK(std::abs(one.deficit_angle + 2.0 * pi) < 1e-14);
  CHECK_FALSE(one.embeddable_in_R3);
  CHECK_FALSE(cone_from_beta(-2.5).embeddable_in_R3);
  CHECK(throws_kind([] { cone_from_beta(-1.0); }, ErrorKind::DegenerateCone));

  // In R^(2 beta)(dR^2 + R^2 dTheta^2) circles have length C(R) and radial distance s(R);
  // on a cone dC/ds = 2 pi - deficit.
  for (double beta : {-1.5, -0.5, 0.5, 1.0, 2.5}) {
    CAPTURE(beta);
    const double R1 = 1.0, R2 = 1.8;
    auto circumference = [beta](double R) {
      return gauss_legendre([&](double th) { return std::pow(R, beta) * R + 0.0 * th; }, 0.0, 2.0 * pi, 4);
    };
    const double ds = adaptive_simpson([beta](double R) { return std::pow(R, beta); }, R1, R2, {1e-15, 1u << 20});
    const double measured = 2.0 * pi - std::abs(circumference(R2) - circumference(R1)) / ds;
    CHECK(std::abs(cone_from_beta(beta).deficit_angle - measured) < 1e-12);
    CHECK(std::abs(cone_from_beta(beta).deficit_angle - 2.0 * pi * (1.0 - std::abs(beta + 1.0))) < 1e-12);
  }
}

TEST_CASE("inverse alpha for radial temperature profiles") {
  const double R0 = 1.0, R1 = 2.0, T0 = 300.0, T1 = 400.0;
  struct Profile {
    std::function<double(double)> T, dT, d2T, alpha_R;
  };
  const double a0 = 1e-3;
  // The three closed-form pairs; beta follows from alpha(R0) = a0.
  const double bl = a0 * R0 * (T1 - T0) / (R1 - R0);
  const double br = a0 * R1 * (T1 - T0) / (R1 - R0);
  const double bg = a0 * (T1 - T0) / std::log(R1 / R0);
  const std::vector<std::pair<double, Profile>> profiles{
      {bl,
       {[=](double R) { return (T0 * R1 - T1 * R0) / (R1 - R0) + (T1 - T0) / (R1 - R0) * R; },
        [=](double) { return (T1 - T0) / (R1 - R0); }, [](double) { return 0.0; },
        [=](double R) { return a0 * R0 / R; }}},
      {br,
       {[=](double R) { return (T1 * R1 - T0 * R0) / (R1 - R0) + R0 * R1 * (T0 - T1) / (R1 - R0) / R; },
        [=](double R) { return -R0 * R1 * (T0 - T1) / (R1 - R0) / (R * R); },
        [=](double R) { return 2.0 * R0 * R1 * (T0 - T1) / (R1 - R0) / (R * R * R); },
        [=](double R) { return a0 * R / R0; }}},
      {bg,
       {[=](double R) {
          return std::log(std::pow(R1, T0) / std::pow(R0, T1)) / std::log(R1 / R0) +
                 (T1 - T0) / std::log(R1 / R0) * std::log(R);
        },
        [=](double R) { return (T1 - T0) / std::log(R1 / R0) / R; },
        [=](double R) { return -(T1 - T0) / std::log(R1 / R0) / (R * R); }, [=](double) { return a0; }}},
  };
  const Chart sector(2, CoordinateKind::polar, {{R0, R1}, {0.0, 1.5}}, {17, 17});
  for (const auto& [beta, prof] : profiles) {
    CAPTURE(beta);
    CHECK(prof.T(R0) == doctest::Approx(T0).epsilon(1e-13));
    CHECK(prof.T(R1) == doctest::Approx(T1).epsilon(1e-13));
    const InverseAlpha inv = inverse_alpha_radial(prof.T, prof.dT, beta, R0, R1);
    for (double R : {1.0, 1.23, 1.5, 1.91, 2.0}) {
      CHECK(std::abs(inv.alpha_of_R(R) - prof.alpha_R(R)) < 1e-15);
      CHECK(std::abs(inv.alpha_of_T(prof.T(R)) - prof.alpha_R(R)) < 1e-7 * a0);
    }

    // Residual of the zero-stress equation with the exact alpha(T): invert T numerically for R(T).
    auto R_of_T = [&](double t) {
      double lo = R0 - 0.5, hi = R1 + 0.5;
      const bool up = prof.dT(R0) > 0.0;
      for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        ((prof.T(mid) < t) == up ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    };
    auto alpha = [&](double t) { return prof.alpha_R(R_of_T(t)); };
    auto alpha_prime = [&](double t) {
      const double R = R_of_T(t);
      return fd::derivative(prof.alpha_R, R, 1e-4) / prof.dT(R);
    };
    const ExpansionLaw law = ExpansionLaw::from_alpha(alpha, T0, alpha_prime);
    const ScalarField T = radial_field(sector, prof.T, prof.dT, prof.d2T);
    const ScalarField residual = zero_stress_residual(T, law);
    for (const Point& p : sector.samples()) CHECK(std::abs(residual(p)) < 1e-8);

    // Round trip: sampled alpha(T) gives a flat material metric on the sector.
    const ExpansionLaw sampled = ExpansionLaw::from_alpha(inv.alpha_of_T, T0);
    const Chart grid = sector.with_mode(DerivativeMode::grid);
    CHECK(check_stress_free_2d(thermal_exponent(T.on_chart(grid), sampled)).verdict != FlatnessVerdict::not_flat);
  }
  // The wrong alpha is detected.
  const ScalarField Tlin = radial_field(sector, profiles[0].second.T, profiles[0].second.dT, profiles[0].second.d2T);
  const ScalarField wrong = zero_stress_residual(Tlin, ExpansionLaw::constant_alpha(a0, T0));
  CHECK(std::abs(wrong(Point(1.5, 0.5, 0.0))) > 1e-2);

  CHECK(throws_kind([] { inverse_alpha_radial([](double R) { return (R - 1.5) * (R - 1.5); },
                                              [](double R) { return 2.0 * (R - 1.5); }, 0.1, 1.0, 2.0); },
                    ErrorKind::NonMonotoneTemperature));
  CHECK(throws_kind([] { inverse_alpha_radial([](double) { return 1.0; }, [](double) { return 0.0; }, 0.1, 1.0, 2.0); },
                    ErrorKind::NonMonotoneTemperature));
}

TEST_CASE("zero-stress residual equals the Laplacian of the thermal exponent") {
  const Chart chart = Chart::box(2, -1.0, 1.0, 9);
  const ExpansionLaw k = ExpansionLaw::constant_alpha(1e-3, 0.0);
  CHECK(sup_norm(MatrixField{chart, [&](const Point& p) {
                   return Mat::Constant(1, 1, zero_stress_residual(ScalarField::constant(chart, 5.0), k)(p));
                 }}, 0) == 0.0);
  const ScalarField harmonic(
      chart, [](const Point& p) { return 300.0 + 20.0 * (p[0] * p[0] - p[1] * p[1]) + 3.0 * p[0]; },
      [](const Point& p) { return Vec(Eigen::Vector2d(40.0 * p[0] + 3.0, -40.0 * p[1])); },
      [](const Point&) { return Mat(Eigen::Vector2d(40.0, -40.0).asDiagonal()); });
  const ScalarField bowl = cartesian_radial(chart, 1.0);
  for (const Point& p : chart.samples()) {
    CHECK(std::abs(zero_stress_residual(harmonic, k)(p)) < 1e-15);
    CHECK(zero_stress_residual(bowl, k)(p) == doctest::Approx(4e-3).epsilon(1e-14));
  }

  std::mt19937_64 rng(3);
  const ExpansionLaw law = ExpansionLaw::from_alpha([](double T) { return 0.02 + 0.01 * T * T; }, 0.0,
                                                    [](double T) { return 0.02 * T; });
  for (int trial = 0; trial < 5; ++trial) {
    const TrigField t = random_trig(rng, 2, 3, 1.0, 2.0);
    const ScalarField T = as_field(chart, t);
    const ScalarField omega_fd = thermal_exponent(T, law).without_partials();
    const ScalarField r = zero_stress_residual(T, law);
    for (const Point& p : chart.interior_samples(1)) CHECK(std::abs(r(p) - omega_fd.laplacian(p)) < 1e-6);
  }
}

TEST_CASE("3D flatness system") {
  const Chart chart = Chart::box(3, 0.5, 1.5, 5);
  for (const auto& f : flatness_system_residuals_3d(ScalarField::constant(chart, 0.7)))
    for (const Point& p : chart.samples()) CHECK(f(p) == 0.0);

  const ScalarField x1(
      chart, [](const Point& p) { return p[0]; }, [](const Point&) { return Vec(Eigen::Vector3d(1, 0, 0)); },
      [](const Point&) { return Mat(Mat::Zero(3, 3)); });
  const auto lin = flatness_system_residuals_3d(x1);
  for (const Point& p : chart.samples()) {
    for (int k = 0; k < 4; ++k) CHECK(lin[k](p) == 0.0);
    CHECK(lin[4](p) == 1.0);
    CHECK(lin[5](p) == 1.0);
  }

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  // Closed forms with random scale and center outside the box.
  for (int trial = 0; trial < 5; ++trial) {
    const double c0 = 0.2 + 2.0 * u(rng);
    const Point b(-1.0 - u(rng), 2.0 * u(rng), 3.0 * u(rng) - 1.0);
    const ScalarField omega = closed_form_3d(c0, b, chart);
    for (const auto& f : flatness_system_residuals_3d(omega))
      for (const Point& p : chart.samples()) CHECK(std::abs(f(p)) < 1e-12);
    const FlatnessReport rep = check_stress_free_3d(omega);
    CHECK(rep.verdict == FlatnessVerdict::flat);
    CHECK(rep.residual_norms.at("ricci") < 1e-8);
    CHECK(rep.residual_norms.at("system") < 1e-8);
    CHECK(rep.residual_norms.at("linearized") > 1e-2);
  }

  // Pointwise: the six residuals are minus the Ricci components computed from Christoffels.
  static constexpr int slot[6][2] = {{0, 1}, {0, 2}, {1, 2}, {0, 0}, {1, 1}, {2, 2}};
  for (int trial = 0; trial < 20; ++trial) {
    const ScalarField omega = as_field(chart, random_trig(rng, 3, 3, 0.5, 2.0));
    const MetricField G = MetricField::conformal(omega, MetricField::euclidean(chart));
    const CurvatureBundle bundle = curvature(levi_civita(G), G);
    const auto eqs = flatness_system_residuals_3d(omega);
    for (const Point& p : chart.interior_samples(1)) {
      const Mat ric = bundle.ricci(p);
      for (int k = 0; k < 6; ++k) CHECK(std::abs(eqs[k](p) + ric(slot[k][0], slot[k][1])) < 1e-10);
    }
    const FlatnessReport rep = check_stress_free_3d(omega);
    CHECK((rep.residual_norms.at("system") < 1e-8) == (rep.residual_norms.at("ricci") < 1e-8));
  }
  CHECK(throws_kind([] { flatness_system_residuals_3d(ScalarField::constant(Chart::box(2, 0.0, 1.0, 3), 0.0)); },
                    ErrorKind::DimensionMismatch));
}

TEST_CASE("closed-form 3D solution") {
  const Chart shell(3, CoordinateKind::spherical, {{0.5, 1.5}, {0.3, 2.8}, {0.0, 2.0 * pi}}, {9, 9, 9});
  const double c0 = 4.0;
  const ScalarField omega = closed_form_3d(c0, Point::Zero(), shell);
  CHECK(std::abs(omega(Point(1.0 / std::sqrt(c0), 1.0, 1.0))) < 1e-15);
  const FlatnessReport rep = check_stress_free_3d(omega);
  CHECK(rep.verdict == FlatnessVerdict::flat);
  CHECK(rep.residual_norms.at("ricci") < 1e-8);

  const Chart box = Chart::box(3, 0.5, 1.5, 7);
  const ScalarField cart = closed_form_3d(c0, Point::Zero(), box);
  const ScalarField bump(
      box, [](const Point& p) { return 0.01 * p[0] * p[1]; },
      [](const Point& p) { return Vec(Eigen::Vector3d(0.01 * p[1], 0.01 * p[0], 0.0)); },
      [](const Point&) {
        Mat h = Mat::Zero(3, 3);
        h(0, 1) = h(1, 0) = 0.01;
        return h;
      });
  CHECK(check_stress_free_3d(cart).verdict == FlatnessVerdict::flat);
  const FlatnessReport bent = check_stress_free_3d(cart + bump);
  CHECK(bent.verdict == FlatnessVerdict::not_flat);
  CHECK(bent.residual_norms.at("ricci") > 1e-4);
  CHECK(bent.residual_norms.at("system") > 1e-4);

  // Companion temperature: T - T0 = -(2 / alpha) ln R - ln(c0) / alpha.
  const ScalarField T = closed_form_3d_temperature(c0, Point::Zero(), 1e-3, 300.0, box);
  const Point q(0.7, 1.1, 0.9);
  CHECK(std::abs(T(q) - (300.0 - 2e3 * std::log(q.norm()) - 1e3 * std::log(c0))) < 1e-9);

  // Inversion pulls the flat metric back to exp(2 Omega) delta.
  const Point b(-0.3, 0.2, 0.1);
  const ScalarField w = closed_form_3d(c0, b, box);
  for (const Point& p : box.samples()) {
    const Mat F = inversion_gradient(p, c0, b);
    CHECK(max_abs(Mat(F.transpose() * F - std::exp(2.0 * w(p)) * Mat::Identity(3, 3))) < 1e-13);
    for (int j = 0; j < 3; ++j) {
      const Vec col = fd::first([&](const Point& x) { return Vec(inversion_map(x, c0, b)); }, p, j, 1e-3);
      CHECK((col - F.col(j)).norm() < 1e-9);
    }
  }
  // Distances between close sample pairs scale by exp(Omega) at the midpoint.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.5, 1.5), v(-1.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const Point x(u(rng), u(rng), u(rng));
    const Point y = x + 1e-4 * Point(v(rng), v(rng), v(rng));
    const double image = (inversion_map(x, c0, b) - inversion_map(y, c0, b)).norm();
    CHECK(std::abs(image / (std::exp(w(0.5 * (x + y))) * (x - y).norm()) - 1.0) < 1e-7);
  }

  CHECK(throws_kind([&] { closed_form_3d(c0, Point(1.0, 1.0, 1.0), box); }, ErrorKind::OriginInDomain));
  CHECK(throws_kind([] {
    closed_form_3d(1.0, Point::Zero(), Chart(3, CoordinateKind::spherical, {{0.0, 1.0}, {0.3, 2.8}, {0.0, 6.0}}, {5, 5, 5}));
  }, ErrorKind::OriginInDomain));
  CHECK(throws_kind([&] { closed_form_3d(-1.0, Point::Zero(), box); }, ErrorKind::InvalidArgument));
}
