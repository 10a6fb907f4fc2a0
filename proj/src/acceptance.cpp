#include "thermogeo/acceptance.hpp"

#include "checks.hpp"
#include "random_fields.hpp"
#include "thermogeo/axisym.hpp"
#include "thermogeo/curvature.hpp"
#include "thermogeo/embedding.hpp"
#include "thermogeo/finite_difference.hpp"
#include "thermogeo/frames.hpp"
#include "thermogeo/stress_free.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace thermogeo {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

std::string e3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

CriterionResult result(int id, std::string name, bool passed, std::string detail) {
  return {id, std::move(name), passed, std::move(detail)};
}

CriterionResult flat_zero() {
  double analytic = 0.0, grid = 0.0;
  for (int dim : {2, 3}) {
    const Chart chart = Chart::box(dim, 0.0, 1.0, 5);
    const MetricField g = MetricField::euclidean(chart);
    const CurvatureBundle b = curvature(levi_civita(g), g);
    for (const char* key : {"riemann", "ricci", "scalar"}) analytic = std::max(analytic, b.sup_norms.at(key));
    const Chart fine = Chart::box(dim, 0.0, 1.0, 17, DerivativeMode::grid);
    const MetricField gg(fine, [dim](const Point&) { return Mat(Mat::Identity(dim, dim)); });
    grid = std::max(grid, curvature(levi_civita(gg), gg).sup_norms.at("riemann"));
  }
  return result(1, "flat metric has zero curvature", analytic == 0.0 && grid < 1e-10,
                "analytic " + e3(analytic) + ", grid 17^d " + e3(grid));
}

CriterionResult conformal_2d() {
  std::mt19937_64 rng(17);
  double worst_rel = 0.0, min_order = 1e300;
  for (int trial = 0; trial < 10; ++trial) {
    const detail::TrigField f = detail::random_trig(rng, 2, 3, 0.4, 2.0);
    auto expect = [&f](const Point& p) { return -2.0 * std::exp(-2.0 * f.value(p)) * f.hessian(p).trace(); };

    const Chart chart = Chart::box(2, 0.0, 1.0, 9);
    const MetricField g = MetricField::conformal(detail::as_field(chart, f), MetricField::euclidean(chart));
    const CurvatureBundle b = curvature(levi_civita(g), g);
    double diff = 0.0, scale = 0.0;
    for (const Point& p : chart.samples()) {
      diff = std::max(diff, std::abs(b.scalar(p) - expect(p)));
      scale = std::max(scale, std::abs(expect(p)));
    }
    worst_rel = std::max(worst_rel, diff / scale);

    // Grid mode: errors on nodes shared by the 17- and 33-node grids.
    const Chart coarse = Chart::box(2, 0.0, 1.0, 17, DerivativeMode::grid);
    std::vector<double> errors;
    for (int n : {17, 33}) {
      const Chart grid = Chart::box(2, 0.0, 1.0, n, DerivativeMode::grid);
      const MetricField gg = MetricField::conformal(detail::as_field(grid, f, false), MetricField::euclidean(grid));
      const CurvatureBundle bg = curvature(levi_civita(gg), gg);
      double err = 0.0;
      for (const Point& p : coarse.interior_samples(2)) err = std::max(err, std::abs(bg.scalar(p) - expect(p)));
      errors.push_back(err);
    }
    min_order = std::min(min_order, std::log2(errors[0] / errors[1]));
  }
  return result(2, "2D conformal scalar curvature", worst_rel < 1e-6 && min_order >= 3.5,
                "analytic relative " + e3(worst_rel) + ", grid order min " + e3(min_order));
}

CriterionResult radial_family() {
  bool all = true;
  double gap = 0.0;
  std::string verdicts;
  for (double beta : {-1.5, -0.5, 0.5, 1.0}) {
    const RadialFamily family{beta, 1.0, 2.0, std::nullopt};
    const FlatnessReport rep = check_stress_free_2d(radial_family_omega(family, radial_family_chart(family)));
    all = all && rep.verdict != FlatnessVerdict::not_flat;
    verdicts += (verdicts.empty() ? "" : "/") + std::string(to_string(rep.verdict));
    gap = std::max(gap, std::abs(cone_from_beta(beta).deficit_angle - 2.0 * pi * (1.0 - std::abs(beta + 1.0))));
  }
  return result(3, "radial family and cone deficit", all && gap < 1e-12, verdicts + ", deficit gap " + e3(gap));
}

CriterionResult closed_form_solution() {
  const Chart shell(3, CoordinateKind::spherical, {{0.5, 1.5}, {0.3, 2.8}, {0.0, 2.0 * pi}}, {9, 9, 9});
  const double c0 = 4.0;
  const double ricci =
      conformal_ricci(MetricField::euclidean(shell), closed_form_3d(c0, Point::Zero(), shell)).sup_norms.at("ricci");

  const Chart box = Chart::box(3, 0.5, 1.5, 7);
  auto system = [](const ScalarField& omega) {
    double m = 0.0;
    for (const ScalarField& eq : flatness_system_residuals_3d(omega))
      for (const Point& p : omega.chart().samples()) m = std::max(m, std::abs(eq(p)));
    return m;
  };
  const ScalarField cart = closed_form_3d(c0, Point::Zero(), box);
  const ScalarField bump(
      box, [](const Point& p) { return 0.01 * p[0] * p[1]; },
      [](const Point& p) { return Vec(Eigen::Vector3d(0.01 * p[1], 0.01 * p[0], 0.0)); },
      [](const Point&) {
        Mat h = Mat::Zero(3, 3);
        h(0, 1) = h(1, 0) = 0.01;
        return h;
      });
  const double flat = system(cart), bent = system(cart + bump);
  return result(4, "3D closed-form solution", ricci < 1e-8 && flat < 1e-8 && bent > 1e-4,
                "ricci " + e3(ricci) + ", system " + e3(flat) + ", perturbed " + e3(bent));
}

CriterionResult inverse_alpha_pairs() {
  const double R0 = 1.0, R1 = 2.0, T0 = 300.0, T1 = 400.0, a0 = 1e-3;
  struct Profile {
    std::function<double(double)> T, dT, d2T, alpha_R;
  };
  const double s = (T1 - T0) / (R1 - R0), c = R0 * R1 * (T1 - T0) / (R1 - R0), l = (T1 - T0) / std::log(R1 / R0);
  const std::vector<Profile> profiles{
      {[=](double R) { return T0 + s * (R - R0); }, [=](double) { return s; }, [](double) { return 0.0; },
       [=](double R) { return a0 * R0 / R; }},
      {[=](double R) { return T0 + c * (1.0 / R0 - 1.0 / R); }, [=](double R) { return c / (R * R); },
       [=](double R) { return -2.0 * c / (R * R * R); }, [=](double R) { return a0 * R / R0; }},
      {[=](double R) { return T0 + l * std::log(R / R0); }, [=](double R) { return l / R; },
       [=](double R) { return -l / (R * R); }, [=](double) { return a0; }},
  };
  const Chart sector(2, CoordinateKind::polar, {{R0, R1}, {0.0, 1.5}}, {17, 17});
  double worst = 0.0;
  for (const Profile& prof : profiles) {
    // Exact alpha(T) through the inverse of the monotone profile.
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
    const ScalarField residual = zero_stress_residual(radial_field(sector, prof.T, prof.dT, prof.d2T), law);
    for (const Point& p : sector.samples()) worst = std::max(worst, std::abs(residual(p)));
  }
  return result(5, "inverse alpha closed forms", worst < 1e-8, "zero-stress residual " + e3(worst));
}

CriterionResult embedding() {
  const double beta = -0.5;
  const auto omega = [beta](double R) { return beta * std::log(R); };
  const EmbeddingProfile p = embed_radial(omega, [beta](double R) { return beta / R; }, 1.0, 4.0, 10000);
  const double metric = induced_metric_error(p, omega);
  double slope = 0.0;
  for (double v : p.slope) slope = std::max(slope, std::abs(v - std::sqrt(3.0)));
  bool rejected = false;
  try {
    embed_radial([](double R) { return std::log(R); }, [](double R) { return 1.0 / R; }, 1.0, 4.0, 100);
  } catch (const Error& e) {
    rejected = e.kind() == ErrorKind::NotEmbeddable;
  }
  return result(6, "embedding isometry", metric < 1e-6 && slope < 1e-9 && rejected,
                "metric " + e3(metric) + ", slope gap " + e3(slope) + ", beta=+1 " +
                    (rejected ? "NotEmbeddable" : "accepted"));
}

CriterionResult ap_connection_check() {
  const Chart chart = Chart::box(3, 0.0, 1.0, 7);
  const ScalarField theta(
      chart, [](const Point& p) { return 1.0 + 0.1 * p.squaredNorm(); }, [](const Point& p) { return Vec(0.2 * p); },
      [](const Point&) { return Mat(0.2 * Mat::Identity(3, 3)); });
  const ScalarField omega(
      chart, [theta](const Point& p) { return std::log(theta(p)); },
      [theta](const Point& p) { return Vec(theta.gradient(p) / theta(p)); },
      [theta](const Point& p) {
        const Vec g = theta.gradient(p);
        return Mat(theta.hessian(p) / theta(p) - g * g.transpose() / (theta(p) * theta(p)));
      });
  const FrameField frame = FrameField::conformal(theta);
  const CurvatureBundle b = curvature(ap_connection(frame), MetricField::euclidean(chart));
  const MetricField G = MetricField::conformal(omega, MetricField::euclidean(chart));
  const ConnectionField lc = levi_civita(G);
  const double curv = b.sup_norms.at("riemann"), tors = b.sup_norms.at("torsion");
  const double lc_coord = curvature(lc, G).sup_norms.at("torsion");
  const double lc_frame = sup_norm(noncoordinate_torsion(frame_connection(frame, lc), commutation_coefficients(frame)), 0);
  return result(7, "AP connection", curv < 1e-8 && tors > 1e-3 && lc_coord < 1e-10 && lc_frame < 1e-10,
                "curvature " + e3(curv) + ", torsion " + e3(tors) + ", Levi-Civita torsion " + e3(lc_coord) + " / " +
                    e3(lc_frame));
}

CriterionResult axisym_solver() {
  // (a) uniform temperature
  AxisymProblem uni;
  uni.R1 = 1.0;
  uni.R2 = 3.0;
  uni.T = [](double) { return 350.0; };
  uni.law = ExpansionLaw::constant_alpha(1e-3, 300.0);
  uni.material.mu = 5.0;
  uni.panels = 64;
  const AxisymSolution su = solve_axisym(uni);
  double stress = 0.0, stretch = 0.0;
  for (std::size_t k = 0; k < su.R.size(); ++k) {
    stress = std::max({stress, std::abs(su.P_rR[k]), std::abs(su.P_thTh[k])});
    stretch = std::max(stretch, std::abs(su.r[k] / su.R[k] - std::exp(0.05)));
  }
  const bool a = stress < 1e-8 * uni.material.mu && stretch < 1e-9;

  // (b) zero inner pressure with T = T0 + k ln R against composite Simpson on 2^20 intervals
  const double k = 40.0, alpha = 5e-3, ak = alpha * k, mu = 3.0;
  AxisymProblem lg;
  lg.T = [k](double R) { return 300.0 + k * std::log(R); };
  lg.dT = [k](double R) { return k / R; };
  lg.law = ExpansionLaw::constant_alpha(alpha, 300.0);
  lg.material.mu = mu;
  lg.bc = AxisymBC::paper_datum;
  const AxisymSolution sl = solve_axisym(lg);
  auto r2 = [&](double R) { return 1.0 + (std::pow(R, 2.0 + 2.0 * ak) - 1.0) / (1.0 + ak); };
  auto dp = [&](double R) {
    const double e2 = std::pow(R, 2.0 * ak), q = r2(R);
    return (2.0 * mu * R / q) * e2 * (2.0 * (1.0 + ak) - R * R * e2 / q - q / (R * R * e2));
  };
  const int n = 1 << 20;
  const double h = 1.0 / n;
  double sum = 0.0, scale = 0.0, gap = 0.0;
  std::vector<std::pair<std::size_t, double>> checkpoints;
  for (int i = 0; i < n; i += 2) {
    const double x = 1.0 + i * h;
    sum += h / 3.0 * (dp(x) + 4.0 * dp(x + h) + dp(x + 2.0 * h));
    scale = std::max(scale, std::abs(sum));
    if ((i + 2) % (n / 64) == 0) checkpoints.emplace_back(static_cast<std::size_t>(32 * checkpoints.size() + 32), sum);
  }
  for (const auto& [idx, value] : checkpoints) gap = std::max(gap, std::abs(sl.p[idx] - value));
  const double rel = gap / scale;
  const bool b = rel < 1e-8;

  // (c), (d) traction-free wavy temperature
  AxisymProblem wv;
  wv.R1 = 0.5;
  wv.R2 = 1.5;
  wv.T = [](double R) { return 2.0 * std::sin(3.0 * R) + R * R; };
  wv.law = ExpansionLaw::constant_alpha(0.1, 0.0);
  wv.material.mu = 2.0;
  const AxisymSolution sw = solve_axisym(wv);
  const Chart polar(2, CoordinateKind::polar, {{0.5, 1.5}, {0.0, 2.0 * pi}}, {41, 9});
  const AxisymFields fields = axisym_fields(sw, wv, polar);
  const Field<Vec> div = divergence_pk1(fields.P, levi_civita(fields.G), fields.gamma_spatial, fields.F);
  double divergence = 0.0;
  for (const Point& X : polar.interior_samples(1)) divergence = std::max(divergence, max_abs(div(X)));
  const double limit = 1e-6 * wv.material.mu / wv.R1;
  const bool c = sw.residual_equilibrium < limit && divergence < limit;

  const auto r = sw.r_of;
  const MatrixField F{polar, [r](const Point& X) {
                        Mat f = Mat::Identity(2, 2);
                        f(0, 0) = fd::derivative(r, X[0], 1e-3);
                        return f;
                      }};
  const ScalarField J = jacobian(F, fields.G, fields.g);
  double jgap = 0.0;
  for (const Point& X : polar.interior_samples(1)) jgap = std::max(jgap, std::abs(J(X) - 1.0));
  const bool d = jgap < 1e-8;

  return result(8, "axisymmetric solver", a && b && c && d,
                "(a) stress " + e3(stress) + " stretch " + e3(stretch) + ", (b) pressure " + e3(rel) +
                    ", (c) equilibrium " + e3(sw.residual_equilibrium) + " divergence " + e3(divergence) +
                    ", (d) J " + e3(jgap));
}

CriterionResult linearization() {
  const double eq = detail::equivalence_gap(50, 2024);
  const SVKModuli m{0.6, 1.1};
  const double bgap = detail::b_contraction_gap(m);
  const double svk =
      bc_condition_check([m](const Mat& C, const Mat& G) { return detail::svk_energy(m, C, G); }).residual;
  const double neo =
      bc_condition_check([](const Mat& C, const Mat& G) { return detail::neo_hookean_energy(0.9, 2.0, C, G); })
          .residual;
  return result(9, "linearization equivalence", eq < 1e-10 && bgap < 1e-12 && svk < 1e-6 && neo < 1e-6,
                "operators " + e3(eq) + ", B contraction " + e3(bgap) + ", condition SVK " + e3(svk) +
                    " neo-Hookean " + e3(neo));
}

CriterionResult trace_rate() {
  const double gap = detail::trace_rate_gap(31);
  return result(10, "connection trace rate", gap < 1e-6, "gap " + e3(gap));
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream f(entry.path(), std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    out[fs::relative(entry.path(), root).generic_string()] = ss.str();
  }
  return out;
}

CriterionResult determinism(const fs::path& scratch, bool others_passed) {
  std::vector<std::map<std::string, std::string>> trees;
  for (const char* run : {"run_a", "run_b"}) {
    const fs::path dir = scratch / run;
    fs::remove_all(dir);
    for (const Scenario& s : builtin_scenarios()) run_scenario(s, dir / s.name.value());
    trees.push_back(read_tree(dir));
  }
  const bool same = trees[0] == trees[1] && !trees[0].empty();
  std::size_t bytes = 0;
  for (const auto& [name, content] : trees[0]) bytes += content.size();
  return result(11, "CLI determinism", same && others_passed,
                std::to_string(trees[0].size()) + " files, " + std::to_string(bytes) + " bytes, " +
                    (same ? "identical" : "different") + " across two runs; criteria 1-10 " +
                    (others_passed ? "pass" : "do not all pass"));
}

Scenario make(ScenarioKind kind, const std::string& name, json parameters) {
  Scenario s;
  s.kind = kind;
  s.name = name;
  s.parameters = std::move(parameters);
  return s;
}

}  // namespace

std::vector<Scenario> builtin_scenarios() {
  return {
      make(ScenarioKind::flatness2d, "builtin_flatness2d", {{"omega", "beta_log_r"}, {"beta", -0.5}, {"n", 17}}),
      make(ScenarioKind::flatness3d, "builtin_flatness3d", {{"omega", "closed_form"}, {"c0", 1.0}, {"n", 7}}),
      make(ScenarioKind::inverse_alpha, "builtin_inverse_alpha", {{"profile", "linear"}}),
      make(ScenarioKind::embed, "builtin_embed", {{"beta", -0.5}, {"samples", 100}, {"angular", 24}}),
      make(ScenarioKind::axisym, "builtin_axisym",
           {{"mu", 3.0},
            {"bc", "paper_datum"},
            {"panels", 256},
            {"temperature", {{"type", "log"}, {"T0", 300.0}, {"k", 40.0}}},
            {"law", {{"type", "constant_alpha"}, {"alpha", 5e-3}, {"T0", 300.0}}}}),
      make(ScenarioKind::linearized, "builtin_linearized", {{"lambda", 0.6}, {"mu", 1.1}, {"draws", 5}}),
      make(ScenarioKind::decomposition, "builtin_decomposition", {{"a", 0.1}}),
  };
}

std::vector<CriterionResult> run_acceptance(const fs::path& scratch) {
  using Check = CriterionResult (*)();
  const std::vector<std::pair<int, std::pair<const char*, Check>>> checks{
      {1, {"flat metric has zero curvature", flat_zero}},
      {2, {"2D conformal scalar curvature", conformal_2d}},
      {3, {"radial family and cone deficit", radial_family}},
      {4, {"3D closed-form solution", closed_form_solution}},
      {5, {"inverse alpha closed forms", inverse_alpha_pairs}},
      {6, {"embedding isometry", embedding}},
      {7, {"AP connection", ap_connection_check}},
      {8, {"axisymmetric solver", axisym_solver}},
      {9, {"linearization equivalence", linearization}},
      {10, {"connection trace rate", trace_rate}},
  };
  std::vector<CriterionResult> out;
  bool all = true;
  for (const auto& [id, named] : checks) {
    try {
      out.push_back(named.second());
    } catch (const std::exception& e) {
      out.push_back(result(id, named.first, false, std::string("error: ") + e.what()));
    }
    all = all && out.back().passed;
  }
  try {
    out.push_back(determinism(scratch, all));
  } catch (const std::exception& e) {
    out.push_back(result(11, "CLI determinism", false, std::string("error: ") + e.what()));
  }
  return out;
}

std::string format_acceptance(const std::vector<CriterionResult>& results) {
  std::string out;
  int passed = 0;
  for (const CriterionResult& r : results) {
    passed += r.passed ? 1 : 0;
    out += std::string(r.passed ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.name + ": " + r.detail + "\n";
  }
  out += std::to_string(passed) + "/" + std::to_string(results.size()) + " criteria passed\n";
  return out;
}

}  // namespace thermogeo
