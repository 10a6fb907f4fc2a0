#include "thermogeo/scenario.hpp"

#include "checks.hpp"
#include "thermogeo/axisym.hpp"
#include "thermogeo/curvature.hpp"
#include "thermogeo/embedding.hpp"
#include "thermogeo/frames.hpp"
#include "thermogeo/linearized.hpp"
#include "thermogeo/stress_free.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace thermogeo {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::array<std::string_view, 7> kind_names{"flatness2d", "flatness3d", "inverse_alpha", "embed",
                                                     "axisym",     "linearized", "decomposition"};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

// ---------------------------------------------------------------------------------------------
// Schemas

enum class Type { number, positive, integer, string, object, pairs };

struct KeySpec {
  std::string name;
  Type type;
  bool required = false;
  std::vector<std::string> choices = {};
  const std::vector<KeySpec>* nested = nullptr;
};
using Schema = std::vector<KeySpec>;

const Schema temperature_schema{
    {"type", Type::string, true, {"uniform", "log", "quadratic"}},
    {"T0", Type::number, true},
    {"k", Type::number},
};

const Schema law_schema{
    {"type", Type::string, true, {"constant_alpha", "piecewise_linear_alpha"}},
    {"alpha", Type::number},
    {"nodes", Type::pairs},
    {"T0", Type::number},
};

const Schema& schema_for(ScenarioKind kind) {
  static const Schema flatness2d{
      {"omega", Type::string, true, {"beta_log_r", "harmonic", "gaussian"}},
      {"beta", Type::number},
      {"R0", Type::positive},
      {"R1", Type::positive},
      {"theta_extent", Type::positive},
      {"amplitude", Type::number},
      {"n", Type::integer},
      {"mode", Type::string, false, {"analytic", "grid"}},
  };
  static const Schema flatness3d{
      {"omega", Type::string, true, {"closed_form", "linear"}},
      {"c0", Type::positive},
      {"amplitude", Type::number},
      {"perturbation", Type::number},
      {"lo", Type::number},
      {"hi", Type::number},
      {"n", Type::integer},
      {"mode", Type::string, false, {"analytic", "grid"}},
  };
  static const Schema inverse_alpha{
      {"profile", Type::string, true, {"linear", "reciprocal", "logarithmic"}},
      {"R0", Type::positive},
      {"R1", Type::positive},
      {"T0", Type::number},
      {"T1", Type::number},
      {"alpha0", Type::positive},
      {"samples", Type::integer},
      {"n", Type::integer},
  };
  static const Schema embed{
      {"beta", Type::number, true},
      {"R0", Type::positive},
      {"R1", Type::positive},
      {"samples", Type::integer},
      {"angular", Type::integer},
  };
  static const Schema axisym{
      {"mu", Type::positive, true},
      {"temperature", Type::object, true, {}, &temperature_schema},
      {"law", Type::object, true, {}, &law_schema},
      {"R1", Type::positive},
      {"R2", Type::positive},
      {"bc", Type::string, false, {"paper_datum", "traction_free"}},
      {"panels", Type::integer},
      {"r1", Type::positive},
  };
  static const Schema linearized{
      {"lambda", Type::number, true},
      {"mu", Type::positive, true},
      {"alpha", Type::number},
      {"draws", Type::integer},
      {"seed", Type::integer},
      {"n", Type::integer},
      {"delta_T", Type::number},
      {"profile", Type::string, false, {"uniform", "linear"}},
      {"left", Type::string, false, {"clamped", "free"}},
      {"right", Type::string, false, {"clamped", "free"}},
  };
  static const Schema decomposition{
      {"a", Type::number},
      {"lo", Type::number},
      {"hi", Type::number},
      {"n", Type::integer},
  };
  switch (kind) {
    case ScenarioKind::flatness2d: return flatness2d;
    case ScenarioKind::flatness3d: return flatness3d;
    case ScenarioKind::inverse_alpha: return inverse_alpha;
    case ScenarioKind::embed: return embed;
    case ScenarioKind::axisym: return axisym;
    case ScenarioKind::linearized: return linearized;
    case ScenarioKind::decomposition: return decomposition;
  }
  return flatness2d;
}

std::string join(const std::vector<std::string>& path) {
  if (path.empty()) return "(root)";
  std::string out = path.front();
  for (std::size_t i = 1; i < path.size(); ++i) out += "." + path[i];
  return out;
}

std::string type_name(Type t) {
  switch (t) {
    case Type::number: return "a number";
    case Type::positive: return "a positive number";
    case Type::integer: return "an integer";
    case Type::string: return "a string";
    case Type::object: return "an object";
    case Type::pairs: return "a non-empty array of [T, alpha] pairs";
  }
  return "";
}

class Validator {
 public:
  Validator(const std::string& text, const std::string& origin) : text_(text), origin_(origin) {}

  [[noreturn]] void fail(const std::vector<std::string>& path, const std::string& problem) const {
    throw Error(ErrorKind::ValidationError,
                origin_ + ":" + std::to_string(line_of(path)) + ": " + join(path) + ": " + problem);
  }

  // Line of the deepest path component found as `"key":` after its parent; missing keys report the parent.
  int line_of(const std::vector<std::string>& path) const {
    std::size_t pos = 0, last = std::string::npos;
    for (const std::string& key : path) {
      const std::string needle = "\"" + key + "\"";
      std::size_t at = text_.find(needle, pos);
      while (at != std::string::npos) {
        std::size_t after = at + needle.size();
        while (after < text_.size() && std::isspace(static_cast<unsigned char>(text_[after]))) ++after;
        if (after < text_.size() && text_[after] == ':') break;
        at = text_.find(needle, at + 1);
      }
      if (at == std::string::npos) break;
      last = at;
      pos = at + needle.size();
    }
    if (last == std::string::npos) return 1;
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<long>(last), '\n'));
  }

  void check(const json& obj, const std::vector<std::string>& path, const Schema& schema) const {
    for (const auto& [key, value] : obj.items()) {
      (void)value;
      const bool known = std::any_of(schema.begin(), schema.end(), [&](const KeySpec& s) { return s.name == key; });
      if (!known) fail(extend(path, key), "unknown key");
    }
    for (const KeySpec& spec : schema) {
      const auto here = extend(path, spec.name);
      const auto it = obj.find(spec.name);
      if (it == obj.end()) {
        if (spec.required) fail(here, "missing required key");
        continue;
      }
      const json& v = *it;
      bool ok = false;
      switch (spec.type) {
        case Type::number: ok = v.is_number(); break;
        case Type::positive: ok = v.is_number() && v.get<double>() > 0.0; break;
        case Type::integer: ok = v.is_number_integer(); break;
        case Type::string: ok = v.is_string(); break;
        case Type::object: ok = v.is_object(); break;
        case Type::pairs:
          ok = v.is_array() && !v.empty() && std::all_of(v.begin(), v.end(), [](const json& e) {
                 return e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number();
               });
          break;
      }
      if (!ok) fail(here, "must be " + type_name(spec.type));
      if (!spec.choices.empty() &&
          std::find(spec.choices.begin(), spec.choices.end(), v.get<std::string>()) == spec.choices.end()) {
        std::string list;
        for (const auto& c : spec.choices) list += (list.empty() ? "" : ", ") + c;
        fail(here, "must be one of " + list);
      }
      if (spec.nested) check(v, here, *spec.nested);
    }
  }

  static std::vector<std::string> extend(std::vector<std::string> path, const std::string& key) {
    path.push_back(key);
    return path;
  }

 private:
  const std::string& text_;
  std::string origin_;
};

double num(const json& p, const char* key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->get<double>();
}

int integer(const json& p, const char* key, int fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->get<int>();
}

std::string str(const json& p, const char* key, const std::string& fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->get<std::string>();
}

// Cross-key constraints that the per-key schema cannot express.
void check_relations(ScenarioKind kind, const json& p, const Validator& v) {
  const std::vector<std::string> base{"parameters"};
  auto at = [&](const char* key) { return Validator::extend(base, key); };
  auto range = [&](const char* key, int fallback, int lo, int hi) {
    const int n = integer(p, key, fallback);
    if (n < lo || n > hi) v.fail(at(key), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  };
  auto ordered = [&](const char* lo_key, double lo, const char* hi_key, double hi) {
    if (!(num(p, hi_key, hi) > num(p, lo_key, lo))) v.fail(at(hi_key), std::string("must exceed ") + lo_key);
  };
  switch (kind) {
    case ScenarioKind::flatness2d:
      if (str(p, "omega", "") == "beta_log_r" && !p.contains("beta")) v.fail(at("beta"), "required when omega is beta_log_r");
      ordered("R0", 1.0, "R1", 2.0);
      range("n", 33, 9, 257);
      break;
    case ScenarioKind::flatness3d:
      ordered("lo", 1.0, "hi", 2.0);
      range("n", 9, 7, 65);
      break;
    case ScenarioKind::inverse_alpha:
      ordered("R0", 1.0, "R1", 2.0);
      if (num(p, "T0", 300.0) == num(p, "T1", 400.0)) v.fail(at("T1"), "must differ from T0");
      range("samples", 512, 8, 1 << 20);
      range("n", 17, 9, 257);
      break;
    case ScenarioKind::embed:
      ordered("R0", 1.0, "R1", 4.0);
      range("samples", 200, 2, 1 << 22);
      range("angular", 64, 3, 1 << 16);
      break;
    case ScenarioKind::axisym: {
      ordered("R1", 1.0, "R2", 2.0);
      range("panels", 2048, 4, 1 << 22);
      const json& law = p.at("law");
      const std::string type = law.at("type").get<std::string>();
      const std::vector<std::string> lp{"parameters", "law"};
      if (type == "constant_alpha" && !law.contains("alpha"))
        v.fail(Validator::extend(lp, "alpha"), "required for constant_alpha");
      if (type == "piecewise_linear_alpha" && !law.contains("nodes"))
        v.fail(Validator::extend(lp, "nodes"), "required for piecewise_linear_alpha");
      break;
    }
    case ScenarioKind::linearized:
      range("draws", 50, 1, 1000);
      range("seed", 1, 0, 2147483647);
      range("n", 64, 16, 1 << 20);
      if (!(3.0 * num(p, "lambda", 0.0) + 2.0 * num(p, "mu", 1.0) > 0.0)) v.fail(at("lambda"), "needs 3 lambda + 2 mu > 0");
      break;
    case ScenarioKind::decomposition:
      ordered("lo", 0.0, "hi", 1.0);
      range("n", 7, 5, 65);
      break;
  }
}

// ---------------------------------------------------------------------------------------------
// Canonical output

void dump(const json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) + 2, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + json(key).dump() + ": ";
        dump(value, indent + 2, out);
      }
      out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump(j[i], indent + 2, out);
      }
      out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? fmt(v) : "null";
      return;
    }
    default: out += j.dump();
  }
}

// ---------------------------------------------------------------------------------------------
// Runners

class Artifacts {
 public:
  Artifacts(fs::path dir, RunReport& report) : dir_(std::move(dir)), report_(report) {}

  void write(const std::string& name, const std::string& content) {
    std::ofstream f(dir_ / name, std::ios::binary);
    f << content;
    if (!f) throw std::runtime_error("cannot write " + (dir_ / name).string());
    report_.artifact_paths.push_back(name);
  }

 private:
  fs::path dir_;
  RunReport& report_;
};

std::string samples_csv(const Chart& chart, const ScalarField& f, const std::string& name) {
  static const char* axes[] = {"x1", "x2", "x3"};
  std::string out;
  for (int a = 0; a < chart.dim(); ++a) out += std::string(axes[a]) + ",";
  out += name + "\n";
  for (const Point& p : chart.samples()) {
    for (int a = 0; a < chart.dim(); ++a) out += fmt(p[a]) + ",";
    out += fmt(f(p)) + "\n";
  }
  return out;
}

DerivativeMode mode_of(const json& p) {
  return str(p, "mode", "analytic") == "grid" ? DerivativeMode::grid : DerivativeMode::analytic;
}

void add_flatness(const FlatnessReport& rep, RunReport& r) {
  for (const auto& [k, v] : rep.residual_norms) r.residuals[k] = v;
  r.residuals["tolerance"] = rep.tolerance;
  r.verdicts["flatness"] = std::string(to_string(rep.verdict));
}

void run_flatness2d(const json& p, const RunOptions& o, RunReport& r, Artifacts& out) {
  const std::string kind = str(p, "omega", "");
  const int n = integer(p, "n", 33);
  const DerivativeMode mode = mode_of(p);
  const double a = num(p, "amplitude", 0.5);
  std::optional<ScalarField> omega;
  if (kind == "beta_log_r") {
    const RadialFamily family{num(p, "beta", 0.0), num(p, "R0", 1.0), num(p, "R1", 2.0), std::nullopt};
    const Chart chart =
        radial_family_chart(family, n, num(p, "theta_extent", 2.0 * std::numbers::pi)).with_mode(mode);
    omega = radial_family_omega(family, chart);
    if (family.beta != -1.0) {
      const ConeDescriptor cone = cone_from_beta(family.beta);
      r.residuals["cone_c"] = cone.c;
      r.residuals["deficit_angle"] = cone.deficit_angle;
      r.verdicts["embeddable_in_R3"] = cone.embeddable_in_R3 ? "yes" : "no";
    }
  } else {
    const Chart chart = Chart::box(2, -1.0, 1.0, n, mode);
    if (kind == "harmonic") {
      omega = ScalarField(
          chart, [a](const Point& x) { return a * (x[0] * x[0] - x[1] * x[1]); },
          [a](const Point& x) { return Vec(Eigen::Vector2d(2.0 * a * x[0], -2.0 * a * x[1])); },
          [a](const Point&) { return Mat(Eigen::Vector2d(2.0 * a, -2.0 * a).asDiagonal()); });
    } else {
      omega = ScalarField(
          chart, [a](const Point& x) { return a * std::exp(-x.head(2).squaredNorm()); },
          [a](const Point& x) { return Vec(-2.0 * a * std::exp(-x.head(2).squaredNorm()) * x.head(2)); },
          [a](const Point& x) {
            const Vec v = x.head(2);
            return Mat(a * std::exp(-v.squaredNorm()) * (4.0 * v * v.transpose() - 2.0 * Mat::Identity(2, 2)));
          });
    }
  }
  add_flatness(check_stress_free_2d(*omega, o.tolerance), r);
  out.write("field.csv", samples_csv(omega->chart(), *omega, "omega"));
}

void run_flatness3d(const json& p, const RunOptions& o, RunReport& r, Artifacts& out) {
  const Chart chart = Chart::box(3, num(p, "lo", 1.0), num(p, "hi", 2.0), integer(p, "n", 9), mode_of(p));
  const double a = num(p, "amplitude", 0.1), eps = num(p, "perturbation", 0.0);
  ScalarField omega = str(p, "omega", "") == "closed_form"
                          ? closed_form_3d(num(p, "c0", 1.0), Point::Zero(), chart)
                          : ScalarField(
                                chart, [a](const Point& x) { return a * (x[0] + x[1] + x[2]); },
                                [a](const Point&) { return Vec(Vec::Constant(3, a)); },
                                [](const Point&) { return Mat(Mat::Zero(3, 3)); });
  if (eps != 0.0) {
    omega = omega + ScalarField(
                        chart, [eps](const Point& x) { return eps * x[0] * x[1]; },
                        [eps](const Point& x) { return Vec(Eigen::Vector3d(eps * x[1], eps * x[0], 0.0)); },
                        [eps](const Point&) {
                          Mat h = Mat::Zero(3, 3);
                          h(0, 1) = h(1, 0) = eps;
                          return h;
                        });
  }
  add_flatness(check_stress_free_3d(omega, o.tolerance), r);
  out.write("field.csv", samples_csv(chart, omega, "omega"));
}

void run_inverse_alpha(const json& p, const RunOptions& o, RunReport& r, Artifacts& out) {
  const double R0 = num(p, "R0", 1.0), R1 = num(p, "R1", 2.0), T0 = num(p, "T0", 300.0), T1 = num(p, "T1", 400.0);
  const double a0 = num(p, "alpha0", 1e-3);
  const std::string profile = str(p, "profile", "");
  std::function<double(double)> T, dT, d2T;
  double beta = 0.0;
  if (profile == "linear") {
    // alpha = a0 R0 / R
    const double s = (T1 - T0) / (R1 - R0);
    beta = a0 * R0 * s;
    T = [=](double R) { return T0 + s * (R - R0); };
    dT = [=](double) { return s; };
    d2T = [](double) { return 0.0; };
  } else if (profile == "reciprocal") {
    // alpha = a0 R / R0
    const double c = R0 * R1 * (T1 - T0) / (R1 - R0);
    beta = a0 * R1 * (T1 - T0) / (R1 - R0);
    T = [=](double R) { return T0 + c * (1.0 / R0 - 1.0 / R); };
    dT = [=](double R) { return c / (R * R); };
    d2T = [=](double R) { return -2.0 * c / (R * R * R); };
  } else {
    // alpha = a0
    const double s = (T1 - T0) / std::log(R1 / R0);
    beta = a0 * s;
    T = [=](double R) { return T0 + s * std::log(R / R0); };
    dT = [=](double R) { return s / R; };
    d2T = [=](double R) { return -s / (R * R); };
  }
  const InverseAlpha inv = inverse_alpha_radial(T, dT, beta, R0, R1, integer(p, "samples", 512));
  std::string csv = "R,T,alpha_R,alpha_T\n";
  double gap = 0.0;
  for (int i = 0; i <= 64; ++i) {
    const double R = i == 64 ? R1 : R0 + (R1 - R0) * i / 64.0;
    const double aR = inv.alpha_of_R(R), aT = inv.alpha_of_T(T(R));
    gap = std::max(gap, std::abs(aT - aR) / a0);
    csv += fmt(R) + "," + fmt(T(R)) + "," + fmt(aR) + "," + fmt(aT) + "\n";
  }
  r.residuals["beta"] = beta;
  r.residuals["alpha_interpolation"] = gap;
  const int n = integer(p, "n", 17);
  const Chart sector(2, CoordinateKind::polar, {{R0, R1}, {0.0, 1.5}}, {n, n}, DerivativeMode::grid);
  const ScalarField temperature = radial_field(sector, T, dT, d2T);
  add_flatness(check_stress_free_2d(thermal_exponent(temperature, ExpansionLaw::from_alpha(inv.alpha_of_T, T0)),
                                    o.tolerance),
               r);
  out.write("alpha.csv", csv);
}

void run_embed(const json& p, const RunOptions&, RunReport& r, Artifacts& out) {
  const double beta = num(p, "beta", 0.0), R0 = num(p, "R0", 1.0), R1 = num(p, "R1", 4.0);
  const int angular = integer(p, "angular", 64);
  const auto omega = [beta](double R) { return beta * std::log(R); };
  const EmbeddingProfile prof =
      embed_radial(omega, [beta](double R) { return beta / R; }, R0, R1, integer(p, "samples", 200));
  std::string csv = "R,rho,z,slope\n";
  for (std::size_t i = 0; i < prof.R.size(); ++i)
    csv += fmt(prof.R[i]) + "," + fmt(prof.rho[i]) + "," + fmt(prof.z[i]) + "," + fmt(prof.slope[i]) + "\n";
  r.residuals["induced_metric_error"] = induced_metric_error(prof, omega);
  r.residuals["apex_angle_defect"] = apex_angle_defect(prof, angular);
  r.residuals["slope_inner"] = prof.slope.front();
  r.verdicts["embedding"] = "ok";
  out.write("profile.csv", csv);
  out.write("surface.obj", to_obj(export_surface(prof, angular)));
}

void run_axisym(const json& p, const RunOptions&, RunReport& r, Artifacts& out) {
  const json& tj = p.at("temperature");
  const json& lj = p.at("law");
  const std::string ttype = tj.at("type").get<std::string>();
  const double T0 = num(tj, "T0", 0.0), k = num(tj, "k", 0.0);
  AxisymProblem pb;
  pb.R1 = num(p, "R1", 1.0);
  pb.R2 = num(p, "R2", 2.0);
  if (ttype == "uniform") {
    pb.T = [T0](double) { return T0; };
    pb.dT = [](double) { return 0.0; };
  } else if (ttype == "log") {
    pb.T = [T0, k](double R) { return T0 + k * std::log(R); };
    pb.dT = [k](double R) { return k / R; };
  } else {
    pb.T = [T0, k](double R) { return T0 + k * R * R; };
    pb.dT = [k](double R) { return 2.0 * k * R; };
  }
  const double law_T0 = num(lj, "T0", T0);
  if (lj.at("type").get<std::string>() == "constant_alpha") {
    pb.law = ExpansionLaw::constant_alpha(lj.at("alpha").get<double>(), law_T0);
  } else {
    std::vector<std::pair<double, double>> nodes;
    for (const json& e : lj.at("nodes")) nodes.emplace_back(e[0].get<double>(), e[1].get<double>());
    pb.law = ExpansionLaw::piecewise_linear_alpha(nodes, law_T0);
  }
  pb.material.mu = num(p, "mu", 1.0);
  pb.bc = axisym_bc_from_string(str(p, "bc", "traction_free"));
  pb.panels = integer(p, "panels", 2048);
  if (p.contains("r1")) pb.r1 = num(p, "r1", 1.0);
  const AxisymSolution s = solve_axisym(pb);
  r.residuals["equilibrium"] = s.residual_equilibrium;
  r.residuals["bc"] = s.residual_bc;
  r.residuals["incompressibility"] = s.incompressibility;
  r.residuals["r1"] = s.r1;
  r.residuals["p1"] = s.p1;
  r.residuals["iterations"] = s.iterations;
  r.verdicts["bc"] = std::string(to_string(pb.bc));
  r.verdicts["equilibrium"] = s.residual_equilibrium < 1e-6 * pb.material.mu / pb.R1 ? "pass" : "fail";
  out.write("profile.csv", axisym_csv(s));
}

void run_linearized(const json& p, const RunOptions&, RunReport& r, Artifacts& out) {
  const SVKModuli m{num(p, "lambda", 1.0), num(p, "mu", 1.0)};
  m.validate();
  const double alpha = num(p, "alpha", 1e-3), dT = num(p, "delta_T", 10.0);
  const unsigned long long seed = static_cast<unsigned long long>(integer(p, "seed", 1));
  const double gap = detail::equivalence_gap(integer(p, "draws", 50), seed);
  r.residuals["equivalence"] = gap;
  r.residuals["b_contraction"] = detail::b_contraction_gap(m);
  r.residuals["bc_condition"] =
      bc_condition_check([m](const Mat& C, const Mat& G) { return detail::svk_energy(m, C, G); }).residual;
  r.residuals["trace_rate"] = detail::trace_rate_gap(seed);
  r.verdicts["equivalence"] = gap < 1e-10 ? "pass" : "fail";

  auto end = [&](const char* key, const char* fallback) {
    return str(p, key, fallback) == "clamped" ? EndCondition{EndKind::displacement, 0.0}
                                              : EndCondition{EndKind::stress, 0.0};
  };
  std::function<double(double)> profile = [dT](double) { return dT; };
  if (str(p, "profile", "uniform") == "linear") profile = [dT](double x) { return dT * x; };
  const Rod1D rod = solve_linearized_1d(m, alpha, profile, end("left", "clamped"), end("right", "free"),
                                        integer(p, "n", 64));
  double umax = 0.0;
  for (double u : rod.u) umax = std::max(umax, std::abs(u));
  r.residuals["rod_max_displacement"] = umax;
  out.write("rod.csv", rod_csv(rod));
}

void run_decomposition(const json& p, const RunOptions&, RunReport& r, Artifacts& out) {
  const double a = num(p, "a", 0.1);
  const Chart chart = Chart::box(3, num(p, "lo", 0.0), num(p, "hi", 1.0), integer(p, "n", 7));
  const ScalarField theta(
      chart, [a](const Point& x) { return 1.0 + a * x.squaredNorm(); },
      [a](const Point& x) { return Vec(2.0 * a * x); }, [a](const Point&) { return Mat(2.0 * a * Mat::Identity(3, 3)); });
  const ScalarField omega(
      chart, [theta](const Point& x) { return std::log(theta(x)); },
      [theta](const Point& x) { return Vec(theta.gradient(x) / theta(x)); },
      [theta](const Point& x) {
        const Vec g = theta.gradient(x);
        return Mat(theta.hessian(x) / theta(x) - g * g.transpose() / (theta(x) * theta(x)));
      });
  const FrameField frame = FrameField::conformal(theta);
  const ConnectionField ap = ap_connection(frame);
  const CurvatureBundle b = curvature(ap, MetricField::euclidean(chart));
  const MetricField G = MetricField::conformal(omega, MetricField::euclidean(chart));
  const ConnectionField lc = levi_civita(G);
  r.residuals["ap_riemann"] = b.sup_norms.at("riemann");
  r.residuals["ap_torsion"] = b.sup_norms.at("torsion");
  r.residuals["parallel_transport"] = parallel_transport_residual(frame, ap);
  r.residuals["lc_torsion_coordinate"] = curvature(lc, G).sup_norms.at("torsion");
  r.residuals["lc_torsion_frame"] =
      sup_norm(noncoordinate_torsion(frame_connection(frame, lc), commutation_coefficients(frame)), 0);
  const bool flat = b.sup_norms.at("riemann") < 1e-8, twisted = b.sup_norms.at("torsion") > 1e-3;
  r.verdicts["ap_connection"] = flat && twisted ? "curvature_free_with_torsion" : flat ? "flat_torsion_free" : "curved";
  out.write("vartheta.csv", samples_csv(chart, theta, "vartheta"));
}

}  // namespace

std::string_view to_string(ScenarioKind kind) { return kind_names[static_cast<std::size_t>(kind)]; }

ScenarioKind scenario_kind_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kind_names.size(); ++i)
    if (kind_names[i] == name) return static_cast<ScenarioKind>(i);
  throw Error(ErrorKind::ValidationError, "unknown scenario kind '" + std::string(name) + "'");
}

Scenario parse_scenario_text(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const long line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    throw Error(ErrorKind::ParseError, origin + ":" + std::to_string(line) + ": malformed JSON (" + e.what() + ")");
  }
  const Validator v(text, origin);
  if (!doc.is_object()) v.fail({}, "a scenario must be a JSON object");
  static const Schema top{
      {"kind", Type::string, true, std::vector<std::string>(kind_names.begin(), kind_names.end())},
      {"name", Type::string},
      {"parameters", Type::object, true},
      {"output_dir", Type::string},
  };
  v.check(doc, {}, top);
  Scenario s;
  s.kind = scenario_kind_from_string(doc.at("kind").get<std::string>());
  if (doc.contains("name")) s.name = doc.at("name").get<std::string>();
  if (doc.contains("output_dir")) s.output_dir = doc.at("output_dir").get<std::string>();
  s.parameters = doc.at("parameters");
  v.check(s.parameters, {"parameters"}, schema_for(s.kind));
  check_relations(s.kind, s.parameters, v);
  return s;
}

Scenario parse_scenario(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::ParseError, path.string() + ": cannot read file");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_scenario_text(ss.str(), path.string());
}

std::string canonical_json(const json& value) {
  std::string out;
  dump(value, 0, out);
  return out + "\n";
}

json scenario_to_json(const Scenario& s) {
  json j = json::object();
  j["kind"] = std::string(to_string(s.kind));
  if (s.name) j["name"] = *s.name;
  j["parameters"] = s.parameters;
  if (s.output_dir) j["output_dir"] = *s.output_dir;
  return j;
}

std::string serialize_scenario(const Scenario& s) { return canonical_json(scenario_to_json(s)); }

RunReport run_scenario(const Scenario& scenario, const fs::path& out_dir, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  RunReport r;
  r.scenario = parse_scenario_text(serialize_scenario(scenario), "<scenario>");
  fs::create_directories(out_dir);
  Artifacts out(out_dir, r);
  const json& p = r.scenario.parameters;
  switch (r.scenario.kind) {
    case ScenarioKind::flatness2d: run_flatness2d(p, options, r, out); break;
    case ScenarioKind::flatness3d: run_flatness3d(p, options, r, out); break;
    case ScenarioKind::inverse_alpha: run_inverse_alpha(p, options, r, out); break;
    case ScenarioKind::embed: run_embed(p, options, r, out); break;
    case ScenarioKind::axisym: run_axisym(p, options, r, out); break;
    case ScenarioKind::linearized: run_linearized(p, options, r, out); break;
    case ScenarioKind::decomposition: run_decomposition(p, options, r, out); break;
  }
  RunReport listed = r;
  listed.artifact_paths.push_back("report.json");
  out.write("report.json", report_json(listed));
  r.wall_time_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string report_json(const RunReport& report) {
  json j = json::object();
  j["kind"] = std::string(to_string(report.scenario.kind));
  if (report.scenario.name) j["name"] = *report.scenario.name;
  j["scenario"] = scenario_to_json(report.scenario);
  j["residuals"] = json::object();
  for (const auto& [k, v] : report.residuals) j["residuals"][k] = v;
  j["verdicts"] = json::object();
  for (const auto& [k, v] : report.verdicts) j["verdicts"][k] = v;
  j["artifacts"] = report.artifact_paths;
  return canonical_json(j);
}

int exit_code(ErrorKind kind) {
  return kind == ErrorKind::ParseError || kind == ErrorKind::ValidationError ? 3 : 2;
}

}  // namespace thermogeo
