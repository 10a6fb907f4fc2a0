#include "thermogeo/embedding.hpp"

#include "thermogeo/error.hpp"
#include "thermogeo/quadrature.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>

namespace thermogeo {

namespace {

constexpr double slack = 1e-12;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// 1 - (1 + R Omega')^2, checked against the embeddability constraint.
double admissible(double R, double dw) {
  const double k = R * dw;
  if (!(k <= slack && k >= -2.0 - slack))
    throw Error(ErrorKind::NotEmbeddable, "no embedding: the constraint -2/R < Omega'(R) < 0 fails at R=" + fmt(R) +
                                              " (Omega'=" + fmt(dw) + ")");
  return std::max(0.0, -k * (2.0 + k));  // 1 - (1 + k)^2 without cancellation
}

double vertex_angle(const Eigen::Vector3d& at, const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const Eigen::Vector3d u = a - at, v = b - at;
  return std::atan2(u.cross(v).norm(), u.dot(v));
}

}  // namespace

EmbeddingProfile embed_radial(const std::function<double(double)>& omega, const std::function<double(double)>& omega_prime,
                              double R0, double R1, int samples) {
  if (!(R0 > 0.0) || !(R1 > R0)) throw Error(ErrorKind::InvalidArgument, "embedding needs 0 < R0 < R1");
  if (samples < 2) throw Error(ErrorKind::InvalidArgument, "embedding needs at least 2 samples");
  EmbeddingProfile out;
  out.R.resize(samples);
  out.rho.resize(samples);
  out.z.resize(samples);
  out.slope.resize(samples);
  for (int i = 0; i < samples; ++i) {
    const double R = i == samples - 1 ? R1 : R0 + (R1 - R0) * i / (samples - 1);
    const double dw = omega_prime(R);
    const double q = admissible(R, dw);
    const double radial = 1.0 + R * dw;
    out.R[i] = R;
    out.rho[i] = R * std::exp(omega(R));
    out.slope[i] = radial == 0.0 ? std::numeric_limits<double>::infinity() : std::sqrt(q) / radial;
  }
  auto dz = [&](double R) { return std::exp(omega(R)) * std::sqrt(admissible(R, omega_prime(R))); };
  out.z[0] = 0.0;
  for (int i = 1; i < samples; ++i) out.z[i] = out.z[i - 1] + gauss_legendre(dz, out.R[i - 1], out.R[i], 1);
  return out;
}

double induced_metric_error(const EmbeddingProfile& profile, const std::function<double(double)>& omega) {
  double worst = 0.0;
  for (std::size_t i = 1; i < profile.R.size(); ++i) {
    const double dR = profile.R[i] - profile.R[i - 1];
    const double drho = profile.rho[i] - profile.rho[i - 1], dz = profile.z[i] - profile.z[i - 1];
    const double target = std::exp(2.0 * omega(0.5 * (profile.R[i] + profile.R[i - 1]))) * dR * dR;
    worst = std::max(worst, std::abs((drho * drho + dz * dz) / target - 1.0));
  }
  return worst;
}

TriangleMesh export_surface(const EmbeddingProfile& profile, int angular_samples) {
  if (angular_samples < 3) throw Error(ErrorKind::InvalidArgument, "surface mesh needs at least 3 angular samples");
  const int n = angular_samples, rings = static_cast<int>(profile.R.size());
  TriangleMesh mesh;
  mesh.vertices.reserve(static_cast<std::size_t>(rings) * n);
  for (int i = 0; i < rings; ++i)
    for (int j = 0; j < n; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / n;
      mesh.vertices.emplace_back(profile.rho[i] * std::cos(phi), profile.rho[i] * std::sin(phi), profile.z[i]);
    }
  for (int i = 0; i + 1 < rings; ++i)
    for (int j = 0; j < n; ++j) {
      const int jn = (j + 1) % n;  // seam shares vertices with j = 0
      const int a = i * n + j, b = i * n + jn, c = (i + 1) * n + j, d = (i + 1) * n + jn;
      mesh.faces.push_back({a, b, d});
      mesh.faces.push_back({a, d, c});
    }
  return mesh;
}

std::string to_obj(const TriangleMesh& mesh) {
  std::string out;
  char buf[128];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "v %.12e %.12e %.12e\n", v.x(), v.y(), v.z());
    out += buf;
  }
  for (const auto& f : mesh.faces) {
    std::snprintf(buf, sizeof buf, "f %d %d %d\n", f[0] + 1, f[1] + 1, f[2] + 1);
    out += buf;
  }
  return out;
}

void write_obj(const TriangleMesh& mesh, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  file << to_obj(mesh);
}

std::vector<double> angle_defects(const TriangleMesh& mesh) {
  std::vector<double> defect(mesh.vertices.size(), 2.0 * std::numbers::pi);
  for (const auto& f : mesh.faces)
    for (int k = 0; k < 3; ++k)
      defect[f[k]] -= vertex_angle(mesh.vertices[f[k]], mesh.vertices[f[(k + 1) % 3]], mesh.vertices[f[(k + 2) % 3]]);
  return defect;
}

double apex_angle_defect(const EmbeddingProfile& profile, int angular_samples) {
  if (profile.R.size() < 2) throw Error(ErrorKind::InvalidArgument, "apex extrapolation needs two samples");
  const double drho = profile.rho[1] - profile.rho[0];
  if (drho == 0.0) throw Error(ErrorKind::InvalidArgument, "first meridian segment never reaches the axis");
  const Eigen::Vector3d apex(0.0, 0.0, profile.z[0] - profile.rho[0] * (profile.z[1] - profile.z[0]) / drho);
  double total = 0.0;
  for (int j = 0; j < angular_samples; ++j) {
    const double a = 2.0 * std::numbers::pi * j / angular_samples;
    const double b = 2.0 * std::numbers::pi * (j + 1) / angular_samples;
    const double r = profile.rho[0], z = profile.z[0];
    total += vertex_angle(apex, {r * std::cos(a), r * std::sin(a), z}, {r * std::cos(b), r * std::sin(b), z});
  }
  return 2.0 * std::numbers::pi - total;
}

}  // namespace thermogeo
