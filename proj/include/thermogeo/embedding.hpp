#pragma once

#include <Eigen/Core>

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace thermogeo {

// Meridian of a surface of revolution (rho(R), z(R)) whose induced metric is exp(2 Omega)(dR^2 + R^2 dTheta^2).
struct EmbeddingProfile {
  std::vector<double> R;
  std::vector<double> rho;    // R exp(Omega(R))
  std::vector<double> z;      // z(R0) = 0, nondecreasing branch
  std::vector<double> slope;  // dz/drho, infinite where rho'(R) = 0
};

// dz/dR = exp(Omega) sqrt(1 - (1 + R Omega')^2), integrated with 5-point Gauss-Legendre per interval.
// Requires -2/R <= Omega'(R) <= 0 (1e-12 slack), otherwise NotEmbeddable naming the offending R.
EmbeddingProfile embed_radial(const std::function<double(double)>& omega, const std::function<double(double)>& omega_prime,
                              double R0, double R1, int samples);

// Largest |(drho^2 + dz^2) / (exp(2 Omega(R_mid)) dR^2) - 1| over consecutive samples.
double induced_metric_error(const EmbeddingProfile& profile, const std::function<double(double)>& omega);

struct TriangleMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> faces;  // 0-based
};

// Surface of revolution: vertex (i, j) = (rho_i cos phi_j, rho_i sin phi_j, z_i) at index i * angular + j.
TriangleMesh export_surface(const EmbeddingProfile& profile, int angular_samples);

// OBJ text: "v x y z" lines, then 1-based "f i j k" lines.
std::string to_obj(const TriangleMesh& mesh);
void write_obj(const TriangleMesh& mesh, const std::string& path);

// 2 pi minus the sum of incident triangle angles, per vertex (meaningful for interior vertices).
std::vector<double> angle_defects(const TriangleMesh& mesh);

// Angle defect at the apex obtained by extending the first meridian segment to the axis.
double apex_angle_defect(const EmbeddingProfile& profile, int angular_samples);

}  // namespace thermogeo
