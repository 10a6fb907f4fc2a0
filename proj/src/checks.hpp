#pragma once

// Property checks shared by the scenario runner and the acceptance suite.

#include "random_fields.hpp"
#include "thermogeo/linearized.hpp"

#include <algorithm>
#include <random>

namespace thermogeo::detail {

// Worst relative gap between the geometric linearized operator and the classical Navier residual.
// Moduli, alpha, displacement and temperature change are all drawn at random on [-1, 1]^3.
inline double equivalence_gap(int draws, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Chart box = Chart::box(3, -1.0, 1.0, 5);
  double worst = 0.0;
  for (int draw = 0; draw < draws; ++draw) {
    const SVKModuli m{0.2 + 3.0 * u(rng), 0.1 + 2.0 * u(rng)};
    const double alpha = 1e-4 + 1e-2 * u(rng);
    std::vector<TrigField> U;
    for (int i = 0; i < 3; ++i) U.push_back(random_trig(rng, 3, 3, 0.5, 2.0));
    const ScalarField dT = as_field(box, random_trig(rng, 3, 4, 20.0, 2.0));
    const VectorField uf = as_vector_field(box, U);
    const Field<Vec> geo = linearized_operator(svk_tensors(m), {beta_field(dT, alpha), std::nullopt}, uf);
    const Field<Vec> nav = classical_navier_residual(m, alpha, dT, uf);
    for (const Point& p : box.samples()) {
      const Vec a = geo(p), b = nav(p);
      worst = std::max(worst, max_abs(Vec(a - b)) / std::max(1e-300, max_abs(b)));
    }
  }
  return worst;
}

// sup |B(a, A, C, C) + (3 lambda + 2 mu) / 2 delta|.
inline double b_contraction_gap(const SVKModuli& m) {
  return max_abs(Mat(svk_tensors(m).B_trace() + 0.5 * (3.0 * m.lambda + 2.0 * m.mu) * Mat::Identity(3, 3)));
}

// sup |d/d eps Gamma^A_AB - (3/2) d_B beta| for a random beta on a box.
inline double trace_rate_gap(unsigned long long seed) {
  std::mt19937_64 rng(seed);
  const TrigField b = random_trig(rng, 3, 3, 1.0, 1.5);
  const Chart box = Chart::box(3, -1.0, 1.0, 5);
  const Field<Vec> rate = trace_connection_rate(MetricField::euclidean(box), as_field(box, b));
  double worst = 0.0;
  for (const Point& p : box.samples()) worst = std::max(worst, max_abs(Vec(rate(p) - 1.5 * b.gradient(p))));
  return worst;
}

inline double svk_energy(const SVKModuli& m, const Mat& C, const Mat& G) {
  const Mat Gi = G.inverse();
  const Mat E = 0.5 * (C - G);
  const double trE = (Gi * E).trace();
  return 0.5 * m.lambda * trE * trE + m.mu * (Gi * E * Gi * E).trace();
}

// Compressible neo-Hookean in the invariants of G^-1 C.
inline double neo_hookean_energy(double mu, double lambda, const Mat& C, const Mat& G) {
  const double lnJ = 0.5 * std::log(C.determinant() / G.determinant());
  return 0.5 * mu * ((G.inverse() * C).trace() - 3.0) - mu * lnJ + 0.5 * lambda * lnJ * lnJ;
}

}  // namespace thermogeo::detail
