#pragma once

#include "thermogeo/fields.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace thermogeo::detail {

// Sum of plane waves a_k sin(k . X + phase_k) with exact partials.
struct TrigField {
  std::vector<double> amplitude, phase;
  std::vector<Vec> wave;
  int dim = 3;

  double value(const Point& p) const {
    double s = 0.0;
    for (std::size_t i = 0; i < amplitude.size(); ++i) s += amplitude[i] * std::sin(wave[i].dot(p.head(dim)) + phase[i]);
    return s;
  }
  Vec gradient(const Point& p) const {
    Vec g = Vec::Zero(dim);
    for (std::size_t i = 0; i < amplitude.size(); ++i)
      g += amplitude[i] * std::cos(wave[i].dot(p.head(dim)) + phase[i]) * wave[i];
    return g;
  }
  Mat hessian(const Point& p) const {
    Mat h = Mat::Zero(dim, dim);
    for (std::size_t i = 0; i < amplitude.size(); ++i)
      h -= amplitude[i] * std::sin(wave[i].dot(p.head(dim)) + phase[i]) * wave[i] * wave[i].transpose();
    return h;
  }
};

inline TrigField random_trig(std::mt19937_64& rng, int dim, int terms, double amp, double max_wave) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TrigField f;
  f.dim = dim;
  for (int i = 0; i < terms; ++i) {
    f.amplitude.push_back(amp * u(rng));
    f.phase.push_back(3.0 * u(rng));
    Vec k(dim);
    for (int a = 0; a < dim; ++a) k[a] = max_wave * u(rng);
    f.wave.push_back(k);
  }
  return f;
}

inline ScalarField as_field(const Chart& chart, const TrigField& f, bool with_partials = true) {
  if (!with_partials) return ScalarField(chart, [f](const Point& p) { return f.value(p); });
  return ScalarField(
      chart, [f](const Point& p) { return f.value(p); }, [f](const Point& p) { return f.gradient(p); },
      [f](const Point& p) { return f.hessian(p); });
}

// Displacement whose components are independent trig fields.
inline VectorField as_vector_field(const Chart& chart, const std::vector<TrigField>& comp) {
  const int d = chart.dim();
  return VectorField(
      chart,
      [comp, d](const Point& p) {
        Vec out(d);
        for (int i = 0; i < d; ++i) out[i] = comp[i].value(p);
        return out;
      },
      [comp, d](const Point& p) {
        Mat j(d, d);
        for (int i = 0; i < d; ++i) j.row(i) = comp[i].gradient(p).transpose();
        return j;
      },
      [comp, d](const Point& p) {
        std::array<Mat, 3> out{};
        for (int i = 0; i < d; ++i) out[i] = comp[i].hessian(p);
        return out;
      });
}

}  // namespace thermogeo::detail
