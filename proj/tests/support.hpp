#pragma once

#include "thermogeo/error.hpp"
#include "thermogeo/fields.hpp"

#include <random>
#include <vector>

namespace testing_support {

using namespace thermogeo;

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

template <class F>
ErrorKind thrown_kind(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

template <class F>
bool throws_kind(F&& f, ErrorKind kind) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

}  // namespace testing_support
