#pragma once

#include "thermogeo/chart.hpp"
#include "thermogeo/tensor.hpp"

#include <array>
#include <type_traits>

namespace thermogeo::fd {

// 4th-order central stencils on an arbitrary value type supporting +, - and scalar *.

template <class F>
auto first(const F& f, const Point& p, int axis, double h) {
  using V = std::decay_t<decltype(f(p))>;
  Point e = Point::Zero();
  e[axis] = h;
  V out = f(p - 2.0 * e) - f(p + 2.0 * e);
  V inner = f(p + e) - f(p - e);
  out = out + 8.0 * inner;
  out = (1.0 / (12.0 * h)) * out;
  return out;
}

template <class F>
auto second(const F& f, const Point& p, int axis, double h) {
  using V = std::decay_t<decltype(f(p))>;
  Point e = Point::Zero();
  e[axis] = h;
  V outer = f(p - 2.0 * e) + f(p + 2.0 * e);
  V inner = f(p - e) + f(p + e);
  V center = f(p);
  V out = 16.0 * inner - outer;
  out = out - 30.0 * center;
  out = (1.0 / (12.0 * h * h)) * out;
  return out;
}

template <class F>
auto mixed(const F& f, const Point& p, int i, int j, double hi, double hj) {
  auto inner = [&](const Point& q) { return first(f, q, j, hj); };
  return first(inner, p, i, hi);
}

// Gradient along every chart axis with chart-selected steps.
template <class F>
auto gradient(const F& f, const Point& p, const Chart& chart) {
  using V = std::decay_t<decltype(f(p))>;
  std::array<V, 3> out{};
  for (int a = 0; a < chart.dim(); ++a) out[a] = first(f, p, a, chart.fd_step(a));
  return out;
}

template <class F>
auto hessian(const F& f, const Point& p, const Chart& chart) {
  using V = std::decay_t<decltype(f(p))>;
  std::array<std::array<V, 3>, 3> out{};
  for (int a = 0; a < chart.dim(); ++a) {
    out[a][a] = second(f, p, a, chart.fd_step(a));
    for (int b = 0; b < a; ++b) {
      out[a][b] = mixed(f, p, a, b, chart.fd_step(a), chart.fd_step(b));
      out[b][a] = out[a][b];
    }
  }
  return out;
}

// Derivative of a scalar function of one variable.
template <class F>
double derivative(const F& f, double x, double h) {
  return (f(x - 2.0 * h) - f(x + 2.0 * h) + 8.0 * (f(x + h) - f(x - h))) / (12.0 * h);
}

}  // namespace thermogeo::fd
