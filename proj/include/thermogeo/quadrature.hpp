#pragma once

#include <cstddef>
#include <functional>

namespace thermogeo {

struct SimpsonOptions {
  double abs_tol = 1e-10;
  std::size_t max_subdivisions = std::size_t{1} << 20;
};

// Adaptive Simpson rule; throws QuadratureFailure when the subdivision budget runs out
// or the integrand is not finite.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, SimpsonOptions options = {});

// Composite 5-point Gauss-Legendre rule on equal panels.
double gauss_legendre(const std::function<double(double)>& f, double a, double b, std::size_t panels = 1);

}  // namespace thermogeo
