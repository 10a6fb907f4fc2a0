#pragma once

#include "thermogeo/tensor.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace thermogeo {

enum class CoordinateKind { cartesian, polar, cylindrical, spherical };

// analytic: exact partials when a field supplies them, otherwise fine central differences.
// grid: every derivative is a 4th-order stencil on the chart's grid nodes.
enum class DerivativeMode { analytic, grid };

std::string_view to_string(CoordinateKind kind);
CoordinateKind coordinate_kind_from_string(std::string_view name);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double length() const { return hi - lo; }
};

class Chart {
 public:
  Chart(int dim, CoordinateKind kind, std::vector<Interval> bounds, std::vector<int> grid_shape,
        DerivativeMode mode = DerivativeMode::analytic);

  static Chart box(int dim, double lo, double hi, int n, DerivativeMode mode = DerivativeMode::analytic);

  int dim() const { return dim_; }
  CoordinateKind kind() const { return kind_; }
  DerivativeMode mode() const { return mode_; }
  const Interval& bounds(int axis) const { return bounds_[axis]; }
  int grid_shape(int axis) const { return shape_[axis]; }
  std::size_t sample_count() const;

  double spacing(int axis) const;
  // Step used by central differences along `axis`.
  double fd_step(int axis) const;
  // Width (in grid nodes) of the boundary band excluded when derivatives of `order` nesting are taken.
  int band(int nesting = 1) const;

  Point node(const std::array<int, 3>& index) const;
  std::vector<Point> samples() const;
  std::vector<Point> interior_samples(int band) const;
  bool contains(const Point& p, double slack = 0.0) const;

  // Image of chart coordinates in Euclidean space of the same dimension.
  Point to_cartesian(const Point& p) const;
  // Bounding-box diagonal of the chart image.
  double diameter() const;

  Chart with_mode(DerivativeMode mode) const;
  Chart with_grid(std::vector<int> grid_shape) const;

  // Same dimension, kind and bounds (grid resolution and mode may differ).
  bool same_region(const Chart& other) const;

 private:
  int dim_;
  CoordinateKind kind_;
  std::vector<Interval> bounds_;
  std::vector<int> shape_;
  DerivativeMode mode_;
};

void require_same_region(const Chart& a, const Chart& b, std::string_view what);

// Tolerance resolution order: explicit value, THERMOGEO_TOL, fallback.
double resolve_tolerance(std::optional<double> explicit_value, double fallback);

// Threshold on sup|residual| * diam^2 below which a field counts as flat.
double flatness_tolerance(const Chart& chart, std::optional<double> explicit_value = std::nullopt);

}  // namespace thermogeo
