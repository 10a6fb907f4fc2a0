#include "thermogeo/chart.hpp"

#include "thermogeo/error.hpp"

#include <cstdlib>
#include <limits>
#include <string>

namespace thermogeo {

std::string_view to_string(CoordinateKind kind) {
  switch (kind) {
    case CoordinateKind::cartesian: return "cartesian";
    case CoordinateKind::polar: return "polar";
    case CoordinateKind::cylindrical: return "cylindrical";
    case CoordinateKind::spherical: return "spherical";
  }
  return "cartesian";
}

CoordinateKind coordinate_kind_from_string(std::string_view name) {
  if (name == "cartesian") return CoordinateKind::cartesian;
  if (name == "polar") return CoordinateKind::polar;
  if (name == "cylindrical") return CoordinateKind::cylindrical;
  if (name == "spherical") return CoordinateKind::spherical;
  throw Error(ErrorKind::InvalidArgument, "unknown coordinate kind '" + std::string(name) + "'");
}

Chart::Chart(int dim, CoordinateKind kind, std::vector<Interval> bounds, std::vector<int> grid_shape,
             DerivativeMode mode)
    : dim_(dim), kind_(kind), bounds_(std::move(bounds)), shape_(std::move(grid_shape)), mode_(mode) {
  if (dim_ != 2 && dim_ != 3) throw Error(ErrorKind::DimensionMismatch, "chart dimension must be 2 or 3");
  if (kind_ == CoordinateKind::polar && dim_ != 2)
    throw Error(ErrorKind::DimensionMismatch, "polar charts are 2-dimensional");
  if ((kind_ == CoordinateKind::cylindrical || kind_ == CoordinateKind::spherical) && dim_ != 3)
    throw Error(ErrorKind::DimensionMismatch, "cylindrical and spherical charts are 3-dimensional");
  if (static_cast<int>(bounds_.size()) != dim_ || static_cast<int>(shape_.size()) != dim_)
    throw Error(ErrorKind::DimensionMismatch, "bounds and grid_shape need one entry per axis");
  const int minimum = mode_ == DerivativeMode::grid ? 5 : 3;
  for (int a = 0; a < dim_; ++a) {
    if (!(bounds_[a].hi > bounds_[a].lo))
      throw Error(ErrorKind::InvalidArgument, "empty interval on axis " + std::to_string(a));
    if (shape_[a] < minimum)
      throw Error(ErrorKind::StencilOutOfBounds, "axis " + std::to_string(a) + " has " +
                                                     std::to_string(shape_[a]) + " nodes, need at least " +
                                                     std::to_string(minimum));
  }
}

Chart Chart::box(int dim, double lo, double hi, int n, DerivativeMode mode) {
  return Chart(dim, CoordinateKind::cartesian, std::vector<Interval>(dim, Interval{lo, hi}),
               std::vector<int>(dim, n), mode);
}

std::size_t Chart::sample_count() const {
  std::size_t n = 1;
  for (int s : shape_) n *= static_cast<std::size_t>(s);
  return n;
}

double Chart::spacing(int axis) const { return bounds_[axis].length() / (shape_[axis] - 1); }

double Chart::fd_step(int axis) const {
  if (mode_ == DerivativeMode::grid) return spacing(axis);
  return std::min(spacing(axis) / 4.0, 2e-3 * bounds_[axis].length());
}

int Chart::band(int nesting) const { return mode_ == DerivativeMode::grid ? 2 * nesting : 1; }

Point Chart::node(const std::array<int, 3>& index) const {
  Point p = Point::Zero();
  for (int a = 0; a < dim_; ++a) {
    // Endpoints are hit exactly so periodic seams and boundary checks stay clean.
    if (index[a] == shape_[a] - 1)
      p[a] = bounds_[a].hi;
    else
      p[a] = bounds_[a].lo + index[a] * spacing(a);
  }
  return p;
}

std::vector<Point> Chart::samples() const { return interior_samples(0); }

std::vector<Point> Chart::interior_samples(int band) const {
  std::array<int, 3> lo{0, 0, 0}, hi{1, 1, 1};
  for (int a = 0; a < dim_; ++a) {
    lo[a] = band;
    hi[a] = shape_[a] - band;
    if (hi[a] <= lo[a])
      throw Error(ErrorKind::StencilOutOfBounds, "grid too small for a boundary band of " + std::to_string(band));
  }
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(hi[0] - lo[0]) * (hi[1] - lo[1]) * (hi[2] - lo[2]));
  std::array<int, 3> idx{0, 0, 0};
  for (idx[0] = lo[0]; idx[0] < hi[0]; ++idx[0])
    for (idx[1] = lo[1]; idx[1] < hi[1]; ++idx[1])
      for (idx[2] = lo[2]; idx[2] < hi[2]; ++idx[2]) out.push_back(node(idx));
  return out;
}

bool Chart::contains(const Point& p, double slack) const {
  for (int a = 0; a < dim_; ++a) {
    const double s = slack * bounds_[a].length();
    if (p[a] < bounds_[a].lo - s || p[a] > bounds_[a].hi + s) return false;
  }
  return true;
}

Point Chart::to_cartesian(const Point& p) const {
  switch (kind_) {
    case CoordinateKind::cartesian: return p;
    case CoordinateKind::polar: return Point(p[0] * std::cos(p[1]), p[0] * std::sin(p[1]), 0.0);
    case CoordinateKind::cylindrical: return Point(p[0] * std::cos(p[1]), p[0] * std::sin(p[1]), p[2]);
    case CoordinateKind::spherical:
      return Point(p[0] * std::sin(p[1]) * std::cos(p[2]), p[0] * std::sin(p[1]) * std::sin(p[2]),
                   p[0] * std::cos(p[1]));
  }
  return p;
}

double Chart::diameter() const {
  if (kind_ == CoordinateKind::cartesian) {
    double s = 0.0;
    for (int a = 0; a < dim_; ++a) s += bounds_[a].length() * bounds_[a].length();
    return std::sqrt(s);
  }
  constexpr int n = 33;
  Point lo = Point::Constant(std::numeric_limits<double>::infinity());
  Point hi = -lo;
  std::array<int, 3> idx{0, 0, 0};
  std::array<int, 3> top{1, 1, 1};
  for (int a = 0; a < dim_; ++a) top[a] = n;
  for (idx[0] = 0; idx[0] < top[0]; ++idx[0])
    for (idx[1] = 0; idx[1] < top[1]; ++idx[1])
      for (idx[2] = 0; idx[2] < top[2]; ++idx[2]) {
        Point q = Point::Zero();
        for (int a = 0; a < dim_; ++a) q[a] = bounds_[a].lo + bounds_[a].length() * idx[a] / (n - 1);
        const Point x = to_cartesian(q);
        lo = lo.cwiseMin(x);
        hi = hi.cwiseMax(x);
      }
  return (hi - lo).head(dim_).norm();
}

Chart Chart::with_mode(DerivativeMode mode) const { return Chart(dim_, kind_, bounds_, shape_, mode); }

Chart Chart::with_grid(std::vector<int> grid_shape) const {
  return Chart(dim_, kind_, bounds_, std::move(grid_shape), mode_);
}

bool Chart::same_region(const Chart& other) const {
  if (dim_ != other.dim_ || kind_ != other.kind_) return false;
  for (int a = 0; a < dim_; ++a) {
    const double tol = 1e-12 * (1.0 + std::abs(bounds_[a].lo) + std::abs(bounds_[a].hi));
    if (std::abs(bounds_[a].lo - other.bounds_[a].lo) > tol || std::abs(bounds_[a].hi - other.bounds_[a].hi) > tol)
      return false;
  }
  return true;
}

void require_same_region(const Chart& a, const Chart& b, std::string_view what) {
  if (!a.same_region(b)) throw Error(ErrorKind::ChartMismatch, std::string(what) + " live on different charts");
}

double resolve_tolerance(std::optional<double> explicit_value, double fallback) {
  if (explicit_value) return *explicit_value;
  if (const char* env = std::getenv("THERMOGEO_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v > 0.0) return v;
  }
  return fallback;
}

double flatness_tolerance(const Chart& chart, std::optional<double> explicit_value) {
  if (chart.mode() == DerivativeMode::analytic) return resolve_tolerance(explicit_value, 1e-6);
  double h = 0.0;
  for (int a = 0; a < chart.dim(); ++a) h = std::max(h, chart.spacing(a) / chart.bounds(a).length());
  // Truncation constant calibrated on flat conformal factors of unit-scale charts.
  constexpr double calibration = 1e3;
  return resolve_tolerance(explicit_value, std::max(1e-6, calibration * std::pow(h, 4)));
}

}  // namespace thermogeo
