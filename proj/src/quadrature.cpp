#include "thermogeo/quadrature.hpp"

#include "thermogeo/error.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <string>

namespace thermogeo {

namespace {

struct SimpsonState {
  const std::function<double(double)>& f;
  std::size_t budget;
  std::size_t used = 0;
};

double finite_or_throw(double v, double x) {
  if (!std::isfinite(v)) throw Error(ErrorKind::QuadratureFailure, "integrand not finite at " + std::to_string(x));
  return v;
}

double refine(SimpsonState& s, double a, double b, double fa, double fm, double fb, double whole, double tol,
              int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = finite_or_throw(s.f(lm), lm);
  const double frm = finite_or_throw(s.f(rm), rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (++s.used > s.budget || depth > 60)
    throw Error(ErrorKind::QuadratureFailure, "adaptive Simpson exceeded its subdivision budget");
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return refine(s, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         refine(s, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, SimpsonOptions options) {
  if (a == b) return 0.0;
  SimpsonState s{f, options.max_subdivisions};
  const double fa = finite_or_throw(f(a), a);
  const double fb = finite_or_throw(f(b), b);
  const double m = 0.5 * (a + b);
  const double fm = finite_or_throw(f(m), m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return refine(s, a, b, fa, fm, fb, whole, options.abs_tol, 0);
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b, std::size_t panels) {
  if (panels == 0) throw Error(ErrorKind::InvalidArgument, "need at least one quadrature panel");
  const double h = (b - a) / static_cast<double>(panels);
  double sum = 0.0;
  for (std::size_t i = 0; i < panels; ++i) {
    const double lo = a + h * static_cast<double>(i);
    const double hi = i + 1 == panels ? b : lo + h;
    sum += boost::math::quadrature::gauss<double, 5>::integrate(f, lo, hi);
  }
  return sum;
}

}  // namespace thermogeo
