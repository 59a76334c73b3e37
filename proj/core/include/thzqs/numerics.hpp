#ifndef THZQS_NUMERICS_HPP
#define THZQS_NUMERICS_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace thzqs {

/// sin(x)/x with the removable singularity handled by a series.
double sinc(double x);

/// Exponentially scaled modified Bessel function exp(-|x|) * I0(x).
/// Accurate to ~2e-7 relative (Abramowitz & Stegun 9.8.1/9.8.2), which is
/// ample for angular-density evaluation.
double bessel_i0_scaled(double x);

/// Gauss-Legendre rule on [-1, 1]. Rules are computed once per order and
/// cached; lookup is thread-safe.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int n);

/// Integrate f over [a, b] with an n-point Gauss-Legendre rule.
double integrate(const std::function<double(double)>& f, double a, double b,
                 int n);

/// Natural cubic spline through strictly increasing abscissae.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::span<const double> x, std::span<const double> y);

  double operator()(double x) const;
  bool empty() const { return x_.empty(); }
  double front() const { return x_.front(); }
  double back() const { return x_.back(); }

 private:
  std::vector<double> x_, y_, m_;  // m_: second derivatives at the knots
};

}  // namespace thzqs

#endif
