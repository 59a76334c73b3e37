#include "thzqs/numerics.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "thzqs/constants.hpp"

namespace thzqs {

double sinc(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
  }
  return std::sin(x) / x;
}

double bessel_i0_scaled(double x) {
  const double ax = std::abs(x);
  if (ax < 3.75) {
    const double t = x / 3.75;
    const double t2 = t * t;
    const double i0 =
        1.0 +
        t2 * (3.5156229 +
              t2 * (3.0899424 +
                    t2 * (1.2067492 +
                          t2 * (0.2659732 + t2 * (0.0360768 + t2 * 0.0045813)))));
    return i0 * std::exp(-ax);
  }
  const double t = 3.75 / ax;
  const double p =
      0.39894228 +
      t * (0.01328592 +
           t * (0.00225319 +
                t * (-0.00157565 +
                     t * (0.00916281 +
                          t * (-0.02057706 +
                               t * (0.02635537 +
                                    t * (-0.01647633 + t * 0.00392377)))))));
  return p / std::sqrt(ax);
}

namespace {

GaussLegendre compute_gauss_legendre(int n) {
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(constants::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussLegendre& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  static std::mutex mutex;
  static std::map<int, GaussLegendre> cache;
  std::scoped_lock lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 int n) {
  const auto& rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return sum * half;
}

CubicSpline::CubicSpline(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
  const std::size_t n = x_.size();
  if (n < 3) throw std::invalid_argument("CubicSpline: need >= 3 points");
  for (std::size_t i = 1; i < n; ++i)
    if (x_[i] <= x_[i - 1])
      throw std::invalid_argument("CubicSpline: abscissae must increase");

  // Tridiagonal solve for natural boundary conditions.
  m_.assign(n, 0.0);
  std::vector<double> diag(n, 0.0), rhs(n, 0.0), sub(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1];
    const double h1 = x_[i + 1] - x_[i];
    sub[i] = h0;
    diag[i] = 2.0 * (h0 + h1);
    rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
  }
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double h = x_[i] - x_[i - 1];
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * h;
    rhs[i] -= w * rhs[i - 1];
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    const double h = x_[i + 1] - x_[i];
    m_[i] = (rhs[i] - h * m_[i + 1]) / diag[i];
    if (i == 1) break;
  }
}

double CubicSpline::operator()(double x) const {
  if (x_.empty()) throw std::logic_error("CubicSpline: empty");
  std::size_t lo = 0, hi = x_.size() - 1;
  if (x <= x_.front()) {
    hi = 1;
  } else if (x >= x_.back()) {
    lo = x_.size() - 2;
  } else {
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (x_[mid] <= x ? lo : hi) = mid;
    }
  }
  const double h = x_[lo + 1] - x_[lo];
  const double a = (x_[lo + 1] - x) / h;
  const double b = (x - x_[lo]) / h;
  return a * y_[lo] + b * y_[lo + 1] +
         ((a * a * a - a) * m_[lo] + (b * b * b - b) * m_[lo + 1]) * h * h /
             6.0;
}

}  // namespace thzqs
