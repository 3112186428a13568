#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using big = boost::multiprecision::cpp_bin_float_50;

inline double domain_half_width(double gamma, double alpha, double eps, double theta) {
  const big g = gamma, a = alpha, e = eps, t = theta;
  const big r = sqrt((g - big(0.5)) / (2 * (g - a))) * pow(abs(log(e)), t);
  return r.convert_to<double>();
}

// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// Root of L - tanh L = 1 by bisection.
inline double steady_support_half_length() {
  double lo = 1.0, hi = 3.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (mid - std::tanh(mid) - 1.0 > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// Minimizer for gamma = 2, W = -|x| + x^2/2, unit mass.
inline double steady_profile(double x) {
  const double L = steady_support_half_length();
  return std::abs(x) < L ? 0.5 * (1.0 - std::cosh(x) / std::cosh(L)) : 0.0;
}

// Cell average of steady_profile over [x - h/2, x + h/2].
inline double steady_cell_average(double x, double h) {
  const double L = steady_support_half_length();
  const double a = std::max(x - 0.5 * h, -L), b = std::min(x + 0.5 * h, L);
  if (b <= a) return 0.0;
  const double integral = 0.5 * (b - a) - 0.5 * (std::sinh(b) - std::sinh(a)) / std::cosh(L);
  return integral / h;
}

// g[i] = dx sum_j K(x_i - x_j) f[j], straight from the kernel.
inline std::vector<double> convolve(const std::vector<double>& x, double dx, const std::function<double(double)>& K,
                                    std::span<const double> f) {
  std::vector<double> g(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    long double s = 0.0L;
    for (std::size_t j = 0; j < x.size(); ++j) s += static_cast<long double>(K(x[i] - x[j])) * f[j];
    g[i] = static_cast<double>(s) * dx;
  }
  return g;
}

inline double alignment_double_sum(const std::vector<double>& x, double dx, const std::function<double(double)>& phi,
                                   std::span<const double> rho, std::span<const double> u) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double d = u[i] - u[j];
      s += static_cast<long double>(phi(x[i] - x[j])) * d * d * rho[i] * rho[j];
    }
  return 0.5 * dx * dx * static_cast<double>(s);
}

}  // namespace oracle
