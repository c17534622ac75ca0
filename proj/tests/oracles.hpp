#pragma once

// Independent oracles for the test suites. Everything here recomputes
// expected values by direct summation or closed-form antiderivatives in
// long double, without touching the library's own gap or quadrature paths.

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace oracle {

using Fn = std::function<long double(long double)>;

inline double expectation(std::span<const double> w, std::span<const double> x) {
  long double e = 0.0L;
  for (std::size_t i = 0; i < w.size(); ++i) e += static_cast<long double>(w[i]) * x[i];
  return static_cast<double>(e);
}

inline double jensen_gap(std::span<const double> w, std::span<const double> x,
                         const Fn& phi) {
  long double e_phi = 0.0L, mean = 0.0L;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] <= 0.0) continue;
    e_phi += static_cast<long double>(w[i]) * phi(x[i]);
    mean += static_cast<long double>(w[i]) * x[i];
  }
  return static_cast<double>(e_phi - phi(mean));
}

inline double variance(std::span<const double> w, std::span<const double> x) {
  return jensen_gap(w, x, [](long double t) { return t * t; });
}

inline double amgm_gap(std::span<const double> w, std::span<const double> x) {
  long double mean = 0.0L, logmean = 0.0L;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] <= 0.0) continue;
    mean += static_cast<long double>(w[i]) * x[i];
    logmean += static_cast<long double>(w[i]) * std::log(static_cast<long double>(x[i]));
  }
  return static_cast<double>(mean - std::exp(logmean));
}

/// Closed-form integral of t^e over [a, b] (e != -1), or log(b/a) for e = -1.
inline double power_integral(double a, double b, double e) {
  if (e == -1.0) return std::log(b / a);
  return (std::pow(b, e + 1.0) - std::pow(a, e + 1.0)) / (e + 1.0);
}

inline double normal_pdf(double x, double sigma, double mean = 0.0) {
  const long double z = (static_cast<long double>(x) - mean) / sigma;
  return static_cast<double>(std::exp(-0.5L * z * z) /
                             (sigma * std::sqrt(2.0L * M_PIl)));
}

/// Composite Simpson, for cross-checking smooth quadrature results through a
/// different rule entirely.
inline double simpson(const Fn& f, double a, double b, int panels = 4096) {
  const long double h = (static_cast<long double>(b) - a) / panels;
  long double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) {
    s += (i % 2 ? 4.0L : 2.0L) * f(a + i * h);
  }
  return static_cast<double>(s * h / 3.0L);
}

}  // namespace oracle
