#pragma once

// Test-side reference computations. Nothing here calls into the library, so a
// library result checked against these is checked against an independent
// method.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

// Composite Simpson rule with panels (even) subintervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, std::size_t panels) {
  if (panels % 2) ++panels;
  const double h = (b - a) / static_cast<double>(panels);
  double sum = f(a) + f(b);
  for (std::size_t i = 1; i < panels; ++i) sum += f(a + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

// Composite Gauss-Legendre, 5 nodes per panel. Never evaluates the endpoints.
inline double gauss5(const std::function<double(double)>& f, double a, double b, std::size_t panels) {
  static constexpr double x[5] = {0.0, 0.5384693101056831, -0.5384693101056831, 0.9061798459386640,
                                  -0.9061798459386640};
  static constexpr double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                  0.2369268850561891, 0.2369268850561891};
  const double h = (b - a) / static_cast<double>(panels);
  double sum = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + h * (static_cast<double>(p) + 0.5);
    for (int k = 0; k < 5; ++k) sum += w[k] * f(mid + 0.5 * h * x[k]);
  }
  return sum * h / 2.0;
}

// Five-point centred differences.
inline double d1(const std::function<double(double)>& f, double x, double h) {
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}
inline double d2(const std::function<double(double)>& f, double x, double h) {
  return (-f(x - 2 * h) + 16 * f(x - h) - 30 * f(x) + 16 * f(x + h) - f(x + 2 * h)) / (12 * h * h);
}
inline double d3(const std::function<double(double)>& f, double x, double h) {
  return (f(x + 2 * h) - 2 * f(x + h) + 2 * f(x - h) - f(x - 2 * h)) / (2 * h * h * h);
}

// Plain bisection on a sign change.
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// m for the lambda family, written out independently of the library.
inline double lambda_m(double lambda, double r) {
  return std::sqrt(lambda + 1) * std::sin(r) / std::sqrt(1 + lambda * std::cos(r) * std::cos(r));
}

// h(x) = x - alpha sin 2x + sin^2 2x sin(2 n^2 x) / n^5.
inline double theorem_h(double alpha, int n, double x) {
  const double s2 = std::sin(2 * x);
  return x - alpha * s2 + (n ? s2 * s2 * std::sin(2.0 * n * n * x) / std::pow(n, 5) : 0.0);
}

// Geodesic field in (r, theta, psi) integrated with classical RK4 at a fixed step.
struct Rk4Geodesic {
  std::function<double(double)> m;
  std::function<double(double)> dm;
  double r, theta, psi;

  void advance(double length, std::size_t steps) {
    const double h = length / static_cast<double>(steps);
    auto f = [&](double rr, double pp, double out[3]) {
      const double mm = m(rr);
      out[0] = std::cos(pp);
      out[1] = std::sin(pp) / mm;
      out[2] = -dm(rr) * std::sin(pp) / mm;
    };
    for (std::size_t i = 0; i < steps; ++i) {
      double k1[3], k2[3], k3[3], k4[3];
      f(r, psi, k1);
      f(r + h / 2 * k1[0], psi + h / 2 * k1[2], k2);
      f(r + h / 2 * k2[0], psi + h / 2 * k2[2], k3);
      f(r + h * k3[0], psi + h * k3[2], k4);
      r += h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
      theta += h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
      psi += h / 6 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2]);
    }
  }
};

}  // namespace oracle

namespace oracle {

// h'(x) for the generator above, differentiated by hand.
inline double theorem_h_prime(double alpha, int n, double x) {
  double out = 1 - 2 * alpha * std::cos(2 * x);
  if (n) {
    const double k = 2.0 * n * n;
    const double s2 = std::sin(2 * x);
    out += (2 * std::sin(4 * x) * std::sin(k * x) + s2 * s2 * k * std::cos(k * x)) / std::pow(n, 5);
  }
  return out;
}

}  // namespace oracle

namespace oracle {

inline double theorem_h_second(double alpha, int n, double x) {
  double out = 4 * alpha * std::sin(2 * x);
  if (n) {
    const double k = 2.0 * n * n;
    const double s2 = std::sin(2 * x);
    const double b = s2 * s2, b1 = 2 * std::sin(4 * x), b2 = 8 * std::cos(4 * x);
    out += (b2 * std::sin(k * x) + 2 * b1 * k * std::cos(k * x) - b * k * k * std::sin(k * x)) / std::pow(n, 5);
  }
  return out;
}

// Curvature of a sin h: h'^2 - cot(h) h''.
inline double theorem_curvature(double alpha, int n, double x) {
  const double h = theorem_h(alpha, n, x);
  const double h1 = theorem_h_prime(alpha, n, x);
  return h1 * h1 - std::cos(h) / std::sin(h) * theorem_h_second(alpha, n, x);
}

}  // namespace oracle
