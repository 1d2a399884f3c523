#pragma once

// Shared numerical kernels: adaptive Gauss-Kronrod quadrature, square-root
// endpoint singularities, bracketed inversion of monotone functions,
// golden-section minimization and sign-change scanning. The adaptive
// Runge-Kutta integrator lives in ode.hpp.

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "revsphere/error.hpp"

namespace revsphere {

using ScalarFn = std::function<double(double)>;

struct Interval {
  double lo;
  double hi;

  // Throws DomainError unless lo < hi (both finite).
  Interval(double lo_, double hi_);

  [[nodiscard]] double width() const noexcept { return hi - lo; }
  [[nodiscard]] double mid() const noexcept { return 0.5 * (lo + hi); }
  [[nodiscard]] bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

struct QuadResult {
  double value = 0.0;
  double err_estimate = 0.0;  // absolute
  std::size_t evaluations = 0;
};

inline constexpr double kDefaultQuadTol = 1e-10;
inline constexpr std::size_t kDefaultPanelBudget = std::size_t{1} << 15;

// Subdivision budget exhausted before the error estimate met the tolerance.
// Carries the best estimate reached.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, QuadResult best)
      : Error(what), best_(best) {}
  [[nodiscard]] const QuadResult& best() const noexcept { return best_; }

 private:
  QuadResult best_;
};

// The weight-stripped integrand g is not finite at a square-root singular end.
class SingularityOrderError : public Error {
 public:
  using Error::Error;
};

class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

class MonotonicityError : public Error {
 public:
  using Error::Error;
};

// Globally adaptive 15-point Gauss-Kronrod quadrature of f over iv. Panels
// with the largest error estimate are bisected until the summed estimate is
// below tol or the panel budget is exhausted (QuadratureError).
QuadResult integrate_adaptive(const ScalarFn& f, Interval iv, double tol = kDefaultQuadTol,
                              std::size_t max_panels = kDefaultPanelBudget);

// Oriented form: integrates from a to b, negating when b < a.
QuadResult integrate_adaptive(const ScalarFn& f, double a, double b, double tol = kDefaultQuadTol,
                              std::size_t max_panels = kDefaultPanelBudget);

enum class SingularEnd { lower, upper, both };

// Integrates an integrand with inverse-square-root endpoint behaviour:
//   lower: g(x) / sqrt(x - lo)
//   upper: g(x) / sqrt(hi - x)
//   both:  g(x) / sqrt((x - lo) (hi - x))
// where g is finite at the singular end(s). The substitution x = lo + t^2
// (resp. hi - t^2) removes the singularity before adaptive quadrature; the
// "both" case splits at the midpoint. g is never evaluated exactly at a
// singular endpoint.
QuadResult integrate_sqrt_singular(const ScalarFn& g, Interval iv, SingularEnd end,
                                   double tol = kDefaultQuadTol,
                                   std::size_t max_panels = kDefaultPanelBudget);

// Solves f(x) = y for x in a bracket on which f is strictly monotone, by
// Illinois-modified regula falsi with a bisection safeguard. Returns x with
// |f(x) - y| <= tol * (1 + |y|), or the best x once the bracket has shrunk to
// a few ulps.
double invert_monotone(const ScalarFn& f, double y, Interval bracket, double tol = 1e-15);

struct Minimum {
  double x;
  double f;
};

// Golden-section search to a bracket width of at most tol.
Minimum minimize_scalar(const ScalarFn& f, Interval bracket, double tol = 1e-10);

using IndexPair = std::pair<std::size_t, std::size_t>;

// Adjacent pairs (i, i+1) whose values differ in sign. Exact zeros take the
// sign of the preceding sample; leading zeros carry no sign.
std::vector<IndexPair> sign_changes(std::span<const std::pair<double, double>> values);

// Uniform grid of count points on iv with both endpoints excluded by half a
// step: lo + (i + 1/2) * width / count.
std::vector<double> midpoint_grid(Interval iv, std::size_t count);

// Uniform grid of count >= 2 points including both endpoints.
std::vector<double> closed_grid(Interval iv, std::size_t count);

}  // namespace revsphere
