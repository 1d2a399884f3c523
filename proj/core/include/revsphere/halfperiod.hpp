#pragma once

// Half-period function of a reflection-symmetric sphere of revolution: the
// theta-advance of a geodesic with Clairaut constant nu between consecutive
// turning points,
//   phi(nu) = 2 * integral_{m^-1(nu)}^{pi/2} nu / (m sqrt(m^2 - nu^2)) dx,
// and the monotonicity criteria for it.

#include <cstddef>
#include <string>
#include <vector>

#include "revsphere/numerics.hpp"
#include "revsphere/profiles.hpp"

namespace revsphere {

// A(x) = sqrt(a^2 - m(x)^2) / m'(x) from the definition, with the endpoint
// limits A(0) = a and A(pi/2) = sqrt(a / -m''(pi/2)). Throws
// CriterionInapplicable if m' <= 0 inside (0, pi/2).
double a_function(const MetricProfile& p, double x);

struct HalfPeriod {
  double phi;
  double err;
};

// Desingularized form: with u = (nu a)^2 / (a^2 cos^2 s + nu^2 sin^2 s),
//   phi(nu) = (2 / a) * integral_0^{pi/2} A(m^-1(sqrt u)) ds,
// a smooth integrand on a finite interval. Requires 0 < nu < a.
HalfPeriod half_period(const MetricProfile& p, double nu, double tol = kDefaultQuadTol);

// The defining integral with its square-root singularity at m^-1(nu) removed
// by substitution. Independent check of half_period; loses accuracy as
// nu -> a. Requires 0 < nu < a (1 - 1e-3).
HalfPeriod half_period_direct(const MetricProfile& p, double nu, double tol = kDefaultQuadTol);

enum class Monotonicity { strictly_decreasing, strictly_increasing, constant, neither };

std::string to_string(Monotonicity m);

struct MonotonicityCheck {
  Monotonicity direction;
  // Largest step against the reported direction; for constant the largest
  // step; for neither the smaller of the largest rise and the largest fall.
  double worst_violation;
  std::size_t grid_size;
};

// Direction of A on a midpoint grid of (0, pi/2).
MonotonicityCheck criterion_a_monotone(const MetricProfile& p, std::size_t grid_size);

// Direction of -m''/m (the curvature) on a midpoint grid of (0, pi/2).
MonotonicityCheck criterion_ff(const MetricProfile& p, std::size_t grid_size);

struct HalfPeriodEntry {
  double nu;
  double phi;
  double err;
};

struct HalfPeriodTable {
  std::vector<HalfPeriodEntry> entries;
  bool strictly_decreasing;
  double worst_margin;      // min over adjacent pairs of phi_i - phi_{i+1}
  double worst_margin_ratio;  // min of (phi_i - phi_{i+1}) / (err_i + err_{i+1})
};

// phi on count uniform points of [a/100, a (1 - 1/100)]. Strictly decreasing
// means every adjacent drop exceeds the summed error estimates.
HalfPeriodTable monotonicity_report(const MetricProfile& p, std::size_t count,
                                    double tol = kDefaultQuadTol);

}  // namespace revsphere
