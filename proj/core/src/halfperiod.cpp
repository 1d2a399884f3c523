#include "revsphere/halfperiod.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "revsphere/parallel.hpp"

namespace revsphere {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// m^-1(y) on [0, pi/2].
double inverse_m(const MetricProfile& p, double y) {
  const double top = p.m(kPi / 2);
  if (y >= top) return kPi / 2;
  if (y <= 0.0) return 0.0;
  return invert_monotone([&p](double x) { return p.m(x); }, y, Interval(0.0, kPi / 2));
}

void require_nu(const MetricProfile& p, double nu) {
  if (!(nu > 0.0 && nu < p.a())) throw DomainError("nu must lie in (0, a)");
}

MonotonicityCheck classify(const std::vector<double>& v) {
  double max_rise = 0.0;
  double max_fall = 0.0;
  bool all_down = true, all_up = true, all_flat = true;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double d = v[i] - v[i - 1];
    // A loses digits to the a - m cancellation near pi/2.
    const double flat = 1e-10 * (1.0 + std::abs(v[i]));
    max_rise = std::max(max_rise, d);
    max_fall = std::max(max_fall, -d);
    if (!(d < -flat)) all_down = false;
    if (!(d > flat)) all_up = false;
    if (std::abs(d) > flat) all_flat = false;
  }
  MonotonicityCheck out{};
  out.grid_size = v.size();
  if (all_flat) {
    out.direction = Monotonicity::constant;
    out.worst_violation = std::max(max_rise, max_fall);
  } else if (all_down) {
    out.direction = Monotonicity::strictly_decreasing;
    out.worst_violation = max_rise;
  } else if (all_up) {
    out.direction = Monotonicity::strictly_increasing;
    out.worst_violation = max_fall;
  } else {
    out.direction = Monotonicity::neither;
    out.worst_violation = std::min(max_rise, max_fall);
  }
  return out;
}

}  // namespace

double a_function(const MetricProfile& p, double x) {
  if (!(x >= 0.0 && x <= kPi / 2)) throw DomainError("a_function needs x in [0, pi/2]");
  const double a = p.a();
  if (x == 0.0) return a;
  if (x == kPi / 2) return std::sqrt(a / -p.eval(kPi / 2).d2);
  const Jet m = p.eval(x);
  if (!(m.d1 > 0.0)) throw CriterionInapplicable("m' is not positive inside (0, pi/2)");
  return std::sqrt((a - m.f) * (a + m.f)) / m.d1;
}

HalfPeriod half_period(const MetricProfile& p, double nu, double tol) {
  require_nu(p, nu);
  const double a = p.a();
  auto integrand = [&](double s) {
    const double c = std::cos(s);
    const double sn = std::sin(s);
    const double root_u = nu * a / std::sqrt(a * a * c * c + nu * nu * sn * sn);
    return p.closed_form_a(inverse_m(p, root_u));
  };
  const QuadResult q = integrate_adaptive(integrand, Interval(0.0, kPi / 2), tol * a / 2.0);
  const double phi = 2.0 / a * q.value;
  return {phi, 2.0 / a * q.err_estimate + 64.0 * kEps * phi};
}

HalfPeriod half_period_direct(const MetricProfile& p, double nu, double tol) {
  require_nu(p, nu);
  if (!(nu < p.a() * (1.0 - 1e-3))) throw DomainError("half_period_direct needs nu < a (1 - 1e-3)");
  const double x0 = inverse_m(p, nu);
  const Jet m0 = p.eval(x0);
  // (m(x) - m(x0)) / (x - x0), by Taylor expansion where the difference cancels.
  auto slope = [&](double x) {
    const double d = x - x0;
    if (d < 1e-6) return m0.d1 + d * (m0.d2 / 2.0 + d * m0.d3 / 6.0);
    return (p.m(x) - m0.f) / d;
  };
  auto g = [&](double x) {
    const double m = p.m(x);
    return nu / (m * std::sqrt((m + m0.f) * slope(x)));
  };
  const QuadResult q = integrate_sqrt_singular(g, Interval(x0, kPi / 2), SingularEnd::lower, tol / 2.0);
  const double phi = 2.0 * q.value;
  return {phi, 2.0 * q.err_estimate + 64.0 * kEps * phi};
}

std::string to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::strictly_decreasing: return "strictly-decreasing";
    case Monotonicity::strictly_increasing: return "strictly-increasing";
    case Monotonicity::constant: return "constant";
    case Monotonicity::neither: return "neither";
  }
  return "neither";
}

MonotonicityCheck criterion_a_monotone(const MetricProfile& p, std::size_t grid_size) {
  std::vector<double> v;
  v.reserve(grid_size);
  for (double x : midpoint_grid(Interval(0.0, kPi / 2), grid_size)) v.push_back(a_function(p, x));
  return classify(v);
}

MonotonicityCheck criterion_ff(const MetricProfile& p, std::size_t grid_size) {
  std::vector<double> v;
  v.reserve(grid_size);
  for (double x : midpoint_grid(Interval(0.0, kPi / 2), grid_size)) {
    const Jet m = p.eval(x);
    v.push_back(-m.d2 / m.f);
  }
  return classify(v);
}

HalfPeriodTable monotonicity_report(const MetricProfile& p, std::size_t count, double tol) {
  if (count < 2) throw DomainError("monotonicity_report needs at least two points");
  const double a = p.a();
  const std::vector<double> nus = closed_grid(Interval(a / 100.0, a * (1.0 - 1.0 / 100.0)), count);
  HalfPeriodTable table{};
  table.entries.resize(count);
  parallel_for(count, [&](std::size_t i) {
    const HalfPeriod hp = half_period(p, nus[i], tol);
    table.entries[i] = {nus[i], hp.phi, hp.err};
  });

  table.strictly_decreasing = true;
  table.worst_margin = std::numeric_limits<double>::infinity();
  table.worst_margin_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < count; ++i) {
    const auto& prev = table.entries[i - 1];
    const auto& cur = table.entries[i];
    const double drop = prev.phi - cur.phi;
    const double noise = prev.err + cur.err;
    table.worst_margin = std::min(table.worst_margin, drop);
    table.worst_margin_ratio = std::min(table.worst_margin_ratio, drop / noise);
    if (!(drop > noise)) table.strictly_decreasing = false;
  }
  return table;
}

}  // namespace revsphere
