#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "cli.hpp"
#include "output.hpp"
#include "revsphere/curvature.hpp"
#include "revsphere/geodesics.hpp"
#include "revsphere/halfperiod.hpp"

namespace revsphere::cli {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kSeed = 0x5eed2fa11ULL;

struct CheckResult {
  bool passed = true;
  Json metrics = Json::object();

  // Records value under name and fails the check unless value <= bound.
  void at_most(const std::string& name, double value, double bound) {
    metrics[name] = {{"value", value}, {"bound", bound}};
    if (!(value <= bound)) passed = false;
  }
  void require(const std::string& name, bool ok) {
    metrics[name] = ok;
    if (!ok) passed = false;
  }
};

using CheckFn = std::function<CheckResult(const RunConfig&)>;

CheckResult sphere_half_period(const RunConfig&) {
  const MetricProfile p = make_unit_sphere();
  double worst = 0.0, worst_direct = 0.0;
  for (int i = 1; i <= 9; ++i) {
    const double nu = 0.1 * i;
    const double phi = half_period(p, nu).phi;
    worst = std::max(worst, std::abs(phi - kPi));
    worst_direct = std::max(worst_direct, std::abs(half_period_direct(p, nu).phi - phi));
  }
  CheckResult r;
  r.at_most("max_abs_phi_minus_pi", worst, 1e-7);
  r.at_most("max_abs_direct_minus_phi", worst_direct, 1e-6);
  return r;
}

CheckResult lambda_decreasing(const RunConfig&) {
  CheckResult r;
  for (double lambda : {1.0, 4.0, 10.0}) {
    const HalfPeriodTable t = monotonicity_report(make_lambda_profile(lambda), 50);
    const std::string key = "lambda_" + format_real(lambda);
    r.require(key + "_strictly_decreasing", t.strictly_decreasing);
    r.metrics[key + "_worst_margin"] = t.worst_margin;
    r.metrics[key + "_worst_margin_ratio"] = {{"value", t.worst_margin_ratio}, {"min", 10.0}};
    if (!(t.worst_margin_ratio > 10.0)) r.passed = false;
  }
  return r;
}

CheckResult a_closed_forms(const RunConfig&) {
  const std::vector<double> xs = midpoint_grid(Interval(0.0, kPi / 2), 100);
  auto worst_gap = [&](const MetricProfile& p) {
    double w = 0.0;
    for (double x : xs) w = std::max(w, std::abs(p.closed_form_a(x) - a_function(p, x)));
    return w;
  };
  double lambda_gap = 0.0;
  for (double lambda : {1.0, 4.0, 10.0}) lambda_gap = std::max(lambda_gap, worst_gap(make_lambda_profile(lambda)));
  double h_gap = 0.0;
  for (const MetricProfile& p : {make_h_profile(HGenerator(0.25, 0)), make_h_profile(HGenerator(1.0 / 3.0, 0)),
                                 make_theorem_a(8)})
    h_gap = std::max(h_gap, worst_gap(p));
  CheckResult r;
  r.at_most("lambda_max_abs_gap", lambda_gap, 1e-9);
  r.at_most("h_max_abs_gap", h_gap, 1e-9);
  return r;
}

CheckResult curvature_min(const RunConfig& cfg) {
  double lambda = 8.0;
  if (cfg.family.name == "lambda") lambda = build_profile(cfg.family).lambda();
  if (!(lambda > 2.0)) throw UsageError("curvature-min needs lambda > 2");
  const MetricProfile p = make_lambda_profile(lambda);
  const Minimum m = minimize_scalar([&p](double x) { return gaussian_curvature(p, x); },
                                    Interval(1e-3, kPi / 2 - 1e-3), 1e-12);
  const double expected = std::acos(std::sqrt(2.0 / lambda));
  CheckResult r;
  r.metrics["lambda"] = lambda;
  r.metrics["minimizer"] = m.x;
  r.metrics["expected"] = expected;
  r.at_most("abs_deviation", std::abs(m.x - expected), 1e-6);
  return r;
}

CheckResult sin_multiple(const RunConfig& cfg) {
  if (cfg.n_max < 1) throw UsageError("--n-max must be at least 1");
  CheckResult r;
  r.metrics["n_max"] = cfg.n_max;
  r.at_most("max_excess", sin_multiple_bound_check(cfg.n_max, 1000), 1e-12);
  return r;
}

CheckResult derivative_bounds(const RunConfig&) {
  const BFunction b = BFunction::sin2sq();
  const int n0 = find_minimal_n0(1.0 / 3.0, b, 2.0, 200);
  double sup1 = 0.0, sup2 = 0.0;
  for (int n = n0 + 1; n <= n0 + 20; ++n) {
    const SupBounds s = derivative_sup_bounds(HGenerator(1.0 / 3.0, n, b), 4000);
    sup1 = std::max(sup1, s.sup_h1);
    sup2 = std::max(sup2, s.sup_h2);
  }
  CheckResult r;
  r.metrics["n0"] = n0;
  r.at_most("sup_h1", sup1, 2.0);
  r.at_most("sup_h2", sup2, 2.0);
  return r;
}

CheckResult derivative_identity(const RunConfig&) {
  const HGenerator gen(1.0 / 3.0, 6);
  const MetricProfile p = make_h_profile(gen);
  constexpr double step = 1e-5;
  double worst = 0.0;
  for (double x : closed_grid(Interval(0.1, 1.4), 2001)) {
    const double exact = curvature_derivative(gen, x);
    const double fd = (gaussian_curvature(p, x + step) - gaussian_curvature(p, x - step)) / (2.0 * step);
    worst = std::max(worst, std::abs(exact - fd) / std::max(std::abs(exact), 1.0));
  }
  CheckResult r;
  r.at_most("max_relative_deviation", worst, 1e-5);
  return r;
}

CheckResult h3_closed_form(const RunConfig&) {
  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<int> pick_n(2, 20);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int n = pick_n(rng);
    const int k = std::uniform_int_distribution<int>(1, n * n)(rng);
    const HGenerator gen(1.0 / 3.0, n);
    worst = std::max(worst, std::abs(h_triple_prime_at_tk(gen, k) - gen.h(t_grid_point(n, k)).d3));
  }
  CheckResult r;
  r.at_most("max_abs_gap", worst, 1e-9);
  return r;
}

CheckResult tk_alternation(const RunConfig&) {
  const TkDiagnostics d = tk_diagnostics(HGenerator(1.0 / 3.0, 12), Interval(0.6, 0.9), 0.5);
  double worst_eps = 0.0, worst_f = 0.0;
  for (const TkSample& s : d.samples) {
    if (std::isfinite(s.eps)) worst_eps = std::max(worst_eps, std::abs(s.eps));
    worst_f = std::max(worst_f, std::abs(s.f));
  }
  CheckResult r;
  r.metrics["samples"] = d.samples.size();
  r.require("nonempty", !d.empty);
  r.require("alternates", d.alternates);
  r.require("sin2h_bounded", d.sin2h_bounded);
  r.require("f_bounded", d.f_bounded);
  r.metrics["max_abs_f"] = {{"value", worst_f}, {"bound", d.f_bound}};
  r.require("eps_small", d.eps_small);
  r.metrics["max_abs_eps"] = {{"value", worst_eps}, {"bound", 0.5}};
  return r;
}

CheckResult extrema_growth(const RunConfig&) {
  CheckResult r;
  std::size_t prev = 0;
  bool increasing = true;
  for (int n : {4, 8, 12}) {
    const std::size_t c = count_extrema(make_theorem_a(n), Interval(0.0, kPi / 2), 4000).count;
    r.metrics["count_n" + std::to_string(n)] = c;
    if (n > 4 && !(c > prev)) increasing = false;
    prev = c;
  }
  r.require("strictly_increasing", increasing);
  r.require("count_n12_at_least_20", prev >= 20);
  return r;
}

CheckResult cut_locus_check(const RunConfig& cfg) {
  CutOptions opts;
  opts.fan_size = cfg.fan;
  opts.directions = cfg.directions;
  CheckResult r;
  struct Case {
    const char* key;
    MetricProfile p;
    double r0;
  };
  for (const Case& c : {Case{"theorem_a_n8", make_theorem_a(8), kPi / 3}, Case{"lambda_4", make_lambda_profile(4.0), kPi / 4}}) {
    const CutLocusArc arc = cut_locus(c.p, make_point(c.r0, 0.0), opts);
    const std::string key = c.key;
    const bool all_found = std::all_of(arc.per_direction.begin(), arc.per_direction.end(),
                                       [](const CutPoint& cp) { return cp.found; });
    r.require(key + "_all_found", all_found);
    r.at_most(key + "_max_radial_deviation", arc.max_radial_deviation, 5e-4);
    r.metrics[key + "_theta_interval"] = {arc.theta_interval.lo, arc.theta_interval.hi};
  }
  r.metrics["fan"] = cfg.fan;
  r.metrics["directions"] = cfg.directions;
  return r;
}

CheckResult geodesic_integrity(const RunConfig&) {
  const std::vector<MetricProfile> families = {make_unit_sphere(), make_lambda_profile(4.0), make_theorem_a(8),
                                               make_h_profile(HGenerator(0.25, 3))};
  std::mt19937_64 rng(kSeed + 1);
  std::uniform_real_distribution<double> pick_r(0.05, kPi - 0.05), pick_angle(-kPi, kPi);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const MetricProfile& p = families[static_cast<std::size_t>(i) % families.size()];
    const double r0 = pick_r(rng);
    const double theta0 = pick_angle(rng) + kPi;
    const double xi = pick_angle(rng);
    const Geodesic g(p, make_point(r0, theta0), xi, 2.0 * kPi, 1e-10);
    worst = std::max(worst, g.clairaut_drift());
  }
  const DistanceResult d =
      distance(make_unit_sphere(), make_point(kPi / 3, 0.0), make_point(2.0 * kPi / 3, kPi), 256);
  CheckResult r;
  r.at_most("max_clairaut_drift", worst, 1e-8);
  r.at_most("sphere_antipode_distance_error", std::abs(d.distance - kPi), 1e-4);
  return r;
}

const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> checks = {
      {"sphere-half-period", sphere_half_period},
      {"lambda-half-period-decreasing", lambda_decreasing},
      {"a-function-closed-forms", a_closed_forms},
      {"curvature-min", curvature_min},
      {"sin-multiple", sin_multiple},
      {"derivative-bounds", derivative_bounds},
      {"curvature-derivative-identity", derivative_identity},
      {"h3-closed-form", h3_closed_form},
      {"tk-alternation", tk_alternation},
      {"extrema-growth", extrema_growth},
      {"cut-locus", cut_locus_check},
      {"geodesic-integrity", geodesic_integrity},
  };
  return checks;
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

Outcome cmd_verify(const RunConfig& cfg) {
  if (cfg.fan < 256) throw UsageError("--fan must be at least 256");
  if (cfg.directions < 1) throw UsageError("--directions must be at least 1");
  std::vector<std::string> selected = cfg.checks.empty() ? check_names() : cfg.checks;
  for (const auto& name : selected)
    if (std::find(check_names().begin(), check_names().end(), name) == check_names().end())
      throw UsageError("unknown check '" + name + "'");

  Json report = envelope("verify");
  report["config"] = {{"fan", cfg.fan}, {"directions", cfg.directions}, {"n_max", cfg.n_max}};
  Json entries = Json::array();
  std::size_t passed = 0;
  for (const auto& name : selected) {
    const auto it = std::find_if(registry().begin(), registry().end(), [&](const auto& e) { return e.first == name; });
    Json entry = Json::object();
    entry["name"] = name;
    try {
      CheckResult r = it->second(cfg);
      entry["passed"] = r.passed;
      entry["metrics"] = std::move(r.metrics);
      passed += r.passed ? 1 : 0;
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception& e) {
      entry["passed"] = false;
      entry["error"] = e.what();
    }
    entries.push_back(std::move(entry));
  }
  report["checks"] = std::move(entries);
  report["passed"] = passed;
  report["total"] = selected.size();
  report["all_passed"] = passed == selected.size();
  return {dump(report), passed == selected.size() ? kExitOk : kExitFailure};
}

}  // namespace revsphere::cli
