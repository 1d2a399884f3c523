// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "oracles.hpp"
#include "revsphere/curvature.hpp"
#include "revsphere/geodesics.hpp"
#include "revsphere/halfperiod.hpp"

using namespace revsphere;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome sphere_half_period() {
  const auto t0 = std::chrono::steady_clock::now();
  const MetricProfile p = make_unit_sphere();
  double worst = 0.0, worst_direct = 0.0;
  for (int i = 1; i <= 9; ++i) {
    const double phi = half_period(p, 0.1 * i).phi;
    worst = std::max(worst, std::abs(phi - kPi));
    worst_direct = std::max(worst_direct, std::abs(half_period_direct(p, 0.1 * i).phi - phi));
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-7 && worst_direct <= 1e-6 && t < 1.0,
          fmt("max|phi-pi|=%.3g (tol 1e-7)", worst) + fmt(" max|direct-phi|=%.3g (tol 1e-6)", worst_direct) +
              fmt(" time=%.2fs (< 1s)", t)};
}

Outcome lambda_tables() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  double worst_ratio = INFINITY;
  for (double lambda : {1.0, 4.0, 10.0}) {
    const HalfPeriodTable t = monotonicity_report(make_lambda_profile(lambda), 50);
    ok = ok && t.entries.size() == 50 && t.strictly_decreasing;
    // Every adjacent drop against ten times the summed error estimates.
    for (std::size_t i = 1; i < t.entries.size(); ++i) {
      const double drop = t.entries[i - 1].phi - t.entries[i].phi;
      const double ratio = drop / (t.entries[i - 1].err + t.entries[i].err);
      worst_ratio = std::min(worst_ratio, ratio);
    }
  }
  const double t = seconds_since(t0);
  return {ok && worst_ratio > 10.0 && t < 10.0,
          fmt("min drop/err=%.3g (> 10)", worst_ratio) + fmt(" time=%.2fs (< 10s)", t)};
}

Outcome a_closed_forms() {
  double lambda_gap = 0.0, h_gap = 0.0;
  const auto xs = midpoint_grid(Interval(0.0, kPi / 2), 100);
  for (double lambda : {1.0, 4.0, 10.0}) {
    const MetricProfile p = make_lambda_profile(lambda);
    for (double x : xs) {
      const double c = std::cos(x);
      const double closed = (1 + lambda * c * c) / std::sqrt(lambda + 1);
      lambda_gap = std::max({lambda_gap, std::abs(closed - a_function(p, x)), std::abs(p.closed_form_a(x) - a_function(p, x))});
    }
  }
  for (int n : {0, 2, 8}) {
    const MetricProfile p = n ? make_theorem_a(n) : make_h_profile(HGenerator(1.0 / 3.0, 0));
    for (double x : xs) {
      const double closed = 1.0 / oracle::theorem_h_prime(1.0 / 3.0, n, x);
      h_gap = std::max({h_gap, std::abs(closed - a_function(p, x)), std::abs(p.closed_form_a(x) - a_function(p, x))});
    }
  }
  return {lambda_gap <= 1e-9 && h_gap <= 1e-9,
          fmt("lambda max gap=%.3g", lambda_gap) + fmt(" h max gap=%.3g (tol 1e-9)", h_gap)};
}

Outcome curvature_minimum() {
  const MetricProfile p = make_lambda_profile(8.0);
  const Minimum m = minimize_scalar([&](double x) { return gaussian_curvature(p, x); }, Interval(1e-3, kPi / 2 - 1e-3), 1e-12);
  const double expected = std::acos(std::sqrt(2.0 / 8.0));
  const double dev = std::abs(m.x - expected);
  return {dev <= 1e-6 && std::abs(expected - kPi / 3) < 1e-15, fmt("argmin=%.12f", m.x) + fmt(" |argmin-pi/3|=%.3g (tol 1e-6)", dev)};
}

Outcome sin_multiple() {
  const double lib = sin_multiple_bound_check(50, 1000);
  double own = -INFINITY;
  for (int n = 1; n <= 50; ++n)
    for (int i = 0; i < 1000; ++i) {
      const double x = kPi * i / 999.0;
      own = std::max(own, std::abs(std::sin(n * x)) - n * std::abs(std::sin(x)));
    }
  return {lib <= 1e-12 && own <= 1e-12, fmt("max excess=%.3g", std::max(lib, own)) + " (tol 1e-12)"};
}

Outcome derivative_bounds() {
  const int n0 = find_minimal_n0(1.0 / 3.0, BFunction::sin2sq(), 2.0, 200);
  double s1 = 0.0, s2 = 0.0;
  for (int n = n0 + 1; n <= n0 + 20; ++n) {
    const SupBounds s = derivative_sup_bounds(HGenerator(1.0 / 3.0, n), 4000);
    s1 = std::max(s1, s.sup_h1);
    s2 = std::max(s2, s.sup_h2);
    // Test-side sup of h' on a grid of the same density.
    for (int i = 0; i <= 40 * n * n; ++i) s1 = std::max(s1, std::abs(oracle::theorem_h_prime(1.0 / 3.0, n, kPi * i / (40.0 * n * n))));
  }
  return {s1 <= 2.0 && s2 <= 2.0,
          "n0=" + std::to_string(n0) + fmt(" sup|h'|=%.6f", s1) + fmt(" sup|h''|=%.6f (bound 2)", s2)};
}

Outcome derivative_identity() {
  const HGenerator gen(1.0 / 3.0, 6);
  const MetricProfile p = make_h_profile(gen);
  constexpr double step = 1e-5;
  double worst = 0.0, worst_pure = 0.0;
  for (double x : closed_grid(Interval(0.1, 1.4), 2001)) {
    const double exact = curvature_derivative(gen, x);
    const double fd = (gaussian_curvature(p, x + step) - gaussian_curvature(p, x - step)) / (2 * step);
    worst = std::max(worst, std::abs(exact - fd) / std::max(std::abs(exact), 1.0));
    worst_pure = std::max(worst_pure, std::abs(exact - fd) / std::abs(exact));
  }
  return {worst <= 1e-5, fmt("max |G'-fd|/max(|G'|,1)=%.3g (tol 1e-5)", worst) + fmt(" pointwise relative=%.3g", worst_pure)};
}

Outcome h3_closed_form() {
  std::mt19937_64 rng(20240611);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int n = std::uniform_int_distribution<int>(2, 20)(rng);
    const int k = std::uniform_int_distribution<int>(1, n * n)(rng);
    const HGenerator gen(1.0 / 3.0, n);
    worst = std::max(worst, std::abs(h_triple_prime_at_tk(gen, k) - gen.h(t_grid_point(n, k)).d3));
  }
  return {worst <= 1e-9, fmt("max gap=%.3g (tol 1e-9)", worst)};
}

Outcome alternation() {
  const TkDiagnostics d = tk_diagnostics(HGenerator(1.0 / 3.0, 12), Interval(0.6, 0.9), 0.5);
  double worst_eps = 0.0;
  int sign_flips = 0;
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    if (std::isfinite(d.samples[i].eps)) worst_eps = std::max(worst_eps, std::abs(d.samples[i].eps));
    if (i && d.samples[i].sign == -d.samples[i - 1].sign) ++sign_flips;
  }
  const bool ok = !d.empty && d.alternates && d.f_bounded && d.eps_small && d.sin2h_bounded && worst_eps < 0.5 &&
                  sign_flips + 1 == static_cast<int>(d.samples.size());
  return {ok, std::to_string(d.samples.size()) + " t_k, alternates=" + (d.alternates ? "yes" : "no") +
                  " f bound=" + (d.f_bounded ? "yes" : "no") + fmt(" max|eps|=%.3g (< 0.5)", worst_eps)};
}

Outcome extrema_growth() {
  std::array<std::size_t, 3> c{};
  const int ns[] = {4, 8, 12};
  for (int i = 0; i < 3; ++i) c[i] = count_extrema(make_theorem_a(ns[i]), Interval(0.0, kPi / 2), 4000).count;
  return {c[0] < c[1] && c[1] < c[2] && c[2] >= 20,
          "counts n=4,8,12: " + std::to_string(c[0]) + ", " + std::to_string(c[1]) + ", " + std::to_string(c[2]) + " (n=12 >= 20)"};
}

Outcome cut_loci() {
  const auto t0 = std::chrono::steady_clock::now();
  CutOptions opts;
  opts.fan_size = 4096;
  opts.directions = 64;
  const CutLocusArc a = cut_locus(make_theorem_a(8), make_point(kPi / 3, 0.0), opts);
  const CutLocusArc b = cut_locus(make_lambda_profile(4.0), make_point(kPi / 4, 0.0), opts);
  auto worst = [](const CutLocusArc& arc, double target) {
    double w = 0.0;
    for (const CutPoint& c : arc.per_direction) w = std::max(w, c.found ? std::abs(c.point.r - target) : INFINITY);
    return w;
  };
  const double da = worst(a, 2 * kPi / 3), db = worst(b, 3 * kPi / 4);
  const double t = seconds_since(t0);
  return {a.per_direction.size() == 64 && b.per_direction.size() == 64 && da <= 5e-4 && db <= 5e-4 && t < 120.0,
          fmt("theorem-a n=8 max|r-2pi/3|=%.3g", da) + fmt(" lambda=4 max|r-3pi/4|=%.3g (tol 5e-4)", db) +
              fmt(" time=%.1fs (< 120s)", t)};
}

Outcome geodesic_integrity() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ur(0.05, kPi - 0.05), ua(-kPi, kPi);
  const std::vector<MetricProfile> fams = {make_unit_sphere(), make_lambda_profile(4.0), make_theorem_a(8),
                                           make_h_profile(HGenerator(0.25, 3))};
  double drift = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double r0 = ur(rng), th = ua(rng) + kPi, xi = ua(rng);
    drift = std::max(drift, Geodesic(fams[i % 4], make_point(r0, th), xi, 2 * kPi, 1e-10).clairaut_drift());
  }
  const double d = distance(make_unit_sphere(), make_point(kPi / 3, 0.0), make_point(2 * kPi / 3, kPi), 256).distance;
  return {drift <= 1e-8 && std::abs(d - kPi) <= 1e-4,
          fmt("max Clairaut drift=%.3g (tol 1e-8)", drift) + fmt(" |d(antipode)-pi|=%.3g (tol 1e-4)", std::abs(d - kPi))};
}

std::pair<int, std::string> capture(const std::string& cmd) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, out};
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Outcome determinism() {
  const std::string cmd = std::string("\"") + REVSPHERE_CLI_PATH + "\" verify";
  const auto [c1, o1] = capture(cmd);
  const auto [c2, o2] = capture(cmd);
  return {c1 == 0 && c2 == 0 && !o1.empty() && o1 == o2,
          "exit codes " + std::to_string(c1) + "," + std::to_string(c2) + "; " + std::to_string(o1.size()) +
              " bytes, identical=" + (o1 == o2 ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"unit-sphere half period", sphere_half_period},
      {"lambda-family half-period tables decrease", lambda_tables},
      {"A-function closed forms", a_closed_forms},
      {"lambda = 8 curvature minimizer", curvature_minimum},
      {"|sin nx| <= n |sin x|", sin_multiple},
      {"derivative bounds beyond n0", derivative_bounds},
      {"curvature-derivative identity", derivative_identity},
      {"h''' closed form at t_k", h3_closed_form},
      {"t_k sign alternation", alternation},
      {"extrema growth with n", extrema_growth},
      {"cut locus on the antipodal parallel", cut_loci},
      {"geodesic integrity", geodesic_integrity},
      {"verify determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed ? 1 : 0;
}
