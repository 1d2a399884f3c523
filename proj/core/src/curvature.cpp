#include "revsphere/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace revsphere {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFlatDerivative = 1e-9;

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

double parity(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

double gaussian_curvature(const MetricProfile& p, double x) {
  if (x < kPoleGuard || x > kPi - kPoleGuard) {
    const Jet pole = p.eval(x < kPi / 2 ? 0.0 : kPi);
    return -pole.d3 / pole.d1;
  }
  const Jet m = p.eval(x);
  return -m.d2 / m.f;
}

double curvature_via_h(const HGenerator& gen, double x) {
  if (!(x > 0.0 && x < kPi)) throw DomainError("curvature_via_h needs x in (0, pi)");
  const Jet h = gen.h(x);
  const double s = std::sin(h.f);
  if (std::abs(s) < 1e-12) throw DomainError("curvature_via_h: cot h is singular at a pole");
  return h.d1 * h.d1 - std::cos(h.f) / s * h.d2;
}

double curvature_derivative(const HGenerator& gen, double x) {
  const Jet h = gen.h(x);
  const double s = std::sin(h.f);
  if (!(x > 0.0 && x < kPi) || std::abs(s) < 1e-8) {
    throw DomainError("curvature_derivative: too close to a pole");
  }
  const double rhs = 2.0 * (2.0 - std::cos(2.0 * h.f)) * h.d1 * h.d2 - std::sin(2.0 * h.f) * h.d3;
  return rhs / (2.0 * s * s);
}

double t_grid_point(int n, int k) {
  const double nd = static_cast<double>(n);
  return static_cast<double>(k) * kPi / (2.0 * nd * nd);
}

double h_triple_prime_at_tk(const HGenerator& gen, int k) {
  const int n = gen.n();
  if (n < 1) throw DomainError("h_triple_prime_at_tk needs n >= 1");
  if (k < 1 || k > n * n) throw DomainError("k must lie in [1, n^2]");
  const double t = t_grid_point(n, k);
  const Jet b = gen.b().eval(t);
  const double nd = static_cast<double>(n);
  return 8.0 * gen.alpha() * std::cos(2.0 * t) + parity(k) * (6.0 * b.d2 / (nd * nd * nd) - 8.0 * nd * b.f);
}

DeltaConstants delta_constants(double delta, const BFunction& b, int n_max) {
  if (!(delta > 0.0 && delta < kPi / 3)) throw DomainError("delta must lie in (0, pi/3)");
  DeltaConstants out{};
  out.eps0 = (2.0 * delta - std::sin(2.0 * delta)) / 8.0;
  out.c_delta = std::min(std::sin(6.0 * out.eps0), std::sin(delta - 2.0 * out.eps0));
  for (int n = 1; n <= n_max; ++n) {
    const double nd = static_cast<double>(n);
    const double w = 2.0 * nd * nd;
    const std::size_t count = std::max<std::size_t>(10000, static_cast<std::size_t>(32.0 * nd * nd) + 1);
    double sup = 0.0;
    for (double x : closed_grid(Interval(0.0, kPi / 2), count)) {
      sup = std::max(sup, std::abs(b(x) * std::sin(w * x)));
    }
    if (sup / std::pow(nd, 5) < out.eps0) {
      out.n0 = n;
      return out;
    }
  }
  throw NotFoundError("no n <= " + std::to_string(n_max) + " keeps the perturbation below eps0");
}

TkDiagnostics tk_diagnostics(const HGenerator& gen, Interval iv, double delta, int n_max) {
  const int n = gen.n();
  if (n < 2) throw DomainError("tk_diagnostics needs n >= 2");
  if (!(iv.lo > delta && iv.hi < (kPi - delta) / 2)) {
    throw DomainError("interval must lie inside (delta, (pi - delta) / 2)");
  }
  const DeltaConstants dc = delta_constants(delta, gen.b(), n_max);

  TkDiagnostics d{};
  d.n = n;
  d.delta = delta;
  d.eps0 = dc.eps0;
  d.c_delta = dc.c_delta;
  d.n0_delta = dc.n0;
  d.n0_deriv = find_minimal_n0(gen.alpha(), gen.b(), 2.0, n_max);
  d.max_b2 = 0.0;
  for (double x : closed_grid(Interval(0.0, kPi / 2), 10000)) {
    d.max_b2 = std::max(d.max_b2, std::abs(gen.b().eval(x).d2));
  }
  const double n0 = static_cast<double>(d.n0_deriv);
  d.f_bound = 28.0 + 6.0 / (n0 * n0 * n0) * d.max_b2;

  const double nd = static_cast<double>(n);
  const double a = gen.alpha();
  const int k_lo = std::max(1, static_cast<int>(std::ceil(iv.lo * 2.0 * nd * nd / kPi)));
  for (int k = k_lo; k <= n * n; ++k) {
    const double t = t_grid_point(n, k);
    if (t < iv.lo) continue;
    if (t > iv.hi) break;
    const Jet h = gen.h(t);
    const Jet b = gen.b().eval(t);
    TkSample s{};
    s.k = k;
    s.t = t;
    s.sin2h = std::sin(2.0 * h.f);
    s.b = b.f;
    s.h3 = h_triple_prime_at_tk(gen, k);
    s.f = 2.0 * (2.0 - std::cos(2.0 * h.f)) * h.d1 * h.d2 -
          s.sin2h * (8.0 * a * std::cos(2.0 * t) + parity(k) * 6.0 * b.d2 / (nd * nd * nd));
    const double lead = parity(k) * 8.0 * nd * s.sin2h * b.f;
    if (b.f == 0.0 || lead == 0.0) {
      s.eps = std::numeric_limits<double>::quiet_NaN();
      d.gaps.push_back(k);
    } else {
      s.eps = s.f / lead;
    }
    s.gprime = curvature_derivative(gen, t);
    s.sign = sign_of(s.gprime);
    d.samples.push_back(s);
  }

  d.empty = d.samples.empty();
  d.f_bounded = true;
  d.sin2h_bounded = true;
  d.eps_small = true;
  d.alternates = true;
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    const TkSample& s = d.samples[i];
    if (!(std::abs(s.f) < d.f_bound)) d.f_bounded = false;
    if (!(s.sin2h >= d.c_delta)) d.sin2h_bounded = false;
    if (!std::isnan(s.eps) && !(std::abs(s.eps) < 0.5)) d.eps_small = false;
    if (s.sign == 0) d.alternates = false;
    if (i > 0 && s.sign * d.samples[i - 1].sign != -1) d.alternates = false;
  }
  return d;
}

ExtremaReport count_extrema(const MetricProfile& p, Interval iv, std::size_t grid_size) {
  if (iv.lo < 0.0 || iv.hi > kPi / 2 + 1e-15) throw DomainError("count_extrema needs iv inside (0, pi/2]");
  const auto& gen = p.generator();
  auto gprime = [&](double x) {
    if (gen) return curvature_derivative(*gen, x);
    constexpr double step = 1e-5;
    return (gaussian_curvature(p, x + step) - gaussian_curvature(p, x - step)) / (2.0 * step);
  };

  std::size_t count = std::max<std::size_t>(grid_size, 16);
  if (gen) {
    const std::size_t nn = static_cast<std::size_t>(gen->n());
    count = std::max(count, 16 * nn * nn);
  }

  const std::vector<double> xs = midpoint_grid(iv, count);
  std::vector<std::pair<double, double>> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double v = gprime(xs[i]);
    values[i] = {xs[i], std::abs(v) > kFlatDerivative ? v : 0.0};
  }

  ExtremaReport rep{};
  rep.grid_size = count;
  for (const auto& [i, j] : sign_changes(values)) {
    std::size_t left = i;
    while (left > 0 && values[left].second == 0.0) --left;
    double lo = xs[left];
    double hi = xs[j];
    const int s_lo = sign_of(values[left].second);
    for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (sign_of(gprime(mid)) == s_lo) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    rep.extrema.push_back({0.5 * (lo + hi), s_lo < 0 ? ExtremumKind::min : ExtremumKind::max});
  }
  rep.count = rep.extrema.size();
  return rep;
}

}  // namespace revsphere
