#include <cmath>
#include <numbers>

#include "cli.hpp"
#include "output.hpp"
#include "revsphere/curvature.hpp"
#include "revsphere/geodesics.hpp"
#include "revsphere/halfperiod.hpp"

namespace revsphere::cli {

namespace {

constexpr double kPi = std::numbers::pi;

std::string flag(bool b) { return b ? "true" : "false"; }

std::size_t samples_or(const RunConfig& cfg, std::size_t fallback, std::size_t min) {
  const std::size_t n = cfg.samples.value_or(fallback);
  if (n < min) throw UsageError("--samples must be at least " + std::to_string(min));
  return n;
}

double tol_or(const RunConfig& cfg, double fallback) {
  const double t = cfg.tol.value_or(fallback);
  if (!(t > 0.0 && t < 1e-2)) throw UsageError("--tol must lie in (0, 1e-2)");
  return t;
}

Json monotonicity_json(const MonotonicityCheck& c) {
  Json j = Json::object();
  j["direction"] = to_string(c.direction);
  j["worst_violation"] = c.worst_violation;
  j["grid_size"] = c.grid_size;
  return j;
}

template <class F>
Json criterion_or_note(F&& f) {
  try {
    return monotonicity_json(f());
  } catch (const CriterionInapplicable& e) {
    Json j = Json::object();
    j["direction"] = "inapplicable";
    j["reason"] = e.what();
    return j;
  }
}

Json tk_json(const TkDiagnostics& d) {
  Json j = Json::object();
  j["n"] = d.n;
  j["delta"] = d.delta;
  j["eps0"] = d.eps0;
  j["c_delta"] = d.c_delta;
  j["n0_delta"] = d.n0_delta;
  j["n0_deriv"] = d.n0_deriv;
  j["max_b2"] = d.max_b2;
  j["f_bound"] = d.f_bound;
  j["empty"] = d.empty;
  j["alternates"] = d.alternates;
  j["f_bounded"] = d.f_bounded;
  j["sin2h_bounded"] = d.sin2h_bounded;
  j["eps_small"] = d.eps_small;
  j["gaps"] = d.gaps;
  Json rows = Json::array();
  for (const TkSample& s : d.samples) {
    Json r = Json::object();
    r["k"] = s.k;
    r["t"] = s.t;
    r["sin2h"] = s.sin2h;
    r["b"] = s.b;
    r["h3"] = s.h3;
    r["f"] = s.f;
    if (std::isfinite(s.eps)) r["eps"] = s.eps;
    else r["eps"] = nullptr;
    r["gprime"] = s.gprime;
    r["sign"] = s.sign;
    rows.push_back(std::move(r));
  }
  j["samples"] = std::move(rows);
  return j;
}

}  // namespace

Outcome cmd_profile(const RunConfig& cfg) {
  const MetricProfile p = build_profile(cfg.family);
  const std::size_t count = samples_or(cfg, 201, 2);
  Table t{{"r", "m", "dm", "d2m", "curvature"}, {}};
  for (double r : closed_grid(Interval(0.0, kPi), count)) {
    const Jet m = p.eval(r);
    t.rows.push_back({r, m.f, m.d1, m.d2, gaussian_curvature(p, r)});
  }
  if (cfg.format == Format::csv) return {to_csv(t), kExitOk};
  Json j = envelope("profile", p);
  j["samples"] = count;
  j["columns"] = columns_json(t);
  return {dump(j), kExitOk};
}

Outcome cmd_halfperiod(const RunConfig& cfg) {
  const MetricProfile p = build_profile(cfg.family);
  const std::size_t count = samples_or(cfg, 50, 2);
  const double tol = tol_or(cfg, kDefaultQuadTol);
  const HalfPeriodTable table = monotonicity_report(p, count, tol);
  Table t{{"nu", "phi", "err"}, {}};
  for (const auto& e : table.entries) t.rows.push_back({e.nu, e.phi, e.err});

  if (cfg.format == Format::csv) {
    return {to_csv(t, {"strictly_decreasing=" + flag(table.strictly_decreasing) +
                       " worst_margin=" + format_real(table.worst_margin) +
                       " worst_margin_ratio=" + format_real(table.worst_margin_ratio)}),
            kExitOk};
  }
  Json j = envelope("halfperiod", p);
  j["tol"] = tol;
  j["columns"] = columns_json(t);
  j["strictly_decreasing"] = table.strictly_decreasing;
  j["worst_margin"] = table.worst_margin;
  j["worst_margin_ratio"] = table.worst_margin_ratio;
  j["a_function"] = criterion_or_note([&] { return criterion_a_monotone(p, 1000); });
  j["curvature_on_half"] = criterion_or_note([&] { return criterion_ff(p, 1000); });
  return {dump(j), kExitOk};
}

Outcome cmd_cutlocus(const RunConfig& cfg) {
  const MetricProfile p = build_profile(cfg.family);
  if (!(cfg.r0 > 0.0 && cfg.r0 < kPi)) throw UsageError("--r0 must lie in (0, pi)");
  if (cfg.fan < 256) throw UsageError("--fan must be at least 256");
  if (cfg.directions < 1) throw UsageError("--directions must be at least 1");
  CutOptions opts;
  opts.fan_size = cfg.fan;
  opts.directions = cfg.directions;
  opts.ode_tol = tol_or(cfg, 1e-12);
  const CutLocusArc arc = cut_locus(p, make_point(cfg.r0, cfg.theta0), opts);

  Table t{{"xi", "cut_r", "cut_theta", "cut_distance"}, {}};
  for (const CutPoint& c : arc.per_direction) {
    if (c.found) t.rows.push_back({c.xi, c.point.r, c.point.theta, c.distance});
    else t.rows.push_back({c.xi, std::nan(""), std::nan(""), std::nan("")});
  }
  const int code = arc.verified ? kExitOk : kExitFailure;
  if (cfg.format == Format::csv) {
    return {to_csv(t, {"parallel_r=" + format_real(arc.parallel_r) +
                       " max_radial_deviation=" + format_real(arc.max_radial_deviation) +
                       " theta_lo=" + format_real(arc.theta_interval.lo) +
                       " theta_hi=" + format_real(arc.theta_interval.hi) +
                       " verified=" + flag(arc.verified)}),
            code};
  }
  Json j = envelope("cutlocus", p);
  j["start"] = {{"r", arc.start.r}, {"theta", arc.start.theta}};
  j["fan"] = cfg.fan;
  j["directions"] = cfg.directions;
  j["ode_tol"] = opts.ode_tol;
  Json cols = columns_json(t);
  Json antipode = Json::array();
  for (const CutPoint& c : arc.per_direction) antipode.push_back(c.antipode);
  cols["antipode"] = std::move(antipode);
  j["columns"] = std::move(cols);
  j["parallel_r"] = arc.parallel_r;
  j["max_radial_deviation"] = arc.max_radial_deviation;
  j["radial_tol"] = arc.radial_tol;
  j["theta_interval"] = {arc.theta_interval.lo, arc.theta_interval.hi};
  j["on_equator"] = arc.on_equator;
  j["verified"] = arc.verified;
  return {dump(j), code};
}

Outcome cmd_extrema(const RunConfig& cfg) {
  const MetricProfile p = build_profile(cfg.family);
  const std::size_t grid = samples_or(cfg, 4000, 16);
  if (!(cfg.delta > 0.0 && cfg.delta < kPi / 3)) throw UsageError("--delta must lie in (0, pi/3)");
  if (!(cfg.i_lo > cfg.delta && cfg.i_lo < cfg.i_hi && cfg.i_hi < (kPi - cfg.delta) / 2))
    throw UsageError("--i-lo, --i-hi must satisfy delta < i-lo < i-hi < (pi - delta) / 2");
  const ExtremaReport rep = count_extrema(p, Interval(0.0, kPi / 2), grid);

  Table t{{"x", "kind"}, {}};
  for (const Extremum& e : rep.extrema) t.rows.push_back({e.x, e.kind == ExtremumKind::max ? 1.0 : -1.0});
  if (cfg.format == Format::csv)
    return {to_csv(t, {"count=" + std::to_string(rep.count) + " grid_size=" + std::to_string(rep.grid_size)}),
            kExitOk};

  Json j = envelope("extrema", p);
  j["interval"] = {0.0, kPi / 2};
  j["grid_size"] = rep.grid_size;
  j["count"] = rep.count;
  Json xs = Json::array(), kinds = Json::array();
  for (const Extremum& e : rep.extrema) {
    xs.push_back(e.x);
    kinds.push_back(e.kind == ExtremumKind::max ? "max" : "min");
  }
  j["locations"] = std::move(xs);
  j["kinds"] = std::move(kinds);
  const auto& gen = p.generator();
  if (gen && gen->n() >= 2) {
    try {
      j["tk_diagnostics"] = tk_json(tk_diagnostics(*gen, Interval(cfg.i_lo, cfg.i_hi), cfg.delta));
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    } catch (const NotFoundError& e) {
      j["tk_diagnostics"] = {{"error", e.what()}};
    }
  }
  return {dump(j), kExitOk};
}

}  // namespace revsphere::cli
