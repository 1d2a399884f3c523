#include "revsphere/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "revsphere/parallel.hpp"

namespace revsphere {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMeridianSin = 1e-9;
constexpr double kPoleTol = 1e-12;

// Long steps degrade the error estimate and the dense output; past half a
// period of the sin(2 n^2 r) ripple the estimate aliases and accepts bad steps.
double max_step_for(const MetricProfile& p) {
  const auto& gen = p.generator();
  if (!gen || gen->n() == 0 || gen->b().is_zero()) return 0.1;
  const double n = gen->n();
  return std::min(0.1, kPi / (2.0 * n * n));
}

double wrap_positive(double x) {
  double w = std::fmod(x, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

bool at_pole(double r) { return r < kPoleTol || r > kPi - kPoleTol; }

// Root of f on [lo, hi] given f(lo) and f(hi) of opposite signs (Illinois).
template <class F>
double illinois(F&& f, double lo, double hi, double flo, double fhi, double xtol) {
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  int side = 0;
  for (int it = 0; it < 100 && hi - lo > xtol; ++it) {
    double x = (lo * fhi - hi * flo) / (fhi - flo);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx > 0.0) == (fhi > 0.0)) {
      hi = x;
      fhi = fx;
      if (side == -1) flo *= 0.5;
      side = -1;
    } else {
      lo = x;
      flo = fx;
      if (side == 1) fhi *= 0.5;
      side = 1;
    }
  }
  return std::abs(flo) < std::abs(fhi) ? lo : hi;
}

double hermite(double t, double h, double y0, double d0, double y1, double d1) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * h * d0 + (-2.0 * t3 + 3.0 * t2) * y1 +
         (t3 - t2) * h * d1;
}

}  // namespace

SurfacePoint make_point(double r, double theta) {
  if (!(r >= -1e-12 && r <= kPi + 1e-12)) throw DomainError("r must lie in [0, pi]");
  r = std::clamp(r, 0.0, kPi);
  if (r == 0.0 || r == kPi) return {r, 0.0};
  return {r, wrap_positive(theta)};
}

double wrap_angle(double x) {
  double w = std::fmod(x + kPi, kTwoPi);
  if (w <= 0.0) w += kTwoPi;
  return w - kPi;
}

Geodesic::Geodesic(const MetricProfile& p, SurfacePoint start, double xi, double length, double tol)
    : profile_(p), start_(start), xi_(xi), length_(length) {
  if (at_pole(start.r)) throw DomainError("geodesic start must not be a pole");
  if (!(length > 0.0)) throw DomainError("geodesic length must be positive");
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  nu_ = p.m(start.r) * std::sin(xi);

  if (std::abs(std::sin(xi)) < kMeridianSin) {
    nu_ = 0.0;
    const double sigma = std::cos(xi) > 0.0 ? 1.0 : -1.0;
    double s = sigma > 0.0 ? kPi - start.r : start.r;
    for (; s <= length; s += kPi) turning_.push_back(s);
    return;
  }

  auto field = [&p](double, const OdeState<3>& y) {
    const auto [m, dm] = p.m_slope(y[0]);
    const double sp = std::sin(y[2]);
    return OdeState<3>{std::cos(y[2]), sp / m, -dm * sp / m};
  };
  OdeOptions opts;
  opts.max_step = max_step_for(p);
  sol_ = ode_solve<3>(field, OdeState<3>{start.r, start.theta, xi}, Interval(0.0, length), tol, opts);

  const auto& steps = sol_->steps();
  for (std::size_t k = 0; k < steps.size(); ++k) {
    auto cos_psi = [&](double s) { return std::cos(sol_->component_in_step(k, s, 2)); };
    const double c0 = cos_psi(steps[k].t0);
    const double c1 = cos_psi(steps[k].t1);
    if (c0 != 0.0 && (c0 > 0.0) != (c1 > 0.0)) {
      turning_.push_back(illinois(cos_psi, steps[k].t0, steps[k].t1, c0, c1, 1e-15));
    }
  }
}

GeodesicState Geodesic::at(double s) const {
  if (!sol_) {
    const double sigma = std::cos(xi_) > 0.0 ? 1.0 : -1.0;
    const double u = wrap_positive(start_.r + sigma * s);
    if (u <= kPi) return {s, u, start_.theta, sigma > 0.0 ? 0.0 : kPi};
    return {s, kTwoPi - u, start_.theta + kPi, sigma > 0.0 ? kPi : 0.0};
  }
  const OdeState<3> y = (*sol_)(s);
  return {s, y[0], y[1], y[2]};
}

std::vector<GeodesicState> Geodesic::nodes() const {
  std::vector<double> ss;
  if (!sol_) {
    const std::size_t count = static_cast<std::size_t>(std::ceil(length_ / 0.05)) + 1;
    ss = closed_grid(Interval(0.0, length_), std::max<std::size_t>(count, 2));
  } else {
    ss.push_back(0.0);
    for (const auto& st : sol_->steps()) ss.push_back(st.t1);
  }
  ss.insert(ss.end(), turning_.begin(), turning_.end());
  std::sort(ss.begin(), ss.end());
  ss.erase(std::unique(ss.begin(), ss.end()), ss.end());
  std::vector<GeodesicState> out;
  out.reserve(ss.size());
  for (double s : ss) out.push_back(at(s));
  return out;
}

std::vector<GeodesicState> Geodesic::crossings(double rb) const {
  std::vector<GeodesicState> out;
  if (!sol_) {
    const double sigma = std::cos(xi_) > 0.0 ? 1.0 : -1.0;
    std::vector<double> ss;
    for (double c : {rb, kTwoPi - rb}) {
      for (double s = wrap_positive(sigma * (c - start_.r)); s <= length_; s += kTwoPi) {
        if (s > 0.0) ss.push_back(s);
      }
    }
    std::sort(ss.begin(), ss.end());
    ss.erase(std::unique(ss.begin(), ss.end()), ss.end());
    for (double s : ss) {
      GeodesicState st = at(s);
      st.r = rb;
      out.push_back(st);
    }
    return out;
  }

  const auto& steps = sol_->steps();
  std::size_t tp = 0;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    std::vector<double> cuts{steps[k].t0};
    while (tp < turning_.size() && turning_[tp] < steps[k].t1) {
      if (turning_[tp] > steps[k].t0) cuts.push_back(turning_[tp]);
      ++tp;
    }
    cuts.push_back(steps[k].t1);
    auto g = [&](double s) { return sol_->component_in_step(k, s, 0) - rb; };
    double ga = g(cuts[0]);
    for (std::size_t c = 1; c < cuts.size(); ++c) {
      const double gb = g(cuts[c]);
      if ((ga < 0.0 && gb >= 0.0) || (ga > 0.0 && gb <= 0.0)) {
        const double s = illinois(g, cuts[c - 1], cuts[c], ga, gb, 1e-15);
        if (s > 0.0) {
          const OdeState<3> y = sol_->eval_step(k, s);
          out.push_back({s, rb, y[1], y[2]});
        }
      }
      ga = gb;
    }
  }
  return out;
}

double Geodesic::clairaut_drift(std::size_t count) const {
  if (!sol_) return 0.0;
  double drift = 0.0;
  auto check = [&](const GeodesicState& st) {
    drift = std::max(drift, std::abs(profile_.m(st.r) * std::sin(st.psi) - nu_));
  };
  for (const auto& st : nodes()) check(st);
  if (count >= 2) {
    for (double s : closed_grid(Interval(0.0, length_), count)) check(at(s));
  }
  return drift;
}

GeodesicPath shoot(const MetricProfile& p, SurfacePoint start, double xi, double s_max, double tol,
                   std::size_t sample_count) {
  const Geodesic g(p, start, xi, s_max, tol);
  GeodesicPath path{start, xi, g.nu(), {}, g.turning_points(), g.clairaut_drift()};
  for (double s : closed_grid(Interval(0.0, s_max), std::max<std::size_t>(sample_count, 2))) {
    path.samples.push_back(g.at(s));
  }
  return path;
}

double swept_angle_direct(const MetricProfile& p, double r0, double nu, double tol) {
  if (!(r0 > 0.0 && r0 < kPi / 2)) throw DomainError("swept_angle_direct needs 0 < r0 < pi/2");
  const Jet m0 = p.eval(r0);
  if (!(nu > 0.0 && nu <= m0.f)) throw DomainError("swept_angle_direct needs 0 < nu <= m(r0)");
  const double gap = m0.f - nu;
  // x = r0 + t^2; m - nu = slope * t^2 + gap with the slope expanded where the
  // difference m(x) - m(r0) would cancel.
  auto integrand = [&](double t) {
    const double d = t * t;
    const double x = r0 + d;
    const double m = p.m(x);
    const double slope = d < 1e-6 ? m0.d1 + d * (m0.d2 / 2.0 + d * m0.d3 / 6.0) : (m - m0.f) / (x - r0);
    return 2.0 * t * nu / (m * std::sqrt((m + nu) * (slope * d + gap)));
  };
  const QuadResult q = integrate_adaptive(integrand, Interval(0.0, std::sqrt(kPi / 2 - r0)), tol / 2.0);
  return 2.0 * q.value;
}

double pole_path_length(SurfacePoint a, SurfacePoint b) {
  return std::min(a.r + b.r, 2.0 * kPi - a.r - b.r);
}

GeodesicFan::GeodesicFan(const MetricProfile& p, SurfacePoint start, std::size_t size, double length,
                         double fan_tol, double refine_tol)
    : profile_(p), start_(start), length_(length), refine_tol_(refine_tol) {
  if (size < 2) throw DomainError("fan needs at least two rays");
  if (at_pole(start.r)) throw DomainError("fan start must not be a pole");
  xis_.resize(size);
  rays_.resize(size);
  for (std::size_t i = 0; i < size; ++i) {
    xis_[i] = kTwoPi * (static_cast<double>(i) + 0.5) / static_cast<double>(size);
  }
  parallel_for(size, [&](std::size_t i) {
    const Geodesic g(profile_, start_, xis_[i], length_, fan_tol);
    const auto states = g.nodes();
    auto& ray = rays_[i];
    ray.reserve(states.size());
    for (const auto& st : states) {
      ray.push_back({st.s, st.r, st.theta, std::cos(st.psi), std::sin(st.psi) / profile_.m(st.r)});
    }
  });
}

std::vector<GeodesicFan::Crossing> GeodesicFan::ray_crossings(std::size_t i, double rb,
                                                              double max_length) const {
  std::vector<Crossing> out;
  const auto& ray = rays_[i];
  for (std::size_t k = 1; k < ray.size(); ++k) {
    const Node& a = ray[k - 1];
    if (a.s > max_length) break;
    const Node& b = ray[k];
    const double fa = a.r - rb;
    const double fb = b.r - rb;
    if (!((fa < 0.0 && fb >= 0.0) || (fa > 0.0 && fb <= 0.0))) continue;
    const double h = b.s - a.s;
    auto g = [&](double t) { return hermite(t, h, a.r, a.dr, b.r, b.dr) - rb; };
    const double t = illinois(g, 0.0, 1.0, fa, fb, 1e-14);
    const double s = a.s + t * h;
    if (s > 1e-9) out.push_back({s, hermite(t, h, a.theta, a.dtheta, b.theta, b.dtheta)});
  }
  return out;
}

std::vector<GeodesicFan::Candidate> GeodesicFan::candidates(SurfacePoint target, double max_length) const {
  const std::size_t n = rays_.size();
  std::vector<std::vector<Crossing>> cross(n);
  for (std::size_t i = 0; i < n; ++i) cross[i] = ray_crossings(i, target.r, max_length + 0.05);

  std::vector<Candidate> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = (i + 1) % n;
    const double xi_lo = xis_[i];
    const double xi_hi = xis_[k] + (k == 0 ? kTwoPi : 0.0);
    const std::size_t common = std::min(cross[i].size(), cross[k].size());
    for (std::size_t j = 0; j < common; ++j) {
      const double m_lo = wrap_angle(cross[i][j].theta - target.theta);
      const double m_hi = wrap_angle(cross[k][j].theta - target.theta);
      const bool straddle = (m_lo <= 0.0 && m_hi >= 0.0) || (m_lo >= 0.0 && m_hi <= 0.0);
      if (!straddle || std::abs(m_hi - m_lo) >= kPi) continue;
      const double w = m_lo == m_hi ? 0.0 : m_lo / (m_lo - m_hi);
      const double s_est = cross[i][j].s + w * (cross[k][j].s - cross[i][j].s);
      if (s_est >= max_length) continue;
      out.push_back({xi_lo, xi_hi, m_lo, m_hi, j, xi_lo + w * (xi_hi - xi_lo), s_est});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Candidate& a, const Candidate& b) { return a.s_est < b.s_est; });
  return out;
}

std::optional<DistanceResult> GeodesicFan::refine(const Candidate& c, SurfacePoint target) const {
  const double shot_length = std::min(c.s_est, length_) + 0.1;
  const double m_target = profile_.m(target.r);
  bool lost = false;
  // Length of the geodesic to its crossing plus the arc along the parallel
  // to the target: a path length, hence an upper bound on the distance.
  std::optional<DistanceResult> best;
  auto miss_at = [&](double xi) {
    const Geodesic g(profile_, start_, xi, shot_length, refine_tol_);
    const auto cr = g.crossings(target.r);
    if (cr.size() <= c.crossing) {
      lost = true;
      return 0.0;
    }
    const double miss = wrap_angle(cr[c.crossing].theta - target.theta);
    const double bound = cr[c.crossing].s + m_target * std::abs(miss);
    if (!best || bound < best->distance) best = DistanceResult{bound, wrap_angle(xi)};
    return miss;
  };

  double lo = c.xi_lo, hi = c.xi_hi;
  double flo = c.miss_lo, fhi = c.miss_hi;
  if (std::abs(flo) < 1e-8) flo = miss_at(lo);
  if (std::abs(fhi) < 1e-8) fhi = miss_at(hi);
  if (lost) return std::nullopt;
  if (flo != 0.0 && fhi != 0.0 && (flo > 0.0) == (fhi > 0.0)) return best;
  auto f = [&](double xi) {
    const double miss = miss_at(xi);
    if (lost) return 0.0;
    // A miss below 1e-12 is as good as exact.
    return std::abs(miss) < 1e-12 ? 0.0 : miss;
  };
  if (flo == 0.0 || fhi == 0.0) {
    f(flo == 0.0 ? lo : hi);
  } else {
    illinois(f, lo, hi, flo, fhi, 1e-10);
  }
  if (lost) return std::nullopt;
  return best;
}

DistanceResult GeodesicFan::distance_to(SurfacePoint target) const {
  if (target.r < kPoleTol) return {start_.r, kPi};
  if (target.r > kPi - kPoleTol) return {kPi - start_.r, 0.0};
  const double via_north = start_.r + target.r;
  const double via_south = 2.0 * kPi - start_.r - target.r;
  DistanceResult best{std::min(via_north, via_south), via_north <= via_south ? kPi : 0.0};
  constexpr double slack = 1e-3;
  for (const Candidate& c : candidates(target, best.distance + slack)) {
    if (c.s_est > best.distance + slack) break;
    if (auto r = refine(c, target); r && r->distance < best.distance) best = *r;
  }
  return best;
}

DistanceResult distance(const MetricProfile& p, SurfacePoint a, SurfacePoint b, std::size_t fan_size,
                        double tol) {
  if (fan_size < 256) throw DomainError("distance needs fan_size >= 256");
  const double length = pole_path_length(a, b) + 0.1;
  DistanceResult best = GeodesicFan(p, a, fan_size, length, 1e-10, tol).distance_to(b);
  if (at_pole(b.r)) return best;
  // A minimizing geodesic whose turning point is b never straddles b's
  // parallel, so the fan from a misses it; from b it crosses a's parallel.
  const DistanceResult back = GeodesicFan(p, b, fan_size, length, 1e-10, tol).distance_to(a);
  if (back.distance < best.distance) {
    const GeodesicState end = Geodesic(p, b, back.xi, back.distance, tol).at(back.distance);
    best = {back.distance, wrap_angle(end.psi + kPi)};
  }
  return best;
}

CutPoint cut_point_along(const GeodesicFan& fan, double xi, const CutOptions& opts) {
  const SurfacePoint start = fan.start();
  const double s_top = std::min(kPi + 0.1, fan.length() - 0.05);
  const Geodesic gamma(fan.profile(), start, xi, fan.length(), opts.ode_tol);
  const double margin = opts.coarse_margin;

  // True when some path to gamma(s) is shorter than s - loss_threshold.
  auto lost = [&](double s) {
    const GeodesicState st = gamma.at(s);
    const SurfacePoint target = make_point(st.r, st.theta);
    const double limit = s - opts.loss_threshold;
    if (at_pole(target.r)) return (target.r < kPi / 2 ? start.r : kPi - start.r) < limit;
    if (pole_path_length(start, target) < limit) return true;

    auto cands = fan.candidates(target, limit + margin);
    std::erase_if(cands, [&](const GeodesicFan::Candidate& c) {
      const double rel = c.xi_lo + wrap_positive(xi - c.xi_lo);
      return rel <= c.xi_hi && std::abs(c.s_est - s) < margin;
    });
    for (const auto& c : cands) {
      if (c.s_est < limit - margin) return true;
    }
    for (const auto& c : cands) {
      if (c.s_est >= limit + margin) break;
      if (auto r = fan.refine(c, target); r && r->distance < limit) return true;
    }
    return false;
  };

  CutPoint out{xi, false, start, 0.0, false};
  double lo = 0.0;
  double hi = -1.0;
  constexpr double coarse_step = 0.2;
  for (double s = coarse_step; s < s_top + coarse_step; s += coarse_step) {
    const double probe = std::min(s, s_top);
    if (lost(probe)) {
      hi = probe;
      break;
    }
    lo = probe;
  }
  if (hi < 0.0) return out;
  while (hi - lo > opts.s_resolution) {
    const double mid = 0.5 * (lo + hi);
    if (lost(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  const GeodesicState st = gamma.at(hi);
  out.found = true;
  out.distance = hi;
  out.point = make_point(st.r, st.theta);
  const SurfacePoint anti = make_point(kPi - start.r, start.theta + kPi);
  const double gap = std::abs(out.point.r - anti.r) +
                     fan.profile().m(anti.r) * std::abs(wrap_angle(out.point.theta - anti.theta));
  if (gap < 1e-6) {
    out.point = anti;
    out.antipode = true;
  }
  return out;
}

CutPoint cut_point_along(const MetricProfile& p, SurfacePoint start, double xi, const CutOptions& opts) {
  const GeodesicFan fan(p, start, opts.fan_size, kPi + 0.2, 1e-10, opts.ode_tol);
  return cut_point_along(fan, xi, opts);
}

CutLocusArc cut_locus(const MetricProfile& p, SurfacePoint start, const CutOptions& opts) {
  if (opts.directions < 1) throw DomainError("cut_locus needs at least one direction");
  const GeodesicFan fan(p, start, opts.fan_size, kPi + 0.2, 1e-10, opts.ode_tol);
  CutLocusArc arc{};
  arc.start = start;
  arc.parallel_r = kPi - start.r;
  arc.radial_tol = opts.radial_tol;
  arc.on_equator = std::abs(start.r - kPi / 2) < 1e-12;
  arc.per_direction.resize(opts.directions);
  parallel_for(opts.directions, [&](std::size_t j) {
    const double xi = -kPi + kTwoPi * static_cast<double>(j) / static_cast<double>(opts.directions);
    arc.per_direction[j] = cut_point_along(fan, xi, opts);
  });

  const double centre = start.theta + kPi;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  arc.verified = true;
  arc.max_radial_deviation = 0.0;
  for (const auto& cp : arc.per_direction) {
    if (!cp.found) {
      arc.verified = false;
      continue;
    }
    arc.max_radial_deviation = std::max(arc.max_radial_deviation, std::abs(cp.point.r - arc.parallel_r));
    const double offset = wrap_angle(cp.point.theta - centre);
    lo = std::min(lo, offset);
    hi = std::max(hi, offset);
  }
  if (arc.max_radial_deviation > arc.radial_tol) arc.verified = false;
  arc.theta_interval = lo <= hi ? ThetaRange{centre + lo, centre + hi} : ThetaRange{centre, centre};
  return arc;
}

}  // namespace revsphere
