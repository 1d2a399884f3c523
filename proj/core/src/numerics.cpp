#include "revsphere/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

namespace revsphere {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// 15-point Kronrod abscissae on [-1, 1]; odd indices are the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double err;
};

struct PanelOrder {
  bool operator()(const Panel& l, const Panel& r) const noexcept {
    if (l.err != r.err) return l.err < r.err;
    return l.a > r.a;
  }
};

double checked(const ScalarFn& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "integrand not finite at x=" << x;
    throw EvaluationError(os.str());
  }
  return v;
}

Panel gauss_kronrod15(const ScalarFn& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double fc = checked(f, center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double abs_sum = std::abs(kronrod);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = checked(f, center - dx);
    f2[j] = checked(f, center + dx);
    const double pair = f1[j] + f2[j];
    kronrod += kWgk[j] * pair;
    abs_sum += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }

  const double mean = 0.5 * kronrod;
  double asc = kWgk[7] * std::abs(fc - mean);
  for (std::size_t j = 0; j < 7; ++j) {
    asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }

  const double result = kronrod * half;
  const double resabs = abs_sum * std::abs(half);
  const double resasc = asc * std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  const double roundoff = 50.0 * kEps * resabs;
  if (err < roundoff) err = roundoff;
  return Panel{a, b, result, err};
}

}  // namespace

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
  if (!(std::isfinite(lo) && std::isfinite(hi)) || !(lo < hi)) {
    std::ostringstream os;
    os << "invalid interval [" << lo << ", " << hi << "]";
    throw DomainError(os.str());
  }
}

QuadResult integrate_adaptive(const ScalarFn& f, Interval iv, double tol,
                              std::size_t max_panels) {
  if (!(tol > 0.0)) throw DomainError("quadrature tolerance must be positive");
  if (max_panels == 0) max_panels = 1;

  std::priority_queue<Panel, std::vector<Panel>, PanelOrder> queue;
  Panel first = gauss_kronrod15(f, iv.lo, iv.hi);
  std::size_t evaluations = 15;
  double total = first.value;
  double total_err = first.err;
  queue.push(first);
  std::size_t panels = 1;

  const auto converged = [&] {
    return total_err <= std::max(tol, 4.0 * kEps * std::abs(total));
  };

  while (!converged()) {
    if (panels >= max_panels) {
      QuadResult best{total, total_err, evaluations};
      std::ostringstream os;
      os << "adaptive quadrature did not converge within " << max_panels
         << " panels (err estimate " << total_err << ", tol " << tol << ")";
      throw QuadratureError(os.str(), best);
    }
    const Panel worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      // Panel cannot be split further in floating point.
      QuadResult best{total, total_err, evaluations};
      throw QuadratureError("adaptive quadrature reached floating-point panel resolution", best);
    }
    queue.pop();
    const Panel left = gauss_kronrod15(f, worst.a, mid);
    const Panel right = gauss_kronrod15(f, mid, worst.b);
    evaluations += 30;
    total += left.value + right.value - worst.value;
    total_err += left.err + right.err - worst.err;
    queue.push(left);
    queue.push(right);
    ++panels;

    // Resum periodically so the running totals do not drift.
    if (panels % 64 == 0 || converged()) {
      auto copy = queue;
      double v = 0.0;
      double e = 0.0;
      while (!copy.empty()) {
        v += copy.top().value;
        e += copy.top().err;
        copy.pop();
      }
      total = v;
      total_err = e;
    }
  }
  return QuadResult{total, total_err, evaluations};
}

QuadResult integrate_adaptive(const ScalarFn& f, double a, double b, double tol,
                              std::size_t max_panels) {
  if (a == b) return QuadResult{0.0, 0.0, 1};
  if (a < b) return integrate_adaptive(f, Interval(a, b), tol, max_panels);
  QuadResult r = integrate_adaptive(f, Interval(b, a), tol, max_panels);
  r.value = -r.value;
  return r;
}

namespace {

// Probe the transformed integrand F(t) close to t = 0 for blow-up.
void probe_singular_end(const std::function<double(double)>& transformed, double t_max) {
  const double t_near = 1e-8 * t_max;
  const double t_mid = 1e-3 * t_max;
  const double t_far = 0.5 * t_max;
  const double near = transformed(t_near);
  const double mid = transformed(t_mid);
  const double far = transformed(t_far);
  if (!std::isfinite(near) || !std::isfinite(mid)) {
    throw SingularityOrderError("weight-stripped integrand is not finite at the singular endpoint");
  }
  const double reference = std::max({std::abs(mid), std::abs(far), 1e-300});
  if (std::abs(near) > 1e4 * reference) {
    throw SingularityOrderError(
        "weight-stripped integrand blows up at the singular endpoint; singularity is stronger "
        "than inverse square root");
  }
}

QuadResult lower_transformed(const ScalarFn& g, double lo, double hi, bool also_upper_weight,
                             double upper_end, double tol, std::size_t max_panels) {
  // x = lo + t^2, dx = 2 t dt, (x - lo)^(-1/2) = 1 / t.
  const double t_max = std::sqrt(hi - lo);
  std::function<double(double)> transformed = [&](double t) {
    const double x = lo + t * t;
    double v = 2.0 * g(x);
    if (also_upper_weight) v /= std::sqrt(upper_end - x);
    return v;
  };
  probe_singular_end(transformed, t_max);
  try {
    return integrate_adaptive(transformed, Interval(0.0, t_max), tol, max_panels);
  } catch (const EvaluationError& e) {
    throw SingularityOrderError(e.what());
  }
}

QuadResult upper_transformed(const ScalarFn& g, double lo, double hi, bool also_lower_weight,
                             double lower_end, double tol, std::size_t max_panels) {
  // x = hi - t^2.
  const double t_max = std::sqrt(hi - lo);
  std::function<double(double)> transformed = [&](double t) {
    const double x = hi - t * t;
    double v = 2.0 * g(x);
    if (also_lower_weight) v /= std::sqrt(x - lower_end);
    return v;
  };
  probe_singular_end(transformed, t_max);
  try {
    return integrate_adaptive(transformed, Interval(0.0, t_max), tol, max_panels);
  } catch (const EvaluationError& e) {
    throw SingularityOrderError(e.what());
  }
}

}  // namespace

QuadResult integrate_sqrt_singular(const ScalarFn& g, Interval iv, SingularEnd end, double tol,
                                   std::size_t max_panels) {
  switch (end) {
    case SingularEnd::lower:
      return lower_transformed(g, iv.lo, iv.hi, false, iv.hi, tol, max_panels);
    case SingularEnd::upper:
      return upper_transformed(g, iv.lo, iv.hi, false, iv.lo, tol, max_panels);
    case SingularEnd::both: {
      const double mid = iv.mid();
      const QuadResult left = lower_transformed(g, iv.lo, mid, true, iv.hi, 0.5 * tol, max_panels);
      const QuadResult right =
          upper_transformed(g, mid, iv.hi, true, iv.lo, 0.5 * tol, max_panels);
      return QuadResult{left.value + right.value, left.err_estimate + right.err_estimate,
                        left.evaluations + right.evaluations};
    }
  }
  throw DomainError("unknown singular end");
}

double invert_monotone(const ScalarFn& f, double y, Interval bracket, double tol) {
  double a = bracket.lo;
  double b = bracket.hi;
  const double f_lo = f(a);
  const double f_hi = f(b);
  if (!std::isfinite(f_lo) || !std::isfinite(f_hi) || !std::isfinite(y)) {
    throw EvaluationError("invert_monotone: non-finite value at bracket end or target");
  }
  if (f_lo == f_hi) throw MonotonicityError("invert_monotone: f is constant across the bracket");
  const double lo_val = std::min(f_lo, f_hi);
  const double hi_val = std::max(f_lo, f_hi);
  if (y < lo_val || y > hi_val) {
    std::ostringstream os;
    os << "invert_monotone: target " << y << " outside [" << lo_val << ", " << hi_val << "]";
    throw OutOfRangeError(os.str());
  }

  const double ftol = tol * (1.0 + std::abs(y));
  // true residuals at the bracket ends, and Illinois-weighted copies
  double ra = f_lo - y;
  double rb = f_hi - y;
  if (ra == 0.0) return a;
  if (rb == 0.0) return b;
  double fa = ra;
  double fb = rb;

  int side = 0;
  double last_width = b - a;
  for (int iter = 0; iter < 400; ++iter) {
    double x = (a * fb - b * fa) / (fb - fa);
    const double width = b - a;
    // Bisect when regula falsi stalls or leaves the bracket.
    if (!(x > a && x < b) || (iter % 3 == 2 && width > 0.5 * last_width)) {
      x = 0.5 * (a + b);
    }
    if (iter % 3 == 2) last_width = width;
    if (!(x > a && x < b)) break;

    const double fx_raw = f(x);
    if (!std::isfinite(fx_raw)) throw EvaluationError("invert_monotone: non-finite f");
    const double va = ra + y;
    const double vb = rb + y;
    const double slack = 8.0 * kEps * std::max({std::abs(va), std::abs(vb), 1.0});
    if (fx_raw < std::min(va, vb) - slack || fx_raw > std::max(va, vb) + slack) {
      std::ostringstream os;
      os << "invert_monotone: f is not monotone on the bracket (sample at x=" << x << ")";
      throw MonotonicityError(os.str());
    }
    const double fx = fx_raw - y;
    if (std::abs(fx) <= ftol) return x;

    if ((fx < 0.0) == (ra < 0.0)) {
      a = x;
      ra = fx;
      fa = fx;
      if (side == -1) fb *= 0.5;
      side = -1;
    } else {
      b = x;
      rb = fx;
      fb = fx;
      if (side == 1) fa *= 0.5;
      side = 1;
    }
    if (b - a <= 2.0 * kEps * std::max(std::abs(a), std::abs(b))) break;
  }
  return std::abs(ra) < std::abs(rb) ? a : b;
}

Minimum minimize_scalar(const ScalarFn& f, Interval bracket, double tol) {
  if (!(tol > 0.0)) throw DomainError("minimize_scalar: tol must be positive");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto eval = [&](double x) {
    const double v = f(x);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "minimize_scalar: non-finite objective at x=" << x;
      throw EvaluationError(os.str());
    }
    return v;
  };
  double a = bracket.lo;
  double b = bracket.hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = eval(d);
    }
  }
  const double x = 0.5 * (a + b);
  return Minimum{x, eval(x)};
}

std::vector<IndexPair> sign_changes(std::span<const std::pair<double, double>> values) {
  std::vector<IndexPair> out;
  int previous = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i].second;
    int sign = v > 0.0 ? 1 : (v < 0.0 ? -1 : previous);
    if (i > 0 && previous != 0 && sign != 0 && sign != previous) out.emplace_back(i - 1, i);
    previous = sign;
  }
  return out;
}

std::vector<double> midpoint_grid(Interval iv, std::size_t count) {
  std::vector<double> xs(count);
  const double step = iv.width() / static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) {
    xs[i] = iv.lo + (static_cast<double>(i) + 0.5) * step;
  }
  return xs;
}

std::vector<double> closed_grid(Interval iv, std::size_t count) {
  if (count < 2) throw DomainError("closed_grid needs at least two points");
  std::vector<double> xs(count);
  const double step = iv.width() / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) xs[i] = iv.lo + static_cast<double>(i) * step;
  xs.back() = iv.hi;
  return xs;
}

}  // namespace revsphere
