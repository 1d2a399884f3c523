#include "revsphere/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "revsphere/numerics.hpp"

namespace revsphere {

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t oversampled(std::size_t grid_size, int n) {
  const std::size_t nn = static_cast<std::size_t>(n);
  return std::max(grid_size, 32 * nn * nn + 1);
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

BFunction::BFunction(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw DomainError("B polynomial coefficients must be finite");
  }
}

BFunction BFunction::sin2sq() { return BFunction({1.0}); }
BFunction BFunction::sin2sq_poly(std::vector<double> coeffs) { return BFunction(std::move(coeffs)); }
BFunction BFunction::zero() { return BFunction({}); }

Jet BFunction::eval(double x) const {
  if (coeffs_.empty()) return {0.0, 0.0, 0.0, 0.0};

  const double s2 = std::sin(2.0 * x);
  const double c2 = std::cos(2.0 * x);
  const double s4 = std::sin(4.0 * x);
  const double c4 = std::cos(4.0 * x);
  const Jet s{s2 * s2, 2.0 * s4, 8.0 * c4, -32.0 * s4};

  // P and its derivatives at u = cos^2 x by Horner.
  const double u = std::cos(x) * std::cos(x);
  double p0 = 0.0, p1 = 0.0, p2 = 0.0, p3 = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    p3 = p3 * u + p2;
    p2 = p2 * u + p1;
    p1 = p1 * u + p0;
    p0 = p0 * u + *it;
  }
  // Horner leaves P''/2 and P'''/6.
  p2 *= 2.0;
  p3 *= 6.0;
  const double du1 = -s2;
  const double du2 = -2.0 * c2;
  const double du3 = 4.0 * s2;
  const Jet q{p0, p1 * du1, p2 * du1 * du1 + p1 * du2,
              p3 * du1 * du1 * du1 + 3.0 * p2 * du1 * du2 + p1 * du3};

  return {s.f * q.f, s.d1 * q.f + s.f * q.d1, s.d2 * q.f + 2.0 * s.d1 * q.d1 + s.f * q.d2,
          s.d3 * q.f + 3.0 * s.d2 * q.d1 + 3.0 * s.d1 * q.d2 + s.f * q.d3};
}

std::string BFunction::describe() const {
  if (coeffs_.empty()) return "zero";
  if (coeffs_.size() == 1 && coeffs_[0] == 1.0) return "sin2sq";
  std::string out = "sin2sq-poly:";
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) out += ',';
    out += format_real(coeffs_[i]);
  }
  return out;
}

HGenerator::HGenerator(double alpha, int n, BFunction b) : alpha_(alpha), n_(n), b_(std::move(b)) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw DomainError("alpha must lie in (0, 1/2)");
  if (n < 0) throw DomainError("n must be non-negative");
}

Jet HGenerator::h0(double x) const {
  const double s = std::sin(2.0 * x);
  const double c = std::cos(2.0 * x);
  return {x - alpha_ * s, 1.0 - 2.0 * alpha_ * c, 4.0 * alpha_ * s, 8.0 * alpha_ * c};
}

Jet HGenerator::perturbation(double x) const {
  if (n_ == 0 || b_.is_zero()) return {0.0, 0.0, 0.0, 0.0};
  const double nd = static_cast<double>(n_);
  const double w = 2.0 * nd * nd;
  const double inv = 1.0 / std::pow(nd, 5);
  const double s = std::sin(w * x);
  const double c = std::cos(w * x);
  const Jet b = b_.eval(x);
  return {b.f * s * inv, (b.d1 * s + w * b.f * c) * inv,
          (b.d2 * s + 2.0 * w * b.d1 * c - w * w * b.f * s) * inv,
          (b.d3 * s + 3.0 * w * b.d2 * c - 3.0 * w * w * b.d1 * s - w * w * w * b.f * c) * inv};
}

std::pair<double, double> HGenerator::h_slope(double x) const {
  const double s2 = std::sin(2.0 * x);
  const double c2 = std::cos(2.0 * x);
  double h = x - alpha_ * s2;
  double d1 = 1.0 - 2.0 * alpha_ * c2;
  if (n_ != 0 && !b_.is_zero()) {
    const double nd = static_cast<double>(n_);
    const double w = 2.0 * nd * nd;
    const double inv = 1.0 / std::pow(nd, 5);
    const double s = std::sin(w * x);
    const double c = std::cos(w * x);
    const Jet b = b_.eval(x);
    h += b.f * s * inv;
    d1 += (b.d1 * s + w * b.f * c) * inv;
  }
  return {h, d1};
}

Jet HGenerator::h(double x) const {
  const Jet base = h0(x);
  const Jet r = perturbation(x);
  return {base.f + r.f, base.d1 + r.d1, base.d2 + r.d2, base.d3 + r.d3};
}

std::string family_name(Family f) {
  switch (f) {
    case Family::unit_sphere: return "unit-sphere";
    case Family::lambda: return "lambda";
    case Family::h_generated: return "h";
    case Family::theorem_a: return "theorem-a";
  }
  return "unknown";
}

Jet MetricProfile::eval(double r) const {
  switch (family_) {
    case Family::unit_sphere: {
      const double s = std::sin(r), c = std::cos(r);
      return {s, c, -s, -c};
    }
    case Family::lambda: {
      const double s = std::sin(r), c = std::cos(r);
      const double l = lambda_;
      const double big2 = 1.0 + l * c * c;
      const double big = std::sqrt(big2);
      const double k = a_;
      const double k3 = k * k * k;
      const double inv = 1.0 / big;
      const double inv2 = inv * inv;
      const double inv3 = inv2 * inv;
      const double inv5 = inv3 * inv2;
      const double q = 2.0 * l * c * c - 1.0;
      return {k * s * inv, k3 * c * inv3, k3 * s * q * inv5,
              k3 * c * inv5 * inv2 * ((6.0 * l * c * c - 1.0 - 4.0 * l) * big2 + 5.0 * l * s * s * q)};
    }
    case Family::h_generated:
    case Family::theorem_a: {
      const Jet h = gen_->h(r);
      const double sh = std::sin(h.f), ch = std::cos(h.f);
      return {a_ * sh, a_ * ch * h.d1, a_ * (-sh * h.d1 * h.d1 + ch * h.d2),
              a_ * (-ch * h.d1 * h.d1 * h.d1 - 3.0 * sh * h.d1 * h.d2 + ch * h.d3)};
    }
  }
  return {0.0, 0.0, 0.0, 0.0};
}

double MetricProfile::m(double r) const {
  switch (family_) {
    case Family::unit_sphere: return std::sin(r);
    case Family::lambda: {
      const double c = std::cos(r);
      return a_ * std::sin(r) / std::sqrt(1.0 + lambda_ * c * c);
    }
    default: return a_ * std::sin(gen_->h(r).f);
  }
}

double MetricProfile::dm(double r) const { return eval(r).d1; }

std::pair<double, double> MetricProfile::m_slope(double r) const {
  switch (family_) {
    case Family::unit_sphere: return {std::sin(r), std::cos(r)};
    case Family::lambda: {
      const double s = std::sin(r), c = std::cos(r);
      const double big2 = 1.0 + lambda_ * c * c;
      const double inv = 1.0 / std::sqrt(big2);
      const double k = a_;
      return {k * s * inv, k * k * k * c * inv * inv * inv};
    }
    default: {
      const auto [h, d1] = gen_->h_slope(r);
      return {a_ * std::sin(h), a_ * std::cos(h) * d1};
    }
  }
}

double MetricProfile::closed_form_a(double x) const {
  switch (family_) {
    case Family::unit_sphere: return 1.0;
    case Family::lambda: {
      const double c = std::cos(x);
      return (1.0 + lambda_ * c * c) / a_;
    }
    default: return 1.0 / gen_->h(x).d1;
  }
}

std::string MetricProfile::describe() const {
  switch (family_) {
    case Family::unit_sphere: return "unit-sphere";
    case Family::lambda: return "lambda(" + format_real(lambda_) + ")";
    case Family::h_generated:
      return "h(alpha=" + format_real(gen_->alpha()) + ",n=" + std::to_string(gen_->n()) +
             ",b=" + gen_->b().describe() + ")";
    case Family::theorem_a: return "theorem-a(" + std::to_string(gen_->n()) + ")";
  }
  return "unknown";
}

MetricProfile make_unit_sphere() { return MetricProfile(); }

MetricProfile make_lambda_profile(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be finite and >= 0");
  MetricProfile p;
  p.family_ = Family::lambda;
  p.lambda_ = lambda;
  p.a_ = std::sqrt(lambda + 1.0);
  return p;
}

MetricProfile make_h_profile(const HGenerator& gen) {
  MetricProfile p;
  p.family_ = Family::h_generated;
  p.gen_ = gen;
  p.a_ = 1.0 / (1.0 - 2.0 * gen.alpha());
  return p;
}

MetricProfile make_theorem_a(int n) {
  if (n < 2) throw DomainError("theorem-a family needs n >= 2");
  MetricProfile p = make_h_profile(HGenerator(1.0 / 3.0, n, BFunction::sin2sq()));
  p.family_ = Family::theorem_a;
  return p;
}

HConditionReport validate_h_conditions(const HGenerator& gen, std::size_t grid_size) {
  if (grid_size < 100) throw DomainError("validate_h_conditions needs grid_size >= 100");
  const std::size_t count = oversampled(grid_size, gen.n());
  HConditionReport rep{};
  rep.h1_margin = std::numeric_limits<double>::infinity();
  rep.h2_margin = std::numeric_limits<double>::infinity();
  for (double x : midpoint_grid(Interval(0.0, kPi / 2), count)) {
    const Jet h = gen.h(x);
    rep.h1_margin = std::min(rep.h1_margin, h.d1);
    rep.h2_margin = std::min(rep.h2_margin, h.d2);
  }
  rep.symmetry_defect = 0.0;
  for (double x : midpoint_grid(Interval(0.0, kPi), 2 * count)) {
    rep.symmetry_defect = std::max(rep.symmetry_defect, std::abs(gen.h(kPi - x).f + gen.h(x).f - kPi));
  }
  rep.h1_positive = rep.h1_margin > 0.0;
  rep.h2_positive = rep.h2_margin > 0.0;
  rep.symmetric = rep.symmetry_defect <= 1e-10;
  return rep;
}

SupBounds derivative_sup_bounds(const HGenerator& gen, std::size_t grid_size) {
  if (grid_size < 1000) throw DomainError("derivative_sup_bounds needs grid_size >= 1000");
  SupBounds out{0.0, 0.0};
  for (double x : closed_grid(Interval(0.0, kPi), oversampled(grid_size, gen.n()))) {
    const Jet h = gen.h(x);
    out.sup_h1 = std::max(out.sup_h1, std::abs(h.d1));
    out.sup_h2 = std::max(out.sup_h2, std::abs(h.d2));
  }
  return out;
}

int find_minimal_n0(double alpha, const BFunction& b, double bound, int n_max, std::size_t grid_size) {
  for (int n = 2; n <= n_max; ++n) {
    const SupBounds s = derivative_sup_bounds(HGenerator(alpha, n, b), grid_size);
    if (s.sup_h1 <= bound && s.sup_h2 <= bound) return n;
  }
  throw NotFoundError("no n <= " + std::to_string(n_max) + " meets the derivative bound");
}

RatioSups perturbation_ratio_sups(const HGenerator& gen, std::size_t grid_size) {
  RatioSups out{0.0, 0.0};
  if (gen.n() == 0 || gen.b().is_zero()) return out;
  for (double x : midpoint_grid(Interval(0.0, kPi / 2), oversampled(grid_size, gen.n()))) {
    const Jet r = gen.perturbation(x);
    const Jet h0 = gen.h0(x);
    out.first = std::max(out.first, std::abs(r.d1) / h0.d1);
    out.second = std::max(out.second, std::abs(r.d2) / h0.d2);
  }
  return out;
}

double sin_multiple_bound_check(int n_max, std::size_t grid_size) {
  double worst = -std::numeric_limits<double>::infinity();
  const std::vector<double> xs = closed_grid(Interval(0.0, kPi), grid_size);
  for (int n = 1; n <= n_max; ++n) {
    for (double x : xs) {
      worst = std::max(worst, std::abs(std::sin(n * x)) - n * std::abs(std::sin(x)));
    }
  }
  return worst;
}

}  // namespace revsphere
