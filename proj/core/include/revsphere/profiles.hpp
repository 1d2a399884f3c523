#pragma once

// Rotationally symmetric metrics dr^2 + m(r)^2 dtheta^2 on the 2-sphere, with
// r in [0, pi] the distance from the north pole. Every family here is
// reflection symmetric, m(pi - r) = m(r), and carries closed-form derivatives
// of m up to third order.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "revsphere/error.hpp"

namespace revsphere {

// Value and first three derivatives of a scalar function at one point.
struct Jet {
  double f;
  double d1;
  double d2;
  double d3;
};

// Weight B(x) = sin^2(2x) * P(cos^2 x) for a polynomial P with coefficients
// c0 + c1 u + c2 u^2 + ... in u = cos^2 x. The plain sin^2(2x) weight is
// P = 1; P = 0 switches the perturbation off. B vanishes at 0 and pi/2 and is
// symmetric about pi/2 for every P.
class BFunction {
 public:
  static BFunction sin2sq();
  static BFunction sin2sq_poly(std::vector<double> coeffs);
  static BFunction zero();

  [[nodiscard]] Jet eval(double x) const;
  [[nodiscard]] double operator()(double x) const { return eval(x).f; }
  [[nodiscard]] const std::vector<double>& coefficients() const noexcept { return coeffs_; }
  [[nodiscard]] bool is_zero() const noexcept { return coeffs_.empty(); }
  // "sin2sq", "zero" or "sin2sq-poly:c0,c1,..."
  [[nodiscard]] std::string describe() const;

 private:
  explicit BFunction(std::vector<double> coeffs);
  std::vector<double> coeffs_;
};

// h(x) = x - alpha sin 2x + B(x) sin(2 n^2 x) / n^5. The unperturbed part is
// h0(x) = x - alpha sin 2x; n = 0 means no perturbation.
class HGenerator {
 public:
  // Throws DomainError unless 0 < alpha < 1/2.
  HGenerator(double alpha, int n, BFunction b = BFunction::sin2sq());

  [[nodiscard]] double alpha() const noexcept { return alpha_; }
  [[nodiscard]] int n() const noexcept { return n_; }
  [[nodiscard]] const BFunction& b() const noexcept { return b_; }

  [[nodiscard]] Jet h(double x) const;
  // h and h' only.
  [[nodiscard]] std::pair<double, double> h_slope(double x) const;
  [[nodiscard]] Jet h0(double x) const;
  // Perturbation R(x) = B(x) sin(2 n^2 x) / n^5 and its derivatives.
  [[nodiscard]] Jet perturbation(double x) const;

 private:
  double alpha_;
  int n_;
  BFunction b_;
};

enum class Family { unit_sphere, lambda, h_generated, theorem_a };

std::string family_name(Family f);

class MetricProfile {
 public:
  [[nodiscard]] Jet eval(double r) const;
  [[nodiscard]] double m(double r) const;
  [[nodiscard]] double dm(double r) const;
  // m and m' only; the geodesic field needs nothing more.
  [[nodiscard]] std::pair<double, double> m_slope(double r) const;

  // Equatorial radius m(pi/2).
  [[nodiscard]] double a() const noexcept { return a_; }
  [[nodiscard]] Family family() const noexcept { return family_; }
  [[nodiscard]] double lambda() const noexcept { return lambda_; }
  [[nodiscard]] const std::optional<HGenerator>& generator() const noexcept { return gen_; }

  // A(x) = sqrt(a^2 - m^2) / m' in closed form where the family provides one:
  // 1 for the unit sphere, (1 + lambda cos^2 x) / sqrt(lambda + 1) for the
  // lambda family, 1 / h'(x) for h-generated metrics.
  [[nodiscard]] double closed_form_a(double x) const;

  [[nodiscard]] std::string describe() const;

 private:
  friend MetricProfile make_unit_sphere();
  friend MetricProfile make_lambda_profile(double lambda);
  friend MetricProfile make_h_profile(const HGenerator& gen);
  friend MetricProfile make_theorem_a(int n);

  MetricProfile() = default;

  Family family_ = Family::unit_sphere;
  double a_ = 1.0;
  double lambda_ = 0.0;
  std::optional<HGenerator> gen_;
};

MetricProfile make_unit_sphere();
// m(r) = sqrt(lambda + 1) sin r / sqrt(1 + lambda cos^2 r); lambda >= 0.
MetricProfile make_lambda_profile(double lambda);
// m(r) = a sin h(r) with a = 1 / h'(0) = 1 / (1 - 2 alpha).
MetricProfile make_h_profile(const HGenerator& gen);
// m(r) = 3 sin(r - sin 2r / 3 + sin^2 2r sin 2n^2 r / n^5); n >= 2.
MetricProfile make_theorem_a(int n);

struct HConditionReport {
  bool h1_positive;        // h' > 0 on [0, pi/2)
  double h1_margin;        // min h' over the grid
  bool symmetric;          // h(pi - x) = pi - h(x)
  double symmetry_defect;  // max |h(pi - x) + h(x) - pi|
  bool h2_positive;        // h'' > 0 on (0, pi/2)
  double h2_margin;        // min h'' over the grid
};

// Grid checks on midpoints of grid_size cells of [0, pi/2] (symmetry on [0, pi]).
HConditionReport validate_h_conditions(const HGenerator& gen, std::size_t grid_size);

struct SupBounds {
  double sup_h1;
  double sup_h2;
};

// Grid suprema of |h'| and |h''| on [0, pi]. Perturbed
// generators are sampled with at least 32 n^2 + 1 points.
SupBounds derivative_sup_bounds(const HGenerator& gen, std::size_t grid_size);

// Smallest n in [2, n_max] whose generator (alpha, n, b) has grid suprema of
// |h'| and |h''| at most bound. Throws NotFoundError when none qualifies.
int find_minimal_n0(double alpha, const BFunction& b, double bound, int n_max,
                    std::size_t grid_size = 4000);

struct RatioSups {
  double first;   // sup |R'| / h0'
  double second;  // sup |R''| / h0''
};

// Grid suprema over the open interval (0, pi/2). Requires n >= 1.
RatioSups perturbation_ratio_sups(const HGenerator& gen, std::size_t grid_size);

// max over 1 <= n <= n_max and a closed grid of [0, pi] of |sin nx| - n |sin x|.
double sin_multiple_bound_check(int n_max, std::size_t grid_size);

}  // namespace revsphere
