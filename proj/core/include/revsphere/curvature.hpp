#pragma once

// Gaussian curvature along a meridian, its derivative for h-generated
// metrics, and the t_k sampling machinery that forces curvature extrema to
// accumulate as n grows.

#include <cstddef>
#include <vector>

#include "revsphere/numerics.hpp"
#include "revsphere/profiles.hpp"

namespace revsphere {

// Below this distance from a pole the curvature is taken from its pole limit.
inline constexpr double kPoleGuard = 1e-6;

// G(x) = -m''(x) / m(x); at the poles the limit -m'''(0) / m'(0).
double gaussian_curvature(const MetricProfile& p, double x);

// G(x) = h'(x)^2 - cot(h(x)) h''(x). Throws DomainError at the poles.
double curvature_via_h(const HGenerator& gen, double x);

// G'(x) = [2 (2 - cos 2h) h' h'' - sin 2h h'''] / (2 sin^2 h).
// Throws DomainError when |sin h(x)| < 1e-8.
double curvature_derivative(const HGenerator& gen, double x);

// t_k = k pi / (2 n^2).
double t_grid_point(int n, int k);

// Closed form of h''' at t_k, where sin(2 n^2 t_k) = 0:
// 8 alpha cos 2t_k + (-1)^k (6 n^-3 B''(t_k) - 8 n B(t_k)).
// Requires n >= 1 and 1 <= k <= n^2.
double h_triple_prime_at_tk(const HGenerator& gen, int k);

struct DeltaConstants {
  double eps0;     // (2 delta - sin 2 delta) / 8
  double c_delta;  // min(sin 6 eps0, sin(delta - 2 eps0))
  int n0;          // smallest n with grid-sup |B sin(2 n^2 x)| / n^5 < eps0
};

// delta in (0, pi/3). Throws NotFoundError when no n <= n_max qualifies.
DeltaConstants delta_constants(double delta, const BFunction& b, int n_max);

struct TkSample {
  int k;
  double t;
  double sin2h;
  double b;
  double h3;       // closed form at t_k
  double f;        // the bounded remainder term
  double eps;      // f / ((-1)^k 8 n sin 2h B); NaN when B(t_k) = 0
  double gprime;   // G'(t_k)
  int sign;        // sign of G'(t_k)
};

struct TkDiagnostics {
  int n;
  double delta;
  double eps0;
  double c_delta;
  int n0_delta;   // threshold for the sin 2h lower bound
  int n0_deriv;   // threshold for sup |h'|, sup |h''| <= 2
  double max_b2;  // max |B''| on [0, pi/2]
  double f_bound; // 28 + 6 n0_deriv^-3 max |B''|
  std::vector<TkSample> samples;
  std::vector<int> gaps;  // k with B(t_k) = 0
  bool empty;
  bool f_bounded;     // |f| < f_bound at every t_k
  bool sin2h_bounded; // sin 2h(t_k) >= c_delta at every t_k
  bool eps_small;     // |eps| < 1/2 at every t_k
  bool alternates;    // consecutive G'(t_k) signs strictly alternate
};

// Requires n >= 2 and I inside (delta, (pi - delta) / 2).
TkDiagnostics tk_diagnostics(const HGenerator& gen, Interval iv, double delta,
                            int n_max = 200);

enum class ExtremumKind { min, max };

struct Extremum {
  double x;
  ExtremumKind kind;
};

struct ExtremaReport {
  std::size_t count;
  std::vector<Extremum> extrema;
  std::size_t grid_size;  // grid actually used
};

// Sign changes of G' on a midpoint grid of iv, each refined by bisection.
// h-generated profiles use the closed-form derivative; other families a
// centred difference of G with step 1e-5. Sign changes count only where |G'|
// exceeds 1e-9 on both sides. Perturbed profiles are sampled with at least
// 16 n^2 points.
ExtremaReport count_extrema(const MetricProfile& p, Interval iv, std::size_t grid_size);

}  // namespace revsphere
