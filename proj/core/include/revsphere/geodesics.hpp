#pragma once

// Geodesics of dr^2 + m(r)^2 dtheta^2, point-to-point distance by fan
// shooting, and cut points located as the first arc length where a geodesic
// stops being minimal.
//
// A direction at a point is the angle xi from the meridian direction d/dr:
// xi = 0 heads south (r increasing), xi = pi/2 heads east (theta increasing).
// Along a geodesic the angle psi to the meridian obeys the Clairaut relation
// m(r) sin psi = nu.

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "revsphere/numerics.hpp"
#include "revsphere/ode.hpp"
#include "revsphere/profiles.hpp"

namespace revsphere {

struct SurfacePoint {
  double r;
  double theta;  // [0, 2 pi); 0 at the poles
};

// Canonical point: theta wrapped into [0, 2 pi), zero at a pole. r must lie in [0, pi].
SurfacePoint make_point(double r, double theta);

// Angle wrapped into (-pi, pi].
double wrap_angle(double x);

struct GeodesicState {
  double s;
  double r;
  double theta;  // continuous along the path, not wrapped
  double psi;
};

// One unit-speed geodesic from a non-polar start, integrated over [0, length].
// Meridians (|sin xi| < 1e-9) are followed in closed form through the poles.
class Geodesic {
 public:
  Geodesic(const MetricProfile& p, SurfacePoint start, double xi, double length, double tol);

  [[nodiscard]] GeodesicState at(double s) const;
  [[nodiscard]] double length() const noexcept { return length_; }
  [[nodiscard]] double nu() const noexcept { return nu_; }
  [[nodiscard]] double xi() const noexcept { return xi_; }
  [[nodiscard]] bool is_meridian() const noexcept { return !sol_.has_value(); }
  [[nodiscard]] const SurfacePoint& start() const noexcept { return start_; }
  // Arc lengths where dr/ds changes sign.
  [[nodiscard]] const std::vector<double>& turning_points() const noexcept { return turning_; }
  // States at step boundaries and turning points, ascending in s.
  [[nodiscard]] std::vector<GeodesicState> nodes() const;
  // Crossings of the parallel r = rb with 0 < s <= length, ascending.
  [[nodiscard]] std::vector<GeodesicState> crossings(double rb) const;
  // max |m(r) sin psi - nu| over the nodes and count uniform samples.
  [[nodiscard]] double clairaut_drift(std::size_t count = 256) const;

 private:
  MetricProfile profile_;
  SurfacePoint start_;
  double xi_;
  double nu_;
  double length_;
  std::optional<OdeSolution<3>> sol_;
  std::vector<double> turning_;
};

struct GeodesicPath {
  SurfacePoint start;
  double xi;
  double nu;
  std::vector<GeodesicState> samples;
  std::vector<double> turning_points;
  double clairaut_drift;
};

// Samples the geodesic at sample_count uniform arc lengths on [0, s_max].
GeodesicPath shoot(const MetricProfile& p, SurfacePoint start, double xi, double s_max, double tol,
                   std::size_t sample_count = 257);

// Theta-advance of the geodesic leaving the parallel r0 < pi/2 with Clairaut
// constant nu until it reaches the parallel pi - r0:
//   integral_{r0}^{pi - r0} nu / (m sqrt(m^2 - nu^2)) dx,  0 < nu <= m(r0).
double swept_angle_direct(const MetricProfile& p, double r0, double nu, double tol = kDefaultQuadTol);

// Length of the broken path from a through the nearer pole to b; an upper
// bound for the distance, attained when b lies on the opposite meridian.
double pole_path_length(SurfacePoint a, SurfacePoint b);

struct DistanceResult {
  double distance;
  double xi;  // initial direction at the start of a realizing geodesic
};

// A fan of geodesics with directions 2 pi (i + 1/2) / size, kept as Hermite
// nodes, used to bracket the directions that reach a target.
class GeodesicFan {
 public:
  GeodesicFan(const MetricProfile& p, SurfacePoint start, std::size_t size, double length,
              double fan_tol = 1e-10, double refine_tol = 1e-12);

  [[nodiscard]] std::size_t size() const noexcept { return rays_.size(); }
  [[nodiscard]] double length() const noexcept { return length_; }
  [[nodiscard]] const SurfacePoint& start() const noexcept { return start_; }
  [[nodiscard]] const MetricProfile& profile() const noexcept { return profile_; }
  [[nodiscard]] double refine_tol() const noexcept { return refine_tol_; }

  // A pair of neighbouring rays whose j-th crossings of the target parallel
  // straddle the target theta, with linearly interpolated estimates.
  struct Candidate {
    double xi_lo;
    double xi_hi;
    double miss_lo;
    double miss_hi;
    std::size_t crossing;
    double xi_est;
    double s_est;
  };

  // Candidates with estimated length below max_length, ascending in s_est.
  [[nodiscard]] std::vector<Candidate> candidates(SurfacePoint target, double max_length) const;

  // Re-shoots inside the candidate's bracket until the crossing lands on the
  // target (|miss| < 1e-12 or bracket below 1e-10). The result is the
  // shortest path length seen: crossing length plus the arc along the
  // parallel to the target. nullopt if the crossing disappears.
  [[nodiscard]] std::optional<DistanceResult> refine(const Candidate& c, SurfacePoint target) const;

  // Distance from the fan's start to target, never above the pole path.
  [[nodiscard]] DistanceResult distance_to(SurfacePoint target) const;

 private:
  struct Node {
    double s, r, theta, dr, dtheta;
  };
  struct Crossing {
    double s;
    double theta;
  };
  std::vector<Crossing> ray_crossings(std::size_t i, double rb, double max_length) const;

  MetricProfile profile_;
  SurfacePoint start_;
  double length_;
  double refine_tol_;
  std::vector<double> xis_;
  std::vector<std::vector<Node>> rays_;
};

// Shoots fans of fan_size rays (>= 256) from both ends and keeps the shorter
// result, so geodesics tangent to one end's parallel are still found.
DistanceResult distance(const MetricProfile& p, SurfacePoint a, SurfacePoint b, std::size_t fan_size,
                        double tol = 1e-12);

struct CutOptions {
  std::size_t fan_size = 4096;
  std::size_t directions = 64;
  double ode_tol = 1e-12;
  // A geodesic has lost minimality at s once some path is shorter than s - loss_threshold.
  double loss_threshold = 1e-8;
  // Coarse fan estimates are trusted when they clear the threshold by this much.
  double coarse_margin = 1e-3;
  // Bisection on the arc length stops below this width.
  double s_resolution = 1e-9;
  double radial_tol = 5e-4;
};

struct CutPoint {
  double xi;
  bool found;
  SurfacePoint point;
  double distance;
  bool antipode;  // snapped to the antipode of the start
};

// Cut point along the geodesic from the fan's start with direction xi.
CutPoint cut_point_along(const GeodesicFan& fan, double xi, const CutOptions& opts = {});
CutPoint cut_point_along(const MetricProfile& p, SurfacePoint start, double xi, const CutOptions& opts = {});

struct ThetaRange {
  double lo;
  double hi;
};

struct CutLocusArc {
  SurfacePoint start;
  double parallel_r;  // pi - r(start)
  // Cut theta extent in the chart (theta_c - pi, theta_c + pi] with theta_c = theta(start) + pi.
  ThetaRange theta_interval;
  std::vector<CutPoint> per_direction;  // ordered by xi
  double max_radial_deviation;
  double radial_tol;
  bool verified;    // every cut point found and within radial_tol of parallel_r
  bool on_equator;  // the start lies on the equator
};

// Cut points for directions xi_j = -pi + 2 pi j / directions.
CutLocusArc cut_locus(const MetricProfile& p, SurfacePoint start, const CutOptions& opts = {});

}  // namespace revsphere
