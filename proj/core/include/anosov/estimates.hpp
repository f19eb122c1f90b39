#pragma once

#include <cstdint>

#include "anosov/parsets.hpp"

namespace anosov {

/// One row of an angle measurement sweep: the scale R, the a priori bound
/// for exact-ray configurations at that scale, and the sampled maximum.
/// The bound applies when the sampled points lie on exact model rays;
/// ball-sampled configurations are compared against it as a trend only.
struct AngleBoundReport {
  double R = 0.0;
  double bound = 0.0;
  double measured_max = 0.0;
  int samples = 0;
};

/// Largest distance from x to the parallel sets of cross-family flag pairs.
/// Throws NotAntipodal (with flag indices) when a cross pair is not
/// transverse.
[[nodiscard]] double compute_D(const FlagFamily& a, const FlagFamily& b, const Point& x,
                               double antipodal_tol = tol::antipodal);

/// Visual angle bound: arcsin(2D/R) once R >= 2D + 1, pi below that.
[[nodiscard]] double bound_f(double D, double R);

/// Angle bound at ideal points seen from exact-ray configurations:
/// bound_f(D, R) plus the smallest cone step alpha_n = alpha1 / 2^(n-1)
/// admissible at scale R (pi when even alpha1 is inadmissible).
[[nodiscard]] double bound_f0(double D, double R, double alpha1);

/// Scale above which cone regularity of sampled rays is guaranteed.
[[nodiscard]] double bound_R0(double D, double alpha);

/// Scale above which cone membership propagates across nested cones.
[[nodiscard]] double bound_R1(double D, double alpha);

/// Lower bound on the distance between points seen at angle >= alpha from
/// x at distances >= r.
[[nodiscard]] double separation_lower_bound(double D, double alpha, double r);

/// Guaranteed spacing of the midpoint sequence of an orbit path with
/// displacement >= S: max(0, S sin(alpha) / 2 - 4 D).
[[nodiscard]] double midpoint_spacing_bound(double S, double D, double alpha);

/// Sample cone points toward the two families at radii in [R, 2R) and
/// record the largest angle at the first point between the basepoint and
/// the second point. Irregular sampled segments record angle pi.
/// Deterministic for a fixed seed.
[[nodiscard]] AngleBoundReport measure_max_xi_angle(const FlagFamily& a, const FlagFamily& b,
                                                    const Point& x, const ThetaSpec& theta,
                                                    double R, int samples,
                                                    std::uint64_t seed);

/// A point at distance r from x along the ray of type direction v toward
/// the flag (v unit, weakly decreasing, zero sum, gapped at the pattern).
[[nodiscard]] Point cone_point(const Point& x, const Flag& tau, const Vector& v, double r);

/// Spectral-form overload; the radius may exceed the dense range.
[[nodiscard]] FactoredPoint cone_point(const FactoredPoint& x, const Flag& tau, const Vector& v,
                                       double r);

/// Unit direction in the cone of radius beta about xi, sorted into the
/// chamber: uniform over (angle, tangent direction).
[[nodiscard]] Vector sample_cone_direction(Rng& rng, const Vector& xi, double beta);

}  // namespace anosov
