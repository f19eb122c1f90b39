#pragma once

#include <string>
#include <utility>
#include <vector>

#include "anosov/parsets.hpp"

namespace anosov {

struct PathKnot {
  double t = 0.0;
  FactoredPoint p;
};

/// A discrete path: knots with strictly increasing parameters, interpolated
/// by geodesics in between. Knots are kept in spectral form so paths may
/// wander arbitrarily far from the base point.
class PathSample {
public:
  explicit PathSample(std::vector<PathKnot> knots);

  [[nodiscard]] const std::vector<PathKnot>& knots() const noexcept { return knots_; }
  [[nodiscard]] std::size_t size() const noexcept { return knots_.size(); }
  [[nodiscard]] double t_min() const noexcept { return knots_.front().t; }
  [[nodiscard]] double t_max() const noexcept { return knots_.back().t; }

  /// Point at parameter t by geodesic interpolation between bracketing
  /// knots. Throws RangeError outside [t_min, t_max].
  [[nodiscard]] FactoredPoint at(double t) const;

private:
  std::vector<PathKnot> knots_;
};

struct StraightSpacedCheck {
  /// Largest straightness defect: pi minus the smallest bending angle at an
  /// interior point (0 for sequences without interior points).
  double eps = 0.0;
  /// Smallest consecutive spacing.
  double l = 0.0;
  /// All consecutive segments regular for the given cone.
  bool regular = false;
};

/// Measure straightness and spacing of a point sequence against a cone.
/// An irregular or degenerate hinge records eps = pi.
[[nodiscard]] StraightSpacedCheck check_straight_spaced(const std::vector<FactoredPoint>& seq,
                                                        const ThetaSpec& theta);

/// Dense convenience overload.
[[nodiscard]] StraightSpacedCheck check_straight_spaced(const std::vector<Point>& seq,
                                                        const ThetaSpec& theta);

struct MorseVerdict {
  double L_fit = 1.0;
  double A_fit = 0.0;
  /// Largest type angle to the model direction over checked regular pairs.
  double theta_fit = 0.0;
  /// Largest measured distance from an intermediate sample to the diamond
  /// of a checked pair.
  double D_measured = 0.0;
  bool pass = false;
  /// First failing check, empty when pass.
  std::string detail;
};

/// Check a path against quasigeodesic constants (L, A) and closeness D to
/// the diamonds of its knot pairs. Pairs are enumerated lexicographically
/// and stride-subsampled at pair_budget; diamond defects are measured at the
/// knots strictly between a pair, plus `subdivision - 1` extra geodesic
/// samples per knot interval when subdivision > 1. Fitted constants use the
/// additive allowance tol::fit_offset.
[[nodiscard]] MorseVerdict check_morse(const PathSample& path, double L, double A,
                                       const ThetaSpec& theta, double D,
                                       int pair_budget = tol::pair_budget,
                                       int subdivision = 0);

/// Replace the [t1, t2] stretch of a path by a patch covering exactly that
/// parameter range. Patch endpoints must match the host path at t1 and t2
/// within 1e-9 (EndpointMismatch); the range must be nondegenerate and
/// inside the path (RangeError).
[[nodiscard]] PathSample replace_segment(const PathSample& path, double t1, double t2,
                                         const PathSample& patch);

/// Flat counterexample pair: an axis path through a plane sector and a
/// staple detour patch over [-r, r] whose replacement is a uniform
/// quasigeodesic family with no uniform Morse constants (fitted L grows
/// linearly in r). Returns {axis, staple}.
[[nodiscard]] std::pair<PathSample, PathSample> euclidean_counterexample(double r);

}  // namespace anosov
