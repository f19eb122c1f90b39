#pragma once

#include <utility>
#include <vector>

#include "anosov/random.hpp"
#include "anosov/weyl.hpp"

namespace anosov {

/// A partial flag of the pattern's dimensions, stored as a d x d orthonormal
/// matrix whose leading d_j columns span the flag's d_j-dimensional subspace.
class Flag {
public:
  Flag(FacePattern pattern, Matrix basis);

  [[nodiscard]] const FacePattern& pattern() const noexcept { return pattern_; }
  [[nodiscard]] const Matrix& basis() const noexcept { return basis_; }
  [[nodiscard]] int ambient_dim() const noexcept { return pattern_.ambient_dim(); }

  /// The coordinate flag spanned by the first standard basis vectors.
  [[nodiscard]] static Flag standard(const FacePattern& pattern);

  /// The coordinate flag spanned by the last standard basis vectors,
  /// antipodal to the standard one.
  [[nodiscard]] static Flag reversed(const FacePattern& pattern);

private:
  FacePattern pattern_;
  Matrix basis_;
};

/// Asymptotic flag of the oriented segment from x through y: eigenspace
/// accumulates of the segment ordered by decreasing rate. Requires the
/// spectral gaps at every pattern dimension to exceed gap_tol, else throws
/// NotRegular with the first failing dimension. Throws DegenerateSegment
/// when x and y coincide numerically.
[[nodiscard]] Flag flag_of_segment(const Point& x, const Point& y, const FacePattern& pattern,
                                   double gap_tol = tol::gap);

/// Spectral-form overload. The target y may be arbitrarily far; the base x
/// must be moderately spread, since the flag basis is returned as a dense
/// world-frame matrix.
[[nodiscard]] Flag flag_of_segment(const FactoredPoint& x, const FactoredPoint& y,
                                   const FacePattern& pattern, double gap_tol = tol::gap);

struct AntipodalCheck {
  bool antipodal = false;
  /// Smallest singular value over the pattern's complementary-span tests;
  /// positive exactly when the flags are transverse.
  double margin = 0.0;
};

/// Transversality check: spans at complementary dimensions together fill the
/// space. Throws PatternMismatch when the flags carry different patterns.
[[nodiscard]] AntipodalCheck is_antipodal(const Flag& a, const Flag& b,
                                          double antipodal_tol = tol::antipodal);

/// Whether two flags agree as chains of subspaces, measured by the largest
/// principal angle at each pattern dimension.
[[nodiscard]] bool flags_equal(const Flag& a, const Flag& b, double flag_tol = tol::flag);

/// Angle at x between the ideal model-direction points cut out by two flags.
/// Symmetric, zero iff the flags agree, pi exactly on antipodal pairs, and
/// invariant under the group action on all three arguments.
[[nodiscard]] double xi_angle(const Point& x, const Flag& a, const Flag& b, const XiMod& xi);

/// Spectral-form overload for a moderately spread base point.
[[nodiscard]] double xi_angle(const FactoredPoint& x, const Flag& a, const Flag& b,
                              const XiMod& xi);

/// Same angle for the flags of the segments from x to y1 and from x to y2.
[[nodiscard]] double xi_angle_points(const Point& x, const Point& y1, const Point& y2,
                                     const ThetaSpec& theta);

/// Spectral-form overload; works at any spread of the three points, since the
/// segment frames are compared without leaving the base point's factor frame.
[[nodiscard]] double xi_angle_points(const FactoredPoint& x, const FactoredPoint& y1,
                                     const FactoredPoint& y2, const ThetaSpec& theta);

/// Push a flag by an isometry.
[[nodiscard]] Flag act(const GroupElement& g, const Flag& f);

/// Random perturbation of magnitude roughly eps in basis space (test and
/// sampling support).
[[nodiscard]] Flag perturb_flag(const Flag& f, double eps, Rng& rng);

/// A finite set of flags sharing one pattern, typically sampled limit flags
/// of one group factor. The margin annotation, when positive, is a radius of
/// certified transversality against the other families of its collection;
/// flags within one family are usually close to each other, not transverse.
class FlagFamily {
public:
  FlagFamily(FacePattern pattern, std::vector<Flag> flags, double margin = 0.0);

  [[nodiscard]] const FacePattern& pattern() const noexcept { return pattern_; }
  [[nodiscard]] const std::vector<Flag>& flags() const noexcept { return flags_; }
  [[nodiscard]] double margin() const noexcept { return margin_; }
  [[nodiscard]] std::size_t size() const noexcept { return flags_.size(); }

private:
  FacePattern pattern_;
  std::vector<Flag> flags_;
  double margin_;
};

struct Thickening {
  std::vector<FlagFamily> families;
  /// Certified cross-family transversality radius.
  double delta_flag = 0.0;
  /// Smallest cross-family antipodality margin found.
  double min_margin = 0.0;
};

/// Verify that all cross-family flag pairs are antipodal and annotate each
/// family with the certified thickening radius delta_flag = c_thick * margin.
/// Throws NotAntipodal (with the family indices) on the first failing pair,
/// RangeError when fewer than two families are given.
[[nodiscard]] Thickening thicken_flag_family(const std::vector<FlagFamily>& families,
                                             double antipodal_tol = tol::antipodal,
                                             double c_thick = tol::c_thick);

}  // namespace anosov
