#pragma once

#include <vector>

#include "anosov/symspace.hpp"

namespace anosov {

/// A symmetric set of subspace dimensions in {1, ..., d-1}: the cut points
/// at which flags and regularity are measured. Symmetry means k is in the
/// pattern iff d-k is.
class FacePattern {
public:
  FacePattern(int ambient_dim, std::vector<int> dims);

  /// The full pattern {1, ..., d-1}.
  [[nodiscard]] static FacePattern full(int ambient_dim);

  [[nodiscard]] int ambient_dim() const noexcept { return d_; }
  [[nodiscard]] const std::vector<int>& dims() const noexcept { return dims_; }
  [[nodiscard]] bool contains(int k) const;

  /// Cut points including the trivial ones: {0, d_1, ..., d_m, d}.
  [[nodiscard]] std::vector<int> cuts() const;

  /// Number of blocks the cuts divide {1, ..., d} into.
  [[nodiscard]] int block_count() const noexcept { return static_cast<int>(dims_.size()) + 1; }

  bool operator==(const FacePattern&) const = default;

private:
  int d_;
  std::vector<int> dims_;
};

/// A model direction: a unit vector with zero sum, constant on the pattern's
/// blocks, strictly decreasing across pattern cuts, and fixed by the
/// opposition involution.
class XiMod {
public:
  XiMod(FacePattern pattern, Vector direction);

  /// Block averages of (d-1, d-3, ..., -(d-1)), normalized.
  [[nodiscard]] static XiMod standard(const FacePattern& pattern);

  [[nodiscard]] const Vector& direction() const noexcept { return xi_; }
  [[nodiscard]] const FacePattern& pattern() const noexcept { return pattern_; }

private:
  FacePattern pattern_;
  Vector xi_;
};

/// Largest admissible cone radius about the model direction: the spherical
/// distance from it to the nearest wall {v_k = v_{k+1}} cut by the pattern.
[[nodiscard]] double eps_star(const XiMod& xi);

/// An angular cone of directions: the ball of spherical radius beta about
/// the model direction, with 0 < beta < eps_star.
class ThetaSpec {
public:
  ThetaSpec(XiMod xi, double beta);

  [[nodiscard]] double beta() const noexcept { return beta_; }
  [[nodiscard]] const XiMod& xi() const noexcept { return xi_; }
  [[nodiscard]] const FacePattern& pattern() const noexcept { return xi_.pattern(); }

private:
  XiMod xi_;
  double beta_;
};

/// Unit direction of a nonzero vector-valued distance.
/// Throws DegenerateSegment on (numerically) zero input.
[[nodiscard]] Vector type_direction(const DeltaVector& dv);

/// Angle between two nonzero vectors, in [0, pi].
[[nodiscard]] double spherical_angle(const Vector& u, const Vector& v);

/// Whether the segment xy has type direction within the cone.
/// Throws DegenerateSegment when x and y coincide numerically.
[[nodiscard]] bool is_theta_regular(const Point& x, const Point& y, const ThetaSpec& theta);

/// Spectral-form overload; reliable at any segment length.
[[nodiscard]] bool is_theta_regular(const FactoredPoint& x, const FactoredPoint& y,
                                    const ThetaSpec& theta);

/// Angular slack between strictly nested cones over the same model
/// direction. Throws NotNested unless inner is strictly inside outer,
/// PatternMismatch if the cones live over different model data.
[[nodiscard]] double theta_gap(const ThetaSpec& inner, const ThetaSpec& outer);

/// The opposition involution on vector-valued distances: reverse and negate.
/// Satisfies delta(y, x) = involution(delta(x, y)).
[[nodiscard]] DeltaVector opposition_involution(const DeltaVector& dv);

/// Reverse-and-negate on raw direction vectors.
[[nodiscard]] Vector opposition_involution(const Vector& v);

}  // namespace anosov
