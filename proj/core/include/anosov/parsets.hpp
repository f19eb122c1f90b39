#pragma once

#include <vector>

#include "anosov/flags.hpp"

namespace anosov {

/// Frame data of the parallel set of an antipodal flag pair: one orthonormal
/// block of columns per pattern block, spanning the common refinement of the
/// two flags. Points of the parallel set are exactly the unit-determinant
/// matrices B blockdiag(S_j) B^T with each S_j positive definite, where B is
/// the concatenated frame.
class ParallelSetFrame {
public:
  ParallelSetFrame(Flag tau_plus, Flag tau_minus, std::vector<Matrix> blocks);

  [[nodiscard]] const Flag& tau_plus() const noexcept { return tau_plus_; }
  [[nodiscard]] const Flag& tau_minus() const noexcept { return tau_minus_; }
  [[nodiscard]] const std::vector<Matrix>& blocks() const noexcept { return blocks_; }

  /// Concatenated frame matrix B (invertible, blocks in pattern order).
  [[nodiscard]] const Matrix& frame() const noexcept { return frame_; }
  [[nodiscard]] const Matrix& frame_inverse() const noexcept { return frame_inv_; }

  /// Column offset of each block inside B; last entry is d.
  [[nodiscard]] const std::vector<int>& offsets() const noexcept { return offsets_; }

  [[nodiscard]] int dim() const noexcept { return static_cast<int>(frame_.rows()); }
  [[nodiscard]] const FacePattern& pattern() const noexcept { return tau_plus_.pattern(); }

private:
  Flag tau_plus_;
  Flag tau_minus_;
  std::vector<Matrix> blocks_;
  Matrix frame_;
  Matrix frame_inv_;
  std::vector<int> offsets_;
};

/// Build the parallel set frame of an antipodal pair by intersecting the
/// forward subspaces of tau_plus with the backward subspaces of tau_minus.
/// Throws NotAntipodal when the pair fails the transversality margin.
[[nodiscard]] ParallelSetFrame parallel_set_of(const Flag& tau_plus, const Flag& tau_minus,
                                               double antipodal_tol = tol::antipodal);

/// Membership test: the frame-coordinate Gram form of q is block diagonal.
[[nodiscard]] bool on_parallel_set(const Point& q, const ParallelSetFrame& frame,
                                   double membership_tol = 1e-8);

/// Spectral-form overload.
[[nodiscard]] bool on_parallel_set(const FactoredPoint& q, const ParallelSetFrame& frame,
                                   double membership_tol = 1e-8);

struct ProjectionResult {
  FactoredPoint point;
  double dist = 0.0;
  int iterations = 0;
  /// Packed block logs of the projected point in the frame's
  /// parameterization, blocks in pattern order, upper triangles row-major.
  Vector parameters;
};

/// Nearest-point projection onto the parallel set, by descent over the
/// block-diagonal parameterization with analytic gradients. The returned
/// distance is within proj_tol of the true minimum. Throws NoConvergence
/// when the iteration cap is reached.
[[nodiscard]] ProjectionResult project_to_parallel_set(const Point& x,
                                                       const ParallelSetFrame& frame,
                                                       double proj_tol = tol::proj,
                                                       int max_iter = tol::proj_max_iter);

/// Spectral-form overload; reliable for points arbitrarily far from the
/// base point as long as they stay within ~300 of the parallel set.
[[nodiscard]] ProjectionResult project_to_parallel_set(const FactoredPoint& x,
                                                       const ParallelSetFrame& frame,
                                                       double proj_tol = tol::proj,
                                                       int max_iter = tol::proj_max_iter);

/// Distance from x to the parallel set of the pair.
[[nodiscard]] double d_opp(const Point& x, const Flag& tau_plus, const Flag& tau_minus,
                           double antipodal_tol = tol::antipodal);

/// Whether y lies in the cone with tip x over the thickened star of tau:
/// the segment xy must have type direction inside the cone and asymptotic
/// flag equal to tau. The tip itself counts as inside.
[[nodiscard]] bool in_cone(const Point& x, const Flag& tau, const ThetaSpec& theta,
                           const Point& y, double flag_tol = tol::flag,
                           double gap_tol = tol::gap);

/// Whether the segment y1 y2 runs forward along the parallel set: both
/// endpoints on it (NotOnParallelSet otherwise) and y2 in the forward cone
/// at y1.
[[nodiscard]] bool is_longitudinal(const ParallelSetFrame& frame, const Point& y1,
                                   const Point& y2, const ThetaSpec& theta,
                                   double membership_tol = 1e-8);

/// Distance from q to the cone diamond between x1 and x2 (the intersection
/// of the forward cone at x1 and the backward cone at x2), computed inside
/// the flat spanned by the segment. Exact for the full pattern; a certified
/// upper bound for coarser patterns. Throws NotRegular when the segment
/// x1 x2 is not Theta-regular, DegenerateSegment when x1 and x2 coincide.
[[nodiscard]] double distance_to_diamond(const Point& q, const Point& x1, const Point& x2,
                                         const ThetaSpec& theta,
                                         double diamond_tol = tol::diamond);

/// Spectral-form overload; works at any spread of the three points.
[[nodiscard]] double distance_to_diamond(const FactoredPoint& q, const FactoredPoint& x1,
                                         const FactoredPoint& x2, const ThetaSpec& theta,
                                         double diamond_tol = tol::diamond);

}  // namespace anosov
