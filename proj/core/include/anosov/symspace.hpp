#pragma once

#include <Eigen/Dense>

#include "anosov/errors.hpp"
#include "anosov/tolerances.hpp"

namespace anosov {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Symmetric part of a square matrix.
[[nodiscard]] Matrix sym_part(const Matrix& m);

/// Eigendecomposition of a symmetric matrix, eigenvalues sorted descending,
/// eigenvector columns sign-normalized (largest-magnitude entry positive).
struct SymEig {
  Vector values;
  Matrix vectors;
};
[[nodiscard]] SymEig sym_eig_desc(const Matrix& s);

/// SVD a = u exp(diag(log_sigma)) v^T with log_sigma descending and the
/// columns of u sign-normalized. Singular values are computed to high
/// relative accuracy even when they span many orders of magnitude (the
/// log spectrum stays meaningful far past 1/eps conditioning), at the cost
/// of extended-precision iteration for strongly graded input. Requires a
/// square invertible matrix with finite entries.
struct AccurateSvd {
  Matrix u;
  Vector log_sigma;
  Matrix v;
};
[[nodiscard]] AccurateSvd accurate_svd(const Matrix& a);

/// Decomposition of exp(diag(row_logs)) * a. The scaled matrix is formed at
/// working precision, so the row scales may lie far outside the double
/// exponent range as long as `a` itself is a finite matrix.
[[nodiscard]] AccurateSvd accurate_svd_scaled(const Vector& row_logs, const Matrix& a);

[[nodiscard]] Matrix spd_power(const Matrix& p, double t);
[[nodiscard]] Matrix spd_sqrt(const Matrix& p);
[[nodiscard]] Matrix spd_inv_sqrt(const Matrix& p);
[[nodiscard]] Matrix spd_log(const Matrix& p);
[[nodiscard]] Matrix sym_exp(const Matrix& s);

/// Orthonormalize the columns of a full-rank square matrix by Householder QR
/// with the R diagonal forced positive. Leading column spans are preserved,
/// and the result is deterministic for identical input.
[[nodiscard]] Matrix orthonormalize(const Matrix& m);

/// A point of the symmetric space: a symmetric positive definite matrix of
/// determinant one. The identity coset corresponds to the identity matrix.
/// Dense storage limits usable points to log-eigenvalue spreads around 36;
/// beyond that use FactoredPoint.
class Point {
public:
  /// Validates symmetry, positivity, and unit determinant of `m` as given.
  explicit Point(Matrix m);

  /// Symmetrizes and determinant-normalizes `m`, then validates. The usual
  /// way to build a Point from computed data.
  [[nodiscard]] static Point from_spd(const Matrix& m);

  [[nodiscard]] static Point identity(int d);

  [[nodiscard]] const Matrix& mat() const noexcept { return m_; }
  [[nodiscard]] int dim() const noexcept { return static_cast<int>(m_.rows()); }

private:
  struct unchecked {};
  Point(Matrix m, unchecked) : m_(std::move(m)) {}
  Matrix m_;

  friend class PointFactory;
};

/// Internal escape hatch for hot paths that construct many points whose
/// invariants hold by construction.
class PointFactory {
public:
  [[nodiscard]] static Point from_normalized(Matrix m) {
    return Point(std::move(m), Point::unchecked{});
  }
};

/// A point stored in spectral form p = axes exp(diag(logs)) axes^T with
/// orthonormal axes and centered log-eigenvalues (so det p = 1). This
/// representation keeps full relative precision at any distance from the
/// basepoint, where a dense SPD matrix would have long lost its small
/// eigenvalues; all far-range path machinery works on it.
class FactoredPoint {
public:
  /// From any invertible factor w with p = w w^T (w need not be symmetric;
  /// a group element times a factor of a point is the typical input).
  explicit FactoredPoint(const Matrix& w);

  [[nodiscard]] static FactoredPoint from_point(const Point& p);
  [[nodiscard]] static FactoredPoint identity(int d);

  /// Dense form. The caller owns the conditioning question: for spreads
  /// beyond roughly 700 the entries overflow and this throws.
  [[nodiscard]] Point to_point() const;

  [[nodiscard]] const Matrix& axes() const noexcept { return axes_; }
  [[nodiscard]] const Vector& logs() const noexcept { return logs_; }
  [[nodiscard]] int dim() const noexcept { return static_cast<int>(logs_.size()); }

  /// Width of the log spectrum; 0 exactly at the identity coset.
  [[nodiscard]] double log_spread() const { return logs_(0) - logs_(logs_.size() - 1); }

private:
  struct unchecked {};
  FactoredPoint(Matrix axes, Vector logs, unchecked)
      : axes_(std::move(axes)), logs_(std::move(logs)) {}
  Matrix axes_;
  Vector logs_;

  friend class FactoredPointFactory;
};

/// Internal escape hatch: build a FactoredPoint from spectral data whose
/// orthonormality holds by construction. Centers the logs.
class FactoredPointFactory {
public:
  [[nodiscard]] static FactoredPoint from_spectral(Matrix axes, Vector logs) {
    logs.array() -= logs.mean();
    return FactoredPoint(std::move(axes), std::move(logs), FactoredPoint::unchecked{});
  }
};

/// Vector-valued distance: the sorted log-singular spectrum of the segment,
/// a weakly decreasing vector with zero sum.
class DeltaVector {
public:
  explicit DeltaVector(Vector v);

  [[nodiscard]] const Vector& vec() const noexcept { return v_; }
  [[nodiscard]] double norm() const { return v_.norm(); }
  [[nodiscard]] int dim() const noexcept { return static_cast<int>(v_.size()); }

private:
  Vector v_;
};

/// An isometry of the space: a real matrix of determinant one, acting by
/// congruence.
class GroupElement {
public:
  /// Validates |det(m) - 1| directly.
  explicit GroupElement(Matrix m);

  /// Rescales a matrix with positive determinant to determinant one.
  [[nodiscard]] static GroupElement from_matrix(const Matrix& m);

  [[nodiscard]] static GroupElement identity(int d);

  [[nodiscard]] GroupElement inverse() const;
  [[nodiscard]] const Matrix& mat() const noexcept { return g_; }
  [[nodiscard]] int dim() const noexcept { return static_cast<int>(g_.rows()); }

  friend GroupElement operator*(const GroupElement& a, const GroupElement& b);

private:
  struct unchecked {};
  GroupElement(Matrix m, unchecked) : g_(std::move(m)) {}
  Matrix g_;
};

/// Spectral data of the oriented segment from x to y, in the factor frame
/// of x: descending centered log rates and the orthonormal basis aligning
/// them. The world eigenframe of the segment is factor(x) * basis.
struct SegmentSpectrum {
  Vector logs;
  Matrix basis;
};
[[nodiscard]] SegmentSpectrum segment_spectrum(const FactoredPoint& x, const FactoredPoint& y);

/// Vector-valued distance from x to y.
[[nodiscard]] DeltaVector delta_distance(const Point& x, const Point& y);
[[nodiscard]] DeltaVector delta_distance(const FactoredPoint& x, const FactoredPoint& y);

/// Riemannian distance, the Euclidean norm of the vector-valued distance.
[[nodiscard]] double distance(const Point& x, const Point& y);
[[nodiscard]] double distance(const FactoredPoint& x, const FactoredPoint& y);

/// Point at parameter t on the geodesic through x (t=0) and y (t=1);
/// t outside [0,1] extends the geodesic.
[[nodiscard]] Point geodesic_point(const Point& x, const Point& y, double t);
[[nodiscard]] FactoredPoint geodesic_point(const FactoredPoint& x, const FactoredPoint& y,
                                           double t);

[[nodiscard]] inline Point midpoint(const Point& x, const Point& y) {
  return geodesic_point(x, y, 0.5);
}
[[nodiscard]] inline FactoredPoint midpoint(const FactoredPoint& x, const FactoredPoint& y) {
  return geodesic_point(x, y, 0.5);
}

/// The point reflection of q through x (an isometry fixing x and reversing
/// geodesics through it).
[[nodiscard]] Point cartan_involution(const Point& x, const Point& q);

/// Group action g . x = g x g^T, renormalized to determinant one. The
/// factored form applies letters of any size, but relative precision of the
/// small spectrum degrades once a single letter's own log-singular spread
/// passes roughly 30; compose long words letter by letter.
[[nodiscard]] Point act(const GroupElement& g, const Point& x);
[[nodiscard]] FactoredPoint act(const GroupElement& g, const FactoredPoint& x);

/// Riemannian angle at p between the segments to y and to z.
/// Throws DegenerateSegment if either segment is shorter than tol::degenerate.
[[nodiscard]] double angle_at(const Point& p, const Point& y, const Point& z);
[[nodiscard]] double angle_at(const FactoredPoint& p, const FactoredPoint& y,
                              const FactoredPoint& z);

/// An isometry carrying (x, y) to (x2, y2), built by aligning the
/// eigenbases of the two segments. Well-defined up to the segment
/// stabilizer; exact when the two vector-valued distances agree and the
/// segments have simple spectra.
[[nodiscard]] GroupElement align_pair(const Point& x, const Point& y, const Point& x2,
                                      const Point& y2);

}  // namespace anosov
