#include "anosov/flags.hpp"

#include <algorithm>
#include <cmath>

namespace anosov {

Flag::Flag(FacePattern pattern, Matrix basis)
    : pattern_(std::move(pattern)), basis_(std::move(basis)) {
  const int d = pattern_.ambient_dim();
  if (basis_.rows() != d || basis_.cols() != d) {
    throw PatternMismatch("flag basis must be d x d");
  }
  const double residual = (basis_.transpose() * basis_ - Matrix::Identity(d, d)).norm();
  if (residual > tol::basis) {
    throw DegenerateElement("flag basis is not orthonormal");
  }
}

Flag Flag::standard(const FacePattern& pattern) {
  const int d = pattern.ambient_dim();
  return Flag(pattern, Matrix::Identity(d, d));
}

Flag Flag::reversed(const FacePattern& pattern) {
  const int d = pattern.ambient_dim();
  Matrix b = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) b(d - 1 - j, j) = 1.0;
  return Flag(pattern, std::move(b));
}

namespace {

void check_segment_gaps(const Vector& logs, const FacePattern& pattern, double gap_tol) {
  if (logs.norm() <= tol::degenerate) {
    throw DegenerateSegment("coincident points define no flag");
  }
  for (int k : pattern.dims()) {
    if (logs(k - 1) - logs(k) <= gap_tol) {
      throw NotRegular(k, "spectral gap " + std::to_string(logs(k - 1) - logs(k)) +
                              " below tolerance");
    }
  }
}

}  // namespace

Flag flag_of_segment(const Point& x, const Point& y, const FacePattern& pattern,
                     double gap_tol) {
  return flag_of_segment(FactoredPoint::from_point(x), FactoredPoint::from_point(y), pattern,
                         gap_tol);
}

Flag flag_of_segment(const FactoredPoint& x, const FactoredPoint& y, const FacePattern& pattern,
                     double gap_tol) {
  if (x.dim() != pattern.ambient_dim() || y.dim() != pattern.ambient_dim()) {
    throw PatternMismatch("points and pattern have different dimensions");
  }
  const SegmentSpectrum seg = segment_spectrum(x, y);
  check_segment_gaps(seg.logs, pattern, gap_tol);
  const Vector half = (0.5 * x.logs().array()).exp().matrix();
  if (!half.allFinite()) {
    throw NumericalFailure("base point is too spread out for a dense flag basis");
  }
  return Flag(pattern, orthonormalize(x.axes() * (half.asDiagonal() * seg.basis)));
}

AntipodalCheck is_antipodal(const Flag& a, const Flag& b, double antipodal_tol) {
  if (!(a.pattern() == b.pattern())) throw PatternMismatch("flags carry different patterns");
  const int d = a.ambient_dim();
  double margin = 1.0;
  Matrix joint(d, d);
  for (int k : a.pattern().dims()) {
    joint.leftCols(k) = a.basis().leftCols(k);
    joint.rightCols(d - k) = b.basis().leftCols(d - k);
    Eigen::JacobiSVD<Matrix> svd(joint);
    margin = std::min(margin, svd.singularValues()(d - 1));
  }
  return AntipodalCheck{margin > antipodal_tol, margin};
}

bool flags_equal(const Flag& a, const Flag& b, double flag_tol) {
  if (!(a.pattern() == b.pattern())) throw PatternMismatch("flags carry different patterns");
  for (int k : a.pattern().dims()) {
    const Matrix overlap = a.basis().leftCols(k).transpose() * b.basis().leftCols(k);
    Eigen::JacobiSVD<Matrix> svd(overlap);
    const double cos_worst = std::min(1.0, svd.singularValues()(k - 1));
    if (std::acos(cos_worst) > flag_tol) return false;
  }
  return true;
}

double xi_angle(const Point& x, const Flag& a, const Flag& b, const XiMod& xi) {
  if (!(a.pattern() == b.pattern()) || !(a.pattern() == xi.pattern())) {
    throw PatternMismatch("flags and model direction carry different patterns");
  }
  if (x.dim() != a.ambient_dim()) throw PatternMismatch("point dimension disagrees with flags");
  const Matrix xis = spd_inv_sqrt(x.mat());
  const Matrix qa = orthonormalize(xis * a.basis());
  const Matrix qb = orthonormalize(xis * b.basis());
  const Matrix ha = qa * xi.direction().asDiagonal() * qa.transpose();
  const Matrix hb = qb * xi.direction().asDiagonal() * qb.transpose();
  const double c = (ha.array() * hb.array()).sum();
  return std::acos(std::clamp(c, -1.0, 1.0));
}

double xi_angle(const FactoredPoint& x, const Flag& a, const Flag& b, const XiMod& xi) {
  if (!(a.pattern() == b.pattern()) || !(a.pattern() == xi.pattern())) {
    throw PatternMismatch("flags and model direction carry different patterns");
  }
  if (x.dim() != a.ambient_dim()) throw PatternMismatch("point dimension disagrees with flags");
  const Vector nhalf = (-0.5 * x.logs().array()).exp().matrix();
  if (!nhalf.allFinite()) {
    throw NumericalFailure("base point is too spread out for a dense flag basis");
  }
  const Matrix qa = orthonormalize(nhalf.asDiagonal() * (x.axes().transpose() * a.basis()));
  const Matrix qb = orthonormalize(nhalf.asDiagonal() * (x.axes().transpose() * b.basis()));
  const Matrix overlap = qa.transpose() * qb;
  const double c = xi.direction().dot(overlap.array().square().matrix() * xi.direction());
  return std::acos(std::clamp(c, -1.0, 1.0));
}

double xi_angle_points(const Point& x, const Point& y1, const Point& y2,
                       const ThetaSpec& theta) {
  return xi_angle_points(FactoredPoint::from_point(x), FactoredPoint::from_point(y1),
                         FactoredPoint::from_point(y2), theta);
}

double xi_angle_points(const FactoredPoint& x, const FactoredPoint& y1, const FactoredPoint& y2,
                       const ThetaSpec& theta) {
  if (x.dim() != theta.pattern().ambient_dim()) {
    throw PatternMismatch("points and pattern have different dimensions");
  }
  // The segment frames already live in the factor frame of x; the flag bases
  // they induce differ from them by an upper-triangular orthogonal factor,
  // which is a sign matrix, so the frames can be compared directly.
  const SegmentSpectrum s1 = segment_spectrum(x, y1);
  check_segment_gaps(s1.logs, theta.pattern(), tol::gap);
  const SegmentSpectrum s2 = segment_spectrum(x, y2);
  check_segment_gaps(s2.logs, theta.pattern(), tol::gap);
  const Matrix overlap = s1.basis.transpose() * s2.basis;
  const Vector& xi = theta.xi().direction();
  const double c = xi.dot(overlap.array().square().matrix() * xi);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

Flag act(const GroupElement& g, const Flag& f) {
  if (g.dim() != f.ambient_dim()) throw PatternMismatch("dimensions differ");
  return Flag(f.pattern(), orthonormalize(g.mat() * f.basis()));
}

Flag perturb_flag(const Flag& f, double eps, Rng& rng) {
  const int d = f.ambient_dim();
  Matrix g = rng.gauss_matrix(d, d);
  g *= eps / g.norm();
  return Flag(f.pattern(), orthonormalize(f.basis() + g));
}

FlagFamily::FlagFamily(FacePattern pattern, std::vector<Flag> flags, double margin)
    : pattern_(std::move(pattern)), flags_(std::move(flags)), margin_(margin) {
  if (flags_.empty()) throw RangeError("flag family must be nonempty");
  for (const Flag& f : flags_) {
    if (!(f.pattern() == pattern_)) {
      throw PatternMismatch("family flags carry different patterns");
    }
  }
}

Thickening thicken_flag_family(const std::vector<FlagFamily>& families, double antipodal_tol,
                               double c_thick) {
  if (families.size() < 2) throw RangeError("thickening needs at least two families");
  for (std::size_t i = 1; i < families.size(); ++i) {
    if (!(families[i].pattern() == families[0].pattern())) {
      throw PatternMismatch("families carry different patterns");
    }
  }
  double min_margin = 1.0;
  for (std::size_t i = 0; i < families.size(); ++i) {
    for (std::size_t j = i + 1; j < families.size(); ++j) {
      for (const Flag& fa : families[i].flags()) {
        for (const Flag& fb : families[j].flags()) {
          const AntipodalCheck check = is_antipodal(fa, fb, antipodal_tol);
          if (!check.antipodal) {
            throw NotAntipodal(static_cast<int>(i), static_cast<int>(j),
                               "cross-family margin " + std::to_string(check.margin));
          }
          min_margin = std::min(min_margin, check.margin);
        }
      }
    }
  }
  Thickening out;
  out.min_margin = min_margin;
  out.delta_flag = c_thick * min_margin;
  out.families.reserve(families.size());
  for (const FlagFamily& fam : families) {
    out.families.emplace_back(fam.pattern(), fam.flags(), out.delta_flag);
  }
  return out;
}

}  // namespace anosov
