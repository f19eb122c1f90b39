#include "anosov/weyl.hpp"

#include <algorithm>
#include <cmath>

namespace anosov {

FacePattern::FacePattern(int ambient_dim, std::vector<int> dims)
    : d_(ambient_dim), dims_(std::move(dims)) {
  if (d_ < 2) throw PatternMismatch("ambient dimension must be >= 2");
  if (dims_.empty()) throw PatternMismatch("pattern needs at least one dimension");
  if (!std::is_sorted(dims_.begin(), dims_.end()) ||
      std::adjacent_find(dims_.begin(), dims_.end()) != dims_.end()) {
    throw PatternMismatch("pattern dimensions must be strictly increasing");
  }
  if (dims_.front() < 1 || dims_.back() > d_ - 1) {
    throw PatternMismatch("pattern dimensions must lie in {1, ..., d-1}");
  }
  for (int k : dims_) {
    if (!std::binary_search(dims_.begin(), dims_.end(), d_ - k)) {
      throw PatternMismatch("pattern must be symmetric: contains " + std::to_string(k) +
                            " but not " + std::to_string(d_ - k));
    }
  }
}

FacePattern FacePattern::full(int ambient_dim) {
  std::vector<int> dims(ambient_dim - 1);
  for (int k = 1; k < ambient_dim; ++k) dims[k - 1] = k;
  return FacePattern(ambient_dim, std::move(dims));
}

bool FacePattern::contains(int k) const {
  return std::binary_search(dims_.begin(), dims_.end(), k);
}

std::vector<int> FacePattern::cuts() const {
  std::vector<int> c;
  c.reserve(dims_.size() + 2);
  c.push_back(0);
  c.insert(c.end(), dims_.begin(), dims_.end());
  c.push_back(d_);
  return c;
}

XiMod::XiMod(FacePattern pattern, Vector direction)
    : pattern_(std::move(pattern)), xi_(std::move(direction)) {
  const int d = pattern_.ambient_dim();
  if (xi_.size() != d) throw PatternMismatch("direction dimension disagrees with pattern");
  if (std::abs(xi_.norm() - 1.0) > tol::sum) {
    throw DegenerateElement("model direction must be a unit vector");
  }
  if (std::abs(xi_.sum()) > tol::sum) {
    throw DegenerateElement("model direction must have zero sum");
  }
  const std::vector<int> cuts = pattern_.cuts();
  for (std::size_t b = 0; b + 1 < cuts.size(); ++b) {
    for (int i = cuts[b]; i < cuts[b + 1]; ++i) {
      if (std::abs(xi_(i) - xi_(cuts[b])) > tol::sum) {
        throw DegenerateElement("model direction must be constant on pattern blocks");
      }
    }
  }
  for (int k : pattern_.dims()) {
    if (xi_(k - 1) <= xi_(k)) {
      throw DegenerateElement("model direction must decrease strictly across pattern cuts");
    }
  }
  for (int i = 0; i < d; ++i) {
    if (std::abs(xi_(i) + xi_(d - 1 - i)) > tol::sum) {
      throw DegenerateElement("model direction must be fixed by the opposition involution");
    }
  }
}

XiMod XiMod::standard(const FacePattern& pattern) {
  const int d = pattern.ambient_dim();
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = static_cast<double>(d - 1 - 2 * i);
  const std::vector<int> cuts = pattern.cuts();
  for (std::size_t b = 0; b + 1 < cuts.size(); ++b) {
    const double mean = v.segment(cuts[b], cuts[b + 1] - cuts[b]).mean();
    v.segment(cuts[b], cuts[b + 1] - cuts[b]).setConstant(mean);
  }
  v /= v.norm();
  return XiMod(pattern, std::move(v));
}

double eps_star(const XiMod& xi) {
  constexpr double inv_sqrt2 = 0.7071067811865475244;
  double best = M_PI / 2;
  const Vector& v = xi.direction();
  for (int k : xi.pattern().dims()) {
    const double s = std::clamp((v(k - 1) - v(k)) * inv_sqrt2, 0.0, 1.0);
    best = std::min(best, std::asin(s));
  }
  return best;
}

ThetaSpec::ThetaSpec(XiMod xi, double beta) : xi_(std::move(xi)), beta_(beta) {
  const double cap = eps_star(xi_);
  if (!(beta_ > 0.0) || !(beta_ < cap)) {
    throw InvalidGap("cone radius must lie strictly between 0 and " + std::to_string(cap));
  }
}

Vector type_direction(const DeltaVector& dv) {
  const double n = dv.norm();
  if (n <= tol::degenerate) throw DegenerateSegment("zero vector has no type direction");
  return dv.vec() / n;
}

double spherical_angle(const Vector& u, const Vector& v) {
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu <= tol::degenerate || nv <= tol::degenerate) {
    throw DegenerateSegment("angle with a zero vector");
  }
  return std::acos(std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0));
}

bool is_theta_regular(const Point& x, const Point& y, const ThetaSpec& theta) {
  return is_theta_regular(FactoredPoint::from_point(x), FactoredPoint::from_point(y), theta);
}

bool is_theta_regular(const FactoredPoint& x, const FactoredPoint& y, const ThetaSpec& theta) {
  const DeltaVector dv = delta_distance(x, y);
  if (dv.norm() <= tol::degenerate) {
    throw DegenerateSegment("coincident points have no type");
  }
  return spherical_angle(type_direction(dv), theta.xi().direction()) <= theta.beta();
}

double theta_gap(const ThetaSpec& inner, const ThetaSpec& outer) {
  if (!(inner.pattern() == outer.pattern())) {
    throw PatternMismatch("cones live over different patterns");
  }
  if ((inner.xi().direction() - outer.xi().direction()).norm() > tol::sum) {
    throw PatternMismatch("cones live over different model directions");
  }
  if (!(inner.beta() < outer.beta())) {
    throw NotNested("inner radius " + std::to_string(inner.beta()) +
                    " must be strictly less than outer radius " + std::to_string(outer.beta()));
  }
  return outer.beta() - inner.beta();
}

Vector opposition_involution(const Vector& v) {
  return -v.reverse();
}

DeltaVector opposition_involution(const DeltaVector& dv) {
  return DeltaVector(opposition_involution(dv.vec()));
}

}  // namespace anosov
