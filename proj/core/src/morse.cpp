#include "anosov/morse.hpp"

#include <algorithm>
#include <cmath>

#include "anosov/flags.hpp"

namespace anosov {

PathSample::PathSample(std::vector<PathKnot> knots) : knots_(std::move(knots)) {
  if (knots_.size() < 2) throw RangeError("path needs at least two knots");
  const int d = knots_.front().p.dim();
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (knots_[i].p.dim() != d) throw PatternMismatch("path knots have mixed dimensions");
    if (i > 0 && !(knots_[i].t > knots_[i - 1].t)) {
      throw RangeError("knot parameters must increase strictly");
    }
  }
}

FactoredPoint PathSample::at(double t) const {
  if (t < t_min() - 1e-12 || t > t_max() + 1e-12) {
    throw RangeError("parameter " + std::to_string(t) + " outside path range");
  }
  t = std::clamp(t, t_min(), t_max());
  std::size_t hi = 1;
  while (hi + 1 < knots_.size() && knots_[hi].t < t) ++hi;
  const PathKnot& a = knots_[hi - 1];
  const PathKnot& b = knots_[hi];
  const double s = (t - a.t) / (b.t - a.t);
  if (s <= 0.0) return a.p;
  if (s >= 1.0) return b.p;
  return geodesic_point(a.p, b.p, s);
}

StraightSpacedCheck check_straight_spaced(const std::vector<Point>& seq,
                                          const ThetaSpec& theta) {
  std::vector<FactoredPoint> factored;
  factored.reserve(seq.size());
  for (const Point& p : seq) factored.push_back(FactoredPoint::from_point(p));
  return check_straight_spaced(factored, theta);
}

StraightSpacedCheck check_straight_spaced(const std::vector<FactoredPoint>& seq,
                                          const ThetaSpec& theta) {
  if (seq.size() < 2) throw RangeError("sequence needs at least two points");
  StraightSpacedCheck out;
  out.regular = true;
  out.l = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    out.l = std::min(out.l, distance(seq[i], seq[i + 1]));
    try {
      if (!is_theta_regular(seq[i], seq[i + 1], theta)) out.regular = false;
    } catch (const DegenerateSegment&) {
      out.regular = false;
    }
  }
  for (std::size_t i = 1; i + 1 < seq.size(); ++i) {
    double bend = 0.0;
    try {
      bend = M_PI - xi_angle_points(seq[i], seq[i - 1], seq[i + 1], theta);
    } catch (const Error&) {
      bend = M_PI;
    }
    out.eps = std::max(out.eps, bend);
  }
  return out;
}

namespace {

struct PairRange {
  std::size_t i;
  std::size_t j;
};

std::vector<PairRange> select_pairs(std::size_t n, int budget) {
  const std::size_t total = n * (n - 1) / 2;
  std::vector<PairRange> pairs;
  if (budget <= 0 || total <= static_cast<std::size_t>(budget)) {
    pairs.reserve(total);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) pairs.push_back({i, j});
    return pairs;
  }
  const std::size_t stride = (total + budget - 1) / budget;
  pairs.reserve(total / stride + 1);
  std::size_t flat = 0;
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++flat) {
      if (flat == next) {
        pairs.push_back({i, j});
        next += stride;
      }
    }
  }
  return pairs;
}

}  // namespace

MorseVerdict check_morse(const PathSample& path, double L, double A, const ThetaSpec& theta,
                         double D, int pair_budget, int subdivision) {
  if (!(L >= 1.0) || !(A >= 0.0) || !(D >= 0.0)) {
    throw RangeError("need L >= 1, A >= 0, D >= 0");
  }
  const std::vector<PathKnot>& knots = path.knots();
  const std::vector<PairRange> pairs = select_pairs(knots.size(), pair_budget);
  const Vector& xi = theta.xi().direction();

  MorseVerdict verdict;
  verdict.pass = true;
  double need_L = 1.0;
  for (const PairRange& pr : pairs) {
    const PathKnot& a = knots[pr.i];
    const PathKnot& b = knots[pr.j];
    const double dt = b.t - a.t;
    const SegmentSpectrum seg = segment_spectrum(a.p, b.p);
    const double dist = seg.logs.norm();

    if (verdict.pass) {
      if (dist > L * dt + A + tol::qg_slack) {
        verdict.pass = false;
        verdict.detail = "upper quasigeodesic bound fails at (" + std::to_string(a.t) + ", " +
                         std::to_string(b.t) + ")";
      } else if (dist < dt / L - A - tol::qg_slack) {
        verdict.pass = false;
        verdict.detail = "lower quasigeodesic bound fails at (" + std::to_string(a.t) + ", " +
                         std::to_string(b.t) + ")";
      }
    }
    need_L = std::max(need_L, (dist - tol::fit_offset) / dt);
    need_L = std::max(need_L, dt / (dist + tol::fit_offset));

    if (dist <= tol::degenerate) continue;
    const double type_angle = spherical_angle(seg.logs, xi);
    bool pattern_regular = true;
    for (int k : theta.pattern().dims()) {
      if (seg.logs(k - 1) - seg.logs(k) <= tol::gap) {
        pattern_regular = false;
        break;
      }
    }
    if (!pattern_regular || type_angle > theta.beta()) continue;
    verdict.theta_fit = std::max(verdict.theta_fit, type_angle);

    for (std::size_t k = pr.i; k < pr.j; ++k) {
      const int steps = std::max(1, subdivision);
      for (int s = (k == pr.i ? 1 : 0); s < steps; ++s) {
        const FactoredPoint sample =
            (s == 0) ? knots[k].p
                     : geodesic_point(knots[k].p, knots[k + 1].p,
                                      static_cast<double>(s) / steps);
        const double defect = distance_to_diamond(sample, a.p, b.p, theta);
        verdict.D_measured = std::max(verdict.D_measured, defect);
        if (defect > D + tol::diamond && verdict.pass) {
          verdict.pass = false;
          verdict.detail = "diamond defect " + std::to_string(defect) + " at t=" +
                           std::to_string(knots[k].t) + " for pair (" + std::to_string(a.t) +
                           ", " + std::to_string(b.t) + ")";
        }
      }
    }
  }

  verdict.L_fit = need_L;
  double need_A = 0.0;
  for (const PairRange& pr : pairs) {
    const double dt = knots[pr.j].t - knots[pr.i].t;
    const double dist = distance(knots[pr.i].p, knots[pr.j].p);
    need_A = std::max(need_A, dist - verdict.L_fit * dt);
    need_A = std::max(need_A, dt / verdict.L_fit - dist);
  }
  verdict.A_fit = std::max(0.0, need_A);
  return verdict;
}

PathSample replace_segment(const PathSample& path, double t1, double t2,
                           const PathSample& patch) {
  if (!(t1 < t2)) throw RangeError("need t1 < t2");
  if (t1 < path.t_min() - 1e-12 || t2 > path.t_max() + 1e-12) {
    throw RangeError("replacement range leaves the path");
  }
  if (std::abs(patch.t_min() - t1) > 1e-12 || std::abs(patch.t_max() - t2) > 1e-12) {
    throw RangeError("patch must cover exactly the replaced range");
  }
  const double d1 = distance(path.at(t1), patch.knots().front().p);
  const double d2 = distance(path.at(t2), patch.knots().back().p);
  if (d1 > 1e-9 || d2 > 1e-9) {
    throw EndpointMismatch("patch endpoints deviate by " + std::to_string(std::max(d1, d2)));
  }
  std::vector<PathKnot> out;
  out.reserve(path.size() + patch.size());
  for (const PathKnot& k : path.knots()) {
    if (k.t < t1 - 1e-12) out.push_back(k);
  }
  for (const PathKnot& k : patch.knots()) out.push_back(k);
  for (const PathKnot& k : path.knots()) {
    if (k.t > t2 + 1e-12) out.push_back(k);
  }
  return PathSample(std::move(out));
}

std::pair<PathSample, PathSample> euclidean_counterexample(double r) {
  if (!(r >= 1.0)) throw RangeError("need r >= 1");
  const double s2 = std::sqrt(2.0);
  const double s6 = std::sqrt(6.0);
  const auto plane_point = [&](double a, double b) {
    Vector e(3);
    e(0) = a / s2 + b / s6;
    e(1) = -2.0 * b / s6;
    e(2) = -a / s2 + b / s6;
    Matrix w = (0.5 * e.array()).exp().matrix().asDiagonal();
    return FactoredPoint(w);
  };

  std::vector<PathKnot> axis;
  for (int k = 0; k <= 16; ++k) {
    const double t = -2.0 * r + k * (r / 4.0);
    axis.push_back({t, plane_point(t, 0.0)});
  }

  const double corner_t[6] = {-r, -0.75 * r, -0.5 * r, 0.5 * r, 0.75 * r, r};
  const double corner_a[6] = {-r, -2.0 * r, -2.0 * r, 2.0 * r, 2.0 * r, r};
  const double corner_b[6] = {0.0, 0.0, r, r, 0.0, 0.0};
  std::vector<PathKnot> staple;
  for (int k = 0; k < 6; ++k) {
    staple.push_back({corner_t[k], plane_point(corner_a[k], corner_b[k])});
  }
  return {PathSample(std::move(axis)), PathSample(std::move(staple))};
}

}  // namespace anosov
