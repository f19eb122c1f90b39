#include "anosov/estimates.hpp"

#include <algorithm>
#include <cmath>

namespace anosov {

double compute_D(const FlagFamily& a, const FlagFamily& b, const Point& x,
                 double antipodal_tol) {
  if (!(a.pattern() == b.pattern())) throw PatternMismatch("families carry different patterns");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const AntipodalCheck check = is_antipodal(a.flags()[i], b.flags()[j], antipodal_tol);
      if (!check.antipodal) {
        throw NotAntipodal(static_cast<int>(i), static_cast<int>(j),
                           "margin " + std::to_string(check.margin));
      }
      const ParallelSetFrame frame = parallel_set_of(a.flags()[i], b.flags()[j], antipodal_tol);
      worst = std::max(worst, project_to_parallel_set(x, frame).dist);
    }
  }
  return worst;
}

double bound_f(double D, double R) {
  if (D < 0) throw RangeError("D must be nonnegative");
  if (R < 2.0 * D + 1.0) return M_PI;
  return std::asin(std::clamp(2.0 * D / R, 0.0, 1.0));
}

double bound_f0(double D, double R, double alpha1) {
  if (!(alpha1 > 0) || !(alpha1 < M_PI / 2)) {
    throw RangeError("alpha1 must lie in (0, pi/2)");
  }
  const double f = bound_f(D, R);
  if (f >= M_PI) return M_PI;
  if (D <= 0) return f;
  const double required = std::asin(std::clamp(2.0 * D / R, 0.0, 1.0));
  if (alpha1 < required) return M_PI;
  const int n = 1 + static_cast<int>(std::floor(std::log2(alpha1 / required)));
  const double alpha_n = alpha1 / std::pow(2.0, n - 1);
  return f + alpha_n;
}

double bound_R0(double D, double alpha) {
  if (!(alpha > 0) || !(alpha <= M_PI / 2)) throw InvalidGap("alpha must lie in (0, pi/2]");
  if (D < 0) throw RangeError("D must be nonnegative");
  return 2.0 * D / std::sin(alpha);
}

double bound_R1(double D, double alpha) {
  if (!(alpha > 0) || !(alpha <= M_PI / 2)) throw InvalidGap("alpha must lie in (0, pi/2]");
  if (D < 0) throw RangeError("D must be nonnegative");
  const double s = std::sin(alpha);
  return 2.0 * D * (1.0 + 1.0 / s + 1.0 / (s * s));
}

double separation_lower_bound(double D, double alpha, double r) {
  if (!(alpha > 0) || !(alpha <= M_PI)) throw InvalidGap("alpha must lie in (0, pi]");
  if (D < 0 || r < 0) throw RangeError("D and r must be nonnegative");
  const double s = std::sin(alpha);
  return r * s - 2.0 * D * (1.0 + s);
}

double midpoint_spacing_bound(double S, double D, double alpha) {
  if (!(alpha > 0) || !(alpha <= M_PI)) throw InvalidGap("alpha must lie in (0, pi]");
  if (D < 0 || S < 0) throw RangeError("D and S must be nonnegative");
  return std::max(0.0, 0.5 * S * std::sin(alpha) - 4.0 * D);
}

Vector sample_cone_direction(Rng& rng, const Vector& xi, double beta) {
  const int d = static_cast<int>(xi.size());
  Vector t(d);
  double nt = 0.0;
  do {
    t = rng.gauss_vector(d);
    t.array() -= t.mean();
    t -= t.dot(xi) * xi;
    nt = t.norm();
  } while (nt < 1e-8);
  t /= nt;
  const double phi = beta * rng.uniform();
  Vector w = std::cos(phi) * xi + std::sin(phi) * t;
  std::sort(w.data(), w.data() + d, std::greater<double>());
  w.array() -= w.mean();
  w /= w.norm();
  return w;
}

Point cone_point(const Point& x, const Flag& tau, const Vector& v, double r) {
  return cone_point(FactoredPoint::from_point(x), tau, v, r).to_point();
}

FactoredPoint cone_point(const FactoredPoint& x, const Flag& tau, const Vector& v, double r) {
  if (x.dim() != tau.ambient_dim()) throw PatternMismatch("dimensions differ");
  if (!(r > 0)) throw RangeError("radius must be positive");
  const Vector nhalf = (-0.5 * x.logs().array()).exp().matrix();
  const Vector phalf = (0.5 * x.logs().array()).exp().matrix();
  if (!nhalf.allFinite() || !phalf.allFinite()) {
    throw NumericalFailure("base point is too spread out for a dense flag basis");
  }
  const Matrix q = orthonormalize(nhalf.asDiagonal() * (x.axes().transpose() * tau.basis()));
  const Vector ray = (0.5 * r * v.array()).exp().matrix();
  if (!ray.allFinite()) throw NumericalFailure("cone radius overflows the double range");
  const Matrix core = phalf.asDiagonal() * q * ray.asDiagonal();
  const AccurateSvd s = accurate_svd(core);
  return FactoredPointFactory::from_spectral(x.axes() * s.u, 2.0 * s.log_sigma);
}

AngleBoundReport measure_max_xi_angle(const FlagFamily& a, const FlagFamily& b, const Point& x,
                                      const ThetaSpec& theta, double R, int samples,
                                      std::uint64_t seed) {
  if (!(a.pattern() == theta.pattern()) || !(b.pattern() == theta.pattern())) {
    throw PatternMismatch("families and cone carry different patterns");
  }
  if (samples < 1) throw RangeError("need at least one sample");
  if (!(R > 0)) throw RangeError("R must be positive");
  const double D = compute_D(a, b, x);
  Rng rng(seed);
  const Vector& xi = theta.xi().direction();
  const FactoredPoint fx = FactoredPoint::from_point(x);
  double measured = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Flag& t1 = a.flags()[rng.index(a.size())];
    const Flag& t2 = b.flags()[rng.index(b.size())];
    const double r1 = R * std::pow(2.0, rng.uniform());
    const double r2 = R * std::pow(2.0, rng.uniform());
    const Vector v1 = sample_cone_direction(rng, xi, theta.beta());
    const Vector v2 = sample_cone_direction(rng, xi, theta.beta());
    const FactoredPoint y1 = cone_point(fx, t1, v1, r1);
    const FactoredPoint y2 = cone_point(fx, t2, v2, r2);
    double angle = M_PI;
    try {
      angle = xi_angle_points(y1, fx, y2, theta);
    } catch (const NotRegular&) {
      angle = M_PI;
    }
    measured = std::max(measured, angle);
  }
  AngleBoundReport report;
  report.R = R;
  report.bound = bound_f0(D, R, 0.5 * eps_star(theta.xi()));
  report.measured_max = measured;
  report.samples = samples;
  return report;
}

}  // namespace anosov
