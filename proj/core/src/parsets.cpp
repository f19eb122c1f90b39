#include "anosov/parsets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace anosov {

namespace {

Matrix thin_orthonormalize(const Matrix& m) {
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  Matrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (int i = 0; i < cols; ++i) {
    if (std::abs(r(i, i)) < 1e-12 * std::max(1.0, m.norm())) {
      throw NumericalFailure("rank-deficient block while building frame");
    }
    if (r(i, i) < 0) q.col(i) *= -1.0;
  }
  return q;
}

struct BlockLayout {
  std::vector<int> offsets;  // size blocks+1
  [[nodiscard]] int block_count() const { return static_cast<int>(offsets.size()) - 1; }
  [[nodiscard]] int size(int j) const { return offsets[j + 1] - offsets[j]; }
  [[nodiscard]] int param_count() const {
    int n = 0;
    for (int j = 0; j < block_count(); ++j) n += size(j) * (size(j) + 1) / 2;
    return n;
  }
};

void unpack(const Vector& theta, const BlockLayout& layout, std::vector<Matrix>& ys) {
  int at = 0;
  for (int j = 0; j < layout.block_count(); ++j) {
    const int n = layout.size(j);
    Matrix& y = ys[j];
    y.resize(n, n);
    for (int p = 0; p < n; ++p) {
      for (int q = p; q < n; ++q) {
        y(p, q) = theta(at);
        y(q, p) = theta(at);
        ++at;
      }
    }
  }
}

// Entrywise divided differences of exp over a spectrum.
Matrix exp_dd(const Vector& mu) {
  const int n = static_cast<int>(mu.size());
  Matrix k(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double diff = mu(a) - mu(b);
      if (std::abs(diff) < 1e-9) {
        k(a, b) = std::exp(0.5 * (mu(a) + mu(b)));
      } else {
        k(a, b) = (std::exp(mu(a)) - std::exp(mu(b))) / diff;
      }
    }
  }
  return k;
}

// Squared distance from x to frame points as a function of the packed block
// logs, with analytic gradient. The determinant normalization is folded in
// by centering the log spectrum. Works from the factor form of x, so the
// base point may be arbitrarily spread: the SVD of the one-sided graded
// matrix [C_j V_j e^{mu_j/2}] keeps the full log spectrum.
class FrameObjective {
public:
  FrameObjective(const FactoredPoint& x, const ParallelSetFrame& frame)
      : layout_{frame.offsets()} {
    const Vector scale = (-0.5 * x.logs().array()).exp().matrix();
    if (!scale.allFinite()) {
      throw NumericalFailure("base point is too spread out to project");
    }
    c_ = scale.asDiagonal() * (x.axes().transpose() * frame.frame());
  }

  [[nodiscard]] const BlockLayout& layout() const { return layout_; }

  double value(const Vector& theta, Vector* grad) const {
    const int d = static_cast<int>(c_.rows());
    const int blocks = layout_.block_count();
    std::vector<Matrix> ys(blocks);
    unpack(theta, layout_, ys);

    std::vector<SymEig> yeigs(blocks);
    std::vector<Matrix> cv(blocks);
    Matrix w(d, d);
    for (int j = 0; j < blocks; ++j) {
      yeigs[j] = sym_eig_desc(ys[j]);
      cv[j] = c_.middleCols(layout_.offsets[j], layout_.size(j)) * yeigs[j].vectors;
      const Vector half = (0.5 * yeigs[j].values.array()).exp().matrix();
      if (!half.allFinite()) throw NumericalFailure("frame parameters overflow");
      w.middleCols(layout_.offsets[j], layout_.size(j)) = cv[j] * half.asDiagonal();
    }
    const AccurateSvd sv = accurate_svd(w);
    const Vector lam_log = 2.0 * sv.log_sigma;
    Vector logs = lam_log;
    logs.array() -= lam_log.mean();
    const double f = logs.squaredNorm();
    if (grad == nullptr) return f;
    if (lam_log.cwiseAbs().maxCoeff() > 600.0) {
      throw NumericalFailure("point is too far from the parallel set to project");
    }

    grad->setZero(theta.size());
    Vector coef(d);
    for (int i = 0; i < d; ++i) coef(i) = 2.0 * logs(i) * std::exp(-lam_log(i));
    int at = 0;
    for (int j = 0; j < blocks; ++j) {
      const int nj = layout_.size(j);
      const Matrix k = exp_dd(yeigs[j].values);
      Matrix gj = Matrix::Zero(nj, nj);
      for (int i = 0; i < d; ++i) {
        const Vector b = cv[j].transpose() * sv.u.col(i);
        gj += coef(i) * (k.array() * (b * b.transpose()).array()).matrix();
      }
      const Matrix rj = yeigs[j].vectors * gj * yeigs[j].vectors.transpose();
      for (int p = 0; p < nj; ++p) {
        for (int q = p; q < nj; ++q) {
          (*grad)(at++) = (p == q) ? rj(p, p) : 2.0 * rj(p, q);
        }
      }
    }
    return f;
  }

private:
  BlockLayout layout_;
  Matrix c_;
};

Vector initial_parameters(const FactoredPoint& x, const ParallelSetFrame& frame) {
  const BlockLayout layout{frame.offsets()};
  // Rows of m weighted by exp(logs) give the frame-coordinate Gram blocks of
  // x; singleton blocks reduce by exact log-sum-exp, bigger blocks by a
  // shifted eigendecomposition with a floor, good enough to seed the descent.
  const Matrix m = x.axes().transpose() * frame.frame_inverse().transpose();
  Vector theta(layout.param_count());
  int at = 0;
  const double lmax = x.logs().maxCoeff();
  for (int j = 0; j < layout.block_count(); ++j) {
    const int n = layout.size(j);
    if (n == 1) {
      const int col = frame.offsets()[j];
      double best = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < m.rows(); ++i) {
        if (m(i, col) != 0.0) {
          best = std::max(best, x.logs()(i) + 2.0 * std::log(std::abs(m(i, col))));
        }
      }
      double acc = 0.0;
      for (int i = 0; i < m.rows(); ++i) {
        if (m(i, col) != 0.0) {
          acc += std::exp(x.logs()(i) + 2.0 * std::log(std::abs(m(i, col))) - best);
        }
      }
      theta(at++) = best + std::log(acc);
      continue;
    }
    const Matrix mj = m.middleCols(frame.offsets()[j], n);
    const Vector scaled = (x.logs().array() - lmax).exp().matrix();
    const SymEig e = sym_eig_desc(sym_part(mj.transpose() * scaled.asDiagonal() * mj));
    const double floor = std::max(e.values(0), 1e-300) * 1e-280;
    Vector lg(n);
    for (int p = 0; p < n; ++p) lg(p) = std::log(std::max(e.values(p), floor)) + lmax;
    const Matrix y = e.vectors * lg.asDiagonal() * e.vectors.transpose();
    for (int p = 0; p < n; ++p)
      for (int q = p; q < n; ++q) theta(at++) = 0.5 * (y(p, q) + y(q, p));
  }
  return theta;
}

FactoredPoint frame_point(const ParallelSetFrame& frame, const Vector& theta) {
  const BlockLayout layout{frame.offsets()};
  std::vector<Matrix> ys(layout.block_count());
  unpack(theta, layout, ys);
  const int d = frame.dim();
  Matrix w(d, d);
  for (int j = 0; j < layout.block_count(); ++j) {
    const SymEig e = sym_eig_desc(ys[j]);
    const Vector half = (0.5 * e.values.array()).exp().matrix();
    if (!half.allFinite()) throw NumericalFailure("frame parameters overflow");
    w.middleCols(frame.offsets()[j], layout.size(j)) =
        (frame.frame().middleCols(frame.offsets()[j], layout.size(j)) * e.vectors) *
        half.asDiagonal();
  }
  return FactoredPoint(w);
}

// Isotonic regression onto nondecreasing sequences (pool adjacent
// violators); preserves the mean.
Vector pava_increasing(const Vector& v) {
  const int n = static_cast<int>(v.size());
  std::vector<double> sums;
  std::vector<int> counts;
  sums.reserve(n);
  counts.reserve(n);
  for (int i = 0; i < n; ++i) {
    sums.push_back(v(i));
    counts.push_back(1);
    while (sums.size() >= 2) {
      const std::size_t last = sums.size() - 1;
      if (sums[last] / counts[last] < sums[last - 1] / counts[last - 1]) {
        sums[last - 1] += sums[last];
        counts[last - 1] += counts[last];
        sums.pop_back();
        counts.pop_back();
      } else {
        break;
      }
    }
  }
  Vector out(n);
  int at = 0;
  for (std::size_t b = 0; b < sums.size(); ++b) {
    const double mean = sums[b] / counts[b];
    for (int r = 0; r < counts[b]; ++r) out(at++) = mean;
  }
  return out;
}

Vector pava_decreasing(const Vector& v) { return -pava_increasing(-v); }

// Euclidean projection onto the circular cone {angle(v, xi) <= beta}.
Vector soc_project(const Vector& v, const Vector& xi, double beta) {
  const double a = v.dot(xi);
  const Vector b = v - a * xi;
  const double nb = b.norm();
  const double phi = std::atan2(nb, a);
  if (phi <= beta) return v;
  if (phi - beta >= M_PI / 2) return Vector::Zero(v.size());
  const double rho = a * std::cos(beta) + nb * std::sin(beta);
  if (nb <= 1e-300) return rho * std::cos(beta) * xi;
  return rho * (std::cos(beta) * xi + (std::sin(beta) / nb) * b);
}

// Projection onto C = {sorted descending} intersect {angle <= beta} by
// Dykstra's algorithm over the two cones.
Vector project_chamber_cone(const Vector& v, const Vector& xi, double beta) {
  Vector x = v;
  Vector p = Vector::Zero(v.size());
  Vector q = Vector::Zero(v.size());
  const double scale = std::max(1.0, v.norm());
  for (int iter = 0; iter < 200; ++iter) {
    const Vector y = pava_decreasing(x + p);
    p = x + p - y;
    const Vector xn = soc_project(y + q, xi, beta);
    q = y + q - xn;
    const double move = (xn - y).norm();
    x = xn;
    if (move <= 1e-14 * scale) break;
  }
  return x;
}

bool in_chamber_cone(const Vector& v, const Vector& xi, double beta, double slack) {
  const double scale = std::max(1.0, v.norm());
  for (int i = 0; i + 1 < v.size(); ++i) {
    if (v(i) - v(i + 1) < -slack * scale) return false;
  }
  if (v.norm() <= slack) return true;
  return spherical_angle(v, xi) <= beta + 1e-10;
}

}  // namespace

ParallelSetFrame::ParallelSetFrame(Flag tau_plus, Flag tau_minus, std::vector<Matrix> blocks)
    : tau_plus_(std::move(tau_plus)),
      tau_minus_(std::move(tau_minus)),
      blocks_(std::move(blocks)) {
  if (!(tau_plus_.pattern() == tau_minus_.pattern())) {
    throw PatternMismatch("parallel set flags carry different patterns");
  }
  const FacePattern& pattern = tau_plus_.pattern();
  const int d = pattern.ambient_dim();
  if (static_cast<int>(blocks_.size()) != pattern.block_count()) {
    throw PatternMismatch("expected one block per pattern block");
  }
  const std::vector<int> cuts = pattern.cuts();
  offsets_.resize(blocks_.size() + 1);
  offsets_[0] = 0;
  frame_.resize(d, d);
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    const int nj = cuts[j + 1] - cuts[j];
    if (blocks_[j].rows() != d || static_cast<int>(blocks_[j].cols()) != nj) {
      throw PatternMismatch("block " + std::to_string(j) + " has the wrong shape");
    }
    if ((blocks_[j].transpose() * blocks_[j] - Matrix::Identity(nj, nj)).norm() > tol::basis) {
      throw DegenerateElement("block " + std::to_string(j) + " is not orthonormal");
    }
    frame_.middleCols(offsets_[j], nj) = blocks_[j];
    offsets_[j + 1] = offsets_[j] + nj;
  }
  Eigen::JacobiSVD<Matrix> svd(frame_);
  if (svd.singularValues()(d - 1) < 1e-10) {
    throw DegenerateElement("frame blocks do not span the space");
  }
  frame_inv_ = frame_.inverse();
}

ParallelSetFrame parallel_set_of(const Flag& tau_plus, const Flag& tau_minus,
                                 double antipodal_tol) {
  const AntipodalCheck check = is_antipodal(tau_plus, tau_minus, antipodal_tol);
  if (!check.antipodal) {
    throw NotAntipodal(0, 1, "margin " + std::to_string(check.margin));
  }
  const FacePattern& pattern = tau_plus.pattern();
  const int d = pattern.ambient_dim();
  const std::vector<int> cuts = pattern.cuts();
  const int m = pattern.block_count();
  std::vector<Matrix> blocks(m);
  for (int j = 0; j < m; ++j) {
    const int lo = cuts[j];
    const int hi = cuts[j + 1];
    if (j == 0) {
      blocks[j] = tau_plus.basis().leftCols(hi);
      continue;
    }
    if (j == m - 1) {
      blocks[j] = tau_minus.basis().leftCols(d - lo);
      continue;
    }
    const Matrix a = tau_plus.basis().leftCols(hi);
    const Matrix b = tau_minus.basis().leftCols(d - lo);
    Matrix joint(d, a.cols() + b.cols());
    joint << a, -b;
    Eigen::JacobiSVD<Matrix> svd(joint, Eigen::ComputeFullV);
    if (svd.singularValues()(d - 1) < 1e-10) {
      throw NotAntipodal(0, 1, "degenerate span at cut " + std::to_string(lo));
    }
    const int k = hi - lo;
    Matrix raw(d, k);
    for (int t = 0; t < k; ++t) {
      raw.col(t) = a * svd.matrixV().col(joint.cols() - k + t).head(a.cols());
    }
    blocks[j] = thin_orthonormalize(raw);
  }
  return ParallelSetFrame(tau_plus, tau_minus, std::move(blocks));
}

bool on_parallel_set(const Point& q, const ParallelSetFrame& frame, double membership_tol) {
  return on_parallel_set(FactoredPoint::from_point(q), frame, membership_tol);
}

bool on_parallel_set(const FactoredPoint& q, const ParallelSetFrame& frame,
                     double membership_tol) {
  if (q.dim() != frame.dim()) throw PatternMismatch("dimensions differ");
  const Matrix m = q.axes().transpose() * frame.frame();
  const Vector inv = (-q.logs().array()).exp().matrix();
  if (!inv.allFinite()) {
    throw NumericalFailure("point is too spread out for the membership test");
  }
  const Matrix g = m.transpose() * inv.asDiagonal() * m;
  double off = 0.0;
  const std::vector<int>& offs = frame.offsets();
  const int blocks = static_cast<int>(offs.size()) - 1;
  for (int i = 0; i < blocks; ++i) {
    for (int j = 0; j < blocks; ++j) {
      if (i == j) continue;
      off += g.block(offs[i], offs[j], offs[i + 1] - offs[i], offs[j + 1] - offs[j])
                 .squaredNorm();
    }
  }
  return std::sqrt(off) <= membership_tol * g.norm();
}

ProjectionResult project_to_parallel_set(const Point& x, const ParallelSetFrame& frame,
                                         double proj_tol, int max_iter) {
  return project_to_parallel_set(FactoredPoint::from_point(x), frame, proj_tol, max_iter);
}

ProjectionResult project_to_parallel_set(const FactoredPoint& x, const ParallelSetFrame& frame,
                                         double proj_tol, int max_iter) {
  if (x.dim() != frame.dim()) throw PatternMismatch("dimensions differ");
  const FrameObjective objective(x, frame);
  Vector theta = initial_parameters(x, frame);
  const int n = static_cast<int>(theta.size());

  Vector grad(n);
  double f = objective.value(theta, &grad);
  const double gtol = std::min(proj_tol, 1e-8) * std::max(1.0, std::sqrt(f));
  Matrix h = Matrix::Identity(n, n);
  int iter = 0;
  int stalled_steps = 0;
  for (; iter < max_iter; ++iter) {
    if (grad.lpNorm<Eigen::Infinity>() <= gtol || f <= tol::degenerate * tol::degenerate) {
      break;
    }
    Vector dir = -(h * grad);
    if (dir.dot(grad) >= 0) {
      h.setIdentity();
      dir = -grad;
    }
    double step = 1.0;
    const double slope = grad.dot(dir);
    double f_new = f;
    Vector theta_new = theta;
    bool accepted = false;
    while (step > 1e-18) {
      theta_new = theta + step * dir;
      f_new = objective.value(theta_new, nullptr);
      if (f_new <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (grad.lpNorm<Eigen::Infinity>() <= 1e-5 * std::max(1.0, std::sqrt(f))) break;
      throw NoConvergence(iter, "projection line search stalled");
    }
    Vector grad_new(n);
    const double f_check = objective.value(theta_new, &grad_new);
    // Near the minimum the gradient is noise-dominated and may float just
    // above gtol forever. Once several accepted steps in a row stop moving f
    // at relative machine precision, the value is converged: dist changes by
    // far less than any proj_tol we accept.
    if (f - f_check <= 1e-13 * std::max(1.0, f)) {
      if (++stalled_steps >= 5) {
        theta = theta_new;
        f = f_check;
        break;
      }
    } else {
      stalled_steps = 0;
    }
    const Vector s = theta_new - theta;
    const Vector y = grad_new - grad;
    const double sy = s.dot(y);
    if (sy > 1e-14 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Matrix outer = s * y.transpose();
      h = (Matrix::Identity(n, n) - rho * outer) * h *
              (Matrix::Identity(n, n) - rho * outer.transpose()) +
          rho * (s * s.transpose());
    } else {
      h.setIdentity();
    }
    theta = theta_new;
    f = f_check;
    grad = grad_new;
  }
  if (iter >= max_iter) {
    throw NoConvergence(max_iter, "projection did not reach gradient tolerance");
  }
  ProjectionResult out{frame_point(frame, theta), std::sqrt(std::max(0.0, f)), iter,
                       std::move(theta)};
  return out;
}

double d_opp(const Point& x, const Flag& tau_plus, const Flag& tau_minus,
             double antipodal_tol) {
  const ParallelSetFrame frame = parallel_set_of(tau_plus, tau_minus, antipodal_tol);
  return project_to_parallel_set(x, frame).dist;
}

bool in_cone(const Point& x, const Flag& tau, const ThetaSpec& theta, const Point& y,
             double flag_tol, double gap_tol) {
  if (x.dim() != tau.ambient_dim() || y.dim() != tau.ambient_dim()) {
    throw PatternMismatch("dimensions differ");
  }
  if (!(tau.pattern() == theta.pattern())) {
    throw PatternMismatch("flag and cone patterns differ");
  }
  const DeltaVector dv = delta_distance(x, y);
  if (dv.norm() <= tol::degenerate) return true;
  if (spherical_angle(type_direction(dv), theta.xi().direction()) > theta.beta()) {
    return false;
  }
  try {
    const Flag f = flag_of_segment(x, y, theta.pattern(), gap_tol);
    return flags_equal(f, tau, flag_tol);
  } catch (const NotRegular&) {
    return false;
  }
}

bool is_longitudinal(const ParallelSetFrame& frame, const Point& y1, const Point& y2,
                     const ThetaSpec& theta, double membership_tol) {
  if (!on_parallel_set(y1, frame, membership_tol)) {
    throw NotOnParallelSet("first point, membership tolerance " +
                           std::to_string(membership_tol));
  }
  if (!on_parallel_set(y2, frame, membership_tol)) {
    throw NotOnParallelSet("second point, membership tolerance " +
                           std::to_string(membership_tol));
  }
  return in_cone(y1, frame.tau_plus(), theta, y2);
}

double distance_to_diamond(const Point& q, const Point& x1, const Point& x2,
                           const ThetaSpec& theta, double diamond_tol) {
  return distance_to_diamond(FactoredPoint::from_point(q), FactoredPoint::from_point(x1),
                             FactoredPoint::from_point(x2), theta, diamond_tol);
}

double distance_to_diamond(const FactoredPoint& q, const FactoredPoint& x1,
                           const FactoredPoint& x2, const ThetaSpec& theta,
                           double diamond_tol) {
  const int d = theta.pattern().ambient_dim();
  if (q.dim() != d || x1.dim() != d || x2.dim() != d) {
    throw PatternMismatch("dimensions differ");
  }
  const SegmentSpectrum seg = segment_spectrum(x1, x2);
  if (seg.logs.norm() <= tol::degenerate) {
    throw DegenerateSegment("diamond tips coincide");
  }
  const Vector& xi = theta.xi().direction();
  if (spherical_angle(seg.logs, xi) > theta.beta()) {
    throw NotRegular(0, "tip segment type lies outside the cone");
  }

  // Change base with the isometry sending x1 to the identity. It carries the
  // flat through the tips onto the coordinate flat of the segment eigenbasis,
  // whose frame is exactly orthonormal at any tip spread, while q and x2 keep
  // moderate factored forms.
  const SegmentSpectrum segq = segment_spectrum(x1, q);
  const FactoredPoint q_local = FactoredPointFactory::from_spectral(segq.basis, segq.logs);

  const FacePattern full = FacePattern::full(d);
  std::vector<Matrix> cols(d);
  for (int j = 0; j < d; ++j) cols[j] = seg.basis.col(j);
  Matrix reversed_bn(d, d);
  for (int j = 0; j < d; ++j) reversed_bn.col(j) = seg.basis.col(d - 1 - j);
  const ParallelSetFrame flat(Flag(full, seg.basis), Flag(full, reversed_bn), std::move(cols));

  const Vector y1 = Vector::Zero(d);
  const Vector y2 = seg.logs;

  const ProjectionResult proj = project_to_parallel_set(q_local, flat);
  const Vector& yp = proj.parameters;

  const double beta = theta.beta();
  const auto project_forward = [&](const Vector& z) -> Vector {
    return y1 + project_chamber_cone(z - y1, xi, beta);
  };
  const auto project_backward = [&](const Vector& z) -> Vector {
    return y2 - project_chamber_cone(y2 - z, xi, beta);
  };

  Vector z = yp;
  Vector p1 = Vector::Zero(d);
  Vector p2 = Vector::Zero(d);
  const double scale = std::max(1.0, (y2 - y1).norm());
  for (int iter = 0; iter < 300; ++iter) {
    const Vector w = project_forward(z + p1);
    p1 = z + p1 - w;
    const Vector zn = project_backward(w + p2);
    p2 = w + p2 - zn;
    const double move = (zn - w).norm() + (zn - z).norm();
    z = zn;
    if (move <= 1e-13 * scale) break;
  }

  const double slack = diamond_tol * 1e-3;
  const auto feasible = [&](const Vector& cand) {
    return in_chamber_cone(cand - y1, xi, beta, slack) &&
           in_chamber_cone(y2 - cand, xi, beta, slack);
  };
  if (!feasible(z)) {
    const Vector mid = 0.5 * (y1 + y2);
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double s = 0.5 * (lo + hi);
      if (feasible((1.0 - s) * z + s * mid)) {
        hi = s;
      } else {
        lo = s;
      }
    }
    z = (1.0 - hi) * z + hi * mid;
  }

  Matrix target_factor(d, d);
  for (int j = 0; j < d; ++j) {
    target_factor.col(j) = seg.basis.col(j) * std::exp(0.5 * z(j));
  }
  if (!target_factor.allFinite()) {
    throw NumericalFailure("diamond target overflows the double range");
  }
  return distance(q_local, FactoredPoint(target_factor));
}

}  // namespace anosov
