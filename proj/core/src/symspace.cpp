#include "anosov/symspace.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace anosov {

Matrix sym_part(const Matrix& m) { return 0.5 * (m + m.transpose()); }

SymEig sym_eig_desc(const Matrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(s);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("symmetric eigensolve did not converge");
  }
  const int n = static_cast<int>(s.rows());
  SymEig out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  for (int j = 0; j < n; ++j) {
    int arg = 0;
    out.vectors.col(j).cwiseAbs().maxCoeff(&arg);
    if (out.vectors(arg, j) < 0) out.vectors.col(j) *= -1.0;
  }
  return out;
}

namespace {

// RAII element for extended-precision buffers; mpfr_t itself is an array
// type and cannot live in a vector directly.
struct MpScalar {
  mpfr_t v;
};

// Exception-safe block of extended-precision scalars, zero-initialized.
class MpBuffer {
public:
  MpBuffer(std::size_t count, mpfr_prec_t prec) : xs_(count) {
    for (MpScalar& s : xs_) {
      mpfr_init2(s.v, prec);
      mpfr_set_zero(s.v, 1);
    }
  }
  ~MpBuffer() {
    for (MpScalar& s : xs_) mpfr_clear(s.v);
  }
  MpBuffer(const MpBuffer&) = delete;
  MpBuffer& operator=(const MpBuffer&) = delete;

  mpfr_ptr operator[](std::size_t i) { return xs_[i].v; }

private:
  std::vector<MpScalar> xs_;
};

// One-sided Jacobi on columns in extended precision, consuming column-major
// entries already set at the working precision. Rotations are chosen from
// exact column Gram entries, so the singular values come out with relative
// accuracy ~2^-prec regardless of how graded the input is.
AccurateSvd jacobi_sweeps(MpBuffer& a, int n, mpfr_prec_t prec) {
  MpBuffer v(static_cast<std::size_t>(n) * n, prec);
  for (int j = 0; j < n; ++j) mpfr_set_ui(v[static_cast<std::size_t>(j) * n + j], 1, MPFR_RNDN);
  MpBuffer w(10, prec);
  mpfr_ptr app = w[0], aqq = w[1], apq = w[2], zeta = w[3], t = w[4], c = w[5], s = w[6],
           tmp1 = w[7], tmp2 = w[8], thr = w[9];
  mpfr_set_ui(thr, 1, MPFR_RNDN);
  mpfr_div_2ui(thr, thr, static_cast<unsigned long>(prec - 8), MPFR_RNDN);

  const int max_sweeps = 60;
  bool converged = false;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    converged = true;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const std::size_t colp = static_cast<std::size_t>(p) * n;
        const std::size_t colq = static_cast<std::size_t>(q) * n;
        mpfr_set_zero(app, 1);
        mpfr_set_zero(aqq, 1);
        mpfr_set_zero(apq, 1);
        for (int i = 0; i < n; ++i) {
          mpfr_fma(app, a[colp + i], a[colp + i], app, MPFR_RNDN);
          mpfr_fma(aqq, a[colq + i], a[colq + i], aqq, MPFR_RNDN);
          mpfr_fma(apq, a[colp + i], a[colq + i], apq, MPFR_RNDN);
        }
        mpfr_mul(tmp1, app, aqq, MPFR_RNDN);
        mpfr_sqrt(tmp1, tmp1, MPFR_RNDN);
        mpfr_mul(tmp1, tmp1, thr, MPFR_RNDN);
        mpfr_abs(tmp2, apq, MPFR_RNDN);
        if (mpfr_cmp(tmp2, tmp1) <= 0) continue;
        converged = false;
        mpfr_sub(zeta, aqq, app, MPFR_RNDN);
        mpfr_div(zeta, zeta, apq, MPFR_RNDN);
        mpfr_div_2ui(zeta, zeta, 1, MPFR_RNDN);
        mpfr_mul(tmp1, zeta, zeta, MPFR_RNDN);
        mpfr_add_ui(tmp1, tmp1, 1, MPFR_RNDN);
        mpfr_sqrt(tmp1, tmp1, MPFR_RNDN);
        mpfr_abs(tmp2, zeta, MPFR_RNDN);
        mpfr_add(tmp1, tmp1, tmp2, MPFR_RNDN);
        mpfr_ui_div(t, 1, tmp1, MPFR_RNDN);
        if (mpfr_sgn(zeta) < 0) mpfr_neg(t, t, MPFR_RNDN);
        mpfr_mul(tmp1, t, t, MPFR_RNDN);
        mpfr_add_ui(tmp1, tmp1, 1, MPFR_RNDN);
        mpfr_sqrt(tmp1, tmp1, MPFR_RNDN);
        mpfr_ui_div(c, 1, tmp1, MPFR_RNDN);
        mpfr_mul(s, c, t, MPFR_RNDN);
        const auto rotate = [&](MpBuffer& m, std::size_t x, std::size_t y) {
          for (int i = 0; i < n; ++i) {
            mpfr_mul(tmp1, c, m[x + i], MPFR_RNDN);
            mpfr_mul(tmp2, s, m[y + i], MPFR_RNDN);
            mpfr_sub(tmp1, tmp1, tmp2, MPFR_RNDN);
            mpfr_mul(tmp2, s, m[x + i], MPFR_RNDN);
            mpfr_fma(tmp2, c, m[y + i], tmp2, MPFR_RNDN);
            mpfr_set(m[x + i], tmp1, MPFR_RNDN);
            mpfr_set(m[y + i], tmp2, MPFR_RNDN);
          }
        };
        rotate(a, colp, colq);
        rotate(v, colp, colq);
      }
    }
  }
  if (!converged) throw NumericalFailure("extended-precision SVD did not converge");

  std::vector<double> logs(n);
  Matrix u(n, n), vv(n, n);
  for (int j = 0; j < n; ++j) {
    const std::size_t col = static_cast<std::size_t>(j) * n;
    mpfr_set_zero(app, 1);
    for (int i = 0; i < n; ++i) mpfr_fma(app, a[col + i], a[col + i], app, MPFR_RNDN);
    mpfr_sqrt(app, app, MPFR_RNDN);
    if (mpfr_zero_p(app)) throw NumericalFailure("matrix is numerically singular");
    mpfr_log(tmp1, app, MPFR_RNDN);
    logs[j] = mpfr_get_d(tmp1, MPFR_RNDN);
    for (int i = 0; i < n; ++i) {
      mpfr_div(tmp2, a[col + i], app, MPFR_RNDN);
      u(i, j) = mpfr_get_d(tmp2, MPFR_RNDN);
      vv(i, j) = mpfr_get_d(v[col + i], MPFR_RNDN);
    }
  }

  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) { return logs[i] > logs[j]; });
  AccurateSvd out;
  out.u.resize(n, n);
  out.v.resize(n, n);
  out.log_sigma.resize(n);
  for (int j = 0; j < n; ++j) {
    out.log_sigma(j) = logs[idx[j]];
    out.u.col(j) = u.col(idx[j]);
    out.v.col(j) = vv.col(idx[j]);
  }
  return out;
}

AccurateSvd jacobi_svd_mp(const Matrix& a0, mpfr_prec_t prec) {
  const int n = static_cast<int>(a0.rows());
  MpBuffer a(static_cast<std::size_t>(n) * n, prec);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      mpfr_set_d(a[static_cast<std::size_t>(j) * n + i], a0(i, j), MPFR_RNDN);
    }
  }
  return jacobi_sweeps(a, n, prec);
}

void normalize_svd_signs(AccurateSvd& s) {
  const int n = static_cast<int>(s.u.cols());
  for (int j = 0; j < n; ++j) {
    int arg = 0;
    s.u.col(j).cwiseAbs().maxCoeff(&arg);
    if (s.u(arg, j) < 0) {
      s.u.col(j) *= -1.0;
      s.v.col(j) *= -1.0;
    }
  }
}

}  // namespace

AccurateSvd accurate_svd(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw NumericalFailure("accurate_svd expects a square matrix");
  }
  if (!a.allFinite()) throw NumericalFailure("accurate_svd input has non-finite entries");
  const int n = static_cast<int>(a.rows());
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector sv = svd.singularValues();
  const double smax = sv(0);
  if (!(smax > 0.0)) throw NumericalFailure("matrix is numerically singular");
  const double smin = sv(n - 1);
  // Within this spread, plain double Jacobi already has the small singular
  // values to ~1e-12 relative; beyond it the information survives only in
  // extended precision.
  if (smin > 0.0 && std::log(smax / smin) <= 10.0) {
    AccurateSvd out{svd.matrixU(), sv.array().log().matrix(), svd.matrixV()};
    normalize_svd_signs(out);
    return out;
  }
  double rmax = 0.0, rmin = 1e308, cmax = 0.0, cmin = 1e308;
  for (int i = 0; i < n; ++i) {
    rmax = std::max(rmax, a.row(i).norm());
    rmin = std::min(rmin, a.row(i).norm());
    cmax = std::max(cmax, a.col(i).norm());
    cmin = std::min(cmin, a.col(i).norm());
  }
  if (!(rmin > 0.0) || !(cmin > 0.0)) throw NumericalFailure("matrix is numerically singular");
  const double span = std::log(rmax / rmin) + std::log(cmax / cmin) + 60.0;
  const auto prec =
      static_cast<mpfr_prec_t>(std::min(16384.0, std::max(256.0, span * 1.6 + 160.0)));
  AccurateSvd out = jacobi_svd_mp(a, prec);
  normalize_svd_signs(out);
  return out;
}

AccurateSvd accurate_svd_scaled(const Vector& row_logs, const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw NumericalFailure("accurate_svd expects a square matrix");
  }
  if (row_logs.size() != a.rows()) {
    throw NumericalFailure("row scale count disagrees with the matrix");
  }
  if (!a.allFinite() || !row_logs.allFinite()) {
    throw NumericalFailure("accurate_svd input has non-finite entries");
  }
  const int n = static_cast<int>(a.rows());

  // When every scaled entry stays well inside the double exponent range the
  // plain tiers already apply; forming the product entrywise is exact up to
  // one rounding each.
  bool representable = row_logs.cwiseAbs().maxCoeff() <= 600.0;
  for (int j = 0; representable && j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (a(i, j) == 0.0) continue;
      const double e = row_logs(i) + std::log(std::abs(a(i, j)));
      if (std::abs(e) > 700.0) {
        representable = false;
        break;
      }
    }
  }
  if (representable) {
    const Matrix scaled = row_logs.array().exp().matrix().asDiagonal() * a;
    if (scaled.allFinite()) return accurate_svd(scaled);
  }

  double rmax = 0.0, rmin = 1e308, cmax = 0.0, cmin = 1e308;
  for (int i = 0; i < n; ++i) {
    rmax = std::max(rmax, a.row(i).norm());
    rmin = std::min(rmin, a.row(i).norm());
    cmax = std::max(cmax, a.col(i).norm());
    cmin = std::min(cmin, a.col(i).norm());
  }
  if (!(rmin > 0.0) || !(cmin > 0.0)) throw NumericalFailure("matrix is numerically singular");
  const double span = (row_logs.maxCoeff() - row_logs.minCoeff()) + std::log(rmax / rmin) +
                      std::log(cmax / cmin) + 60.0;
  const auto prec =
      static_cast<mpfr_prec_t>(std::min(16384.0, std::max(256.0, span * 1.6 + 160.0)));

  MpBuffer buf(static_cast<std::size_t>(n) * n, prec);
  MpBuffer scale(static_cast<std::size_t>(n), prec);
  for (int i = 0; i < n; ++i) {
    mpfr_set_d(scale[i], row_logs(i), MPFR_RNDN);
    mpfr_exp(scale[i], scale[i], MPFR_RNDN);
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      mpfr_ptr entry = buf[static_cast<std::size_t>(j) * n + i];
      mpfr_set_d(entry, a(i, j), MPFR_RNDN);
      mpfr_mul(entry, entry, scale[i], MPFR_RNDN);
    }
  }
  AccurateSvd out = jacobi_sweeps(buf, n, prec);
  normalize_svd_signs(out);
  return out;
}

namespace {

Matrix spd_map(const Matrix& p, double (*f)(double)) {
  const SymEig e = sym_eig_desc(sym_part(p));
  if (e.values(e.values.size() - 1) <= 0.0) {
    throw DegenerateElement("matrix is not positive definite");
  }
  Vector mapped(e.values.size());
  for (int i = 0; i < mapped.size(); ++i) mapped(i) = f(e.values(i));
  return sym_part(e.vectors * mapped.asDiagonal() * e.vectors.transpose());
}

}  // namespace

Matrix spd_power(const Matrix& p, double t) {
  const SymEig e = sym_eig_desc(sym_part(p));
  if (e.values(e.values.size() - 1) <= 0.0) {
    throw DegenerateElement("matrix is not positive definite");
  }
  Vector mapped = e.values.array().pow(t).matrix();
  return sym_part(e.vectors * mapped.asDiagonal() * e.vectors.transpose());
}

Matrix spd_sqrt(const Matrix& p) {
  return spd_map(p, [](double v) { return std::sqrt(v); });
}

Matrix spd_inv_sqrt(const Matrix& p) {
  return spd_map(p, [](double v) { return 1.0 / std::sqrt(v); });
}

Matrix spd_log(const Matrix& p) {
  return spd_map(p, [](double v) { return std::log(v); });
}

Matrix sym_exp(const Matrix& s) {
  const SymEig e = sym_eig_desc(sym_part(s));
  Vector mapped = e.values.array().exp().matrix();
  return sym_part(e.vectors * mapped.asDiagonal() * e.vectors.transpose());
}

Matrix orthonormalize(const Matrix& m) {
  if (m.rows() != m.cols()) throw NumericalFailure("orthonormalize expects a square matrix");
  const int n = static_cast<int>(m.rows());
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    if (std::abs(r(i, i)) < 1e-13 * std::max(1.0, m.norm())) {
      throw NumericalFailure("orthonormalize: rank-deficient input");
    }
    if (r(i, i) < 0) q.col(i) *= -1.0;
  }
  return q;
}

Point::Point(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() < 2) {
    throw DegenerateElement("point matrix must be square of dimension >= 2");
  }
  const double scale = std::max(1.0, m_.norm());
  if ((m_ - m_.transpose()).norm() > tol::sym * scale) {
    throw DegenerateElement("point matrix is not symmetric");
  }
  m_ = sym_part(m_);
  const SymEig e = sym_eig_desc(m_);
  if (e.values(e.values.size() - 1) <= 0.0) {
    throw DegenerateElement("point matrix is not positive definite");
  }
  const double logdet = e.values.array().log().sum();
  if (std::abs(logdet) > tol::det * m_.rows()) {
    throw DegenerateElement("point matrix does not have unit determinant");
  }
}

Point Point::from_spd(const Matrix& m) {
  Matrix s = sym_part(m);
  const SymEig e = sym_eig_desc(s);
  if (e.values(e.values.size() - 1) <= 0.0) {
    throw DegenerateElement("matrix is not positive definite");
  }
  const double shift = e.values.array().log().mean();
  Vector normalized = (e.values.array().log() - shift).exp().matrix();
  Matrix out = sym_part(e.vectors * normalized.asDiagonal() * e.vectors.transpose());
  return Point(std::move(out), unchecked{});
}

Point Point::identity(int d) {
  if (d < 2) throw DegenerateElement("dimension must be >= 2");
  return Point(Matrix::Identity(d, d), unchecked{});
}

FactoredPoint::FactoredPoint(const Matrix& w) : axes_(), logs_() {
  if (w.rows() != w.cols() || w.rows() < 2) {
    throw DegenerateElement("factor must be square of dimension >= 2");
  }
  if (!w.allFinite()) throw DegenerateElement("factor has non-finite entries");
  const AccurateSvd s = accurate_svd(w);
  axes_ = s.u;
  logs_ = 2.0 * s.log_sigma;
  logs_.array() -= logs_.mean();
}

FactoredPoint FactoredPoint::from_point(const Point& p) {
  Eigen::LLT<Matrix> llt(p.mat());
  if (llt.info() != Eigen::Success) throw NumericalFailure("Cholesky of point failed");
  return FactoredPoint(Matrix(llt.matrixL()));
}

FactoredPoint FactoredPoint::identity(int d) {
  if (d < 2) throw DegenerateElement("dimension must be >= 2");
  return FactoredPoint(Matrix::Identity(d, d), Vector::Zero(d), unchecked{});
}

Point FactoredPoint::to_point() const {
  const Matrix m =
      sym_part(axes_ * logs_.array().exp().matrix().asDiagonal() * axes_.transpose());
  if (!m.allFinite()) {
    throw DegenerateElement("point is too spread out for a dense matrix");
  }
  return PointFactory::from_normalized(m);
}

DeltaVector::DeltaVector(Vector v) : v_(std::move(v)) {
  if (v_.size() < 2) throw DegenerateElement("delta vector needs dimension >= 2");
  for (int i = 0; i + 1 < v_.size(); ++i) {
    if (v_(i) < v_(i + 1) - tol::sum * std::max(1.0, v_.cwiseAbs().maxCoeff())) {
      throw DegenerateElement("delta vector entries must be weakly decreasing");
    }
  }
  if (std::abs(v_.sum()) > tol::sum * std::max<double>(1.0, v_.cwiseAbs().sum())) {
    throw DegenerateElement("delta vector entries must sum to zero");
  }
}

GroupElement::GroupElement(Matrix m) : g_(std::move(m)) {
  if (g_.rows() != g_.cols() || g_.rows() < 2) {
    throw DegenerateElement("group element must be square of dimension >= 2");
  }
  const double det = g_.determinant();
  if (std::abs(det - 1.0) > tol::det * 1e3 * std::max(1.0, std::pow(g_.norm(), g_.rows()))) {
    throw DegenerateElement("group element must have determinant one");
  }
}

GroupElement GroupElement::from_matrix(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() < 2) {
    throw DegenerateElement("group element must be square of dimension >= 2");
  }
  if (!m.allFinite()) throw DegenerateElement("group element entries must be finite");
  // A double-precision determinant of a badly conditioned matrix is pure
  // cancellation noise, so the determinant is taken from the singular values,
  // which stay reliable at any spread.
  AccurateSvd svd;
  try {
    svd = accurate_svd(m);
  } catch (const NumericalFailure&) {
    throw DegenerateElement("matrix is numerically singular");
  }
  if ((svd.u * svd.v.transpose()).determinant() < 0) {
    throw DegenerateElement("matrix has negative determinant");
  }
  const double shift = -svd.log_sigma.sum() / static_cast<double>(m.rows());
  if ((svd.log_sigma.array() + shift).abs().maxCoeff() > 700.0) {
    throw DegenerateElement("group element is too spread out for a dense matrix");
  }
  Matrix scaled = (m * std::exp(shift / 2.0)) * std::exp(shift / 2.0);
  return GroupElement(std::move(scaled), unchecked{});
}

GroupElement GroupElement::identity(int d) {
  if (d < 2) throw DegenerateElement("dimension must be >= 2");
  return GroupElement(Matrix::Identity(d, d), unchecked{});
}

GroupElement GroupElement::inverse() const {
  return GroupElement(g_.inverse(), unchecked{});
}

GroupElement operator*(const GroupElement& a, const GroupElement& b) {
  if (a.dim() != b.dim()) throw DegenerateElement("group element dimensions differ");
  return GroupElement(a.g_ * b.g_, GroupElement::unchecked{});
}

namespace {

// exp(scale * l) applied as a diagonal, guarded against overflow.
Vector exp_scaled(const Vector& l, double scale) {
  Vector out = (scale * l.array()).exp().matrix();
  if (!out.allFinite()) {
    throw NumericalFailure("factored coordinates overflow the double range");
  }
  return out;
}

}  // namespace

SegmentSpectrum segment_spectrum(const FactoredPoint& x, const FactoredPoint& y) {
  if (x.dim() != y.dim()) throw DegenerateElement("point dimensions differ");
  const Matrix m = x.axes().transpose() * y.axes();
  Matrix core = exp_scaled(x.logs(), -0.5).asDiagonal() * m *
                exp_scaled(y.logs(), 0.5).asDiagonal();
  if (!core.allFinite()) {
    throw NumericalFailure("segment coordinates overflow the double range");
  }
  const AccurateSvd s = accurate_svd(core);
  SegmentSpectrum out;
  out.logs = 2.0 * s.log_sigma;
  out.logs.array() -= out.logs.mean();
  out.basis = s.u;
  return out;
}

DeltaVector delta_distance(const FactoredPoint& x, const FactoredPoint& y) {
  return DeltaVector(segment_spectrum(x, y).logs);
}

DeltaVector delta_distance(const Point& x, const Point& y) {
  if (x.dim() != y.dim()) throw DegenerateElement("point dimensions differ");
  return delta_distance(FactoredPoint::from_point(x), FactoredPoint::from_point(y));
}

double distance(const Point& x, const Point& y) { return delta_distance(x, y).norm(); }

double distance(const FactoredPoint& x, const FactoredPoint& y) {
  return delta_distance(x, y).norm();
}

FactoredPoint geodesic_point(const FactoredPoint& x, const FactoredPoint& y, double t) {
  const SegmentSpectrum seg = segment_spectrum(x, y);
  Matrix core = exp_scaled(x.logs(), 0.5).asDiagonal() * seg.basis *
                exp_scaled(seg.logs, 0.5 * t).asDiagonal();
  if (!core.allFinite()) {
    throw NumericalFailure("geodesic coordinates overflow the double range");
  }
  const AccurateSvd s = accurate_svd(core);
  return FactoredPointFactory::from_spectral(x.axes() * s.u, 2.0 * s.log_sigma);
}

Point geodesic_point(const Point& x, const Point& y, double t) {
  if (x.dim() != y.dim()) throw DegenerateElement("point dimensions differ");
  return geodesic_point(FactoredPoint::from_point(x), FactoredPoint::from_point(y), t)
      .to_point();
}

Point cartan_involution(const Point& x, const Point& q) {
  if (x.dim() != q.dim()) throw DegenerateElement("point dimensions differ");
  Eigen::LLT<Matrix> llt(q.mat());
  if (llt.info() != Eigen::Success) throw NumericalFailure("Cholesky of point failed");
  return Point::from_spd(x.mat() * llt.solve(x.mat()));
}

Point act(const GroupElement& g, const Point& x) {
  if (g.dim() != x.dim()) throw DegenerateElement("dimensions differ");
  return Point::from_spd(g.mat() * x.mat() * g.mat().transpose());
}

FactoredPoint act(const GroupElement& g, const FactoredPoint& x) {
  if (g.dim() != x.dim()) throw DegenerateElement("dimensions differ");
  Matrix core = (g.mat() * x.axes()) * exp_scaled(x.logs(), 0.5).asDiagonal();
  if (!core.allFinite()) {
    throw NumericalFailure("action coordinates overflow the double range");
  }
  const AccurateSvd s = accurate_svd(core);
  return FactoredPointFactory::from_spectral(s.u, 2.0 * s.log_sigma);
}

double angle_at(const FactoredPoint& p, const FactoredPoint& y, const FactoredPoint& z) {
  const SegmentSpectrum a = segment_spectrum(p, y);
  const SegmentSpectrum b = segment_spectrum(p, z);
  const double na = a.logs.norm();
  const double nb = b.logs.norm();
  if (na <= tol::degenerate || nb <= tol::degenerate) {
    throw DegenerateSegment("angle is undefined at a zero-length segment");
  }
  const Matrix overlap = a.basis.transpose() * b.basis;
  const double inner = a.logs.dot((overlap.array().square().matrix()) * b.logs);
  const double c = inner / (na * nb);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

double angle_at(const Point& p, const Point& y, const Point& z) {
  return angle_at(FactoredPoint::from_point(p), FactoredPoint::from_point(y),
                  FactoredPoint::from_point(z));
}

GroupElement align_pair(const Point& x, const Point& y, const Point& x2, const Point& y2) {
  if (x.dim() != y.dim() || x.dim() != x2.dim() || x.dim() != y2.dim()) {
    throw DegenerateElement("point dimensions differ");
  }
  const Matrix xis = spd_inv_sqrt(x.mat());
  const Matrix x2s = spd_sqrt(x2.mat());
  const Matrix x2is = spd_inv_sqrt(x2.mat());
  SymEig e1 = sym_eig_desc(sym_part(xis * y.mat() * xis));
  SymEig e2 = sym_eig_desc(sym_part(x2is * y2.mat() * x2is));
  if (e1.vectors.determinant() * e2.vectors.determinant() < 0) {
    e2.vectors.col(e2.vectors.cols() - 1) *= -1.0;
  }
  return GroupElement::from_matrix(x2s * e2.vectors * e1.vectors.transpose() * xis);
}

}  // namespace anosov
