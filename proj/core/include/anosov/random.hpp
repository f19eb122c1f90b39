#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>

namespace anosov {

/// Deterministic random source. Wraps mt19937_64 with fixed bit-to-double
/// mappings so that a seed reproduces the same stream on every platform
/// (std::uniform_real_distribution and friends are implementation-defined).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t index(std::uint64_t n) {
    // Rejection-free modulo is fine here; n is tiny relative to 2^64.
    return eng_() % n;
  }

  /// Standard normal via Box-Muller.
  double gauss() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  Eigen::VectorXd gauss_vector(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = gauss();
    return v;
  }

  Eigen::MatrixXd gauss_matrix(int rows, int cols) {
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = gauss();
    return m;
  }

  /// Random symmetric matrix with independent Gaussian entries, zero trace.
  Eigen::MatrixXd traceless_symmetric(int n) {
    Eigen::MatrixXd g = gauss_matrix(n, n);
    Eigen::MatrixXd s = 0.5 * (g + g.transpose());
    s.diagonal().array() -= s.trace() / n;
    return s;
  }

  /// Haar-ish random rotation: QR of a Gaussian matrix, R-diagonal sign fix,
  /// determinant corrected to +1.
  Eigen::MatrixXd rotation(int n) {
    Eigen::MatrixXd g = gauss_matrix(n, n);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i)
      if (r(i, i) < 0) q.col(i) *= -1.0;
    if (q.determinant() < 0) q.col(n - 1) *= -1.0;
    return q;
  }

  std::mt19937_64& engine() { return eng_; }

private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace anosov
