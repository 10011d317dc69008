#include "sft/oracle.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace sft::oracle {

namespace {

bool is_power_of_4(Eigen::Index n) {
  if (n < 1) return false;
  while (n % 4 == 0) n /= 4;
  return n == 1;
}

}  // namespace

Eigen::VectorXcd dft(const Eigen::VectorXcd& x) {
  const Eigen::Index n = x.size();
  if (n == 0) throw std::invalid_argument("dft: empty input");
  Eigen::VectorXcd y(n);
  const double w0 = 2.0 * M_PI / static_cast<double>(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (Eigen::Index j = 0; j < n; ++j) {
      // k*j reduced mod n keeps the angle small and the reduction exact.
      const double ang = w0 * static_cast<double>((k * j) % n);
      acc += x[j] * std::complex<double>(std::cos(ang), -std::sin(ang));
    }
    y[k] = acc;
  }
  return y;
}

Eigen::VectorXcd fft_radix4(const Eigen::VectorXcd& x) {
  const Eigen::Index n = x.size();
  if (!is_power_of_4(n)) throw std::invalid_argument("fft_radix4: size must be a power of 4");
  if (n == 1) return x;

  const Eigen::Index q = n / 4;
  Eigen::VectorXcd part[4];
  for (int p = 0; p < 4; ++p) {
    Eigen::VectorXcd xp(q);
    for (Eigen::Index j = 0; j < q; ++j) xp[j] = x[4 * j + p];
    part[p] = fft_radix4(xp);
  }

  static const std::complex<double> i4[4] = {
      {1.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0}, {0.0, 1.0}};  // powers of -i

  Eigen::VectorXcd y(n);
  const double w0 = 2.0 * M_PI / static_cast<double>(n);
  for (Eigen::Index k = 0; k < q; ++k) {
    std::complex<double> t[4];
    for (int p = 0; p < 4; ++p) {
      const double ang = w0 * static_cast<double>((p * k) % n);
      t[p] = std::complex<double>(std::cos(ang), -std::sin(ang)) * part[p][k];
    }
    for (int r = 0; r < 4; ++r) {
      std::complex<double> acc(0.0, 0.0);
      for (int p = 0; p < 4; ++p) acc += i4[(p * r) % 4] * t[p];
      y[k + r * q] = acc;
    }
  }
  return y;
}

Eigen::MatrixXd real_dft_block(int n) {
  if (n < 1) throw std::invalid_argument("real_dft_block: n must be positive");
  Eigen::MatrixXd m(2 * n, 2 * n);
  const double w0 = 2.0 * M_PI / static_cast<double>(n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      const double ang = w0 * static_cast<double>((static_cast<long long>(k) * j) % n);
      const double re = std::cos(ang);
      const double im = -std::sin(ang);
      m(k, j) = re;
      m(k, n + j) = -im;
      m(n + k, j) = im;
      m(n + k, n + j) = re;
    }
  }
  return m;
}

Eigen::VectorXd matvec(const Eigen::MatrixXd& w, const Eigen::VectorXd& x) {
  if (w.cols() != x.size()) throw std::invalid_argument("matvec: dimension mismatch");
  return w * x;
}

Eigen::MatrixXd matmul(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: dimension mismatch");
  return a * b;
}

}  // namespace sft::oracle
