#pragma once

#include <Eigen/Dense>

// Reference transforms used to check the spiking pipeline.  Everything in
// here is deliberately plain: the DFT is the quadratic-time sum straight
// from its definition, and the FFT is an independent recursive radix-4
// decimation-in-time, sharing no code with the layered network builders.

namespace sft::oracle {

// y_k = sum_j x_j (cos(2 pi k j / n) - i sin(2 pi k j / n))
Eigen::VectorXcd dft(const Eigen::VectorXcd& x);

// Recursive radix-4 transform; size must be a power of 4.
Eigen::VectorXcd fft_radix4(const Eigen::VectorXcd& x);

// 2n x 2n real embedding of the DFT matrix:
//   [ Re W  -Im W ]
//   [ Im W   Re W ]
// acting on [Re x; Im x].
Eigen::MatrixXd real_dft_block(int n);

Eigen::VectorXd matvec(const Eigen::MatrixXd& w, const Eigen::VectorXd& x);
Eigen::MatrixXd matmul(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace sft::oracle
