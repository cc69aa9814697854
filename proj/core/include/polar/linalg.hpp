#pragma once

#include <Eigen/Dense>

namespace polar {

// Singular values below rtol * sigma_max are treated as zero.
inline constexpr double kPinvTolerance = 1e-10;

Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& m, double rtol = kPinvTolerance);

struct OrthonormalBasis {
  Eigen::MatrixXd q;  // rows(v) x rank
  int rank = 0;
  bool deficient = false;  // rank < cols(v)
};

// Orthonormal basis of the column span of v.
OrthonormalBasis orthonormal_basis(const Eigen::MatrixXd& v, double rtol = kPinvTolerance);

}  // namespace polar
