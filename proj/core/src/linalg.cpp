#include "polar/linalg.hpp"

namespace polar {

Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& m, double rtol) {
  if (m.size() == 0) return Eigen::MatrixXd::Zero(m.cols(), m.rows());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = rtol * s(0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff && s(i) > 0) inv(i) = 1.0 / s(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

OrthonormalBasis orthonormal_basis(const Eigen::MatrixXd& v, double rtol) {
  OrthonormalBasis out;
  if (v.size() == 0) {
    out.q = Eigen::MatrixXd(v.rows(), 0);
    out.deficient = v.cols() > 0;
    return out;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(v, Eigen::ComputeThinU);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = rtol * s(0);
  int rank = 0;
  while (rank < s.size() && s(rank) > cutoff && s(rank) > 0) ++rank;
  out.q = svd.matrixU().leftCols(rank);
  out.rank = rank;
  out.deficient = rank < v.cols();
  return out;
}

}  // namespace polar
