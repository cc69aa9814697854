#include "polar/alignment.hpp"

#include <algorithm>

#include "polar/errors.hpp"
#include "polar/linalg.hpp"

namespace polar {

Alignment span_alignment(const Eigen::MatrixXd& va, const Eigen::MatrixXd& vb) {
  if (va.rows() != vb.rows()) throw DimensionError("alignment needs probes over the same model dimension");
  const OrthonormalBasis qa = orthonormal_basis(va);
  const OrthonormalBasis qb = orthonormal_basis(vb);
  Alignment out;
  out.rank_a = qa.rank;
  out.rank_b = qb.rank;
  out.deficient = qa.deficient || qb.deficient;
  const int denom = std::min(qa.rank, qb.rank);
  if (denom == 0) return out;
  out.score = (qa.q.transpose() * qb.q).squaredNorm() / denom;
  return out;
}

Alignment subspace_alignment(const PolarProbe& a, const PolarProbe& b) {
  return span_alignment(pseudoinverse(a.map) * a.prototypes, pseudoinverse(b.map) * b.prototypes);
}

Eigen::MatrixXd alignment_matrix(std::span<const PolarProbe> probes) {
  const auto n = static_cast<Eigen::Index>(probes.size());
  std::vector<Eigen::MatrixXd> images;
  images.reserve(probes.size());
  for (const auto& p : probes) images.push_back(pseudoinverse(p.map) * p.prototypes);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) m(i, j) = m(j, i) = span_alignment(images[i], images[j]).score;
  return m;
}

}  // namespace polar
