#include "polar/pca.hpp"

#include <fmt/format.h>

#include "polar/errors.hpp"

namespace polar {

PcaProjection pca_projection(const PolarProbe& probe, const RelationalGraph& graph,
                             std::span<const Eigen::MatrixXd> activations, std::span<const std::string> sample_ids) {
  if (activations.empty()) throw ValidationError("PCA needs at least one description");
  if (sample_ids.size() != activations.size()) throw DimensionError("one sample id per activation matrix");
  const int n = graph.num_entities();
  const int k = probe.rank();
  const auto total = static_cast<Eigen::Index>(activations.size()) * n;
  Eigen::MatrixXd pts(total, k);
  for (std::size_t s = 0; s < activations.size(); ++s) {
    const auto& h = activations[s];
    if (h.rows() != n || h.cols() != probe.dim())
      throw DimensionError(fmt::format("activations for '{}' are {}x{}, expected {}x{}", sample_ids[s], h.rows(),
                                       h.cols(), n, probe.dim()));
    pts.middleRows(static_cast<Eigen::Index>(s) * n, n) = h * probe.map.transpose();
  }
  const Eigen::RowVectorXd mean = pts.colwise().mean();
  const Eigen::MatrixXd centered = pts.rowwise() - mean;
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(std::max<Eigen::Index>(total, 1));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  // Eigenvalues ascend; take the last two.
  PcaProjection out;
  out.components = Eigen::MatrixXd::Zero(k, 2);
  for (int c = 0; c < 2 && c < k; ++c) {
    Eigen::VectorXd axis = eig.eigenvectors().col(k - 1 - c);
    // Fix the sign so the largest-magnitude loading is positive.
    Eigen::Index arg = 0;
    axis.cwiseAbs().maxCoeff(&arg);
    if (axis(arg) < 0) axis = -axis;
    out.components.col(c) = axis;
  }
  const Eigen::MatrixXd xy = centered * out.components;
  out.centroids = Eigen::MatrixXd::Zero(n, 2);
  for (Eigen::Index r = 0; r < total; ++r) {
    const int entity = static_cast<int>(r % n);
    out.points.push_back({sample_ids[r / n], entity, xy(r, 0), xy(r, 1)});
    out.centroids.row(entity) += xy.row(r);
  }
  out.centroids /= static_cast<double>(activations.size());
  out.edges = graph.edges;
  return out;
}

std::string pca_points_csv(const PcaProjection& p, const RelationalGraph& graph) {
  std::string out = "sample_id,entity,name,pc1,pc2\n";
  for (const auto& pt : p.points)
    out += fmt::format("{},{},{},{:.6f},{:.6f}\n", pt.sample_id, pt.entity, graph.entities[pt.entity], pt.x, pt.y);
  return out;
}

std::string pca_centroids_csv(const PcaProjection& p, const RelationalGraph& graph) {
  std::string out = "entity,name,pc1,pc2\n";
  for (Eigen::Index i = 0; i < p.centroids.rows(); ++i)
    out += fmt::format("{},{},{:.6f},{:.6f}\n", i, graph.entities[i], p.centroids(i, 0), p.centroids(i, 1));
  return out;
}

std::string pca_edges_csv(const PcaProjection& p, const RelationalGraph& graph) {
  std::string out = "src,dst,relation,src_pc1,src_pc2,dst_pc1,dst_pc2\n";
  for (const auto& e : p.edges)
    out += fmt::format("{},{},{},{:.6f},{:.6f},{:.6f},{:.6f}\n", graph.entities[e.src], graph.entities[e.dst],
                       graph.relation_types[e.rel], p.centroids(e.src, 0), p.centroids(e.src, 1),
                       p.centroids(e.dst, 0), p.centroids(e.dst, 1));
  return out;
}

}  // namespace polar
