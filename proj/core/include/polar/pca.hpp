#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polar/graph.hpp"
#include "polar/probe.hpp"

namespace polar {

struct PcaPoint {
  std::string sample_id;
  int entity = 0;
  double x = 0.0;
  double y = 0.0;
};

struct PcaProjection {
  std::vector<PcaPoint> points;
  Eigen::MatrixXd centroids;  // n x 2
  Eigen::MatrixXd components; // k x 2, principal axes in probe space
  std::vector<Edge> edges;
};

// Projects B h for every entity of every description onto the top two
// principal components of the pooled probe-space points.
PcaProjection pca_projection(const PolarProbe& probe, const RelationalGraph& graph,
                             std::span<const Eigen::MatrixXd> activations, std::span<const std::string> sample_ids);

std::string pca_points_csv(const PcaProjection& p, const RelationalGraph& graph);
std::string pca_centroids_csv(const PcaProjection& p, const RelationalGraph& graph);
std::string pca_edges_csv(const PcaProjection& p, const RelationalGraph& graph);

}  // namespace polar
