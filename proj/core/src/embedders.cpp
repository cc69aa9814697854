#include "polar/embedders.hpp"

#include <fmt/format.h>

#include "polar/errors.hpp"

namespace polar {

namespace {

Eigen::MatrixXd gaussian(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

ActivationRecord to_record(const Eigen::MatrixXd& h, const std::string& sample_id, int layer) {
  ActivationRecord r;
  r.sample_id = sample_id;
  r.layer = layer;
  r.rows = static_cast<int>(h.rows());
  r.cols = static_cast<int>(h.cols());
  r.values.resize(static_cast<std::size_t>(r.rows) * r.cols);
  for (int i = 0; i < r.rows; ++i)
    for (int j = 0; j < r.cols; ++j) r.values[static_cast<std::size_t>(i) * r.cols + j] = static_cast<float>(h(i, j));
  return r;
}

}  // namespace

PlantedLayout make_planted_layout(int d, int k, double noise_sigma, Rng& rng) {
  if (k < 1 || k > d) throw ValidationError(fmt::format("planted dimension {} must lie in [1, d={}]", k, d));
  if (noise_sigma < 0) throw ValidationError("noise_sigma must be non-negative");
  PlantedLayout layout;
  layout.k = k;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian(d, k, rng));
  layout.mixing = qr.householderQ() * Eigen::MatrixXd::Identity(d, k);
  layout.offset = gaussian(d, 1, rng).col(0);
  layout.prototypes = -Eigen::MatrixXd::Identity(k, k);
  layout.noise_sigma = noise_sigma;
  return layout;
}

PlantedLayout make_identity_layout(int d, int k, double noise_sigma) {
  if (k < 1 || k > d) throw ValidationError(fmt::format("planted dimension {} must lie in [1, d={}]", k, d));
  PlantedLayout layout;
  layout.k = k;
  layout.mixing = Eigen::MatrixXd::Identity(d, k);
  layout.offset = Eigen::VectorXd::Zero(d);
  layout.prototypes = -Eigen::MatrixXd::Identity(k, k);
  layout.noise_sigma = noise_sigma;
  return layout;
}

Eigen::MatrixXd planted_coordinates(const RelationalGraph& graph) {
  if (!is_grid_domain(graph.domain))
    throw ValidationError(fmt::format("planted embeddings support grid domains only, not {}", to_string(graph.domain)));
  const int dim = grid_dimension(graph.domain);
  std::vector<int> axis(graph.num_types());
  for (int r = 0; r < graph.num_types(); ++r) axis[r] = r;
  const auto pos = grid_embedding(graph, axis, dim);
  if (!pos) throw ValidationError("graph has no grid embedding");
  Eigen::MatrixXd coords(graph.num_entities(), dim);
  for (int i = 0; i < graph.num_entities(); ++i)
    for (int a = 0; a < dim; ++a) coords(i, a) = (*pos)[i][a];
  return coords;
}

ActivationRecord plant_embeddings(const RelationalGraph& graph, const PlantedLayout& layout, Rng& rng,
                                  const std::string& sample_id, int layer) {
  const Eigen::MatrixXd coords = planted_coordinates(graph);
  if (coords.cols() != layout.k)
    throw DimensionError(fmt::format("graph needs {} planted axes, layout has {}", coords.cols(), layout.k));
  Eigen::MatrixXd h = coords * layout.mixing.transpose();
  h.rowwise() += layout.offset.transpose();
  if (layout.noise_sigma > 0) h += layout.noise_sigma * gaussian(static_cast<int>(h.rows()), layout.d(), rng);
  return to_record(h, sample_id, layer);
}

ActivationRecord random_embeddings(const RelationalGraph& graph, int d, Rng& rng, const std::string& sample_id,
                                   int layer) {
  return to_record(gaussian(graph.num_entities(), d, rng), sample_id, layer);
}

}  // namespace polar
