#pragma once

#include <Eigen/Dense>

#include "polar/acts.hpp"
#include "polar/graph.hpp"
#include "polar/rng.hpp"

namespace polar {

// Synthetic activations realising the polar code exactly: the planted
// coordinates of a grid graph are its Z^k cells, relation type r moves one
// unit along planted axis r, and activations are an orthonormal lift of the
// coordinates into R^d plus an offset and isotropic noise.
struct PlantedLayout {
  int k = 0;  // planted dimension (grid dimension of the domain)
  Eigen::MatrixXd mixing;      // d x k, orthonormal columns
  Eigen::VectorXd offset;      // d
  // k x t. An edge (src, dst, r) has dst = src + e_r and the probed delta is
  // h_src - h_dst, so the exact prototype of type r is -e_r.
  Eigen::MatrixXd prototypes;
  double noise_sigma = 0.0;

  int d() const { return static_cast<int>(mixing.rows()); }
};

// Mixing with orthonormal columns from a Gaussian draw, offset ~ N(0, I).
// Shared across every graph of a run.
PlantedLayout make_planted_layout(int d, int k, double noise_sigma, Rng& rng);

// Like make_planted_layout but with mixing = the first k columns of I_d.
PlantedLayout make_identity_layout(int d, int k, double noise_sigma);

// n x k planted coordinates for a grid-domain graph, anchored so that the
// first entity sits at the origin. Throws ValidationError for non-Euclidean
// domains or graphs without a grid embedding.
Eigen::MatrixXd planted_coordinates(const RelationalGraph& graph);

ActivationRecord plant_embeddings(const RelationalGraph& graph, const PlantedLayout& layout, Rng& rng,
                                  const std::string& sample_id = {}, int layer = 0);

// I.i.d. standard Gaussian rows.
ActivationRecord random_embeddings(const RelationalGraph& graph, int d, Rng& rng, const std::string& sample_id = {},
                                   int layer = 0);

}  // namespace polar
