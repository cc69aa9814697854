#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polar/probe.hpp"

namespace polar {

struct SteeringVector {
  std::string relation;
  int sign = 1;
  Eigen::VectorXd direction;  // unit norm, model space
  std::vector<double> alpha_grid;
  int layer = 0;
};

// v = B^+ p_r, normalised; `sign` is stored alongside and applied by the
// consumer as h + sign * alpha * v. Throws ValidationError for an unknown or
// non-directional relation and Error when |B^+ p_r| vanishes.
SteeringVector steering_vector(const PolarProbe& probe, const std::string& relation, int sign,
                               std::vector<double> alpha_grid = {}, int layer = 0);

// PLRB container, metadata {kind:"steering", relation, sign, alpha_grid, layer, d}.
std::string encode_steering(const SteeringVector& v);
SteeringVector decode_steering(const std::string& bytes);
void save_steering(const std::string& path, const SteeringVector& v);
SteeringVector load_steering(const std::string& path);

}  // namespace polar
