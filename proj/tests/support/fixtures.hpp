#pragma once

// Planted-data fixtures shared by unit and acceptance tests.

#include <cstdint>
#include <string>
#include <vector>

#include "polar/dataset.hpp"
#include "polar/embedders.hpp"
#include "polar/eval.hpp"

namespace fixture {

struct PlantedRun {
  polar::DomainSchema schema;
  polar::Dataset dataset;
  polar::PlantedLayout layout;
  polar::ActsFile acts;
  std::vector<std::string> types;
  polar::ExampleSet train;
  polar::ExampleSet validation;
  polar::ExampleSet test;
};

struct PlantedSpec {
  polar::DomainKind domain = polar::DomainKind::kOrdinality;
  int n_entities = 5;
  polar::SplitSize train{30, 20};
  polar::SplitSize validation{50, 20};
  polar::SplitSize test{50, 30};
  int d = 64;
  double noise = 0.0;
  bool identity_mixing = false;
  std::uint64_t seed = 0;
};

PlantedRun planted(const PlantedSpec& spec);

// Replaces every activation with standard Gaussian rows of the same shape.
std::vector<polar::Example> gaussian_copy(const std::vector<polar::Example>& examples, std::uint64_t seed);

}  // namespace fixture
