#include "fixtures.hpp"

#include <random>

namespace fixture {

PlantedRun planted(const PlantedSpec& spec) {
  PlantedRun run;
  run.schema = polar::builtin_schema(spec.domain);
  polar::DatasetSpec ds = polar::DatasetSpec::defaults(spec.domain);
  ds.n_entities = spec.n_entities;
  ds.train = spec.train;
  ds.validation = spec.validation;
  ds.test = spec.test;
  ds.seed = spec.seed;
  run.dataset = polar::build_dataset(ds, run.schema);

  polar::Rng rng = polar::make_rng(spec.seed, {0x91a});
  const int k = polar::grid_dimension(spec.domain);
  run.layout = spec.identity_mixing ? polar::make_identity_layout(spec.d, k, spec.noise)
                                    : polar::make_planted_layout(spec.d, k, spec.noise, rng);
  run.acts.metadata.model = "planted";
  run.acts.metadata.d = spec.d;
  for (const auto& s : run.dataset.samples)
    run.acts.records.push_back(
        polar::plant_embeddings(run.dataset.graphs[s.graph_index].graph, run.layout, rng, s.sample_id));

  run.types = polar::directional_types(run.schema);
  run.train = polar::make_examples(run.dataset, polar::Split::kTrain, run.acts, run.schema, run.types);
  run.validation = polar::make_examples(run.dataset, polar::Split::kValidation, run.acts, run.schema, run.types);
  run.test = polar::make_examples(run.dataset, polar::Split::kTest, run.acts, run.schema, run.types);
  return run;
}

std::vector<polar::Example> gaussian_copy(const std::vector<polar::Example>& examples, std::uint64_t seed) {
  std::vector<polar::Example> out = examples;
  polar::Rng rng = polar::make_rng(seed, {0x6a55});
  std::normal_distribution<double> normal;
  for (auto& ex : out)
    for (auto& h : ex.activations)
      for (Eigen::Index i = 0; i < h.size(); ++i) h.data()[i] = normal(rng);
  return out;
}

}  // namespace fixture
