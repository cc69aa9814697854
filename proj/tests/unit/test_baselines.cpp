#include <doctest.h>

#include "fixtures.hpp"
#include "polar/baselines.hpp"
#include "polar/errors.hpp"

using namespace polar;

TEST_CASE("shuffled labels always come from a different graph") {
  fixture::PlantedSpec spec;
  spec.train = {12, 3};
  spec.validation = {1, 1};
  spec.test = {1, 1};
  spec.d = 8;
  auto run = fixture::planted(spec);
  Rng rng = make_rng(1);
  const auto shuffled = shuffle_labels(run.train.examples, rng);
  CHECK(shuffled.size() == 36);
  for (const auto& ex : shuffled) {
    REQUIRE(ex.activations.size() == 1);
    const auto arrow = ex.graph_id.find("<-");
    REQUIRE(arrow != std::string::npos);
    const std::string sample = ex.graph_id.substr(0, arrow);
    const std::string donor = ex.graph_id.substr(arrow + 2);
    const auto& src = *std::find_if(run.train.examples.begin(), run.train.examples.end(), [&](const Example& e) {
      return std::find(e.sample_ids.begin(), e.sample_ids.end(), sample) != e.sample_ids.end();
    });
    CHECK(donor != src.graph_id);
    CHECK(src.graph != ex.graph);
    CHECK(ex.graph->num_entities() == src.graph->num_entities());
  }
  std::vector<Example> one(run.train.examples.begin(), run.train.examples.begin() + 1);
  CHECK_THROWS_AS(shuffle_labels(one, rng), ValidationError);
}

TEST_CASE("baseline controls run end to end") {
  fixture::PlantedSpec spec;
  spec.train = {8, 2};
  spec.validation = {1, 1};
  spec.test = {6, 2};
  spec.d = 8;
  auto run = fixture::planted(spec);
  TrainConfig config;
  config.rank = 2;
  config.epochs = 3;
  config.learning_rate = 1e-2;
  const auto rep = run_baselines(run.dataset, run.acts, run.schema, config);
  CHECK(rep.random_activations.conditions.at("condition") == "random_activations");
  CHECK(rep.identity_probe.conditions.at("condition") == "identity_probe");
  CHECK(rep.shuffled_labels.conditions.at("condition") == "shuffled_labels");
  CHECK(rep.random_activations.graphs.size() == 6);
  CHECK(rep.shuffled_labels.graphs.size() == 12);
  config.rank = 9;
  CHECK_THROWS_AS(run_baselines(run.dataset, run.acts, run.schema, config), ValidationError);
}
