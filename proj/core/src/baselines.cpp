#include "polar/baselines.hpp"

#include <fmt/format.h>

#include "polar/embedders.hpp"
#include "polar/errors.hpp"

namespace polar {

std::vector<Example> shuffle_labels(std::span<const Example> examples, Rng& rng) {
  std::vector<Example> out;
  for (std::size_t g = 0; g < examples.size(); ++g) {
    const Example& src = examples[g];
    std::vector<std::size_t> donors;
    for (std::size_t o = 0; o < examples.size(); ++o)
      if (o != g && examples[o].targets.size() == src.targets.size()) donors.push_back(o);
    if (donors.empty())
      throw ValidationError(fmt::format("no other graph of size {} to take labels from", src.targets.size()));
    for (std::size_t s = 0; s < src.activations.size(); ++s) {
      const Example& donor = examples[donors[uniform_index(rng, static_cast<int>(donors.size()))]];
      Example ex;
      ex.graph_id = fmt::format("{}<-{}", src.sample_ids[s], donor.graph_id);
      ex.graph = donor.graph;
      ex.targets = donor.targets;
      ex.sample_ids = {src.sample_ids[s]};
      ex.activations = {src.activations[s]};
      out.push_back(std::move(ex));
    }
  }
  return out;
}

namespace {

std::vector<Example> randomize_activations(std::span<const Example> examples, Rng& rng) {
  std::vector<Example> out(examples.begin(), examples.end());
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& ex : out)
    for (auto& h : ex.activations)
      for (Eigen::Index i = 0; i < h.size(); ++i) h.data()[i] = normal(rng);
  return out;
}

EvalReport run_control(const char* name, PolarProbe init, std::span<const Example> train_set,
                       std::span<const Example> val_set, std::span<const Example> test_set, const TrainConfig& config) {
  const TrainResult trained = train(std::move(init), train_set, val_set, config);
  EvalReport report = eval_probe(trained.probe, test_set, config.type_set);
  report.conditions["condition"] = name;
  report.conditions["split"] = "test";
  return report;
}

}  // namespace

BaselineReports run_baselines(const Dataset& dataset, const ActsFile& acts, const DomainSchema& schema,
                              const TrainConfig& config) {
  check_config(config);
  const auto types = directional_types(schema);
  const ExampleSet train_ex = make_examples(dataset, Split::kTrain, acts, schema, types);
  const ExampleSet val_ex = make_examples(dataset, Split::kValidation, acts, schema, types);
  const ExampleSet test_ex = make_examples(dataset, Split::kTest, acts, schema, types);
  if (train_ex.examples.empty() || test_ex.examples.empty())
    throw ValidationError("baselines need activations for the train and test splits");
  const int d = acts.metadata.d;
  const int missing = static_cast<int>(train_ex.missing.size() + val_ex.missing.size() + test_ex.missing.size());

  TrainConfig quiet = config;
  quiet.validate = false;
  BaselineReports out;

  {
    Rng rng = make_rng(config.seed, {0xb1});
    const auto tr = randomize_activations(train_ex.examples, rng);
    const auto te = randomize_activations(test_ex.examples, rng);
    out.random_activations =
        run_control("random_activations", PolarProbe::random(config.rank, d, types, rng), tr, {}, te, quiet);
  }
  {
    if (config.rank > d) throw ValidationError(fmt::format("identity probe needs rank <= d ({} > {})", config.rank, d));
    Rng rng = make_rng(config.seed, {0xb2});
    TrainConfig fixed = quiet;
    fixed.train_map = false;
    out.identity_probe = run_control("identity_probe", PolarProbe::truncated_identity(config.rank, d, types, rng),
                                     train_ex.examples, {}, test_ex.examples, fixed);
  }
  {
    Rng rng = make_rng(config.seed, {0xb3});
    const auto tr = shuffle_labels(train_ex.examples, rng);
    const auto te = shuffle_labels(test_ex.examples, rng);
    out.shuffled_labels =
        run_control("shuffled_labels", PolarProbe::random(config.rank, d, types, rng), tr, {}, te, quiet);
  }
  for (EvalReport* r : {&out.random_activations, &out.identity_probe, &out.shuffled_labels}) {
    r->missing = missing;
    r->conditions["domain"] = std::string(to_string(dataset.domain));
  }
  return out;
}

}  // namespace polar
