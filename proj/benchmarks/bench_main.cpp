#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "polar/dataset.hpp"
#include "polar/eval.hpp"
#include "polar/generators.hpp"
#include "polar/losses.hpp"
#include "polar/render.hpp"
#include "polar/soft_rank.hpp"

using namespace polar;

namespace {

std::vector<double> gaussian(int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> x(m);
  for (auto& v : x) v = normal(rng);
  return x;
}

// Upper-triangle length for n entities: n = 5 -> 10, 8 -> 28, 13 -> 78.
void BM_SoftSpearman(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const bool grad = state.range(1) != 0;
  const auto x = gaussian(m, 1), y = gaussian(m, 2);
  const SoftRankOptions options;
  for (auto _ : state) benchmark::DoNotOptimize(soft_spearman(x, y, options, grad));
}
BENCHMARK(BM_SoftSpearman)->ArgsProduct({{10, 28, 78}, {0, 1}});

// One optimizer step's worth of work: a batch of 8 graphs, loss and gradient.
void BM_Objective(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const auto schema = builtin_schema(DomainKind::kSpatial);
  const auto types = directional_types(schema);
  Rng rng = make_rng(3);
  std::normal_distribution<double> normal;
  std::vector<GraphTargets> targets;
  std::vector<Eigen::MatrixXd> acts;
  for (int g = 0; g < 8; ++g) {
    const auto graph = sample_spatial_graph(5, schema, schema.entity_pool, rng);
    targets.push_back(make_targets(graph, schema, types));
    Eigen::MatrixXd h(5, d);
    for (Eigen::Index i = 0; i < h.size(); ++i) h.data()[i] = normal(rng);
    acts.push_back(h);
  }
  std::vector<ObjectiveItem> batch;
  for (int g = 0; g < 8; ++g) batch.push_back({&acts[g], &targets[g]});
  const PolarProbe probe = PolarProbe::random(k, d, types, rng);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_objective(probe, batch, 5.0, {}, true));
}
BENCHMARK(BM_Objective)->Args({64, 8})->Args({4096, 512});

void BM_SampleGraph(benchmark::State& state) {
  const auto kind = static_cast<DomainKind>(state.range(0));
  const auto schema = builtin_schema(kind);
  const int n = kind == DomainKind::kMetro ? 8 : 5;
  Rng rng = make_rng(4);
  for (auto _ : state) benchmark::DoNotOptimize(sample_graph(schema, n, 2, schema.entity_pool, rng));
  state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_SampleGraph)->DenseRange(0, 4);

void BM_RenderDescription(benchmark::State& state) {
  const auto schema = builtin_schema(DomainKind::kFamily);
  Rng rng = make_rng(5);
  const auto graph = sample_graph(schema, 6, 2, schema.entity_pool, rng);
  for (auto _ : state) benchmark::DoNotOptimize(render_description(graph, schema, rng));
}
BENCHMARK(BM_RenderDescription);

void BM_BuildDataset(benchmark::State& state) {
  DatasetSpec spec = DatasetSpec::defaults(DomainKind::kOrdinality);
  const auto schema = builtin_schema(spec.domain);
  for (auto _ : state) benchmark::DoNotOptimize(build_dataset(spec, schema));
}
BENCHMARK(BM_BuildDataset)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
