#include "polar/qa_correlation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <fmt/format.h>

#include "polar/errors.hpp"
#include "polar/rng.hpp"
#include "polar/stats.hpp"

namespace polar {

QaErrors qa_probe_errors(const ProbeOutputs& outputs, const GraphTargets& targets, const Edge& queried_edge,
                         int prototype_column) {
  if (prototype_column < 0 || prototype_column >= outputs.t) throw DimensionError("prototype column out of range");
  const int i = queried_edge.src, j = queried_edge.dst;
  QaErrors e;
  e.type = 1.0 - outputs.cosine(i, j, prototype_column);
  e.existence = std::abs(outputs.distances(i, j) - targets.distances(i, j));
  return e;
}

std::vector<double> zscore_within_groups(std::span<const QaObservation> observations) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < observations.size(); ++i) groups[observations[i].group].push_back(i);
  std::vector<double> z(observations.size(), 0.0);
  for (const auto& [name, idx] : groups) {
    double mean = 0;
    for (auto i : idx) mean += observations[i].error;
    mean /= static_cast<double>(idx.size());
    double var = 0;
    for (auto i : idx) var += (observations[i].error - mean) * (observations[i].error - mean);
    const double sd = std::sqrt(var / static_cast<double>(idx.size()));
    if (!(sd > 1e-12)) continue;
    for (auto i : idx) z[i] = (observations[i].error - mean) / sd;
  }
  return z;
}

QaCorrelation qa_correlation(std::span<const QaObservation> observations, int permutations, std::uint64_t seed) {
  if (static_cast<int>(observations.size()) < kMinQaObservations)
    throw ValidationError(fmt::format("QA correlation needs at least {} observations, got {}", kMinQaObservations,
                                      observations.size()));
  if (permutations < 0) throw ValidationError("permutation count must be non-negative");
  QaCorrelation out;
  out.n = static_cast<int>(observations.size());
  const std::vector<double> z = zscore_within_groups(observations);
  std::vector<double> logits;
  logits.reserve(observations.size());
  for (const auto& o : observations) logits.push_back(o.logit);
  out.rho = spearman(z, logits);
  if (!out.rho) return out;

  // Permuting ranks is equivalent to permuting values and avoids re-ranking.
  const std::vector<double> rz = average_ranks(z);
  std::vector<double> rl = average_ranks(logits);
  const double observed = std::abs(*out.rho);
  Rng rng = make_rng(seed, {0x9a});
  int extreme = 0;
  for (int p = 0; p < permutations; ++p) {
    std::shuffle(rl.begin(), rl.end(), rng);
    const auto r = pearson(rz, rl);
    if (r && std::abs(*r) >= observed - 1e-12) ++extreme;
  }
  out.permutations = permutations;
  out.p_value = (extreme + 1.0) / (permutations + 1.0);
  return out;
}

}  // namespace polar
