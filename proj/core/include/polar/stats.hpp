#pragma once

#include <optional>
#include <span>
#include <vector>

namespace polar {

// 1-based ranks; tied values share the mean of their positions. Sorted
// neighbours closer than tie_tolerance * max|x| are chained into one tie.
std::vector<double> average_ranks(std::span<const double> x, double tie_tolerance = 0.0);

// nullopt when either input has zero variance.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

// Pearson correlation of average ranks.
std::optional<double> spearman(std::span<const double> x, std::span<const double> y, double tie_tolerance = 0.0);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  int count = 0;
};

MeanSe mean_and_se(std::span<const double> values);

}  // namespace polar
