#include "polar/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "polar/errors.hpp"
#include "polar/losses.hpp"
#include "polar/rng.hpp"

namespace polar {

void check_config(const TrainConfig& c) {
  auto fail = [](const char* field, const std::string& why) {
    throw ValidationError(fmt::format("{}: {}", field, why));
  };
  if (!(c.lambda >= 0) || !std::isfinite(c.lambda)) fail("lambda", "must be a non-negative finite number");
  if (!(c.learning_rate > 0) || !std::isfinite(c.learning_rate)) fail("learning_rate", "must be positive");
  if (c.epochs < 0) fail("epochs", "must be non-negative");
  if (c.rank <= 0) fail("rank", "must be a positive integer");
  if (c.batch_graphs <= 0) fail("batch_graphs", "must be a positive integer");
  if (!(c.soft.epsilon > 0)) fail("soft_rank_epsilon", "must be positive");
  if (c.soft.max_iters <= 0) fail("sinkhorn_iters", "must be a positive integer");
  if (!(c.soft.tolerance >= 0)) fail("sinkhorn_tolerance", "must be non-negative");
  if (!(c.soft.anneal > 0 && c.soft.anneal <= 1)) fail("sinkhorn_anneal", "must be in (0, 1]");
  if (!(c.beta1 >= 0 && c.beta1 < 1)) fail("beta1", "must lie in [0, 1)");
  if (!(c.beta2 >= 0 && c.beta2 < 1)) fail("beta2", "must lie in [0, 1)");
  if (!(c.adam_epsilon > 0)) fail("adam_epsilon", "must be positive");
}

namespace {

struct Adam {
  Eigen::MatrixXd m, v;
  void init(const Eigen::MatrixXd& like) {
    m = Eigen::MatrixXd::Zero(like.rows(), like.cols());
    v = m;
  }
  void step(Eigen::MatrixXd& param, const Eigen::MatrixXd& grad, const TrainConfig& c, int t) {
    m = c.beta1 * m + (1 - c.beta1) * grad;
    v = c.beta2 * v + (1 - c.beta2) * grad.cwiseAbs2();
    const double bc1 = 1 - std::pow(c.beta1, t);
    const double bc2 = 1 - std::pow(c.beta2, t);
    param.array() -= c.learning_rate * (m.array() / bc1) / ((v.array() / bc2).sqrt() + c.adam_epsilon);
  }
};

struct PassLoss {
  double structural = 0.0;
  double angular = 0.0;
};

// Mean losses over every description of every example.
PassLoss full_pass(const PolarProbe& probe, std::span<const Example> examples, const TrainConfig& c) {
  std::vector<ObjectiveItem> items;
  for (const auto& ex : examples)
    for (const auto& h : ex.activations) items.push_back({&h, &ex.targets});
  if (items.empty()) return {};
  const Objective o = evaluate_objective(probe, items, c.lambda, c.soft, false);
  return {o.structural.value, o.angular.value};
}

void check_finite(const Objective& o, int epoch, std::span<const Example* const> graphs) {
  if (std::isfinite(o.total) && o.grad_map.allFinite() && o.grad_prototypes.allFinite()) return;
  std::string ids;
  for (const Example* ex : graphs) ids += (ids.empty() ? "" : ", ") + ex->graph_id;
  throw TrainingError(fmt::format("non-finite loss at epoch {} in batch [{}]", epoch, ids));
}

}  // namespace

TrainResult train(PolarProbe probe, std::span<const Example> train_set, std::span<const Example> validation_set,
                  const TrainConfig& config) {
  check_config(config);
  if (train_set.empty()) throw ValidationError("training set is empty");
  for (const auto& ex : train_set) {
    if (ex.activations.empty()) throw ValidationError(fmt::format("graph '{}' has no activations", ex.graph_id));
    if (ex.targets.size() < 3)
      throw StructuralError(fmt::format("graph '{}' has fewer than 3 entities", ex.graph_id));
  }

  TrainResult result;
  Adam adam_map, adam_proto;
  adam_map.init(probe.map);
  adam_proto.init(probe.prototypes);
  Rng rng = make_rng(config.seed, {0x7a41});

  std::vector<int> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  int step = 0;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += config.batch_graphs) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(config.batch_graphs));
      std::vector<ObjectiveItem> batch;
      std::vector<const Example*> graphs;
      for (std::size_t b = start; b < end; ++b) {
        const Example& ex = train_set[order[b]];
        const int pick = uniform_index(rng, static_cast<int>(ex.activations.size()));
        batch.push_back({&ex.activations[pick], &ex.targets});
        graphs.push_back(&ex);
      }
      const Objective o = evaluate_objective(probe, batch, config.lambda, config.soft, true);
      check_finite(o, epoch, graphs);
      ++step;
      if (config.train_map) adam_map.step(probe.map, o.grad_map, config, step);
      adam_proto.step(probe.prototypes, o.grad_prototypes, config, step);
    }

    EpochStats stats;
    stats.epoch = epoch;
    const PassLoss tr = full_pass(probe, train_set, config);
    stats.train_structural = tr.structural;
    stats.train_angular = tr.angular;
    stats.train_total = tr.structural + config.lambda * tr.angular;
    if (!std::isfinite(stats.train_total))
      throw TrainingError(fmt::format("non-finite training loss at epoch {}", epoch));
    if (config.validate && !validation_set.empty()) {
      const PassLoss va = full_pass(probe, validation_set, config);
      stats.val_structural = va.structural;
      stats.val_angular = va.angular;
      const EvalReport rep = eval_probe(probe, validation_set, config.type_set);
      stats.val_existence_rho = rep.existence.mean;
      stats.val_type_rho = rep.type.mean;
    }
    result.history.push_back(stats);
  }
  result.probe = std::move(probe);
  result.steps = step;
  return result;
}

std::string history_csv(std::span<const EpochStats> history) {
  std::string out =
      "epoch,train_structural,train_angular,train_total,val_structural,val_angular,val_existence_rho,val_type_rho\n";
  for (const auto& h : history)
    out += fmt::format("{},{:.8f},{:.8f},{:.8f},{:.8f},{:.8f},{:.6f},{:.6f}\n", h.epoch, h.train_structural,
                       h.train_angular, h.train_total, h.val_structural, h.val_angular, h.val_existence_rho,
                       h.val_type_rho);
  return out;
}

}  // namespace polar
