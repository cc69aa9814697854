#include "polar/losses.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "polar/errors.hpp"

namespace polar {

GraphTargets make_targets(const RelationalGraph& graph, const DomainSchema& schema,
                          const std::vector<std::string>& prototype_names) {
  GraphTargets t;
  t.distances = shortest_path_distances(graph);
  const int n = graph.num_entities();
  const int cols = static_cast<int>(prototype_names.size());

  std::vector<int> column(graph.num_types(), -1);
  for (int r = 0; r < graph.num_types(); ++r) {
    const auto& name = graph.relation_types[r];
    const bool directional = schema.relation(name).directional;
    if (!directional) continue;
    auto it = std::find(prototype_names.begin(), prototype_names.end(), name);
    if (it == prototype_names.end())
      throw DimensionError(fmt::format("probe has no prototype for relation '{}'", name));
    column[r] = static_cast<int>(it - prototype_names.begin());
  }

  t.incidence = IncidenceTensor(n, cols);
  std::set<std::pair<int, int>> pairs;
  for (const Edge& e : graph.edges) {
    const int c = column[e.rel];
    if (c < 0) continue;
    t.incidence.at(e.src, e.dst, c) += 1;
    t.incidence.at(e.dst, e.src, c) -= 1;
    pairs.emplace(e.src, e.dst);
  }
  t.edge_pairs.assign(pairs.begin(), pairs.end());
  return t;
}

namespace {

void require_size(const ProbeOutputs& o, const GraphTargets& t) {
  if (o.n != t.size() || o.t != t.incidence.num_types())
    throw DimensionError(fmt::format("outputs ({} entities, {} prototypes) do not match targets ({}, {})", o.n, o.t,
                                     t.size(), t.incidence.num_types()));
}

void require_pairs(int n) {
  if (n < 3)
    throw StructuralError(fmt::format("structural loss needs at least 3 entities for a rank correlation, got {}", n));
}

}  // namespace

LossValue structural_loss(std::span<const LossItem> batch, const SoftRankOptions& options) {
  LossValue out;
  if (batch.empty()) return out;
  double sum = 0;
  for (const LossItem& item : batch) {
    require_size(*item.outputs, *item.targets);
    require_pairs(item.outputs->n);
    const auto pred = item.outputs->upper_distances();
    const auto gold = item.targets->distances.upper_triangle();
    const auto psi = soft_spearman(pred, gold, options);
    if (psi.degenerate) ++out.flagged;
    sum += 1.0 - psi.value;
    ++out.counted;
  }
  out.value = sum / static_cast<double>(batch.size());
  return out;
}

LossValue angular_loss(std::span<const LossItem> batch) {
  LossValue out;
  double sum = 0;
  for (const LossItem& item : batch) {
    const ProbeOutputs& o = *item.outputs;
    const GraphTargets& t = *item.targets;
    require_size(o, t);
    if (t.edge_pairs.empty() || o.t == 0) {
      ++out.flagged;
      continue;
    }
    double g = 0;
    for (const auto& [i, j] : t.edge_pairs)
      for (int r = 0; r < o.t; ++r) {
        const double diff = o.cosine(i, j, r) - t.incidence(i, j, r);
        g += diff * diff;
      }
    sum += g / (static_cast<double>(t.edge_pairs.size()) * o.t);
    ++out.counted;
  }
  out.value = out.counted > 0 ? sum / out.counted : 0.0;
  return out;
}

Objective evaluate_objective(const PolarProbe& probe, std::span<const ObjectiveItem> batch, double lambda,
                             const SoftRankOptions& options, bool want_grad) {
  const int k = probe.rank();
  const int d = probe.dim();
  const int tp = probe.num_prototypes();
  Objective obj;
  if (want_grad) {
    obj.grad_map = Eigen::MatrixXd::Zero(k, d);
    obj.grad_prototypes = Eigen::MatrixXd::Zero(k, tp);
  }
  if (batch.empty()) return obj;

  Eigen::VectorXd proto_norm(tp);
  for (int r = 0; r < tp; ++r) proto_norm(r) = probe.prototypes.col(r).norm();

  // Per-graph angular values; normalised by the number of graphs with edges.
  int angular_graphs = 0;
  for (const ObjectiveItem& item : batch)
    if (!item.targets->edge_pairs.empty() && tp > 0) ++angular_graphs;

  const double ws = 1.0 / static_cast<double>(batch.size());
  const double wa = angular_graphs > 0 ? lambda / angular_graphs : 0.0;

  double structural_sum = 0, angular_sum = 0;
  for (const ObjectiveItem& item : batch) {
    const Eigen::MatrixXd& h = *item.activations;
    const GraphTargets& t = *item.targets;
    const int n = static_cast<int>(h.rows());
    if (h.cols() != d) throw DimensionError(fmt::format("activation width {} does not match probe width {}", h.cols(), d));
    if (n != t.size()) throw DimensionError("activation rows do not match the graph's entity count");
    require_pairs(n);

    const Eigen::MatrixXd z = h * probe.map.transpose();  // n x k
    Eigen::MatrixXd z_bar;
    if (want_grad) z_bar = Eigen::MatrixXd::Zero(n, k);

    // Structural term on the upper triangle.
    std::vector<double> pred;
    std::vector<Eigen::VectorXd> deltas;
    pred.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        deltas.emplace_back(z.row(i) - z.row(j));
        pred.push_back(deltas.back().norm());
      }
    const auto psi = soft_spearman(pred, t.distances.upper_triangle(), options, want_grad);
    if (psi.degenerate) ++obj.structural.flagged;
    ++obj.structural.counted;
    structural_sum += 1.0 - psi.value;
    if (want_grad && !psi.degenerate) {
      std::size_t p = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++p) {
          if (pred[p] <= 0.0) continue;
          const Eigen::VectorXd g = (-ws * psi.grad[p] / pred[p]) * deltas[p];
          z_bar.row(i) += g.transpose();
          z_bar.row(j) -= g.transpose();
        }
    }

    // Angular term over directional edge pairs.
    if (t.edge_pairs.empty() || tp == 0) {
      ++obj.angular.flagged;
    } else {
      const double cell_w = 1.0 / (static_cast<double>(t.edge_pairs.size()) * tp);
      double g_sum = 0;
      for (const auto& [i, j] : t.edge_pairs) {
        const Eigen::VectorXd delta = z.row(i) - z.row(j);
        const double dn = delta.norm();
        for (int r = 0; r < tp; ++r) {
          const auto pr = probe.prototypes.col(r);
          const double dot = delta.dot(pr);
          const double raw = dn * proto_norm(r);
          const bool guarded = raw < kCosineGuard;
          const double cos = dot / (guarded ? kCosineGuard : raw);
          const double diff = cos - t.incidence(i, j, r);
          g_sum += diff * diff;
          if (!want_grad || guarded) continue;
          const double coef = wa * cell_w * 2.0 * diff;
          // d cos / d delta and d cos / d p.
          const Eigen::VectorXd d_delta = pr / raw - (cos / (dn * dn)) * delta;
          const Eigen::VectorXd d_proto = delta / raw - (cos / (proto_norm(r) * proto_norm(r))) * pr;
          z_bar.row(i) += coef * d_delta.transpose();
          z_bar.row(j) -= coef * d_delta.transpose();
          obj.grad_prototypes.col(r) += coef * d_proto;
        }
      }
      angular_sum += g_sum * cell_w;
      ++obj.angular.counted;
    }

    if (want_grad) obj.grad_map.noalias() += z_bar.transpose() * h;
  }

  obj.structural.value = structural_sum * ws;
  obj.angular.value = angular_graphs > 0 ? angular_sum / angular_graphs : 0.0;
  obj.total = obj.structural.value + lambda * obj.angular.value;
  return obj;
}

}  // namespace polar
