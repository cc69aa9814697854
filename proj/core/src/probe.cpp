#include "polar/probe.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "polar/errors.hpp"

namespace polar {

namespace {

Eigen::MatrixXd unit_columns(int k, int t, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd p(k, t);
  for (int c = 0; c < t; ++c) {
    do {
      for (int i = 0; i < k; ++i) p(i, c) = normal(rng);
    } while (p.col(c).norm() == 0.0);
    p.col(c).normalize();
  }
  return p;
}

}  // namespace

PolarProbe PolarProbe::random(int k, int d, std::vector<std::string> relation_types, Rng& rng) {
  if (k < 1 || d < 1 || k > d) throw ValidationError(fmt::format("probe rank {} must lie in [1, d={}]", k, d));
  PolarProbe p;
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(d)));
  p.map.resize(k, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < k; ++i) p.map(i, j) = normal(rng);
  p.prototypes = unit_columns(k, static_cast<int>(relation_types.size()), rng);
  p.relation_types = std::move(relation_types);
  return p;
}

PolarProbe PolarProbe::truncated_identity(int k, int d, std::vector<std::string> relation_types, Rng& rng) {
  if (k < 1 || d < 1 || k > d) throw ValidationError(fmt::format("probe rank {} must lie in [1, d={}]", k, d));
  PolarProbe p;
  p.map = Eigen::MatrixXd::Identity(k, d);
  p.prototypes = unit_columns(k, static_cast<int>(relation_types.size()), rng);
  p.relation_types = std::move(relation_types);
  return p;
}

std::vector<double> ProbeOutputs::upper_distances() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.push_back(distances(i, j));
  return out;
}

Eigen::MatrixXd to_matrix(const ActivationRecord& record) {
  Eigen::MatrixXd h(record.rows, record.cols);
  for (int i = 0; i < record.rows; ++i)
    for (int j = 0; j < record.cols; ++j) h(i, j) = record(i, j);
  return h;
}

ProbeOutputs forward(const PolarProbe& probe, const Eigen::MatrixXd& activations) {
  if (activations.cols() != probe.dim())
    throw DimensionError(fmt::format("activation width {} does not match probe width {}", activations.cols(),
                                     probe.dim()));
  ProbeOutputs out;
  out.n = static_cast<int>(activations.rows());
  out.k = probe.rank();
  out.t = probe.num_prototypes();
  out.projected = activations * probe.map.transpose();
  out.deltas.assign(static_cast<std::size_t>(out.n) * out.n * out.k, 0.0);
  out.distances = Eigen::MatrixXd::Zero(out.n, out.n);
  out.cosines.assign(static_cast<std::size_t>(out.n) * out.n * out.t, 0.0);

  Eigen::VectorXd proto_norm(out.t);
  for (int r = 0; r < out.t; ++r) proto_norm(r) = probe.prototypes.col(r).norm();

  for (int i = 0; i < out.n; ++i) {
    for (int j = 0; j < out.n; ++j) {
      if (i == j) continue;
      double* d = out.deltas.data() + (static_cast<std::size_t>(i) * out.n + j) * out.k;
      double sq = 0;
      for (int c = 0; c < out.k; ++c) {
        d[c] = out.projected(i, c) - out.projected(j, c);
        sq += d[c] * d[c];
      }
      const double norm = std::sqrt(sq);
      out.distances(i, j) = norm;
      for (int r = 0; r < out.t; ++r) {
        double dot = 0;
        for (int c = 0; c < out.k; ++c) dot += d[c] * probe.prototypes(c, r);
        const double denom = std::max(norm * proto_norm(r), kCosineGuard);
        out.cosines[(static_cast<std::size_t>(i) * out.n + j) * out.t + r] = std::clamp(dot / denom, -1.0, 1.0);
      }
    }
  }
  return out;
}

ProbeOutputs forward(const PolarProbe& probe, const ActivationRecord& record) {
  return forward(probe, to_matrix(record));
}

}  // namespace polar
