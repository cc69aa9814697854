#include "polar/soft_rank.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "polar/errors.hpp"
#include "polar/stats.hpp"

namespace polar {

namespace {

constexpr double kMinStd = 1e-12;

// Log-domain Sinkhorn between standardized scores s (rows) and anchors 1..m
// (columns), uniform marginals. Keeps every potential iterate for the
// backward pass.
struct SinkhornTrace {
  int m = 0;
  double eps = 0;              // epsilon of the last iteration
  std::vector<double> eps_hist;
  std::vector<double> cost;    // m*m
  std::vector<double> f_hist;  // iterations * m, f after iteration t
  std::vector<double> g_hist;  // iterations * m, g after iteration t
  int iterations = 0;

  const double* f(int t) const { return f_hist.data() + static_cast<std::size_t>(t) * m; }
  const double* g(int t) const { return g_hist.data() + static_cast<std::size_t>(t) * m; }
  double c(int i, int j) const { return cost[static_cast<std::size_t>(i) * m + j]; }
};

double log_sum_exp(const double* v, int n, int stride) {
  double mx = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) mx = std::max(mx, v[i * stride]);
  double s = 0;
  for (int i = 0; i < n; ++i) s += std::exp(v[i * stride] - mx);
  return mx + std::log(s);
}

struct Standardized {
  std::vector<double> s;
  double std = 0;
  bool degenerate = false;
};

Standardized standardize(std::span<const double> x) {
  Standardized out;
  const std::size_t m = x.size();
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(m);
  double ss = 0;
  for (double v : x) ss += (v - mean) * (v - mean);
  out.std = std::sqrt(ss / static_cast<double>(m));
  out.s.assign(m, 0.0);
  if (out.std < kMinStd) {
    out.degenerate = true;
    return out;
  }
  for (std::size_t i = 0; i < m; ++i) out.s[i] = (x[i] - mean) / out.std;
  return out;
}

SinkhornTrace run_sinkhorn(const std::vector<double>& s, const SoftRankOptions& opt) {
  SinkhornTrace tr;
  const int m = static_cast<int>(s.size());
  tr.m = m;
  tr.cost.resize(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double diff = s[i] - static_cast<double>(j + 1);
      tr.cost[static_cast<std::size_t>(i) * m + j] = diff * diff;
    }

  // Epsilon scaling: start at the cost scale and shrink geometrically to the
  // target, warm-starting the potentials. The fixed point is unchanged; plain
  // iterations at small epsilon would need O(cost / epsilon) steps. The start
  // is the bound |s| <= sqrt(m - 1) on standardized scores rather than the
  // observed maximum so that the schedule does not depend on x.
  const double c_bound = std::pow(m + std::sqrt(m - 1.0), 2);
  double eps = opt.anneal < 1.0 ? std::max(opt.epsilon, c_bound) : opt.epsilon;
  const double log_marginal = -std::log(static_cast<double>(m));
  std::vector<double> f(m, 0.0), g(m, 0.0), buf(m);
  tr.f_hist.reserve(static_cast<std::size_t>(opt.max_iters) * m);
  tr.g_hist.reserve(static_cast<std::size_t>(opt.max_iters) * m);
  tr.eps_hist.reserve(static_cast<std::size_t>(opt.max_iters));

  for (int it = 0; it < opt.max_iters; ++it) {
    // Column update from the current row potentials.
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < m; ++i) buf[i] = (f[i] - tr.c(i, j)) / eps;
      g[j] = eps * log_marginal - eps * log_sum_exp(buf.data(), m, 1);
    }
    // Row update; rows of the plan are exact afterwards.
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) buf[j] = (g[j] - tr.c(i, j)) / eps;
      f[i] = eps * log_marginal - eps * log_sum_exp(buf.data(), m, 1);
    }
    tr.g_hist.insert(tr.g_hist.end(), g.begin(), g.end());
    tr.f_hist.insert(tr.f_hist.end(), f.begin(), f.end());
    tr.eps_hist.push_back(eps);
    tr.eps = eps;
    tr.iterations = it + 1;

    if (eps > opt.epsilon) {
      eps = std::max(opt.epsilon, eps * opt.anneal);
      continue;
    }
    if (opt.tolerance > 0) {
      double err = 0;
      for (int j = 0; j < m; ++j) {
        double col = 0;
        for (int i = 0; i < m; ++i) col += std::exp((f[i] + g[j] - tr.c(i, j)) / eps);
        err += std::abs(col - 1.0 / m);
      }
      if (err <= opt.tolerance) break;
    }
  }
  return tr;
}

double plan(const SinkhornTrace& tr, int i, int j) {
  const int last = tr.iterations - 1;
  return std::exp((tr.f(last)[i] + tr.g(last)[j] - tr.c(i, j)) / tr.eps);
}

std::vector<double> ranks_from_plan(const SinkhornTrace& tr) {
  const int m = tr.m;
  std::vector<double> r(m, 0.0);
  for (int i = 0; i < m; ++i) {
    double acc = 0;
    for (int j = 0; j < m; ++j) acc += plan(tr, i, j) * static_cast<double>(j + 1);
    r[i] = m * acc;
  }
  return r;
}

// d(loss)/d(cost) given d(loss)/d(rank), by reverse accumulation through the
// unrolled iterations.
std::vector<double> backprop_cost(const SinkhornTrace& tr, const std::vector<double>& rank_bar) {
  const int m = tr.m;
  double eps = tr.eps;
  std::vector<double> cost_bar(static_cast<std::size_t>(m) * m, 0.0);
  std::vector<double> f_bar(m, 0.0), g_bar(m, 0.0), w(m);

  // r_i = m sum_j P_ij (j+1), P_ij = exp((f_i + g_j - C_ij) / eps).
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double p_bar = rank_bar[i] * m * static_cast<double>(j + 1);
      const double contrib = p_bar * plan(tr, i, j) / eps;
      f_bar[i] += contrib;
      g_bar[j] += contrib;
      cost_bar[static_cast<std::size_t>(i) * m + j] -= contrib;
    }
  }

  for (int t = tr.iterations - 1; t >= 0; --t) {
    const double* g_t = tr.g(t);
    eps = tr.eps_hist[t];
    // f_t = eps log(1/m) - eps LSE_j((g_t - C_ij) / eps)
    for (int i = 0; i < m; ++i) {
      if (f_bar[i] == 0.0) continue;
      for (int j = 0; j < m; ++j) w[j] = (g_t[j] - tr.c(i, j)) / eps;
      const double lse = log_sum_exp(w.data(), m, 1);
      for (int j = 0; j < m; ++j) {
        const double wij = std::exp(w[j] - lse);
        g_bar[j] -= f_bar[i] * wij;
        cost_bar[static_cast<std::size_t>(i) * m + j] += f_bar[i] * wij;
      }
    }
    std::fill(f_bar.begin(), f_bar.end(), 0.0);

    // g_t = eps log(1/m) - eps LSE_i((f_{t-1} - C_ij) / eps), f_{-1} = 0.
    std::vector<double> f_prev(m, 0.0);
    if (t > 0) std::copy(tr.f(t - 1), tr.f(t - 1) + m, f_prev.begin());
    for (int j = 0; j < m; ++j) {
      if (g_bar[j] == 0.0) continue;
      for (int i = 0; i < m; ++i) w[i] = (f_prev[i] - tr.c(i, j)) / eps;
      const double lse = log_sum_exp(w.data(), m, 1);
      for (int i = 0; i < m; ++i) {
        const double vij = std::exp(w[i] - lse);
        f_bar[i] -= g_bar[j] * vij;
        cost_bar[static_cast<std::size_t>(i) * m + j] += g_bar[j] * vij;
      }
    }
    std::fill(g_bar.begin(), g_bar.end(), 0.0);
  }
  return cost_bar;
}

void check_options(const SoftRankOptions& opt) {
  if (!(opt.epsilon > 0)) throw ValidationError("soft rank epsilon must be positive");
  if (opt.max_iters < 1) throw ValidationError("soft rank iterations must be positive");
  if (!(opt.anneal > 0 && opt.anneal <= 1)) throw ValidationError("soft rank anneal factor must be in (0, 1]");
}

}  // namespace

SoftRanks soft_ranks(std::span<const double> x, const SoftRankOptions& options) {
  check_options(options);
  SoftRanks out;
  const auto z = standardize(x);
  const auto tr = run_sinkhorn(z.s, options);
  out.ranks = ranks_from_plan(tr);
  out.iterations = tr.iterations;
  out.degenerate = z.degenerate;
  return out;
}

SoftSpearman soft_spearman(std::span<const double> x, std::span<const double> y, const SoftRankOptions& options,
                           bool want_grad) {
  check_options(options);
  if (x.size() != y.size()) throw DimensionError(fmt::format("soft_spearman: lengths {} and {} differ", x.size(), y.size()));
  if (x.size() < 2) throw DimensionError("soft_spearman needs at least two values");

  const int m = static_cast<int>(x.size());
  SoftSpearman out;
  if (want_grad) out.grad.assign(m, 0.0);

  const auto z = standardize(x);
  const auto gold = average_ranks(y);
  const double gold_mean = std::accumulate(gold.begin(), gold.end(), 0.0) / m;
  std::vector<double> gc(m);
  double gold_norm = 0;
  for (int i = 0; i < m; ++i) {
    gc[i] = gold[i] - gold_mean;
    gold_norm += gc[i] * gc[i];
  }
  gold_norm = std::sqrt(gold_norm);

  if (z.degenerate || gold_norm < kMinStd) {
    out.degenerate = true;
    return out;
  }

  const auto tr = run_sinkhorn(z.s, options);
  out.iterations = tr.iterations;
  const auto r = ranks_from_plan(tr);
  const double r_mean = std::accumulate(r.begin(), r.end(), 0.0) / m;
  std::vector<double> rc(m);
  double r_norm = 0, dot = 0;
  for (int i = 0; i < m; ++i) {
    rc[i] = r[i] - r_mean;
    r_norm += rc[i] * rc[i];
    dot += rc[i] * gc[i];
  }
  r_norm = std::sqrt(r_norm);
  if (r_norm < kMinStd) {
    out.degenerate = true;
    return out;
  }
  out.value = dot / (r_norm * gold_norm);
  if (!want_grad) return out;

  // Pearson gradient w.r.t. the soft ranks.
  std::vector<double> rank_bar(m);
  for (int i = 0; i < m; ++i) rank_bar[i] = gc[i] / (r_norm * gold_norm) - out.value * rc[i] / (r_norm * r_norm);

  const auto cost_bar = backprop_cost(tr, rank_bar);
  std::vector<double> s_bar(m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      s_bar[i] += cost_bar[static_cast<std::size_t>(i) * m + j] * 2.0 * (z.s[i] - static_cast<double>(j + 1));

  // s = (x - mean) / std with population std.
  double mean_bar = 0, proj = 0;
  for (int i = 0; i < m; ++i) {
    mean_bar += s_bar[i];
    proj += s_bar[i] * z.s[i];
  }
  mean_bar /= m;
  proj /= m;
  for (int i = 0; i < m; ++i) out.grad[i] = (s_bar[i] - mean_bar - z.s[i] * proj) / z.std;
  return out;
}

}  // namespace polar
