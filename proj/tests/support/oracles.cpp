#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace oracle {

std::vector<std::vector<int>> floyd_warshall(const polar::RelationalGraph& g) {
  const int n = g.num_entities();
  constexpr int kInf = std::numeric_limits<int>::max() / 4;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, kInf));
  for (int i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : g.edges) d[e.src][e.dst] = d[e.dst][e.src] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  for (auto& row : d)
    for (int& v : row)
      if (v >= kInf) v = -1;
  return d;
}

int incidence(const polar::RelationalGraph& g, const std::set<int>& directional, int i, int j, int r) {
  if (!directional.count(r)) return 0;
  int v = 0;
  for (const auto& e : g.edges) {
    if (e.rel != r) continue;
    if (e.src == i && e.dst == j) ++v;
    if (e.src == j && e.dst == i) --v;
  }
  return v;
}

namespace {

bool place(const polar::RelationalGraph& g, const std::vector<int>& order, const std::vector<int>& axis_of_type,
           int dim, std::size_t next, std::vector<std::vector<int>>& pos, std::vector<bool>& placed) {
  const int n = g.num_entities();
  if (next == order.size()) return true;
  const int v = order[next];
  // Candidate cells: box around the origin large enough for any connected
  // placement of n cells.
  std::vector<int> cell(dim, -n);
  while (true) {
    bool ok = true;
    for (int u = 0; u < n && ok; ++u) {
      if (!placed[u]) continue;
      if (pos[u] == cell) ok = false;
    }
    for (int u = 0; u < n && ok; ++u) {
      if (!placed[u]) continue;
      for (int r = 0; r < g.num_types() && ok; ++r) {
        const int a = axis_of_type[r];
        auto step_from = [&](const std::vector<int>& from, const std::vector<int>& to) {
          for (int c = 0; c < dim; ++c)
            if (to[c] - from[c] != (c == a ? 1 : 0)) return false;
          return true;
        };
        const bool has_uv = std::any_of(g.edges.begin(), g.edges.end(), [&](const polar::Edge& e) {
          return e.src == u && e.dst == v && e.rel == r;
        });
        const bool has_vu = std::any_of(g.edges.begin(), g.edges.end(), [&](const polar::Edge& e) {
          return e.src == v && e.dst == u && e.rel == r;
        });
        if (has_uv != step_from(pos[u], cell)) ok = false;
        if (has_vu != step_from(cell, pos[u])) ok = false;
      }
    }
    if (ok) {
      pos[v] = cell;
      placed[v] = true;
      if (place(g, order, axis_of_type, dim, next + 1, pos, placed)) return true;
      placed[v] = false;
    }
    int c = 0;
    while (c < dim && ++cell[c] > n) cell[c++] = -n;
    if (c == dim) return false;
  }
}

}  // namespace

bool is_grid_graph(const polar::RelationalGraph& g, int dim) {
  const int n = g.num_entities();
  if (n == 0) return true;
  if (g.num_types() != dim) return false;
  std::vector<int> order;
  std::vector<bool> seen(n, false);
  std::deque<int> q{0};
  seen[0] = true;
  while (!q.empty()) {
    const int u = q.front();
    q.pop_front();
    order.push_back(u);
    for (const auto& e : g.edges) {
      for (auto [a, b] : {std::pair{e.src, e.dst}, std::pair{e.dst, e.src}})
        if (a == u && !seen[b]) {
          seen[b] = true;
          q.push_back(b);
        }
    }
  }
  if (static_cast<int>(order.size()) != n) return false;
  std::vector<int> axes(dim);
  std::iota(axes.begin(), axes.end(), 0);
  do {
    std::vector<std::vector<int>> pos(n, std::vector<int>(dim, 0));
    std::vector<bool> placed(n, false);
    placed[0] = true;
    if (place(g, order, axes, dim, 1, pos, placed)) return true;
  } while (std::next_permutation(axes.begin(), axes.end()));
  return false;
}

bool has_cycle(const polar::RelationalGraph& g, const std::set<int>& types) {
  const int n = g.num_entities();
  std::vector<int> state(n, 0);  // 0 new, 1 on stack, 2 done
  std::function<bool(int)> dfs = [&](int u) {
    state[u] = 1;
    for (const auto& e : g.edges) {
      if (e.src != u || !types.count(e.rel)) continue;
      if (state[e.dst] == 1) return true;
      if (state[e.dst] == 0 && dfs(e.dst)) return true;
    }
    state[u] = 2;
    return false;
  };
  for (int u = 0; u < n; ++u)
    if (state[u] == 0 && dfs(u)) return true;
  return false;
}

namespace {

std::string substitute(std::string s, const std::string& key, const std::string& value) {
  const std::string token = "{" + key + "}";
  for (auto pos = s.find(token); pos != std::string::npos; pos = s.find(token, pos + value.size()))
    s.replace(pos, token.size(), value);
  return s;
}

std::vector<std::string> all_forms(const polar::SurfaceForms& f, bool inverse) {
  std::vector<std::string> out{inverse ? f.inverse : f.forward};
  for (const auto& [g, s] : inverse ? f.inverse_by_gender : f.forward_by_gender) out.push_back(s);
  return out;
}

}  // namespace

std::optional<std::multiset<Triple>> parse_description(const std::string& text, const polar::RelationalGraph& g,
                                                       const polar::DomainSchema& schema, bool ood_relations) {
  // Sentences sit on the line before the post-prompt.
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  if (lines.size() < 2) return std::nullopt;
  const std::string& body = lines[lines.size() - 2];

  std::vector<std::string> sentences;
  std::size_t start = 0;
  while (start < body.size()) {
    auto end = body.find(". ", start);
    if (end == std::string::npos) end = body.size() - 1;
    sentences.push_back(body.substr(start, end - start + 1));
    start = end + 2;
  }

  std::multiset<Triple> out;
  const int n = g.num_entities();
  for (const auto& sentence : sentences) {
    std::set<Triple> readings;
    for (int r = 0; r < g.num_types(); ++r) {
      const auto& spec = schema.relation(g.relation_types[r]);
      const auto& forms = ood_relations ? spec.ood_forms : spec.id_forms;
      for (bool inverse : {false, true}) {
        for (const auto& rel : all_forms(forms, inverse)) {
          for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
              if (a == b) continue;
              std::string s = substitute(schema.sentence_template, "src", g.entities[a]);
              s = substitute(s, "dst", g.entities[b]);
              s = substitute(s, "rel", rel);
              s = substitute(s, "type", g.relation_types[r]);
              if (s != sentence) continue;
              int src = inverse ? b : a, dst = inverse ? a : b;
              // "X is the son of Y" reads as dad-of or mom-of; Y's gender decides.
              if (spec.src_gender) {
                const auto* gender = schema.gender_of(g.entities[src]);
                if (gender && *gender != *spec.src_gender) continue;
              }
              if (!spec.directional && src > dst) std::swap(src, dst);
              readings.insert({src, dst, r});
            }
          }
        }
      }
    }
    if (readings.size() != 1) return std::nullopt;
    out.insert(*readings.begin());
  }
  return out;
}

std::multiset<Triple> canonical_edges(const polar::RelationalGraph& g, const polar::DomainSchema& schema) {
  std::multiset<Triple> out;
  for (const auto& e : g.edges) {
    int src = e.src, dst = e.dst;
    if (!schema.relation(g.relation_types[e.rel]).directional && src > dst) std::swap(src, dst);
    out.insert({src, dst, e.rel});
  }
  return out;
}

std::vector<double> counting_ranks(const std::vector<double>& x) {
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double less = 0, equal = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (j == i) continue;
      if (x[j] < x[i]) ++less;
      if (x[j] == x[i]) ++equal;
    }
    r[i] = 1 + less + equal / 2;
  }
  return r;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson(counting_ranks(x), counting_ranks(y));
}

std::vector<double> soft_ranks(const std::vector<double>& x, double target_eps, int iters, double anneal) {
  const int m = static_cast<int>(x.size());
  double mean = 0;
  for (double v : x) mean += v;
  mean /= m;
  double var = 0;
  for (double v : x) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / m);
  std::vector<double> s(m);
  for (int i = 0; i < m; ++i) s[i] = (x[i] - mean) / sd;

  auto cost = [&](int i, int j) { return (s[i] - (j + 1)) * (s[i] - (j + 1)); };
  auto lse = [](const std::vector<double>& v) {
    const double mx = *std::max_element(v.begin(), v.end());
    double acc = 0;
    for (double a : v) acc += std::exp(a - mx);
    return mx + std::log(acc);
  };
  const double c_max = (m + std::sqrt(m - 1.0)) * (m + std::sqrt(m - 1.0));
  std::vector<double> f(m, 0.0), g(m, 0.0), tmp(m);
  const double log_a = -std::log(static_cast<double>(m));
  double eps = anneal < 1 ? std::max(target_eps, c_max) : target_eps;
  for (int it = 0; it < iters; ++it) {
    if (it > 0) eps = std::max(target_eps, eps * anneal);
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < m; ++i) tmp[i] = (f[i] - cost(i, j)) / eps;
      g[j] = eps * (log_a - lse(tmp));
    }
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) tmp[j] = (g[j] - cost(i, j)) / eps;
      f[i] = eps * (log_a - lse(tmp));
    }
  }
  std::vector<double> r(m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) r[i] += m * std::exp((f[i] + g[j] - cost(i, j)) / eps) * (j + 1);
  return r;
}

double soft_spearman(const std::vector<double>& x, const std::vector<double>& y, double eps, int iters,
                     double anneal) {
  return pearson(soft_ranks(x, eps, iters, anneal), counting_ranks(y));
}

Forward forward(const Eigen::MatrixXd& map, const Eigen::MatrixXd& prototypes, const Eigen::MatrixXd& h) {
  const int n = static_cast<int>(h.rows()), k = static_cast<int>(map.rows()), d = static_cast<int>(map.cols());
  const int t = static_cast<int>(prototypes.cols());
  std::vector<std::vector<double>> z(n, std::vector<double>(k, 0.0));
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < k; ++a)
      for (int c = 0; c < d; ++c) z[i][a] += map(a, c) * h(i, c);
  Forward out;
  out.dist.assign(n, std::vector<double>(n, 0.0));
  out.cosine.assign(n, std::vector<std::vector<double>>(n, std::vector<double>(t, 0.0)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double nn = 0;
      for (int a = 0; a < k; ++a) nn += (z[i][a] - z[j][a]) * (z[i][a] - z[j][a]);
      out.dist[i][j] = std::sqrt(nn);
      for (int r = 0; r < t; ++r) {
        double dot = 0, pp = 0;
        for (int a = 0; a < k; ++a) {
          dot += (z[i][a] - z[j][a]) * prototypes(a, r);
          pp += prototypes(a, r) * prototypes(a, r);
        }
        out.cosine[i][j][r] = dot / std::max(std::sqrt(nn) * std::sqrt(pp), 1e-8);
      }
    }
  return out;
}

double objective(const Eigen::MatrixXd& map, const Eigen::MatrixXd& prototypes, const std::vector<GraphCase>& batch,
                 double lambda, double eps, int iters, double* structural, double* angular) {
  double ls = 0, la = 0;
  int la_graphs = 0;
  for (const auto& c : batch) {
    const auto out = forward(map, prototypes, c.h);
    const int n = static_cast<int>(c.h.rows());
    std::vector<double> pred, gold;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        pred.push_back(out.dist[i][j]);
        gold.push_back(c.gold[i][j]);
      }
    ls += 1.0 - soft_spearman(pred, gold, eps, iters);
    if (c.edge_pairs.empty()) continue;
    const int t = static_cast<int>(prototypes.cols());
    double sq = 0;
    for (auto [i, j] : c.edge_pairs)
      for (int r = 0; r < t; ++r) sq += std::pow(out.cosine[i][j][r] - c.incidence[i][j][r], 2);
    la += sq / (static_cast<double>(c.edge_pairs.size()) * t);
    ++la_graphs;
  }
  ls /= static_cast<double>(batch.size());
  if (la_graphs > 0) la /= la_graphs;
  if (structural) *structural = ls;
  if (angular) *angular = la;
  return ls + lambda * la;
}

Eigen::MatrixXd finite_difference(const std::function<double(const Eigen::MatrixXd&)>& f, const Eigen::MatrixXd& m,
                                  double h) {
  Eigen::MatrixXd g(m.rows(), m.cols());
  Eigen::MatrixXd p = m;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double orig = p(i, j);
      p(i, j) = orig + h;
      const double up = f(p);
      p(i, j) = orig - h;
      const double down = f(p);
      p(i, j) = orig;
      g(i, j) = (up - down) / (2 * h);
    }
  return g;
}

}  // namespace oracle
