#pragma once

// Attributed graphs with planar node attributes and their bipartite graph
// edit distance.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ccgraph/error.hpp"
#include "ccgraph/lsap.hpp"

namespace ccgraph {

using Point2 = std::array<double, 2>;
using Edge = std::pair<int, int>;

inline double point_distance(const Point2 &a, const Point2 &b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

// Undirected graph, nodes carry planar attributes. Edges are stored with
// i < j, sorted, without duplicates or self-loops.
class AttributedGraph {
public:
  AttributedGraph() = default;
  AttributedGraph(std::vector<Point2> nodes, std::vector<Edge> edges)
      : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    const int n = order();
    for (auto &e : edges_) {
      if (e.first < 0 || e.second < 0 || e.first >= n || e.second >= n)
        throw DomainError("edge endpoint out of range");
      if (e.first == e.second)
        throw DomainError("self-loops are not allowed");
      if (e.first > e.second)
        std::swap(e.first, e.second);
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
      throw DomainError("duplicate edge");
    adjacency_.assign(static_cast<std::size_t>(n) * n, 0);
    degree_.assign(static_cast<std::size_t>(n), 0);
    for (const auto &[a, b] : edges_) {
      adjacency_[index(a, b)] = adjacency_[index(b, a)] = 1;
      ++degree_[static_cast<std::size_t>(a)];
      ++degree_[static_cast<std::size_t>(b)];
    }
  }

  int order() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Point2> &nodes() const { return nodes_; }
  const std::vector<Edge> &edges() const { return edges_; }
  int degree(int i) const { return degree_[static_cast<std::size_t>(i)]; }
  bool has_edge(int i, int j) const { return adjacency_[index(i, j)] != 0; }

  friend bool operator==(const AttributedGraph &a, const AttributedGraph &b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * nodes_.size() +
           static_cast<std::size_t>(j);
  }

  std::vector<Point2> nodes_;
  std::vector<Edge> edges_;
  std::vector<char> adjacency_;
  std::vector<int> degree_;
};

// Returns a copy with node i of the result taken from node perm[i] of g.
inline AttributedGraph permute_nodes(const AttributedGraph &g,
                                     const std::vector<int> &perm) {
  if (static_cast<int>(perm.size()) != g.order())
    throw DimensionError("permutation size differs from graph order");
  std::vector<int> inverse(perm.size());
  std::vector<Point2> nodes(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    nodes[i] = g.nodes()[static_cast<std::size_t>(perm[i])];
    inverse[static_cast<std::size_t>(perm[i])] = static_cast<int>(i);
  }
  std::vector<Edge> edges;
  for (const auto &[a, b] : g.edges())
    edges.emplace_back(inverse[static_cast<std::size_t>(a)],
                       inverse[static_cast<std::size_t>(b)]);
  return {std::move(nodes), std::move(edges)};
}

inline nlohmann::json to_json(const AttributedGraph &g) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto &p : g.nodes())
    nodes.push_back({p[0], p[1]});
  nlohmann::json edges = nlohmann::json::array();
  for (const auto &[a, b] : g.edges())
    edges.push_back({a, b});
  return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

inline AttributedGraph graph_from_json(const nlohmann::json &j) {
  try {
    std::vector<Point2> nodes;
    for (const auto &p : j.at("nodes")) {
      if (p.size() != 2)
        throw DomainError("node attribute must be a 2-vector");
      nodes.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    std::vector<Edge> edges;
    for (const auto &e : j.at("edges")) {
      if (e.size() != 2)
        throw DomainError("edge must be a pair of node indices");
      edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    }
    return {std::move(nodes), std::move(edges)};
  } catch (const nlohmann::json::exception &e) {
    throw IoError(std::string("malformed graph JSON: ") + e.what());
  }
}

struct EditCostParams {
  double node_insert_delete = 1.0;
  double edge_insert_delete = 0.5;
  // Node substitution costs the Euclidean attribute distance, capped here.
  double substitution_cap = 2.0;

  void validate() const {
    if (!(node_insert_delete > 0.0) || !(edge_insert_delete > 0.0) ||
        !(substitution_cap > 0.0))
      throw DomainError("edit costs must be strictly positive");
  }
  double substitution(const Point2 &a, const Point2 &b) const {
    return std::min(point_distance(a, b), substitution_cap);
  }

  friend bool operator==(const EditCostParams &,
                         const EditCostParams &) = default;
};

// Cost of the edit path induced by a node mapping: mapping[i] is the node of
// g2 that node i of g1 is substituted with, or -1 for a deletion. Unmapped
// g2 nodes are inserted. Edges follow the node mapping.
inline double edit_path_cost(const AttributedGraph &g1,
                             const AttributedGraph &g2,
                             const std::vector<int> &mapping,
                             const EditCostParams &costs) {
  double total = 0.0;
  std::vector<char> used(static_cast<std::size_t>(g2.order()), 0);
  for (int i = 0; i < g1.order(); ++i) {
    const int j = mapping[static_cast<std::size_t>(i)];
    if (j < 0) {
      total += costs.node_insert_delete;
    } else {
      total += costs.substitution(g1.nodes()[static_cast<std::size_t>(i)],
                                  g2.nodes()[static_cast<std::size_t>(j)]);
      used[static_cast<std::size_t>(j)] = 1;
    }
  }
  for (char u : used)
    if (!u)
      total += costs.node_insert_delete;

  int kept = 0;
  for (const auto &[a, b] : g1.edges()) {
    const int ma = mapping[static_cast<std::size_t>(a)];
    const int mb = mapping[static_cast<std::size_t>(b)];
    if (ma >= 0 && mb >= 0 && g2.has_edge(ma, mb))
      ++kept;
    else
      total += costs.edge_insert_delete;
  }
  total += costs.edge_insert_delete *
           static_cast<double>(static_cast<int>(g2.edges().size()) - kept);
  return total;
}

struct BipartiteResult {
  double cost = 0.0;
  std::vector<int> mapping;
};

namespace detail {

// Node order by (attribute, degree). Solving on canonically ordered graphs
// makes the choice among tied optimal assignments, and so the returned
// edit-path cost, independent of the input labelling.
inline std::vector<int> canonical_order(const AttributedGraph &g) {
  std::vector<int> order(static_cast<std::size_t>(g.order()));
  for (int i = 0; i < g.order(); ++i)
    order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto &pa = g.nodes()[static_cast<std::size_t>(a)];
    const auto &pb = g.nodes()[static_cast<std::size_t>(b)];
    if (pa != pb)
      return pa < pb;
    return g.degree(a) < g.degree(b);
  });
  return order;
}

inline std::vector<int> bipartite_mapping(const AttributedGraph &g1,
                                          const AttributedGraph &g2,
                                          const EditCostParams &costs) {
  const int n = g1.order();
  const int m = g2.order();
  const double half_edge = 0.5 * costs.edge_insert_delete;
  // Any feasible assignment costs less than this; forbidden cells use it.
  double forbidden = 1.0;
  for (int i = 0; i < n; ++i)
    forbidden += costs.node_insert_delete + half_edge * g1.degree(i);
  for (int j = 0; j < m; ++j)
    forbidden += costs.node_insert_delete + half_edge * g2.degree(j);
  forbidden += n * costs.substitution_cap;
  forbidden *= 2.0;

  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n + m, n + m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j)
      c(i, j) = costs.substitution(g1.nodes()[static_cast<std::size_t>(i)],
                                   g2.nodes()[static_cast<std::size_t>(j)]) +
                half_edge * std::abs(g1.degree(i) - g2.degree(j));
    for (int j = 0; j < n; ++j)
      c(i, m + j) = i == j ? costs.node_insert_delete + half_edge * g1.degree(i)
                           : forbidden;
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      c(n + i, j) = i == j ? costs.node_insert_delete + half_edge * g2.degree(i)
                           : forbidden;

  const Assignment a = solve_lsap(c);
  std::vector<int> mapping(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const int j = a.row_to_col[static_cast<std::size_t>(i)];
    if (j < m)
      mapping[static_cast<std::size_t>(i)] = j;
  }
  return mapping;
}

} // namespace detail

// One-directional bipartite approximation: an (n+m)x(n+m) assignment over
// substitutions, deletions and insertions, where each node entry also
// carries the cheapest edit of its incident edges (half the edge cost per
// endpoint). Returns the exact cost of the induced edit path, an upper bound
// on the true edit distance.
inline BipartiteResult bipartite_ged(const AttributedGraph &g1,
                                     const AttributedGraph &g2,
                                     const EditCostParams &costs) {
  costs.validate();
  BipartiteResult res;
  if (g1.order() + g2.order() == 0)
    return res;
  const auto o1 = detail::canonical_order(g1);
  const auto o2 = detail::canonical_order(g2);
  const auto local = detail::bipartite_mapping(permute_nodes(g1, o1),
                                               permute_nodes(g2, o2), costs);
  res.mapping.assign(static_cast<std::size_t>(g1.order()), -1);
  for (std::size_t i = 0; i < local.size(); ++i)
    if (local[i] >= 0)
      res.mapping[static_cast<std::size_t>(o1[i])] =
          o2[static_cast<std::size_t>(local[i])];
  res.cost = edit_path_cost(g1, g2, res.mapping, costs);
  return res;
}

// Symmetrised bipartite GED: (bp(g1,g2) + bp(g2,g1)) / 2.
inline double graph_edit_distance(const AttributedGraph &g1,
                                  const AttributedGraph &g2,
                                  const EditCostParams &costs = {}) {
  return 0.5 * (bipartite_ged(g1, g2, costs).cost +
                bipartite_ged(g2, g1, costs).cost);
}

// Functor form for the generic out-of-sample helpers.
struct GedDistance {
  EditCostParams costs;
  double operator()(const AttributedGraph &a, const AttributedGraph &b) const {
    return graph_edit_distance(a, b, costs);
  }
};

inline Eigen::MatrixXd pairwise_ged(const std::vector<AttributedGraph> &graphs,
                                    const EditCostParams &costs = {}) {
  const auto n = static_cast<Eigen::Index>(graphs.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      d(i, j) = d(j, i) =
          graph_edit_distance(graphs[static_cast<std::size_t>(i)],
                              graphs[static_cast<std::size_t>(j)], costs);
  return d;
}

// Index of the sample member minimising the sum of squared distances to the
// sample (the set median), ties to the lowest index.
inline std::size_t set_median_index(const Eigen::MatrixXd &dist) {
  if (dist.rows() == 0)
    throw DomainError("set median of an empty sample");
  const Eigen::VectorXd score = dist.cwiseProduct(dist).rowwise().sum();
  std::size_t best = 0;
  for (Eigen::Index i = 1; i < score.size(); ++i)
    if (score(i) < score(static_cast<Eigen::Index>(best)))
      best = static_cast<std::size_t>(i);
  return best;
}

inline AttributedGraph
graph_set_median(const std::vector<AttributedGraph> &sample,
                 const EditCostParams &costs = {}) {
  if (sample.empty())
    throw DomainError("set median of an empty sample");
  return sample[set_median_index(pairwise_ged(sample, costs))];
}

} // namespace ccgraph
