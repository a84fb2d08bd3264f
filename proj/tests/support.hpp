#pragma once

// Random on-manifold samples and small helpers shared by the tests.

#include <cmath>
#include <vector>

#include "ccgraph/ccgraph.hpp"

namespace ccgraph::testing {

inline Vector random_normal(Rng &rng, Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v(i) = normal01(rng);
  return v;
}

// A point on M_kappa of intrinsic dimension d, spread of about `scale`.
inline Vector random_point(Rng &rng, Curvature k, int d, double scale = 1.0) {
  if (k.flat())
    return scale * random_normal(rng, d);
  Vector v = random_normal(rng, d + 1);
  if (k.spherical())
    return project_to_manifold(v, k);
  v *= scale;
  return project_to_manifold(v, k);
}

inline Configuration random_configuration(Rng &rng, Curvature k, int n, int d,
                                          double scale = 1.0) {
  Matrix x(n, k.flat() ? d : d + 1);
  for (int i = 0; i < n; ++i)
    x.row(i) = random_point(rng, k, d, scale).transpose();
  return {x, k};
}

// A tangent vector at `base` (orthogonal under the manifold product).
inline Vector random_tangent(Rng &rng, const Vector &base, Curvature k,
                             double scale = 1.0) {
  Vector v = scale * random_normal(rng, base.size());
  if (k.flat())
    return v;
  return v - (scalar_product(base, v, k) / k.signed_radius2()) * base;
}

inline AttributedGraph random_graph(Rng &rng, int n, double edge_prob,
                                    double extent = 3.0) {
  std::vector<Point2> nodes;
  for (int i = 0; i < n; ++i)
    nodes.push_back({uniform(rng, 0.0, extent), uniform(rng, 0.0, extent)});
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (uniform01(rng) < edge_prob)
        edges.emplace_back(i, j);
  return {std::move(nodes), std::move(edges)};
}

inline std::vector<int> random_permutation(Rng &rng, int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    p[static_cast<std::size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i)
    std::swap(p[static_cast<std::size_t>(i)],
              p[uniform_index(rng, static_cast<std::size_t>(i) + 1)]);
  return p;
}

} // namespace ccgraph::testing
