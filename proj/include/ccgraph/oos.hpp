#pragma once

// Out-of-sample machinery: k-centres prototype selection, dissimilarity
// representation and positioning of unseen graphs on the manifold.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Cholesky>

#include "ccgraph/error.hpp"
#include "ccgraph/manifold.hpp"
#include "ccgraph/random.hpp"

namespace ccgraph {

struct KCentresResult {
  std::vector<Eigen::Index> centres;
  // max over points of the distance to the nearest centre
  double cover_radius = 0.0;
  int iterations = 0;
};

namespace detail {

inline double cover_radius(const Matrix &dist,
                           const std::vector<Eigen::Index> &centres,
                           std::vector<std::size_t> *assignment = nullptr) {
  const auto n = dist.rows();
  if (assignment)
    assignment->assign(static_cast<std::size_t>(n), 0);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t c = 0; c < centres.size(); ++c) {
      if (centres[c] == i) {
        best = 0.0;
        arg = c;
        break;
      }
      if (dist(i, centres[c]) < best) {
        best = dist(i, centres[c]);
        arg = c;
      }
    }
    if (assignment)
      (*assignment)[static_cast<std::size_t>(i)] = arg;
    worst = std::max(worst, best);
  }
  return worst;
}

} // namespace detail

// k-centres on a precomputed distance matrix. Farthest-first traversal from
// a seed-chosen first centre, then centre reassignment (each cluster's
// centre moves to the member minimising its maximal in-cluster distance)
// until the cover radius stops decreasing. Ties go to the lowest index.
inline KCentresResult select_prototypes_kcentres(const Matrix &dist,
                                                 Eigen::Index m,
                                                 std::uint64_t seed) {
  const auto n = dist.rows();
  if (dist.cols() != n)
    throw DimensionError("distance matrix must be square");
  if (m < 1 || m > n)
    throw DimensionError("prototype count must be in [1, N]");

  KCentresResult res;
  if (m == n) {
    for (Eigen::Index i = 0; i < n; ++i)
      res.centres.push_back(i);
    return res;
  }

  Rng rng(seed);
  std::vector<bool> chosen(static_cast<std::size_t>(n), false);
  std::vector<double> nearest(static_cast<std::size_t>(n),
                              std::numeric_limits<double>::infinity());
  auto add = [&](Eigen::Index c) {
    res.centres.push_back(c);
    chosen[static_cast<std::size_t>(c)] = true;
    for (Eigen::Index i = 0; i < n; ++i)
      nearest[static_cast<std::size_t>(i)] =
          std::min(nearest[static_cast<std::size_t>(i)], dist(i, c));
  };
  add(static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::size_t>(n))));
  while (static_cast<Eigen::Index>(res.centres.size()) < m) {
    Eigen::Index far = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (chosen[static_cast<std::size_t>(i)])
        continue;
      if (far < 0 || nearest[static_cast<std::size_t>(i)] >
                         nearest[static_cast<std::size_t>(far)])
        far = i;
    }
    add(far);
  }

  std::vector<std::size_t> assign;
  res.cover_radius = detail::cover_radius(dist, res.centres, &assign);
  for (;;) {
    std::vector<Eigen::Index> next = res.centres;
    for (std::size_t c = 0; c < next.size(); ++c) {
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index cand = 0; cand < n; ++cand) {
        if (assign[static_cast<std::size_t>(cand)] != c)
          continue;
        double radius = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
          if (assign[static_cast<std::size_t>(i)] == c)
            radius = std::max(radius, dist(cand, i));
        if (radius < best) {
          best = radius;
          next[c] = cand;
        }
      }
    }
    std::vector<std::size_t> next_assign;
    const double r = detail::cover_radius(dist, next, &next_assign);
    if (!(r < res.cover_radius))
      break;
    res.centres = std::move(next);
    res.cover_radius = r;
    assign = std::move(next_assign);
    ++res.iterations;
  }
  return res;
}

inline KCentresResult select_prototypes_kcentres(const Configuration &x,
                                                 Eigen::Index m,
                                                 std::uint64_t seed) {
  return select_prototypes_kcentres(pairwise_distances(x), m, seed);
}

// Prototype graphs with their positions on the manifold, index-aligned.
template <class Graph> struct PrototypeSet {
  std::vector<Graph> graphs;
  Configuration positions;
  // training dissimilarities among the prototypes
  Matrix distances;
  // line parameter of the training embedding
  double line_parameter = 0.0;

  Eigen::Index size() const { return positions.size(); }
  Curvature curvature() const { return positions.curvature; }
};

// y(m) = dist(g, r_m) in prototype order.
template <class Graph, class DistanceFn>
Vector dissimilarity_representation(const Graph &g,
                                    const std::vector<Graph> &prototypes,
                                    DistanceFn &&dist) {
  Vector y(static_cast<Eigen::Index>(prototypes.size()));
  for (std::size_t m = 0; m < prototypes.size(); ++m) {
    const double v = dist(g, prototypes[m]);
    if (!(v >= 0.0))
      throw DomainError("graph distance must be nonnegative");
    y(static_cast<Eigen::Index>(m)) = v;
  }
  return y;
}

template <class Graph, class DistanceFn>
Vector dissimilarity_representation(const Graph &g,
                                    const PrototypeSet<Graph> &prototypes,
                                    DistanceFn &&dist) {
  return dissimilarity_representation(g, prototypes.graphs,
                                      std::forward<DistanceFn>(dist));
}

struct OosOptions {
  double regularization = 1e-10;
  int refine_iterations = 50;
  double relative_tolerance = 1e-10;
  // Line parameter t of the training embedding. The hyperbolic solution
  // fits (1-t)C + (t/kappa)I, whose off-diagonal scalar products are C
  // stretched by (1-t); out-of-sample targets are stretched alike. Unused on
  // the sphere, where the norm constraint already fixes the scale.
  double line_parameter = 0.0;
};

struct OosResult {
  Vector point;
  // ||X_R I_kappa x - C_R||_2 at the returned point
  double residual = 0.0;
};

// Places a graph with dissimilarity vector y (to the prototypes at
// positions X_R) on the manifold by minimising ||X_R I_kappa x - C_R||^2.
//
// Flat case: C_R is the vector form of double centring, relative to the
// prototype mean and using the prototypes' own distance matrix D_R (the
// embedded distances when D_R is not supplied); solved as a regularised
// linear least-squares problem. With every training graph as a prototype an
// in-sample row maps back onto its classical MDS position.
// Curved case: unconstrained least squares in the ambient space, projection
// onto the manifold, then projected gradient refinement.
//
// The Tikhonov term pulls towards the prototype mean rather than the origin,
// so that degenerate prototype sets collapse onto their common point.
inline OosResult embed_out_of_sample_detailed(const Vector &y,
                                              const Configuration &xr,
                                              const Matrix &dr,
                                              const OosOptions &opts = {}) {
  const Curvature k = xr.curvature;
  const auto m = xr.size();
  if (m == 0)
    throw DimensionError("empty prototype set");
  if (y.size() != m)
    throw DimensionError("dissimilarity vector length differs from the "
                         "number of prototypes");
  const Matrix &p = xr.points;
  const Vector mean = p.colwise().mean().transpose();

  // argmin |a x - rhs|^2 + eps |x - prior|^2, solved for x - prior.
  auto solve_regularised = [&](const Matrix &a, const Vector &rhs,
                               const Vector &prior) -> Vector {
    const auto dim = a.cols();
    const double scale =
        std::max(1.0, a.squaredNorm() / static_cast<double>(dim));
    const double eps = opts.regularization * scale;
    Matrix normal = a.transpose() * a;
    normal.diagonal().array() += eps;
    return prior + normal.ldlt().solve(a.transpose() * (rhs - a * prior));
  };

  if (k.flat()) {
    if (dr.rows() != m || dr.cols() != m)
      throw DimensionError("prototype distance matrix has the wrong size");
    const Matrix centred = p.rowwise() - mean.transpose();
    const Vector ysq = y.cwiseProduct(y);
    const Vector row = dr.cwiseProduct(dr).rowwise().mean();
    const Vector rhs =
        (-0.5 * (ysq.array() - ysq.mean() - row.array() + row.mean())).matrix();
    const Vector z = solve_regularised(centred, rhs, Vector::Zero(p.cols()));
    return {mean + z, (centred * z - rhs).norm()};
  }

  const double r = k.radius();
  if (k.spherical() && y.maxCoeff() > std::numbers::pi * r * (1.0 + 1e-12))
    throw DomainError("dissimilarity exceeds pi*r; not representable on the "
                      "sphere");
  Vector c(m);
  for (Eigen::Index i = 0; i < m; ++i)
    c(i) = k.spherical() ? r * r * std::cos(y(i) / r)
                         : -r * r * std::cosh(y(i) / r);
  if (k.hyperbolic())
    c *= 1.0 - opts.line_parameter;
  Matrix a = p;
  if (k.hyperbolic())
    a.col(0) = -a.col(0);
  if (a.squaredNorm() == 0.0)
    throw DomainError("degenerate prototype positions");

  Vector prior = mean;
  if (k.spherical() && prior.norm() <= 1e-12 * r)
    prior = xr.point(0);
  prior = project_to_manifold(prior, k);

  auto objective = [&](const Vector &x) { return (a * x - c).squaredNorm(); };
  Vector x = project_to_manifold(solve_regularised(a, c, prior), k);
  double f = objective(x);

  // Lipschitz constant of the gradient 2 A^T (A x - c).
  const double lipschitz =
      2.0 * Eigen::SelfAdjointEigenSolver<Matrix>(a.transpose() * a,
                                                  Eigen::EigenvaluesOnly)
                .eigenvalues()
                .maxCoeff();
  double step = 1.0 / lipschitz;
  for (int it = 0; it < opts.refine_iterations && f > 0.0; ++it) {
    const Vector grad = 2.0 * a.transpose() * (a * x - c);
    bool moved = false;
    while (step * lipschitz > 1e-12) {
      const Vector cand = project_to_manifold(x - step * grad, k);
      const double fc = objective(cand);
      if (fc < f) {
        const double rel = (f - fc) / f;
        x = cand;
        f = fc;
        moved = rel >= opts.relative_tolerance;
        break;
      }
      step *= 0.5;
    }
    if (!moved)
      break;
  }
  return {x, std::sqrt(f)};
}

inline OosResult embed_out_of_sample_detailed(const Vector &y,
                                              const Configuration &xr,
                                              const OosOptions &opts = {}) {
  return embed_out_of_sample_detailed(
      y, xr, xr.curvature.flat() ? pairwise_distances(xr) : Matrix(), opts);
}

inline Vector embed_out_of_sample(const Vector &y, const Configuration &xr,
                                  const OosOptions &opts = {}) {
  return embed_out_of_sample_detailed(y, xr, opts).point;
}

inline Vector embed_out_of_sample(const Vector &y, const Configuration &xr,
                                  const Matrix &dr,
                                  const OosOptions &opts = {}) {
  return embed_out_of_sample_detailed(y, xr, dr, opts).point;
}

template <class Graph>
Vector embed_out_of_sample(const Vector &y, const PrototypeSet<Graph> &r,
                           OosOptions opts = {}) {
  opts.line_parameter = r.line_parameter;
  if (r.distances.size() == 0)
    return embed_out_of_sample(y, r.positions, opts);
  return embed_out_of_sample_detailed(y, r.positions, r.distances, opts).point;
}

} // namespace ccgraph
