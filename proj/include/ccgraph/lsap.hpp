#pragma once

// Dense linear sum assignment: shortest augmenting paths with dual
// potentials (the Jonker-Volgenant augmentation, Dijkstra on reduced costs),
// O(n^3).

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "ccgraph/error.hpp"

namespace ccgraph {

struct Assignment {
  // row_to_col[i] = column assigned to row i
  std::vector<int> row_to_col;
  double cost = 0.0;
};

inline Assignment solve_lsap(const Eigen::MatrixXd &cost) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != cost.rows())
    throw DimensionError("assignment cost matrix must be square");
  if (!cost.allFinite())
    throw DomainError("assignment cost matrix must be finite");

  constexpr double inf = std::numeric_limits<double>::infinity();
  // 1-based arrays; column 0 is the virtual source.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), dist(n + 1);
  std::vector<int> col_owner(n + 1, 0), prev(n + 1, 0);
  std::vector<char> done(n + 1);

  for (int row = 1; row <= n; ++row) {
    col_owner[0] = row;
    int j0 = 0;
    std::fill(dist.begin(), dist.end(), inf);
    std::fill(done.begin(), done.end(), 0);
    do {
      done[j0] = 1;
      const int i0 = col_owner[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (done[j])
          continue;
        const double reduced = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (reduced < dist[j]) {
          dist[j] = reduced;
          prev[j] = j0;
        }
        if (dist[j] < delta) {
          delta = dist[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (done[j]) {
          u[col_owner[j]] += delta;
          v[j] -= delta;
        } else {
          dist[j] -= delta;
        }
      }
      j0 = j1;
    } while (col_owner[j0] != 0);
    // Augment along the alternating path.
    do {
      const int j1 = prev[j0];
      col_owner[j0] = col_owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment out;
  out.row_to_col.assign(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j)
    out.row_to_col[static_cast<std::size_t>(col_owner[j] - 1)] = j - 1;
  for (int i = 0; i < n; ++i)
    out.cost += cost(i, out.row_to_col[static_cast<std::size_t>(i)]);
  return out;
}

} // namespace ccgraph
