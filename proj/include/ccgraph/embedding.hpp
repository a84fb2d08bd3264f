#pragma once

// Training-set embedding of a dissimilarity matrix onto a constant-curvature
// manifold, and curvature selection by minimal distortion.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ccgraph/error.hpp"
#include "ccgraph/manifold.hpp"

namespace ccgraph {

// Symmetric, zero-diagonal, nonnegative matrix of pairwise graph distances.
class DissimilarityMatrix {
public:
  DissimilarityMatrix() = default;
  explicit DissimilarityMatrix(Matrix values, double tol = 1e-9)
      : values_(std::move(values)) {
    if (values_.rows() != values_.cols())
      throw DimensionError("dissimilarity matrix must be square");
    if (!values_.allFinite())
      throw DomainError("dissimilarity matrix has non-finite entries");
    const double scale = std::max(1.0, values_.cwiseAbs().maxCoeff());
    const auto n = values_.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(values_(i, i)) > tol * scale)
        throw DomainError("dissimilarity matrix diagonal must be zero");
      for (Eigen::Index j = 0; j < n; ++j) {
        if (values_(i, j) < -tol * scale)
          throw DomainError("dissimilarity matrix entries must be nonnegative");
        if (std::abs(values_(i, j) - values_(j, i)) > tol * scale)
          throw DomainError("dissimilarity matrix must be symmetric");
      }
    }
    values_ = (0.5 * (values_ + values_.transpose())).cwiseMax(0.0);
    values_.diagonal().setZero();
  }

  const Matrix &values() const { return values_; }
  Eigen::Index size() const { return values_.rows(); }
  double max() const { return size() == 0 ? 0.0 : values_.maxCoeff(); }
  double operator()(Eigen::Index i, Eigen::Index j) const {
    return values_(i, j);
  }

private:
  Matrix values_;
};

struct ScalarProductMatrix {
  Matrix values;
  Curvature curvature;
};

// Eigenvalues in ascending order, eigenvectors column-wise.
struct EigenPair {
  Matrix vectors;
  Vector values;
};

struct EmbeddingSolution {
  Configuration X;
  int dimension = 0;
  // Diagonal solution b of the eigenvalue problem (eigenvalues for the flat
  // case), aligned with the ascending eigenvalues.
  Vector b;
  // Parameter of b on the line through lambda and (1/kappa)1.
  double line_parameter = 0.0;
  // max_i |<x_i,x_i> - 1/kappa| * |kappa| before projecting onto the manifold.
  double constraint_violation = 0.0;
  double distortion = 0.0;

  Curvature curvature() const { return X.curvature; }
};

inline ScalarProductMatrix scalar_product_matrix(const DissimilarityMatrix &D,
                                                 Curvature k) {
  const Matrix &d = D.values();
  const auto n = D.size();
  if (k.flat()) {
    const Matrix sq = d.cwiseProduct(d);
    // -1/2 J D^2 J without materialising J.
    const Vector row_mean = sq.rowwise().mean();
    const Vector col_mean = sq.colwise().mean().transpose();
    const double grand = n == 0 ? 0.0 : sq.mean();
    Matrix c(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        c(i, j) = -0.5 * (sq(i, j) - row_mean(i) - col_mean(j) + grand);
    return {std::move(c), k};
  }
  const double r = k.radius();
  if (k.spherical()) {
    if (D.max() > std::numbers::pi * r * (1.0 + 1e-12))
      throw DomainError("distance " + std::to_string(D.max()) +
                        " exceeds pi*r = " +
                        std::to_string(std::numbers::pi * r) +
                        "; not representable on the sphere");
    return {(r * r) * (d / r).array().cos().matrix(), k};
  }
  return {-(r * r) * (d / r).array().cosh().matrix(), k};
}

// Symmetric eigendecomposition; each eigenvector's first nonzero component
// is made positive.
inline EigenPair eigendecompose_sym(const Matrix &c) {
  if (c.rows() != c.cols())
    throw DimensionError("eigendecompose_sym needs a square matrix");
  const Matrix sym = 0.5 * (c + c.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("symmetric eigendecomposition failed");
  EigenPair out{solver.eigenvectors(), solver.eigenvalues()};
  for (Eigen::Index j = 0; j < out.vectors.cols(); ++j) {
    auto col = out.vectors.col(j);
    const double thresh = 1e-12 * col.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (std::abs(col(i)) > thresh) {
        if (col(i) < 0.0)
          col = -col;
        break;
      }
    }
  }
  return out;
}

inline EigenPair eigendecompose_sym(const ScalarProductMatrix &c) {
  return eigendecompose_sym(c.values);
}

struct ConstraintLineSolution {
  Vector b;
  double t = 0.0;
};

// Solves argmin ||b - lambda|| along b(t) = (1-t)*lambda + t*(1/kappa)*1,
// subject to b(i) >= 0 for all i (sphere), or b(1) <= 0 and b(i) >= 0 for
// i > 1 (hyperboloid). Both line endpoints satisfy U^2 b = (1/kappa)1, so
// every point on the line does too. Returns the feasible t < 1 of smallest
// magnitude.
inline ConstraintLineSolution solve_constraint_line(const Vector &lambda,
                                                    Curvature k) {
  if (k.flat())
    throw DomainError("constraint line is only defined for curved manifolds");
  const double target = k.signed_radius2();
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    const double sign = (k.hyperbolic() && i == 0) ? -1.0 : 1.0;
    // sign * (lambda_i + t * g_i) >= 0
    const double g = target - lambda(i);
    const double a = sign * g;
    const double c = -sign * lambda(i);
    if (a > 0.0)
      lo = std::max(lo, c / a);
    else if (a < 0.0)
      hi = std::min(hi, c / a);
    else if (c > 0.0)
      lo = std::numeric_limits<double>::infinity();
  }
  // From t = 1 on the data term (1-t)*lambda has vanished or flipped sign;
  // such points fit nothing.
  hi = std::min(hi, std::nextafter(1.0, 0.0));
  if (lo > hi) {
    std::string msg = "constraint line misses the feasible set";
    if (k.hyperbolic() && lambda.size() > 1)
      msg += " (lambda_2 = " + std::to_string(lambda(1)) +
             ", 1/kappa = " + std::to_string(target) + ")";
    throw InfeasibleEmbedding(msg);
  }
  const double t = std::clamp(0.0, lo, hi);
  ConstraintLineSolution sol;
  sol.t = t;
  sol.b = (1.0 - t) * lambda + Vector::Constant(lambda.size(), t * target);
  // Round-off at the active constraint.
  for (Eigen::Index i = 0; i < sol.b.size(); ++i) {
    if (k.hyperbolic() && i == 0)
      sol.b(i) = std::min(sol.b(i), 0.0);
    else
      sol.b(i) = std::max(sol.b(i), 0.0);
  }
  return sol;
}

namespace detail {

// Indices of the `count` largest entries of v over [first, v.size()),
// descending, ties resolved by lower index.
inline std::vector<Eigen::Index> largest_indices(const Vector &v,
                                                 Eigen::Index first,
                                                 Eigen::Index count) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(v.size() - first));
  std::iota(idx.begin(), idx.end(), first);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return v(a) > v(b); });
  idx.resize(static_cast<std::size_t>(count));
  return idx;
}

inline void check_dimension(int d, Eigen::Index needed, Eigen::Index n) {
  if (d < 1)
    throw DimensionError("embedding dimension must be positive");
  if (needed > n)
    throw DimensionError("embedding needs " + std::to_string(needed) +
                         " components but only " + std::to_string(n) +
                         " points are available");
}

inline double max_membership_violation(const Matrix &x, Curvature k) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Vector xi = x.row(i).transpose();
    worst = std::max(worst, std::abs(scalar_product(xi, xi, k) -
                                     k.signed_radius2()) *
                                std::abs(k.kappa()));
  }
  return worst;
}

} // namespace detail

// Frobenius norm of rho_kappa(X,X) - D.
inline double distortion(const Configuration &X, const DissimilarityMatrix &D) {
  if (X.size() != D.size())
    throw DimensionError("configuration and dissimilarity sizes differ");
  return (pairwise_distances(X) - D.values()).norm();
}

// Classical MDS: X = U_d Lambda_d^(1/2) over the d largest eigenvalues, with
// negative eigenvalues clamped to zero.
inline EmbeddingSolution embed_euclidean(const DissimilarityMatrix &D, int d) {
  detail::check_dimension(d, d, D.size());
  const Curvature k{0.0};
  const EigenPair eig = eigendecompose_sym(scalar_product_matrix(D, k));
  const auto keep = detail::largest_indices(eig.values, 0, d);
  Matrix x(D.size(), d);
  for (int j = 0; j < d; ++j) {
    const Eigen::Index c = keep[static_cast<std::size_t>(j)];
    x.col(j) = eig.vectors.col(c) * std::sqrt(std::max(0.0, eig.values(c)));
  }
  EmbeddingSolution sol;
  sol.X = Configuration{std::move(x), k};
  sol.dimension = d;
  sol.b = eig.values.cwiseMax(0.0);
  sol.distortion = distortion(sol.X, D);
  return sol;
}

namespace detail {

inline EmbeddingSolution embed_curved_from_eigen(const EigenPair &eig,
                                                 Curvature k, int d) {
  const auto n = eig.values.size();
  check_dimension(d, d + 1, n);
  const ConstraintLineSolution line = solve_constraint_line(eig.values, k);

  std::vector<Eigen::Index> keep;
  if (k.spherical()) {
    keep = largest_indices(line.b, 0, d + 1);
  } else {
    keep = largest_indices(line.b, 1, d);
    keep.insert(keep.begin(), 0);
  }
  Matrix x(n, d + 1);
  for (int j = 0; j <= d; ++j) {
    const Eigen::Index c = keep[static_cast<std::size_t>(j)];
    x.col(j) = eig.vectors.col(c) * std::sqrt(std::abs(line.b(c)));
  }
  if (k.hyperbolic())
    x.col(0) = -x.col(0); // right-multiplication by I_kappa

  EmbeddingSolution sol;
  sol.constraint_violation = max_membership_violation(x, k);
  sol.X = make_configuration(std::move(x), k);
  sol.dimension = d;
  sol.b = line.b;
  sol.line_parameter = line.t;
  return sol;
}

} // namespace detail

// Spherical embedding: the diagonal problem with b >= 0 on the constraint
// line, keeping the d+1 largest components of b, X = U_{d+1} B_{d+1}^(1/2).
inline EmbeddingSolution embed_spherical(const DissimilarityMatrix &D,
                                         Curvature k, int d) {
  if (!k.spherical())
    throw DomainError("embed_spherical needs kappa > 0");
  EmbeddingSolution sol = detail::embed_curved_from_eigen(
      eigendecompose_sym(scalar_product_matrix(D, k)), k, d);
  sol.distortion = distortion(sol.X, D);
  return sol;
}

// Hyperbolic embedding: b(1) <= 0, b(i) >= 0 otherwise; keeps b(1) and the d
// largest remaining components, X = U_{d+1} |B_{d+1}|^(1/2) I_kappa.
// Throws InfeasibleEmbedding when the constraint line misses the feasible
// set (lambda_2 <= 1/kappa).
inline EmbeddingSolution embed_hyperbolic(const DissimilarityMatrix &D,
                                          Curvature k, int d) {
  if (!k.hyperbolic())
    throw DomainError("embed_hyperbolic needs kappa < 0");
  EmbeddingSolution sol = detail::embed_curved_from_eigen(
      eigendecompose_sym(scalar_product_matrix(D, k)), k, d);
  sol.distortion = distortion(sol.X, D);
  return sol;
}

// Same as above starting from a scalar-product matrix; no distortion is
// computed since no distances are attached.
inline EmbeddingSolution embed_hyperbolic(const ScalarProductMatrix &C, int d) {
  if (!C.curvature.hyperbolic())
    throw DomainError("embed_hyperbolic needs kappa < 0");
  return detail::embed_curved_from_eigen(eigendecompose_sym(C), C.curvature,
                                         d);
}

inline EmbeddingSolution embed(const DissimilarityMatrix &D, Curvature k,
                               int d) {
  switch (k.geometry()) {
  case Geometry::euclidean:
    return embed_euclidean(D, d);
  case Geometry::spherical:
    return embed_spherical(D, k, d);
  case Geometry::hyperbolic:
    return embed_hyperbolic(D, k, d);
  }
  throw DomainError("unknown geometry");
}

struct SweepPoint {
  double kappa = 0.0;
  // +inf when the embedding at this curvature is not available.
  double distortion = std::numeric_limits<double>::infinity();
  std::string note;

  bool feasible() const { return std::isfinite(distortion); }
};

struct SweepResult {
  Curvature best;
  std::vector<SweepPoint> curve;
};

// Embeds D at every grid curvature and returns the distortion curve and its
// argmin. Grid points whose embedding fails (sphere too small for D,
// hyperbolic infeasibility) are kept in the curve with infinite distortion.
inline SweepResult curvature_sweep(const DissimilarityMatrix &D,
                                   const std::vector<double> &grid, int d) {
  if (grid.empty())
    throw DomainError("curvature grid is empty");
  SweepResult res;
  res.curve.reserve(grid.size());
  std::optional<std::size_t> best;
  for (double kappa : grid) {
    SweepPoint p;
    p.kappa = kappa;
    try {
      p.distortion = embed(D, Curvature{kappa}, d).distortion;
    } catch (const InfeasibleEmbedding &e) {
      p.note = e.what();
    } catch (const DomainError &e) {
      p.note = e.what();
    }
    res.curve.push_back(std::move(p));
    const std::size_t i = res.curve.size() - 1;
    if (res.curve[i].feasible() &&
        (!best || res.curve[i].distortion < res.curve[*best].distortion))
      best = i;
  }
  if (!best)
    throw InfeasibleEmbedding("no grid curvature admits an embedding");
  res.best = Curvature{res.curve[*best].kappa};
  return res;
}

// Largest curvature whose sphere can still represent distance `max_distance`.
inline double max_spherical_curvature(double max_distance) {
  if (!(max_distance > 0.0))
    return std::numeric_limits<double>::infinity();
  const double q = std::numbers::pi / max_distance;
  return q * q;
}

// `per_side` log-spaced negative curvatures with magnitudes in
// [min_ratio*kappa_ref, kappa_ref], zero, and `per_side` log-spaced positive
// curvatures over the same range capped at the sphere-representability bound
// for max_distance. Ascending.
inline std::vector<double> default_curvature_grid(double max_distance,
                                                  int per_side = 20,
                                                  double kappa_ref = 0.2,
                                                  double min_ratio = 1e-3) {
  auto logspace = [&](double top) {
    std::vector<double> v;
    const double lo = std::log(top * min_ratio);
    const double hi = std::log(top);
    for (int i = 0; i < per_side; ++i) {
      const double f = per_side == 1 ? 1.0 : double(i) / (per_side - 1);
      v.push_back(std::exp(lo + f * (hi - lo)));
    }
    v.front() = top * min_ratio;
    v.back() = top;
    return v;
  };
  std::vector<double> grid;
  if (per_side > 0) {
    for (double m : logspace(kappa_ref))
      grid.push_back(-m);
    std::reverse(grid.begin(), grid.end());
  }
  grid.push_back(0.0);
  if (per_side > 0) {
    const double top =
        std::min(kappa_ref, max_spherical_curvature(max_distance));
    for (double m : logspace(top))
      grid.push_back(m);
  }
  return grid;
}

} // namespace ccgraph
