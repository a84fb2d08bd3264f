#pragma once

// Constant-curvature geometry: Euclidean space (kappa = 0), the sphere of
// radius 1/sqrt(kappa) (kappa > 0) and the hyperboloid of "radius"
// 1/sqrt(-kappa) (kappa < 0). Curved manifolds live in ambient dimension
// d+1; the hyperboloid uses the pseudo-Euclidean product with the time-like
// coordinate first.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ccgraph/error.hpp"

namespace ccgraph {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Relative tolerance used for manifold membership and for clamping the
// arccos/arccosh arguments.
inline constexpr double kMembershipTolerance = 1e-9;

enum class Geometry { euclidean, spherical, hyperbolic };

inline const char *to_string(Geometry g) {
  switch (g) {
  case Geometry::euclidean:
    return "euclidean";
  case Geometry::spherical:
    return "spherical";
  case Geometry::hyperbolic:
    return "hyperbolic";
  }
  return "?";
}

class Curvature {
public:
  constexpr Curvature() = default;
  explicit Curvature(double kappa) : kappa_(kappa) {
    if (!std::isfinite(kappa))
      throw DomainError("curvature must be finite");
  }

  double kappa() const { return kappa_; }
  Geometry geometry() const {
    if (kappa_ > 0.0)
      return Geometry::spherical;
    if (kappa_ < 0.0)
      return Geometry::hyperbolic;
    return Geometry::euclidean;
  }
  bool flat() const { return kappa_ == 0.0; }
  bool spherical() const { return kappa_ > 0.0; }
  bool hyperbolic() const { return kappa_ < 0.0; }

  // r = 1/sqrt(|kappa|); infinite for the flat case.
  double radius() const {
    return flat() ? std::numeric_limits<double>::infinity()
                  : 1.0 / std::sqrt(std::abs(kappa_));
  }
  // Signed squared radius, the value of <x,x> on the manifold: r^2 on the
  // sphere, -r^2 on the hyperboloid.
  double signed_radius2() const { return 1.0 / kappa_; }

  friend bool operator==(Curvature, Curvature) = default;

private:
  double kappa_ = 0.0;
};

// N points sharing one curvature, stored row-wise.
struct Configuration {
  Matrix points;
  Curvature curvature;

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index ambient_dim() const { return points.cols(); }
  Vector point(Eigen::Index i) const { return points.row(i).transpose(); }
};

namespace detail {

inline void check_same_length(const Vector &x, const Vector &y) {
  if (x.size() != y.size())
    throw DimensionError("vector lengths differ: " + std::to_string(x.size()) +
                         " vs " + std::to_string(y.size()));
}

inline void check_ambient(const Vector &x, Curvature k) {
  if (!k.flat() && x.size() < 2)
    throw DimensionError("curved manifolds need ambient dimension >= 2");
}

} // namespace detail

// <x,y> for kappa >= 0; sum_{i>=2} x(i)y(i) - x(1)y(1) for kappa < 0.
inline double scalar_product(const Vector &x, const Vector &y, Curvature k) {
  detail::check_same_length(x, y);
  if (!k.hyperbolic())
    return x.dot(y);
  detail::check_ambient(x, k);
  const auto n = x.size();
  return x.tail(n - 1).dot(y.tail(n - 1)) - x(0) * y(0);
}

inline bool on_manifold(const Vector &x, Curvature k,
                        double tol = kMembershipTolerance) {
  if (k.flat())
    return x.allFinite();
  if (x.size() < 2 || !x.allFinite())
    return false;
  const double r2 = k.signed_radius2();
  const double self = scalar_product(x, x, k);
  if (std::abs(self - r2) > tol * std::abs(r2))
    return false;
  return !k.hyperbolic() || x(0) > 0.0;
}

inline double geodesic_distance(const Vector &x, const Vector &y, Curvature k) {
  detail::check_same_length(x, y);
  if (k.flat())
    return (x - y).norm();
  detail::check_ambient(x, k);

  const double r = k.radius();
  const double c = scalar_product(x, y, k) / k.signed_radius2();
  // c is the cosine (sphere) or hyperbolic cosine of the angle d/r.
  if (k.spherical()) {
    if (c > 1.0 + kMembershipTolerance || c < -1.0 - kMembershipTolerance)
      throw DomainError("arccos argument out of range; points off the sphere");
    // Chord form 2r*asin(|x-y|/2r), identical to r*acos(c) on the sphere
    // but well conditioned for nearby points.
    const double chord = (x - y).norm();
    return 2.0 * r * std::asin(std::min(1.0, chord / (2.0 * r)));
  }
  if (c < 1.0 - kMembershipTolerance)
    throw DomainError(
        "arccosh argument below 1; points off the hyperboloid");
  const Vector diff = x - y;
  const double s2 = std::max(0.0, scalar_product(diff, diff, k));
  return 2.0 * r * std::asinh(std::sqrt(s2) / (2.0 * r));
}

// Nearest point on the manifold: rescale onto the sphere, or keep the
// space-like coordinates and recompute the time-like one on the hyperboloid.
// The flat case is the identity.
inline Vector project_to_manifold(const Vector &v, Curvature k) {
  if (k.flat())
    return v;
  detail::check_ambient(v, k);
  const double r = k.radius();
  Vector out = v;
  if (k.spherical()) {
    const double n = v.norm();
    if (!(n > 0.0))
      throw DomainError("cannot project the zero vector onto a sphere");
    out *= r / n;
    return out;
  }
  const auto tail = v.tail(v.size() - 1);
  out(0) = std::sqrt(r * r + tail.squaredNorm());
  return out;
}

inline Configuration make_configuration(Matrix points, Curvature k) {
  Configuration c{std::move(points), k};
  if (!k.flat())
    for (Eigen::Index i = 0; i < c.points.rows(); ++i)
      c.points.row(i) = project_to_manifold(c.point(i), k).transpose();
  return c;
}

// Norm of a tangent vector under the manifold's metric.
inline double tangent_norm(const Vector &v, Curvature k) {
  if (!k.hyperbolic())
    return v.norm();
  return std::sqrt(std::max(0.0, scalar_product(v, v, k)));
}

inline Vector exp_map(const Vector &base, const Vector &tangent, Curvature k) {
  detail::check_same_length(base, tangent);
  if (k.flat())
    return base + tangent;
  detail::check_ambient(base, k);

  const double r = k.radius();
  const double normal = scalar_product(base, tangent, k);
  // Relative to r as well as |v|: log maps of nearby points are formed by
  // cancellation and carry a normal residue of order eps * r * |base|.
  if (std::abs(normal) > 1e-8 * base.norm() * std::max(tangent.norm(), r))
    throw DomainError("tangent vector is not orthogonal to the base point");

  // Remove the residual normal component before mapping.
  const Vector v = tangent - (normal / k.signed_radius2()) * base;
  const double n = tangent_norm(v, k);
  if (n == 0.0)
    return base;
  const double theta = n / r;
  Vector out = k.spherical()
                   ? Vector(std::cos(theta) * base + (r * std::sin(theta) / n) * v)
                   : Vector(std::cosh(theta) * base +
                            (r * std::sinh(theta) / n) * v);
  return project_to_manifold(out, k);
}

inline Vector log_map(const Vector &base, const Vector &target, Curvature k) {
  detail::check_same_length(base, target);
  if (k.flat())
    return target - base;
  detail::check_ambient(base, k);

  const double r = k.radius();
  const double d = geodesic_distance(base, target, k);
  if (k.spherical() && std::numbers::pi * r - d <= 1e-9 * r)
    throw DomainError("log map undefined for antipodal points");
  const double c = scalar_product(base, target, k) / k.signed_radius2();
  const Vector u = target - c * base;
  const double n = tangent_norm(u, k);
  if (n == 0.0 || d == 0.0)
    return Vector::Zero(base.size());
  return (d / n) * u;
}

inline Matrix pairwise_distances(const Configuration &x) {
  const auto n = x.size();
  Matrix d = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector xi = x.point(i);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      d(i, j) = d(j, i) = geodesic_distance(xi, x.point(j), x.curvature);
    }
  }
  return d;
}

struct FrechetOptions {
  // Tolerance on the norm of the averaged log map, in units of
  // max(1, radius).
  double tolerance = 1e-9;
  int max_iterations = 1000;
};

// Sample Frechet (Karcher) mean: the minimiser of the sum of squared geodesic
// distances, computed by Riemannian gradient descent
//   m <- exp_m( (1/n) sum_i log_m(x_i) )
// started at the projected Euclidean average. On the sphere the points must
// lie in an open hemisphere for the mean to be unique.
inline Vector frechet_mean(const Matrix &points, Curvature k,
                           const FrechetOptions &opts = {}) {
  if (points.rows() == 0)
    throw DomainError("frechet_mean of an empty sample");
  const Vector avg = points.colwise().mean().transpose();
  if (k.flat())
    return avg;
  if (k.spherical() && avg.norm() <= 1e-12 * k.radius())
    throw ConvergenceError(
        "sample has no unique spherical mean (Euclidean average is zero)");

  const double tol = opts.tolerance * std::max(1.0, k.radius());
  Vector m = project_to_manifold(avg, k);
  const double inv_n = 1.0 / static_cast<double>(points.rows());
  for (int it = 0; it < opts.max_iterations; ++it) {
    Vector step = Vector::Zero(m.size());
    for (Eigen::Index i = 0; i < points.rows(); ++i)
      step += log_map(m, points.row(i).transpose(), k);
    step *= inv_n;
    if (tangent_norm(step, k) <= tol)
      return m;
    m = exp_map(m, step, k);
  }
  throw ConvergenceError("frechet_mean did not converge in " +
                         std::to_string(opts.max_iterations) + " iterations");
}

inline Vector frechet_mean(std::span<const Vector> points, Curvature k,
                           const FrechetOptions &opts = {}) {
  if (points.empty())
    throw DomainError("frechet_mean of an empty sample");
  Matrix m(static_cast<Eigen::Index>(points.size()), points.front().size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    detail::check_same_length(points.front(), points[i]);
    m.row(static_cast<Eigen::Index>(i)) = points[i].transpose();
  }
  return frechet_mean(m, k, opts);
}

// Objective minimised by the Frechet mean.
inline double frechet_objective(const Vector &candidate, const Matrix &points,
                                Curvature k) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const double d = geodesic_distance(candidate, points.row(i).transpose(), k);
    sum += d * d;
  }
  return sum;
}

} // namespace ccgraph
