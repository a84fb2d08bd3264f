#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "support.hpp"

using namespace ccgraph;
using ccgraph::testing::random_configuration;

namespace {

Vector distances_to(const Configuration &x, const Vector &p) {
  Vector y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    y(i) = geodesic_distance(p, x.point(i), x.curvature);
  return y;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

TEST(KCentres, AllPointsWhenMEqualsN) {
  Rng rng(1);
  const auto x = random_configuration(rng, Curvature{0.0}, 6, 2);
  const auto r = select_prototypes_kcentres(x, 6, 9);
  EXPECT_EQ(r.centres.size(), 6u);
  EXPECT_EQ(r.cover_radius, 0.0);
}

TEST(KCentres, SquareCorner) {
  Matrix sq(4, 2);
  sq << 0, 0, 1, 0, 1, 1, 0, 1;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto r = select_prototypes_kcentres(Configuration{sq, Curvature{0.0}}, 1, seed);
    ASSERT_EQ(r.centres.size(), 1u);
    EXPECT_NEAR(r.cover_radius, std::sqrt(2.0), 1e-15);
  }
}

TEST(KCentres, Errors) {
  const Matrix d = Matrix::Zero(3, 3);
  EXPECT_THROW(select_prototypes_kcentres(d, 4, 0), DimensionError);
  EXPECT_THROW(select_prototypes_kcentres(d, 0, 0), DimensionError);
  EXPECT_THROW(select_prototypes_kcentres(Matrix::Zero(3, 2), 1, 0),
               DimensionError);
}

TEST(KCentres, Deterministic) {
  Rng rng(2);
  const auto x = random_configuration(rng, Curvature{-0.5}, 40, 3);
  const auto a = select_prototypes_kcentres(x, 7, 123);
  const auto b = select_prototypes_kcentres(x, 7, 123);
  EXPECT_EQ(a.centres, b.centres);
  EXPECT_EQ(a.cover_radius, b.cover_radius);
}

TEST(KCentresProperty, WithinTwiceTheOptimum) {
  Rng rng(3);
  int exact = 0;
  for (int i = 0; i < 200; ++i) {
    const auto x = random_configuration(rng, Curvature{0.0}, 8, 2);
    const Matrix d = pairwise_distances(x);
    const auto r = select_prototypes_kcentres(d, 2, static_cast<std::uint64_t>(i));
    std::vector<Eigen::Index> sorted = r.centres;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
    const double opt = oracle::kcentres2_brute_force(d);
    EXPECT_GE(r.cover_radius, opt - 1e-12);
    EXPECT_LE(r.cover_radius, 2.0 * opt + 1e-12);
    exact += std::abs(r.cover_radius - opt) <= 1e-9;
  }
  // The reassignment pass usually reaches the optimum on 8 points.
  EXPECT_GE(exact, 100);
}

TEST(DissimilarityRepresentation, Basics) {
  Rng rng(4);
  std::vector<AttributedGraph> protos;
  for (int i = 0; i < 3; ++i)
    protos.push_back(ccgraph::testing::random_graph(rng, 4, 0.5));
  const GedDistance ged{};
  const Vector y0 = dissimilarity_representation(protos[0], protos, ged);
  EXPECT_EQ(y0(0), 0.0);
  EXPECT_GE(y0.minCoeff(), 0.0);
  const auto permuted =
      permute_nodes(protos[1], ccgraph::testing::random_permutation(rng, 4));
  EXPECT_NEAR(dissimilarity_representation(permuted, protos, ged)(1), 0.0, 1e-9);
  auto bad = [](const AttributedGraph &, const AttributedGraph &) { return -1.0; };
  EXPECT_THROW(dissimilarity_representation(protos[0], protos, bad), DomainError);
}

TEST(OutOfSample, CollapsedPrototypes) {
  for (double kappa : {0.0, 1.0, -1.0}) {
    const Curvature k{kappa};
    Rng rng(5);
    const Vector p = ccgraph::testing::random_point(rng, k, 2);
    Matrix pts(4, p.size());
    for (int i = 0; i < 4; ++i)
      pts.row(i) = p.transpose();
    const Vector x = embed_out_of_sample(Vector::Zero(4), Configuration{pts, k});
    EXPECT_LE((x - p).norm(), 1e-6) << "kappa " << kappa;
  }
}

TEST(OutOfSample, Errors) {
  const Configuration xr{Matrix::Identity(3, 3), Curvature{1.0}};
  EXPECT_THROW(embed_out_of_sample(Vector::Zero(2), xr), DimensionError);
  Vector far(3);
  far << 1.0, 4.0, 1.0;
  EXPECT_THROW(embed_out_of_sample(far, xr), DomainError);
  EXPECT_THROW(embed_out_of_sample(Vector::Zero(0),
                                   Configuration{Matrix(0, 3), Curvature{1.0}}),
               DimensionError);
}

// ---- properties ----

class OosProperty : public ::testing::TestWithParam<double> {};

TEST_P(OosProperty, ExactCaseResidual) {
  const Curvature k{GetParam()};
  Rng rng(mix_seed(6, static_cast<std::uint64_t>(std::abs(GetParam()) * 100)));
  for (int i = 0; i < 100; ++i) {
    const auto xr = random_configuration(rng, k, 10, 3);
    const Vector p = ccgraph::testing::random_point(rng, k, 3);
    const auto res = embed_out_of_sample_detailed(distances_to(xr, p), xr);
    EXPECT_LE(res.residual, 1e-6);
    EXPECT_LE(geodesic_distance(res.point, p, k), 1e-6);
    EXPECT_TRUE(on_manifold(res.point, k));
  }
}

TEST_P(OosProperty, PrototypeFixedPoints) {
  const Curvature k{GetParam()};
  Rng rng(mix_seed(7, static_cast<std::uint64_t>(std::abs(GetParam()) * 100)));
  int cases = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const auto x = random_configuration(rng, k, 12, 3);
    const auto sol = embed(DissimilarityMatrix(pairwise_distances(x)), k, 3);
    const auto centres = select_prototypes_kcentres(sol.X, 5, 1).centres;
    Matrix pos(5, sol.X.ambient_dim());
    for (int m = 0; m < 5; ++m)
      pos.row(m) = sol.X.points.row(centres[static_cast<std::size_t>(m)]);
    const Configuration xr{pos, k};
    for (int m = 0; m < 5; ++m, ++cases) {
      const Vector y = distances_to(xr, xr.point(m));
      EXPECT_LE(geodesic_distance(embed_out_of_sample(y, xr), xr.point(m), k),
                1e-6);
    }
  }
  EXPECT_GE(cases, 100);
}

TEST_P(OosProperty, InSampleConsistency) {
  // Distances of d-dimensional configurations with 0.2-2% multiplicative
  // noise: the out-of-sample image of a training row lands at least as close
  // to its training position as the embedding reproduces a typical pair.
  const Curvature k{GetParam()};
  Rng rng(mix_seed(8, static_cast<std::uint64_t>(std::abs(GetParam()) * 100)));
  const double cap = k.spherical() ? 3.1 * k.radius() : INFINITY;
  int runs = 0;
  for (int trial = 0; runs < 100 && trial < 2000; ++trial) {
    const auto x = random_configuration(rng, k, 30, 3);
    const double level = uniform(rng, 0.002, 0.02);
    Matrix d = pairwise_distances(x);
    for (Eigen::Index i = 0; i < d.rows(); ++i)
      for (Eigen::Index j = i + 1; j < d.cols(); ++j)
        d(i, j) = d(j, i) =
            std::clamp(d(i, j) * (1.0 + level * normal01(rng)), 0.0, cap);
    EmbeddingSolution sol;
    try {
      sol = embed(DissimilarityMatrix(d), k, 3);
    } catch (const InfeasibleEmbedding &) {
      continue;
    }
    ++runs;
    const Matrix emb = pairwise_distances(sol.X);
    std::vector<double> pair_err, oos_err;
    for (Eigen::Index i = 0; i < d.rows(); ++i)
      for (Eigen::Index j = i + 1; j < d.cols(); ++j)
        pair_err.push_back(std::abs(emb(i, j) - d(i, j)));
    OosOptions opts;
    opts.line_parameter = sol.line_parameter;
    for (Eigen::Index n = 0; n < d.rows(); ++n) {
      const Vector y = d.row(n).transpose();
      oos_err.push_back(geodesic_distance(embed_out_of_sample(y, sol.X, d, opts),
                                          sol.X.point(n), k));
    }
    EXPECT_LE(median(oos_err), median(pair_err)) << "trial " << trial;
  }
  EXPECT_EQ(runs, 100);
}

INSTANTIATE_TEST_SUITE_P(Geometries, OosProperty,
                         ::testing::Values(0.0, 1.0, 0.2, -1.0, -0.2));
