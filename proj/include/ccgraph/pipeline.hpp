#pragma once

// Experiment harness: training of the five detectors (graph domain, three
// manifold embeddings, dissimilarity representation), operational
// streaming, distortion sweeps and the on-disk distance cache.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "ccgraph/dataset.hpp"
#include "ccgraph/detection.hpp"
#include "ccgraph/embedding.hpp"
#include "ccgraph/error.hpp"
#include "ccgraph/graph.hpp"
#include "ccgraph/manifold.hpp"
#include "ccgraph/oos.hpp"
#include "ccgraph/random.hpp"

namespace ccgraph {

enum class Method { graph_domain, euclidean, spherical, hyperbolic, dissimilarity };

inline const char *to_string(Method m) {
  switch (m) {
  case Method::graph_domain:
    return "graph_domain";
  case Method::euclidean:
    return "euclidean";
  case Method::spherical:
    return "spherical";
  case Method::hyperbolic:
    return "hyperbolic";
  case Method::dissimilarity:
    return "dissimilarity";
  }
  return "?";
}

inline Method method_from_string(const std::string &s) {
  for (Method m : {Method::graph_domain, Method::euclidean, Method::spherical,
                   Method::hyperbolic, Method::dissimilarity})
    if (s == to_string(m))
      return m;
  throw DomainError("unknown method '" + s + "'");
}

inline bool uses_manifold(Method m) {
  return m == Method::euclidean || m == Method::spherical ||
         m == Method::hyperbolic;
}

inline ThresholdMode threshold_mode_from_string(const std::string &s) {
  if (s == "run_length")
    return ThresholdMode::run_length;
  if (s == "conditional")
    return ThresholdMode::conditional;
  throw DomainError("unknown threshold mode '" + s + "'");
}

struct ExperimentConfig {
  Method method = Method::hyperbolic;
  int difficulty = 4;
  int prototypes = 30; // M
  int dimension = 15;  // d; ignored by graph_domain and dissimilarity
  int n_embed_train = 300;
  int n_detect_train = 600; // N
  int n_operational = 0;    // 0 means 2N
  double alpha = 0.99;
  int sequences = 100;
  std::uint64_t seed = 1;
  EditCostParams costs;

  // Delaunay classes
  int n_points = 10;
  double support_box = 10.0;
  double base_radius = 10.0;
  double noise_radius = 0.5;

  // Curvature: an explicit grid, or the default grid built from these.
  std::vector<double> curvature_grid;
  int grid_per_side = 20;
  double kappa_ref = 0.2;
  double kappa_min_ratio = 1e-3;
  // Fixed curvature instead of the sweep (NaN: learn it).
  double kappa = std::numeric_limits<double>::quiet_NaN();

  ThresholdMode threshold_mode = ThresholdMode::run_length;
  int bootstrap = 2000;
  unsigned threads = 1;

  int operational_length() const {
    return n_operational > 0 ? n_operational : 2 * n_detect_train;
  }
  int change_time() const { return operational_length() / 2; }

  DelaunayClassSpec class_spec(int class_id) const {
    DelaunayClassSpec s;
    s.class_id = class_id;
    s.n_points = n_points;
    s.support_box = support_box;
    s.base_radius = base_radius;
    s.noise_radius = noise_radius;
    s.seed = seed;
    return s;
  }

  void validate() const {
    if (difficulty < 0)
      throw DomainError("difficulty must be a nonnegative class id");
    if (n_embed_train < 2 || n_detect_train < 20 || sequences < 1 ||
        operational_length() < 2 || bootstrap < 1)
      throw DomainError("sample sizes must be positive (N >= 20)");
    if (!(alpha > 0.0 && alpha < 1.0))
      throw DomainError("alpha must lie in (0, 1)");
    if (method != Method::graph_domain &&
        (prototypes < 1 || prototypes > n_embed_train))
      throw DomainError("prototype count must be in [1, n_embed_train]");
    if (uses_manifold(method)) {
      if (dimension < 1)
        throw DomainError("manifold dimension must be positive");
      const int needed = method == Method::euclidean ? dimension : dimension + 1;
      if (needed > n_embed_train)
        throw DomainError("dimension too large for the embedding sample");
    }
    costs.validate();
    class_spec(difficulty).validate();
  }
};

// ---- small utilities ----

namespace detail {

// Runs f(i) for i in [0, n) on up to `threads` workers. The first failure
// by index is rethrown after all workers finish.
template <class F> void parallel_for(std::size_t n, unsigned threads, F &&f) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned count = std::min<std::size_t>(threads, n);
  for (unsigned t = 0; t < count; ++t)
    pool.emplace_back(worker);
  for (auto &t : pool)
    t.join();
  for (auto &e : errors)
    if (e)
      std::rethrow_exception(e);
}

inline std::uint64_t fnv1a(const std::string &s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

} // namespace detail

inline Matrix parallel_pairwise_ged(const std::vector<AttributedGraph> &graphs,
                           const EditCostParams &costs, unsigned threads) {
  const auto n = static_cast<Eigen::Index>(graphs.size());
  Matrix d = Matrix::Zero(n, n);
  detail::parallel_for(graphs.size(), threads, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < graphs.size(); ++j)
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          graph_edit_distance(graphs[i], graphs[j], costs);
  });
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      d(j, i) = d(i, j);
  return d;
}

// ---- distance cache ----

// GED matrices keyed by a descriptor of everything they depend on. The
// directory comes from CCGRAPH_CACHE_DIR; without it nothing is cached.
class DistanceCache {
public:
  explicit DistanceCache(std::string dir = {}) : dir_(std::move(dir)) {}

  static DistanceCache from_environment() {
    const char *env = std::getenv("CCGRAPH_CACHE_DIR");
    return DistanceCache(env ? env : "");
  }

  bool enabled() const { return !dir_.empty(); }

  std::optional<Matrix> load(const std::string &key) const {
    if (!enabled())
      return std::nullopt;
    std::ifstream in(path(key), std::ios::binary);
    if (!in)
      return std::nullopt;
    std::string stored;
    std::getline(in, stored);
    if (stored != key)
      return std::nullopt;
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char *>(&n), sizeof n);
    if (!in || n > (1u << 16))
      return std::nullopt;
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    in.read(reinterpret_cast<char *>(m.data()),
            static_cast<std::streamsize>(sizeof(double) * n * n));
    if (!in)
      return std::nullopt;
    return m;
  }

  void store(const std::string &key, const Matrix &m) const {
    if (!enabled())
      return;
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    const std::string final_path = path(key);
    const std::string tmp = final_path + ".tmp" +
                            std::to_string(detail::fnv1a(key + std::to_string(
                                reinterpret_cast<std::uintptr_t>(&m))));
    {
      std::ofstream out(tmp, std::ios::binary);
      if (!out)
        return; // cache is best effort
      out << key << '\n';
      const std::uint64_t n = static_cast<std::uint64_t>(m.rows());
      out.write(reinterpret_cast<const char *>(&n), sizeof n);
      out.write(reinterpret_cast<const char *>(m.data()),
                static_cast<std::streamsize>(sizeof(double) * n * n));
      if (!out)
        return;
    }
    std::filesystem::rename(tmp, final_path, ec);
  }

private:
  std::string path(const std::string &key) const {
    char name[40];
    std::snprintf(name, sizeof name, "ged_%016llx.bin",
                  static_cast<unsigned long long>(detail::fnv1a(key)));
    return (std::filesystem::path(dir_) / name).string();
  }

  std::string dir_;
};

// ---- training data of one sequence ----

struct SequenceData {
  std::vector<AttributedGraph> embed_train;
  std::vector<AttributedGraph> detect_train;
  std::vector<AttributedGraph> operational; // nominal, then changed
  std::size_t change_time = 0;
};

// Independent random streams per purpose, so the nominal part of a
// sequence does not depend on the difficulty or the method.
inline SequenceData generate_sequence(const ExperimentConfig &cfg,
                                      std::size_t sequence) {
  const DelaunayClass nominal(cfg.class_spec(0));
  const DelaunayClass changed(cfg.class_spec(cfg.difficulty));
  const auto s = static_cast<std::uint64_t>(sequence);
  SequenceData d;
  Rng embed_rng(mix_seed(cfg.seed, s, 1));
  Rng detect_rng(mix_seed(cfg.seed, s, 2));
  Rng nominal_rng(mix_seed(cfg.seed, s, 3));
  Rng change_rng(mix_seed(mix_seed(cfg.seed, s, 4),
                          static_cast<std::uint64_t>(cfg.difficulty)));
  d.embed_train = draw_graphs(nominal, static_cast<std::size_t>(cfg.n_embed_train),
                              embed_rng);
  d.detect_train = draw_graphs(
      nominal, static_cast<std::size_t>(cfg.n_detect_train), detect_rng);
  d.change_time = static_cast<std::size_t>(cfg.change_time());
  d.operational = draw_graphs(nominal, d.change_time, nominal_rng);
  const auto after =
      draw_graphs(changed,
                  static_cast<std::size_t>(cfg.operational_length()) - d.change_time,
                  change_rng);
  d.operational.insert(d.operational.end(), after.begin(), after.end());
  return d;
}

inline std::string embed_cache_key(const ExperimentConfig &cfg,
                                   std::size_t sequence) {
  nlohmann::json j{{"kind", "embed_train_ged"},
                   {"seed", cfg.seed},
                   {"sequence", sequence},
                   {"class", to_json(cfg.class_spec(0))},
                   {"n", cfg.n_embed_train},
                   {"costs",
                    {cfg.costs.node_insert_delete, cfg.costs.edge_insert_delete,
                     cfg.costs.substitution_cap}}};
  return j.dump();
}

inline Matrix embed_train_distances(const ExperimentConfig &cfg,
                                    std::size_t sequence,
                                    const std::vector<AttributedGraph> &graphs,
                                    const DistanceCache &cache) {
  const std::string key = embed_cache_key(cfg, sequence);
  if (auto hit = cache.load(key))
    return *hit;
  Matrix d = parallel_pairwise_ged(graphs, cfg.costs, cfg.threads);
  cache.store(key, d);
  return d;
}

inline std::vector<double> curvature_grid(const ExperimentConfig &cfg,
                                          double max_distance) {
  if (!cfg.curvature_grid.empty()) {
    std::vector<double> g = cfg.curvature_grid;
    std::sort(g.begin(), g.end());
    return g;
  }
  return default_curvature_grid(max_distance, cfg.grid_per_side, cfg.kappa_ref,
                                cfg.kappa_min_ratio);
}

// ---- detector model ----

struct DetectorModel {
  Method method = Method::hyperbolic;
  EditCostParams costs;
  double alpha = 0.99;

  // manifold methods
  double kappa = 0.0;
  int dimension = 0;
  double training_distortion = std::numeric_limits<double>::quiet_NaN();
  // manifold and dissimilarity methods
  PrototypeSet<AttributedGraph> prototypes;
  double cover_radius = 0.0;

  // Mean of the training statistic's reference: Frechet mean on the
  // manifold, mean dissimilarity vector, or the graph set median.
  Vector mean_point;
  AttributedGraph mean_graph;

  CusumConfig cusum;
  double anomaly_threshold = std::numeric_limits<double>::infinity();
  std::vector<std::string> warnings;

  Curvature curvature() const { return Curvature{kappa}; }

  Vector representation(const AttributedGraph &g) const {
    return dissimilarity_representation(g, prototypes.graphs,
                                        GedDistance{costs});
  }

  // Graphs far from the nominal class can sit beyond the sphere's diameter
  // from some prototype; those entries are clamped to pi*r so the stream
  // keeps flowing (the point lands antipodal-ish, which still reads as far).
  Vector embed(const AttributedGraph &g) const {
    Vector y = representation(g);
    if (curvature().spherical())
      y = y.cwiseMin(std::numbers::pi * curvature().radius());
    return embed_out_of_sample(y, prototypes);
  }

  // e_t for one graph.
  double statistic(const AttributedGraph &g) const {
    switch (method) {
    case Method::graph_domain:
      return graph_edit_distance(mean_graph, g, costs);
    case Method::dissimilarity:
      return (representation(g) - mean_point).norm();
    default:
      return geodesic_distance(mean_point, embed(g), curvature());
    }
  }

  std::vector<double> statistics(const std::vector<AttributedGraph> &graphs,
                                 unsigned threads = 1) const {
    std::vector<double> e(graphs.size());
    detail::parallel_for(graphs.size(), threads,
                         [&](std::size_t i) { e[i] = statistic(graphs[i]); });
    return e;
  }
};

namespace detail {

template <class F> auto run_stage(const char *stage, F &&f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::exception &e) {
    throw Error(std::string("stage ") + stage + ": " + e.what());
  }
}

inline std::vector<double> side_of_grid(const std::vector<double> &grid,
                                        bool positive) {
  std::vector<double> out;
  for (double k : grid)
    if (positive ? k > 0.0 : k < 0.0)
      out.push_back(k);
  return out;
}

struct EmbeddingChoice {
  EmbeddingSolution solution;
  std::vector<std::string> warnings;
};

// Curvature for a manifold method: fixed, or the best point of its side of
// the grid. A fixed curvature that admits no embedding falls back to the
// nearest feasible grid point of the same sign.
inline EmbeddingChoice choose_embedding(const ExperimentConfig &cfg,
                                        const DissimilarityMatrix &D) {
  EmbeddingChoice out;
  if (cfg.method == Method::euclidean) {
    out.solution = embed_euclidean(D, cfg.dimension);
    return out;
  }
  const bool sphere = cfg.method == Method::spherical;
  const auto side = side_of_grid(curvature_grid(cfg, D.max()), sphere);
  if (!std::isnan(cfg.kappa)) {
    if (sphere ? !(cfg.kappa > 0.0) : !(cfg.kappa < 0.0))
      throw DomainError("fixed curvature has the wrong sign for the method");
    try {
      out.solution = embed(D, Curvature{cfg.kappa}, cfg.dimension);
      return out;
    } catch (const InfeasibleEmbedding &) {
    } catch (const DomainError &) {
    }
    std::vector<double> order = side;
    std::stable_sort(order.begin(), order.end(), [&](double a, double b) {
      return std::abs(a - cfg.kappa) < std::abs(b - cfg.kappa);
    });
    for (double k : order) {
      try {
        out.solution = embed(D, Curvature{k}, cfg.dimension);
        out.warnings.push_back("curvature " + std::to_string(cfg.kappa) +
                               " infeasible; fell back to " +
                               std::to_string(k));
        return out;
      } catch (const InfeasibleEmbedding &) {
      } catch (const DomainError &) {
      }
    }
    throw InfeasibleEmbedding("no feasible curvature near the fixed value");
  }
  if (side.empty())
    throw DomainError("curvature grid has no points for this method");
  const SweepResult sweep = curvature_sweep(D, side, cfg.dimension);
  out.solution = embed(D, sweep.best, cfg.dimension);
  return out;
}

} // namespace detail

// Trains the detector of cfg.method. `embed_distances` is the GED matrix of
// `embed_train` (unused by graph_domain).
inline DetectorModel train_detector(const ExperimentConfig &cfg,
                                    const std::vector<AttributedGraph> &embed_train,
                                    const Matrix &embed_distances,
                                    const std::vector<AttributedGraph> &detect_train,
                                    std::uint64_t seed) {
  DetectorModel model;
  model.method = cfg.method;
  model.costs = cfg.costs;
  model.alpha = cfg.alpha;

  if (cfg.method == Method::graph_domain) {
    model.mean_graph = detail::run_stage("mean", [&] {
      return detect_train[set_median_index(
          parallel_pairwise_ged(detect_train, cfg.costs, cfg.threads))];
    });
  } else {
    const DissimilarityMatrix D = detail::run_stage(
        "distances", [&] { return DissimilarityMatrix(embed_distances); });
    std::vector<Eigen::Index> centres;
    if (uses_manifold(cfg.method)) {
      auto choice = detail::run_stage(
          "embedding", [&] { return detail::choose_embedding(cfg, D); });
      const EmbeddingSolution &sol = choice.solution;
      model.warnings = std::move(choice.warnings);
      model.kappa = sol.curvature().kappa();
      model.dimension = sol.dimension;
      model.training_distortion = sol.distortion;
      const auto kc = detail::run_stage("prototypes", [&] {
        return select_prototypes_kcentres(sol.X, cfg.prototypes,
                                          mix_seed(seed, 5));
      });
      centres = kc.centres;
      model.cover_radius = kc.cover_radius;
      Matrix pos(static_cast<Eigen::Index>(centres.size()), sol.X.ambient_dim());
      for (std::size_t m = 0; m < centres.size(); ++m)
        pos.row(static_cast<Eigen::Index>(m)) = sol.X.points.row(centres[m]);
      model.prototypes.positions = Configuration{pos, sol.curvature()};
      model.prototypes.line_parameter = sol.line_parameter;
    } else {
      const auto kc = detail::run_stage("prototypes", [&] {
        return select_prototypes_kcentres(D.values(), cfg.prototypes,
                                          mix_seed(seed, 5));
      });
      centres = kc.centres;
      model.cover_radius = kc.cover_radius;
    }
    const auto m = static_cast<Eigen::Index>(centres.size());
    model.prototypes.distances.resize(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
      model.prototypes.graphs.push_back(
          embed_train[static_cast<std::size_t>(centres[static_cast<std::size_t>(a)])]);
      for (Eigen::Index b = 0; b < m; ++b)
        model.prototypes.distances(a, b) =
            D(centres[static_cast<std::size_t>(a)],
              centres[static_cast<std::size_t>(b)]);
    }

    model.mean_point = detail::run_stage("mean", [&] {
      std::vector<Vector> rows(detect_train.size());
      detail::parallel_for(detect_train.size(), cfg.threads, [&](std::size_t i) {
        rows[i] = uses_manifold(cfg.method)
                      ? model.embed(detect_train[i])
                      : model.representation(detect_train[i]);
      });
      Matrix pts(static_cast<Eigen::Index>(rows.size()), rows.front().size());
      for (std::size_t i = 0; i < rows.size(); ++i)
        pts.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
      if (cfg.method == Method::dissimilarity)
        return Vector(pts.colwise().mean().transpose());
      return frechet_mean(pts, model.curvature());
    });
  }

  detail::run_stage("calibration", [&] {
    const auto e = model.statistics(detect_train, cfg.threads);
    CalibrationOptions opts;
    opts.mode = cfg.threshold_mode;
    opts.bootstrap = cfg.bootstrap;
    opts.seed = mix_seed(seed, 6);
    model.cusum = calibrate(e, cfg.alpha, opts);
    model.anomaly_threshold = calibrate_anomaly_threshold(e, cfg.alpha);
    return 0;
  });
  return model;
}

// ---- experiment ----

struct SequenceResult {
  std::size_t sequence = 0;
  RunOutcome outcome;
  std::vector<std::size_t> alarms;
  double kappa = 0.0;
  double training_distortion = std::numeric_limits<double>::quiet_NaN();
  double q = 0.0;
  double h = 0.0;
  std::vector<std::string> warnings;
  double seconds = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<SequenceResult> runs;
  RunMetrics metrics;
  double seconds = 0.0;

  double mean_kappa() const {
    double s = 0.0;
    for (const auto &r : runs)
      s += r.kappa;
    return runs.empty() ? 0.0 : s / static_cast<double>(runs.size());
  }
};

inline SequenceResult run_sequence(const ExperimentConfig &cfg,
                                   std::size_t sequence,
                                   const DistanceCache &cache) {
  const auto t0 = std::chrono::steady_clock::now();
  const SequenceData data = detail::run_stage(
      "generation", [&] { return generate_sequence(cfg, sequence); });
  Matrix dist;
  if (cfg.method != Method::graph_domain)
    dist = detail::run_stage("distances", [&] {
      return embed_train_distances(cfg, sequence, data.embed_train, cache);
    });
  const std::uint64_t seed =
      mix_seed(cfg.seed, static_cast<std::uint64_t>(sequence), 0x7a11);
  const DetectorModel model =
      train_detector(cfg, data.embed_train, dist, data.detect_train, seed);

  SequenceResult r;
  r.sequence = sequence;
  r.kappa = model.kappa;
  r.training_distortion = model.training_distortion;
  r.q = model.cusum.q;
  r.h = model.cusum.h;
  r.warnings = model.warnings;
  detail::run_stage("operation", [&] {
    const auto e = model.statistics(data.operational, cfg.threads);
    r.alarms = detect_change(e, model.cusum);
    r.outcome = evaluate_run(r.alarms, data.change_time, e.size());
    return 0;
  });
  r.seconds = detail::seconds_since(t0);
  return r;
}

inline ExperimentReport run_pipeline(const ExperimentConfig &cfg,
                                     const DistanceCache &cache =
                                         DistanceCache::from_environment()) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.config = cfg;
  report.runs.resize(static_cast<std::size_t>(cfg.sequences));
  // Sequences run concurrently with single-threaded inner loops.
  ExperimentConfig inner = cfg;
  const unsigned outer = std::min<unsigned>(std::max(1u, cfg.threads),
                                            static_cast<unsigned>(cfg.sequences));
  if (outer > 1)
    inner.threads = 1;
  detail::parallel_for(report.runs.size(), outer, [&](std::size_t s) {
    report.runs[s] = run_sequence(inner, s, cache);
  });
  std::vector<RunOutcome> outcomes;
  for (const auto &r : report.runs)
    outcomes.push_back(r.outcome);
  report.metrics =
      compute_run_metrics(outcomes, cfg.bootstrap, mix_seed(cfg.seed, 7));
  report.seconds = detail::seconds_since(t0);
  return report;
}

// ---- distortion sweep ----

struct SweepReport {
  ExperimentConfig config;
  SweepResult sweep;
  double max_distance = 0.0;
};

// Distortion across the grid on the embedding sample of sequence 0.
inline SweepReport run_distortion_sweep(const ExperimentConfig &cfg,
                                        const DistanceCache &cache =
                                            DistanceCache::from_environment()) {
  if (cfg.n_embed_train < 2)
    throw DomainError("sweep needs at least two graphs");
  if (cfg.dimension < 1)
    throw DomainError("manifold dimension must be positive");
  const DelaunayClass nominal(cfg.class_spec(0));
  Rng rng(mix_seed(cfg.seed, 0, 1));
  const auto graphs = draw_graphs(
      nominal, static_cast<std::size_t>(cfg.n_embed_train), rng);
  const DissimilarityMatrix D(embed_train_distances(cfg, 0, graphs, cache));
  SweepReport out;
  out.config = cfg;
  out.max_distance = D.max();
  out.sweep = curvature_sweep(D, curvature_grid(cfg, D.max()), cfg.dimension);
  return out;
}

// ---- dataset generation ----

// One JSONL file per class, named class_<id>.jsonl.
inline std::vector<std::string>
generate_dataset(const ExperimentConfig &cfg, const std::vector<int> &classes,
                 int count, const std::string &out_dir) {
  if (count < 0)
    throw DomainError("graph count must be nonnegative");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec)
    throw IoError("cannot create " + out_dir + ": " + ec.message());
  std::vector<std::string> paths;
  for (int c : classes) {
    const DelaunayClassSpec spec = cfg.class_spec(c);
    Rng rng(mix_seed(cfg.seed, 0xda7a, static_cast<std::uint64_t>(c)));
    Dataset ds{spec, draw_graphs(DelaunayClass(spec),
                                 static_cast<std::size_t>(count), rng)};
    const std::string path =
        (std::filesystem::path(out_dir) / ("class_" + std::to_string(c) + ".jsonl"))
            .string();
    write_jsonl(path, ds);
    paths.push_back(path);
  }
  return paths;
}

} // namespace ccgraph
