// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any of them fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ccgraph/ccgraph.hpp"
#include "oracles.hpp"
#include "support.hpp"

#ifndef CCGRAPH_CLI
#define CCGRAPH_CLI ""
#endif
#ifndef CCGRAPH_UNIT_BINARIES
#define CCGRAPH_UNIT_BINARIES ""
#endif

namespace {

using namespace ccgraph;
using ccgraph::testing::random_configuration;
using ccgraph::testing::random_graph;
using ccgraph::testing::random_permutation;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char *f, double a, double b = 0, double c = 0,
                double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

unsigned worker_count() {
  return std::max(1u, std::thread::hardware_concurrency());
}

// Exact recovery and curvature identification on synthetic configurations.
Outcome ac1() {
  Rng rng(101);
  std::vector<double> grid;
  for (int i = -10; i <= 10; ++i)
    grid.push_back(0.2 * i); // 21 points, step 0.2
  const double step = 0.2;
  int recovered = 0, identified = 0, total = 0;
  double worst_ratio = 0.0;
  for (double kappa : {0.0, 1.0, -1.0}) {
    const Curvature k(kappa);
    for (int rep = 0; rep < 20; ++rep) {
      ++total;
      const auto X = random_configuration(rng, k, 10, 3, 0.8);
      const DissimilarityMatrix D(pairwise_distances(X));
      const auto sol = embed(D, k, 3);
      const double ratio = sol.distortion / D.values().norm();
      worst_ratio = std::max(worst_ratio, ratio);
      if (ratio <= 1e-6)
        ++recovered;
      try {
        const auto sweep = curvature_sweep(D, grid, 3);
        if (std::abs(sweep.best.kappa() - kappa) <= step + 1e-12)
          ++identified;
      } catch (const Error &) {
      }
    }
  }
  return {recovered == total && identified == total,
          fmt("exact recovery %g/%g (worst distortion/||D|| %.2e), curvature "
              "within one step %g",
              recovered, total, worst_ratio, identified) +
              "/" + std::to_string(total)};
}

// Calibrated thresholds give the target nominal run length.
Outcome ac2() {
  Rng rng(202);
  auto draw = [&] {
    // chi distribution with 3 degrees of freedom, a typical distance law
    const Vector v = ccgraph::testing::random_normal(rng, 3);
    return v.norm();
  };
  std::vector<double> train(20000);
  for (auto &e : train)
    e = draw();
  CalibrationOptions opts;
  opts.seed = 7;
  const CusumConfig cfg = calibrate(train, 0.99, opts);
  std::vector<RunOutcome> runs;
  for (int r = 0; r < 10; ++r) {
    std::vector<double> stream(2000);
    for (auto &e : stream)
      e = draw();
    const auto alarms = detect_change(stream, cfg);
    const auto seg = segment_arl(alarms, 0, stream.size());
    runs.push_back({seg.arl, seg.arl, seg.censored, seg.censored});
  }
  const RunMetrics m = compute_run_metrics(runs, 2000, 3);
  return {m.arl0_ci.contains(100.0),
          fmt("ARL0 %.1f, 95%% CI [%.1f, %.1f] over 10 runs x 2000 steps "
              "(q %.3f)",
              m.arl0, m.arl0_ci.lo, m.arl0_ci.hi, cfg.q)};
}

// Bipartite GED against exhaustive search.
Outcome ac3() {
  Rng rng(303);
  const EditCostParams c;
  int below = 0, perm_total = 0, perm_bad = 0;
  double worst_gap = 0.0;
  for (int i = 0; i < 200; ++i) {
    const int n = 1 + static_cast<int>(uniform_index(rng, 4));
    const auto a = random_graph(rng, n, 0.5);
    AttributedGraph b;
    const bool perm = i % 4 == 0;
    if (perm)
      b = permute_nodes(a, random_permutation(rng, n));
    else
      b = random_graph(rng, static_cast<int>(uniform_index(rng, 5)), 0.5);
    const double exact = oracle::exact_ged(a, b, c.node_insert_delete,
                                           c.edge_insert_delete,
                                           c.substitution_cap);
    const double approx = graph_edit_distance(a, b, c);
    if (approx < exact - 1e-12)
      ++below;
    worst_gap = std::max(worst_gap, approx - exact);
    if (perm) {
      ++perm_total;
      if (std::abs(approx) > 1e-9 || std::abs(exact) > 1e-9)
        ++perm_bad;
    }
  }
  return {below == 0 && perm_bad == 0,
          fmt("200 pairs: %g below the exact value; %g of %g permuted copies "
              "off zero; largest excess %.3f",
              below, perm_bad, perm_total, worst_gap)};
}

// Frechet mean against a dense grid search.
Outcome ac4() {
  Rng rng(404);
  int bad = 0, total = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (double kappa : {0.0, 1.0, -1.0}) {
    const Curvature k(kappa);
    for (int rep = 0; rep < 50; ++rep) {
      ++total;
      const auto X = random_configuration(rng, k, 3, 2, 0.7);
      const Vector m = frechet_mean(X.points, k);
      const double got = frechet_objective(m, X.points, k);
      const double grid = oracle::frechet_grid_search(X.points, kappa);
      worst = std::max(worst, got - grid);
      if (got > grid + 1e-6)
        ++bad;
    }
  }
  return {bad == 0, fmt("%g/%g sets above the grid optimum; max excess %.2e",
                        bad, total, worst)};
}

// Distortion curve on Delaunay class 0.
Outcome ac5() {
  ExperimentConfig cfg;
  cfg.n_embed_train = 100;
  cfg.dimension = 15;
  cfg.threads = worker_count();
  const SweepReport s = run_distortion_sweep(cfg);
  constexpr double inf = std::numeric_limits<double>::infinity();
  double neg = inf, pos = inf, flat = inf, neg_k = 0, pos_k = 0;
  int neg_feasible = 0, neg_total = 0;
  for (const auto &p : s.sweep.curve) {
    if (p.kappa < 0.0) {
      ++neg_total;
      neg_feasible += p.feasible() ? 1 : 0;
      if (p.distortion < neg) {
        neg = p.distortion;
        neg_k = p.kappa;
      }
    } else if (p.kappa > 0.0) {
      if (p.distortion < pos) {
        pos = p.distortion;
        pos_k = p.kappa;
      }
    } else {
      flat = p.distortion;
    }
  }
  const bool pass = std::isfinite(neg) && neg < flat && neg < pos;
  std::string detail =
      fmt("best negative %.4g at kappa %.4g, kappa=0 %.4g, best positive "
          "%.4g at kappa ",
          neg, neg_k, flat, pos) +
      format_number(pos_k) + "; " + std::to_string(neg_feasible) + "/" +
      std::to_string(neg_total) + " negative grid points feasible";
  return {pass, detail};
}

// Detection-rate ordering at reduced scale.
Outcome ac6() {
  auto run = [](Method m, int difficulty) {
    ExperimentConfig cfg;
    cfg.method = m;
    cfg.difficulty = difficulty;
    cfg.sequences = 20;
    cfg.n_detect_train = 200;
    cfg.prototypes = m == Method::dissimilarity ? 15 : 30;
    cfg.threads = worker_count();
    return run_pipeline(cfg).metrics;
  };
  const auto graph2 = run(Method::graph_domain, 2);
  const auto dis8 = run(Method::dissimilarity, 8);
  const auto hyp4 = run(Method::hyperbolic, 4);
  const auto euc4 = run(Method::euclidean, 4);
  const bool a = graph2.dcr >= 0.95;
  const bool b = dis8.dcr <= 0.3;
  const bool c = hyp4.dcr >= euc4.dcr;
  return {a && b && c,
          "(a) graph domain @2 DCR " + format_number(graph2.dcr) +
              (a ? " ok" : " FAIL") + "; (b) dissimilarity @8 DCR " +
              format_number(dis8.dcr) + " (CI " + format_number(dis8.dcr_ci.lo) +
              "-" + format_number(dis8.dcr_ci.hi) + ", ARL0 " +
              format_number(dis8.arl0) + ", ARL1 " + format_number(dis8.arl1) +
              ")" + (b ? " ok" : " FAIL") + "; (c) hyperbolic @4 DCR " +
              format_number(hyp4.dcr) + " vs euclidean " +
              format_number(euc4.dcr) + (c ? " ok" : " FAIL")};
}

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty())
      out.push_back(item);
  return out;
}

// Property suites of the unit tests.
Outcome ac7() {
  const auto binaries = split(CCGRAPH_UNIT_BINARIES, '|');
  if (binaries.empty())
    return {false, "unit test binaries not configured"};
  int failed = 0;
  std::string failures;
  for (const auto &bin : binaries) {
    const std::string cmd =
        "\"" + bin + "\" --gtest_filter='*Property*' --gtest_brief=1 > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) {
      ++failed;
      failures += " " + std::filesystem::path(bin).filename().string();
    }
  }
  return {failed == 0, std::to_string(binaries.size()) +
                           " suites run with the Property filter; failing:" +
                           (failures.empty() ? " none" : failures)};
}

std::string slurp(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Repeated CLI runs give identical bytes.
Outcome ac8() {
  const std::string cli = CCGRAPH_CLI;
  if (cli.empty())
    return {false, "CLI path not configured"};
  const auto dir = std::filesystem::temp_directory_path() / "ccgraph_ac8";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  std::vector<std::string> reports;
  for (int i = 0; i < 2; ++i) {
    const auto out = dir / ("report" + std::to_string(i) + ".csv");
    const std::string cmd =
        "\"" + cli + "\" --quiet --seed 8 --sequences 3 -N 40 "
        "--n-embed-train 60 -M 10 -d 5 --bootstrap 200 run "
        "--methods graph_domain,euclidean,spherical,hyperbolic,dissimilarity "
        "--difficulties 2,6 --out \"" + out.string() + "\" > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0)
      return {false, "CLI run failed"};
    reports.push_back(slurp(out));
  }
  std::filesystem::remove_all(dir);
  const auto rows = std::count(reports[0].begin(), reports[0].end(), '\n');
  return {reports[0] == reports[1] && rows == 11,
          std::to_string(rows) + " lines per report, " +
              (reports[0] == reports[1] ? "byte-identical" : "different")};
}

} // namespace

int main() {
  const std::vector<std::pair<const char *, std::function<Outcome()>>> checks{
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4},
      {"AC5", ac5}, {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}};
  int failures = 0;
  for (const auto &[name, check] : checks) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    failures += o.pass ? 0 : 1;
    std::printf("%s %s: %s (%.1f s)\n", name, o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
