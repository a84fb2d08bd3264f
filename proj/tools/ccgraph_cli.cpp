// ccgraph_cli: dataset generation, training, experiments, curvature sweeps
// and detection on stored graphs.
//
// Every experiment option can come from a key=value file (--config) and be
// overridden on the command line.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ccgraph/ccgraph.hpp"

namespace {

using namespace ccgraph;

struct Options {
  ExperimentConfig cfg;
  std::string method = "hyperbolic";
  std::string threshold_mode = "run_length";
  std::string cache_dir;
  bool quiet = false;
};

void add_experiment_options(CLI::App &app, Options &o) {
  auto &c = o.cfg;
  app.add_option("--method", o.method,
                 "graph_domain|euclidean|spherical|hyperbolic|dissimilarity");
  app.add_option("--difficulty", c.difficulty, "class id of the changed regime");
  app.add_option("--prototypes,-M", c.prototypes, "prototype count");
  app.add_option("--dimension,-d", c.dimension, "manifold dimension");
  app.add_option("--n-embed-train", c.n_embed_train);
  app.add_option("--n-detect-train,-N", c.n_detect_train);
  app.add_option("--n-operational", c.n_operational, "0 means 2N");
  app.add_option("--alpha", c.alpha);
  app.add_option("--sequences", c.sequences);
  app.add_option("--seed", c.seed);
  app.add_option("--node-cost", c.costs.node_insert_delete);
  app.add_option("--edge-cost", c.costs.edge_insert_delete);
  app.add_option("--substitution-cap", c.costs.substitution_cap);
  app.add_option("--n-points", c.n_points);
  app.add_option("--support-box", c.support_box);
  app.add_option("--base-radius", c.base_radius);
  app.add_option("--noise-radius", c.noise_radius);
  app.add_option("--curvature-grid", c.curvature_grid,
                 "explicit grid; default is log-spaced on both sides of 0")
      ->delimiter(',');
  app.add_option("--grid-per-side", c.grid_per_side);
  app.add_option("--kappa-ref", c.kappa_ref);
  app.add_option("--kappa-min-ratio", c.kappa_min_ratio);
  app.add_option("--kappa", c.kappa, "fixed curvature instead of the sweep");
  app.add_option("--threshold-mode", o.threshold_mode, "run_length|conditional");
  app.add_option("--bootstrap", c.bootstrap);
  app.add_option("--threads", c.threads);
  app.add_option("--cache-dir", o.cache_dir,
                 "GED cache (default: $CCGRAPH_CACHE_DIR)");
  app.add_flag("--quiet,-q", o.quiet);
}

void finalise(Options &o) {
  o.cfg.method = method_from_string(o.method);
  o.cfg.threshold_mode = threshold_mode_from_string(o.threshold_mode);
}

DistanceCache cache_for(const Options &o) {
  return o.cache_dir.empty() ? DistanceCache::from_environment()
                             : DistanceCache(o.cache_dir);
}

template <class F> void write_file(const std::string &path, F &&f) {
  if (path == "-") {
    f(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot open " + path + " for writing");
  f(out);
  if (!out)
    throw IoError("write failed: " + path);
}

std::vector<std::string> split(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty())
      out.push_back(item);
  return out;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"change detection on graph streams via constant-curvature "
               "embeddings"};
  app.set_config("--config", "", "key=value configuration file");
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  add_experiment_options(app, o);

  // gen
  auto *gen = app.add_subcommand("gen", "write class_<id>.jsonl graph files");
  std::string gen_classes = "0,2,4,6,8,10,12";
  int gen_count = 50;
  std::string gen_out = "data";
  gen->add_option("--classes", gen_classes, "comma separated class ids");
  gen->add_option("--count", gen_count, "graphs per class");
  gen->add_option("--out", gen_out, "output directory");

  // train
  auto *train = app.add_subcommand("train", "train one detector, save as JSON");
  std::size_t train_sequence = 0;
  std::string train_out = "model.json";
  train->add_option("--sequence", train_sequence, "training sequence index");
  train->add_option("--out", train_out);

  // detect
  auto *detect = app.add_subcommand("detect", "run a saved detector on graphs");
  std::string detect_model, detect_input, detect_out = "-";
  detect->add_option("--model", detect_model)->required();
  detect->add_option("--input", detect_input, "graph JSONL file")->required();
  detect->add_option("--out", detect_out, "CSV output, - for stdout");

  // run
  auto *run = app.add_subcommand("run", "experiment table over methods");
  std::string run_methods, run_difficulties, run_out = "-", run_runs;
  run->add_option("--methods", run_methods,
                  "comma separated; default is --method");
  run->add_option("--difficulties", run_difficulties,
                  "comma separated; default is --difficulty");
  run->add_option("--out", run_out, "summary CSV, - for stdout");
  run->add_option("--runs-out", run_runs, "per-sequence CSV");

  // sweep
  auto *sweep = app.add_subcommand("sweep", "distortion across curvatures");
  std::string sweep_csv = "-", sweep_svg;
  sweep->add_option("--out", sweep_csv, "CSV output, - for stdout");
  sweep->add_option("--svg", sweep_svg, "SVG plot output");

  CLI11_PARSE(app, argc, argv);

  try {
    finalise(o);
    auto log = [&](const std::string &msg) {
      if (!o.quiet)
        std::cerr << msg << '\n';
    };

    if (*gen) {
      std::vector<int> classes;
      for (const auto &s : split(gen_classes))
        classes.push_back(std::stoi(s));
      for (const auto &p : generate_dataset(o.cfg, classes, gen_count, gen_out))
        log("wrote " + p);
    } else if (*train) {
      o.cfg.validate();
      const SequenceData data = generate_sequence(o.cfg, train_sequence);
      Matrix dist;
      if (o.cfg.method != Method::graph_domain)
        dist = embed_train_distances(o.cfg, train_sequence, data.embed_train,
                                     cache_for(o));
      const DetectorModel model = train_detector(
          o.cfg, data.embed_train, dist, data.detect_train,
          mix_seed(o.cfg.seed, train_sequence, 0x7a11));
      for (const auto &w : model.warnings)
        std::cerr << "warning: " << w << '\n';
      save_model(train_out, model);
      log("kappa " + format_number(model.kappa) + ", q " +
          format_number(model.cusum.q) + ", h " + format_number(model.cusum.h));
    } else if (*detect) {
      const DetectorModel model = load_model(detect_model);
      const Dataset ds = read_jsonl(detect_input);
      const auto e = model.statistics(ds.graphs, o.cfg.threads);
      write_file(detect_out, [&](std::ostream &out) {
        out << "t,e,S,alarm,anomaly\n";
        CusumState st;
        for (std::size_t t = 0; t < e.size(); ++t) {
          st = cusum_update(st, e[t], model.cusum.q);
          const bool alarm = st.S > model.cusum.h;
          out << t + 1 << ',' << format_number(e[t]) << ','
              << format_number(st.S) << ',' << (alarm ? 1 : 0) << ','
              << (e[t] > model.anomaly_threshold ? 1 : 0) << '\n';
          if (alarm)
            st.S = 0.0;
        }
      });
    } else if (*run) {
      std::vector<std::string> methods =
          run_methods.empty() ? std::vector<std::string>{o.method}
                              : split(run_methods);
      std::vector<int> diffs;
      if (run_difficulties.empty())
        diffs.push_back(o.cfg.difficulty);
      else
        for (const auto &s : split(run_difficulties))
          diffs.push_back(std::stoi(s));
      const DistanceCache cache = cache_for(o);
      std::vector<ExperimentReport> reports;
      for (const auto &m : methods)
        for (int d : diffs) {
          ExperimentConfig c = o.cfg;
          c.method = method_from_string(m);
          c.difficulty = d;
          ExperimentReport r = run_pipeline(c, cache);
          for (const auto &s : r.runs)
            for (const auto &w : s.warnings)
              std::cerr << "warning: sequence " << s.sequence << ": " << w
                        << '\n';
          log(m + " difficulty " + std::to_string(d) + ": dcr " +
              format_number(r.metrics.dcr) + " in " +
              format_number(r.seconds) + " s");
          reports.push_back(std::move(r));
        }
      write_file(run_out,
                 [&](std::ostream &out) { write_report_csv(out, reports); });
      if (!run_runs.empty())
        write_file(run_runs,
                   [&](std::ostream &out) { write_runs_csv(out, reports); });
    } else if (*sweep) {
      const SweepReport s = run_distortion_sweep(o.cfg, cache_for(o));
      write_file(sweep_csv, [&](std::ostream &out) { write_sweep_csv(out, s); });
      if (!sweep_svg.empty())
        write_file(sweep_svg, [&](std::ostream &out) { write_sweep_svg(out, s); });
      log("best kappa " + format_number(s.sweep.best.kappa()));
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
