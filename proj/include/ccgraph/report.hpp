#pragma once

// Result tables, the distortion plot and detector model files.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "ccgraph/pipeline.hpp"

namespace ccgraph {

inline std::string format_number(double v) {
  if (std::isnan(v))
    return "nan";
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline const char *report_csv_header() {
  return "method,difficulty,M,d,dcr,dcr_ci_lo,dcr_ci_hi,arl0,arl0_ci_lo,"
         "arl0_ci_hi,arl1,arl1_ci_lo,arl1_ci_hi";
}

inline void write_report_row(std::ostream &out, const ExperimentReport &r) {
  const auto &c = r.config;
  const auto &m = r.metrics;
  const bool has_m = c.method != Method::graph_domain;
  const int d = uses_manifold(c.method) ? c.dimension : -1;
  out << to_string(c.method) << ',' << c.difficulty << ','
      << (has_m ? c.prototypes : -1) << ',' << d << ','
      << format_number(m.dcr) << ',' << format_number(m.dcr_ci.lo) << ','
      << format_number(m.dcr_ci.hi) << ',' << format_number(m.arl0) << ','
      << format_number(m.arl0_ci.lo) << ',' << format_number(m.arl0_ci.hi)
      << ',' << format_number(m.arl1) << ',' << format_number(m.arl1_ci.lo)
      << ',' << format_number(m.arl1_ci.hi) << '\n';
}

inline void write_report_csv(std::ostream &out,
                             const std::vector<ExperimentReport> &reports) {
  out << report_csv_header() << '\n';
  for (const auto &r : reports)
    write_report_row(out, r);
}

// One row per sequence; `detected` is the run's contribution to the DCR.
inline void write_runs_csv(std::ostream &out,
                           const std::vector<ExperimentReport> &reports) {
  out << "method,difficulty,M,d,sequence,detected,arl0,arl1,arl0_censored,"
         "arl1_censored,kappa,q,h\n";
  for (const auto &r : reports) {
    const auto &c = r.config;
    for (const auto &s : r.runs)
      out << to_string(c.method) << ',' << c.difficulty << ','
          << (c.method != Method::graph_domain ? c.prototypes : -1) << ','
          << (uses_manifold(c.method) ? c.dimension : -1) << ',' << s.sequence
          << ',' << (s.outcome.detected() ? 1 : 0) << ','
          << format_number(s.outcome.arl0) << ','
          << format_number(s.outcome.arl1) << ','
          << (s.outcome.arl0_censored ? 1 : 0) << ','
          << (s.outcome.arl1_censored ? 1 : 0) << ',' << format_number(s.kappa)
          << ',' << format_number(s.q) << ',' << format_number(s.h) << '\n';
  }
}

inline void write_sweep_csv(std::ostream &out, const SweepReport &s) {
  out << "kappa,log_distortion\n";
  for (const auto &p : s.sweep.curve)
    out << format_number(p.kappa) << ','
        << format_number(p.feasible() ? std::log(p.distortion)
                                      : std::numeric_limits<double>::infinity())
        << '\n';
}

// Standalone SVG line plot of log distortion against kappa. Infeasible
// points are drawn as crosses on the top edge.
inline void write_sweep_svg(std::ostream &out, const SweepReport &s) {
  const double W = 640, H = 400, L = 70, R = 20, T = 30, B = 50;
  double kmin = 0.0, kmax = 0.0;
  double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
  for (const auto &p : s.sweep.curve) {
    kmin = std::min(kmin, p.kappa);
    kmax = std::max(kmax, p.kappa);
    if (p.feasible()) {
      const double y = std::log(p.distortion);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!(ymin <= ymax)) {
    ymin = 0.0;
    ymax = 1.0;
  }
  if (ymax - ymin < 1e-12) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  if (kmax - kmin < 1e-12) {
    kmin -= 1.0;
    kmax += 1.0;
  }
  auto px = [&](double k) { return L + (k - kmin) / (kmax - kmin) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R
      << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L
      << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << px(0.0) << "\" y1=\"" << T << "\" x2=\"" << px(0.0)
      << "\" y2=\"" << H - B
      << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  out << "<text x=\"" << px(0.0) + 4 << "\" y=\"" << T + 12
      << "\" font-size=\"11\">kappa = 0</text>\n";

  std::string path;
  for (const auto &p : s.sweep.curve) {
    if (!p.feasible())
      continue;
    char seg[64];
    std::snprintf(seg, sizeof seg, "%s%.2f,%.2f ", path.empty() ? "M" : "L",
                  px(p.kappa), py(std::log(p.distortion)));
    path += seg;
  }
  if (!path.empty())
    out << "<path d=\"" << path << "\" fill=\"none\" stroke=\"steelblue\" "
        << "stroke-width=\"2\"/>\n";
  for (const auto &p : s.sweep.curve) {
    if (p.feasible()) {
      out << "<circle cx=\"" << px(p.kappa) << "\" cy=\""
          << py(std::log(p.distortion)) << "\" r=\"3\" fill=\"steelblue\"/>\n";
    } else {
      out << "<text x=\"" << px(p.kappa) - 4 << "\" y=\"" << T + 4
          << "\" font-size=\"10\" fill=\"firebrick\">x</text>\n";
    }
  }
  const double best = s.sweep.best.kappa();
  out << "<line x1=\"" << px(best) << "\" y1=\"" << T << "\" x2=\"" << px(best)
      << "\" y2=\"" << H - B << "\" stroke=\"darkorange\"/>\n";

  auto label = [&](double x, double y, const std::string &txt,
                   const char *anchor) {
    out << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"11\" "
        << "text-anchor=\"" << anchor << "\">" << txt << "</text>\n";
  };
  label(L, H - B + 16, format_number(kmin), "middle");
  label(W - R, H - B + 16, format_number(kmax), "middle");
  label(L - 6, H - B, format_number(ymin), "end");
  label(L - 6, T + 4, format_number(ymax), "end");
  label((L + W - R) / 2, H - 12, "curvature kappa (best " + format_number(best) + ")",
        "middle");
  out << "<text x=\"16\" y=\"" << (T + H - B) / 2
      << "\" font-size=\"11\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (T + H - B) / 2 << ")\">log distortion</text>\n";
  out << "</svg>\n";
}

// ---- model files ----

namespace detail {

inline nlohmann::json matrix_to_json(const Matrix &m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const nlohmann::json &j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0}
                              : static_cast<Eigen::Index>(j.at(0).size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto &row = j.at(static_cast<std::size_t>(i));
    if (static_cast<Eigen::Index>(row.size()) != cols)
      throw IoError("ragged matrix in model file");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(i, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return m;
}

inline nlohmann::json vector_to_json(const Vector &v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

inline Vector vector_from_json(const nlohmann::json &j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

} // namespace detail

inline nlohmann::json to_json(const DetectorModel &m) {
  nlohmann::json protos = nlohmann::json::array();
  for (const auto &g : m.prototypes.graphs)
    protos.push_back(to_json(g));
  return {
      {"method", to_string(m.method)},
      {"costs",
       {{"node_insert_delete", m.costs.node_insert_delete},
        {"edge_insert_delete", m.costs.edge_insert_delete},
        {"substitution_cap", m.costs.substitution_cap}}},
      {"alpha", m.alpha},
      {"kappa", m.kappa},
      {"dimension", m.dimension},
      {"prototypes", protos},
      {"prototype_positions", detail::matrix_to_json(m.prototypes.positions.points)},
      {"prototype_distances", detail::matrix_to_json(m.prototypes.distances)},
      {"line_parameter", m.prototypes.line_parameter},
      {"cover_radius", m.cover_radius},
      {"mean_point", detail::vector_to_json(m.mean_point)},
      {"mean_graph", to_json(m.mean_graph)},
      {"q", m.cusum.q},
      {"h", m.cusum.h},
      {"anomaly_threshold", m.anomaly_threshold},
  };
}

inline DetectorModel model_from_json(const nlohmann::json &j) {
  try {
    DetectorModel m;
    m.method = method_from_string(j.at("method").get<std::string>());
    const auto &c = j.at("costs");
    m.costs.node_insert_delete = c.at("node_insert_delete").get<double>();
    m.costs.edge_insert_delete = c.at("edge_insert_delete").get<double>();
    m.costs.substitution_cap = c.at("substitution_cap").get<double>();
    m.costs.validate();
    m.alpha = j.at("alpha").get<double>();
    m.kappa = j.at("kappa").get<double>();
    m.dimension = j.at("dimension").get<int>();
    for (const auto &g : j.at("prototypes"))
      m.prototypes.graphs.push_back(graph_from_json(g));
    m.prototypes.positions = Configuration{
        detail::matrix_from_json(j.at("prototype_positions")), Curvature{m.kappa}};
    m.prototypes.distances = detail::matrix_from_json(j.at("prototype_distances"));
    m.prototypes.line_parameter = j.at("line_parameter").get<double>();
    m.cover_radius = j.at("cover_radius").get<double>();
    m.mean_point = detail::vector_from_json(j.at("mean_point"));
    if (m.method == Method::graph_domain)
      m.mean_graph = graph_from_json(j.at("mean_graph"));
    m.cusum.q = j.at("q").get<double>();
    m.cusum.h = j.at("h").get<double>();
    m.cusum.alpha = m.alpha;
    m.anomaly_threshold = j.at("anomaly_threshold").get<double>();
    m.cusum.validate();
    if (m.method != Method::graph_domain && m.prototypes.graphs.empty())
      throw IoError("model has no prototypes");
    if (uses_manifold(m.method) &&
        m.prototypes.positions.size() !=
            static_cast<Eigen::Index>(m.prototypes.graphs.size()))
      throw IoError("prototype positions do not match prototype graphs");
    return m;
  } catch (const nlohmann::json::exception &e) {
    throw IoError(std::string("malformed model file: ") + e.what());
  }
}

inline void save_model(const std::string &path, const DetectorModel &m) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot open " + path + " for writing");
  out << to_json(m).dump(1) << '\n';
  if (!out)
    throw IoError("write failed: " + path);
}

inline DetectorModel load_model(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception &e) {
    throw IoError(path + ": " + e.what());
  }
  return model_from_json(j);
}

} // namespace ccgraph
