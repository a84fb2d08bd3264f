#pragma once

// Delaunay graph classes and their JSON-lines serialisation.
//
// Class 0 draws n_points seed points uniformly in a square of side
// support_box. Class t >= 1 moves every seed point by a vector of length
// base_radius * 2^-t in a uniformly random direction, so larger class ids sit
// closer to class 0. Each emitted graph jitters the class points uniformly in
// a disc of radius noise_radius and re-triangulates.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "json.hpp"

#include "ccgraph/delaunay.hpp"
#include "ccgraph/error.hpp"
#include "ccgraph/graph.hpp"
#include "ccgraph/random.hpp"

namespace ccgraph {

struct DelaunayClassSpec {
  int class_id = 0;
  int n_points = 10;
  double support_box = 10.0;
  double base_radius = 10.0;
  double noise_radius = 0.5;
  std::uint64_t seed = 0;

  double perturbation_radius() const {
    return class_id == 0 ? 0.0 : base_radius * std::exp2(-class_id);
  }

  void validate() const {
    if (class_id < 0)
      throw DomainError("class id must be nonnegative");
    if (n_points < 3)
      throw DomainError("a Delaunay class needs at least 3 points");
    if (!(support_box > 0.0) || !(base_radius > 0.0) || !(noise_radius >= 0.0))
      throw DomainError("class geometry parameters must be positive");
  }

  friend bool operator==(const DelaunayClassSpec &,
                         const DelaunayClassSpec &) = default;
};

inline nlohmann::json to_json(const DelaunayClassSpec &s) {
  return {{"class_id", s.class_id},       {"n_points", s.n_points},
          {"support_box", s.support_box}, {"base_radius", s.base_radius},
          {"noise_radius", s.noise_radius}, {"seed", s.seed}};
}

inline DelaunayClassSpec class_spec_from_json(const nlohmann::json &j) {
  try {
    DelaunayClassSpec s;
    s.class_id = j.at("class_id").get<int>();
    s.n_points = j.at("n_points").get<int>();
    s.support_box = j.at("support_box").get<double>();
    s.base_radius = j.at("base_radius").get<double>();
    s.noise_radius = j.at("noise_radius").get<double>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.validate();
    return s;
  } catch (const nlohmann::json::exception &e) {
    throw IoError(std::string("malformed class spec: ") + e.what());
  }
}

namespace detail {

inline Point2 uniform_in_disc(Rng &rng, double radius) {
  const double rho = radius * std::sqrt(uniform01(rng));
  const double theta = 2.0 * std::numbers::pi * uniform01(rng);
  return {rho * std::cos(theta), rho * std::sin(theta)};
}

} // namespace detail

// Holds the class points of one spec; draw() emits i.i.d. graphs.
class DelaunayClass {
public:
  explicit DelaunayClass(const DelaunayClassSpec &spec) : spec_(spec) {
    spec_.validate();
    Rng base(mix_seed(spec_.seed, 0x5eed));
    centres_.reserve(static_cast<std::size_t>(spec_.n_points));
    for (int i = 0; i < spec_.n_points; ++i) {
      const double x = uniform(base, 0.0, spec_.support_box);
      const double y = uniform(base, 0.0, spec_.support_box);
      centres_.push_back({x, y});
    }
    if (spec_.class_id > 0) {
      Rng shift(mix_seed(spec_.seed, 0xc1a55,
                         static_cast<std::uint64_t>(spec_.class_id)));
      const double radius = spec_.perturbation_radius();
      for (auto &c : centres_) {
        const double theta = 2.0 * std::numbers::pi * uniform01(shift);
        c[0] += radius * std::cos(theta);
        c[1] += radius * std::sin(theta);
      }
    }
  }

  const DelaunayClassSpec &spec() const { return spec_; }
  const std::vector<Point2> &class_points() const { return centres_; }

  AttributedGraph draw(Rng &rng) const {
    constexpr int max_retries = 100;
    for (int attempt = 0; attempt < max_retries; ++attempt) {
      std::vector<Point2> pts = centres_;
      for (auto &p : pts) {
        const Point2 d = detail::uniform_in_disc(rng, spec_.noise_radius);
        p[0] += d[0];
        p[1] += d[1];
      }
      try {
        auto edges = delaunay_triangulation(pts);
        return {std::move(pts), std::move(edges)};
      } catch (const DomainError &) {
        // degenerate draw; retry with fresh noise
      }
    }
    throw DomainError("could not draw a non-degenerate point set");
  }

private:
  DelaunayClassSpec spec_;
  std::vector<Point2> centres_;
};

inline AttributedGraph generate_class_graph(const DelaunayClassSpec &spec,
                                            Rng &rng) {
  return DelaunayClass(spec).draw(rng);
}

inline std::vector<AttributedGraph> draw_graphs(const DelaunayClass &cls,
                                                std::size_t count, Rng &rng) {
  std::vector<AttributedGraph> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(cls.draw(rng));
  return out;
}

// Dataset file: a header line {"spec": {...}} followed by one graph per line.
struct Dataset {
  DelaunayClassSpec spec;
  std::vector<AttributedGraph> graphs;
};

inline void write_jsonl(std::ostream &out, const Dataset &ds) {
  out << nlohmann::json{{"spec", to_json(ds.spec)}}.dump() << '\n';
  for (const auto &g : ds.graphs)
    out << to_json(g).dump() << '\n';
}

inline void write_jsonl(const std::string &path, const Dataset &ds) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot open " + path + " for writing");
  write_jsonl(out, ds);
  if (!out)
    throw IoError("write failed: " + path);
}

// Reads graphs from JSON lines; a leading {"spec": ...} header is optional.
inline Dataset read_jsonl(std::istream &in) {
  Dataset ds;
  std::string line;
  bool first = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception &e) {
      throw IoError("line " + std::to_string(lineno) + ": " + e.what());
    }
    if (first && j.contains("spec")) {
      ds.spec = class_spec_from_json(j.at("spec"));
    } else {
      ds.graphs.push_back(graph_from_json(j));
    }
    first = false;
  }
  return ds;
}

inline Dataset read_jsonl(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open " + path);
  return read_jsonl(in);
}

} // namespace ccgraph
