#pragma once

// File formats: point sets, flows and increment specs in JSON; Gram matrices
// as CSV or JSON; reports as JSON. Also the collection and grid mini-grammars
// used on the command line.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sifbm/covariance.hpp"
#include "sifbm/error.hpp"
#include "sifbm/flows.hpp"
#include "sifbm/increments.hpp"
#include "sifbm/index_collection.hpp"
#include "sifbm/sampling.hpp"
#include "sifbm/spectra.hpp"
#include "sifbm/validation.hpp"

namespace sifbm::io {

using json = nlohmann::json;

/// `rect:<N>`, `circle:oriented`, `circle:shortest`, `chain[:identity|square|sqrt]`.
inline IndexingCollection parse_collection(std::string_view spec) {
  if (spec.starts_with("rect:")) {
    const std::string digits(spec.substr(5));
    std::size_t used = 0;
    long n = 0;
    try {
      n = std::stol(digits, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != digits.size() || n < 1)
      throw Error(ErrorCode::ParseError, "bad rectangle dimension in '" + std::string(spec) + "'");
    return IndexingCollection::rectangles(static_cast<std::size_t>(n));
  }
  if (spec == "circle:oriented") return IndexingCollection::oriented_arcs();
  if (spec == "circle:shortest") return IndexingCollection::shortest_arcs();
  if (spec == "chain" || spec == "chain:identity") return IndexingCollection::chain(ChainMap::Identity);
  if (spec == "chain:square") return IndexingCollection::chain(ChainMap::Square);
  if (spec == "chain:sqrt") return IndexingCollection::chain(ChainMap::Sqrt);
  throw Error(ErrorCode::ParseError, "unknown collection '" + std::string(spec) + "'");
}

/// `start:stop:step`, inclusive of start and of stop (within 1e-9 step), or a
/// JSON array of numbers.
inline std::vector<double> parse_grid(std::string_view spec) {
  if (!spec.empty() && spec.front() == '[') {
    try {
      auto values = json::parse(spec).get<std::vector<double>>();
      if (values.empty()) throw Error(ErrorCode::ParseError, "empty grid");
      return values;
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, std::string("bad grid array: ") + e.what());
    }
  }
  std::vector<double> parts;
  std::string token;
  std::stringstream ss{std::string(spec)};
  while (std::getline(ss, token, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad grid component '" + token + "'");
    }
  }
  if (parts.size() != 3) throw Error(ErrorCode::ParseError, "grid must read start:stop:step, got '" + std::string(spec) + "'");
  const double start = parts[0], stop = parts[1], step = parts[2];
  if (!(step > 0.0) || !(stop >= start) || !std::isfinite(start) || !std::isfinite(stop))
    throw Error(ErrorCode::ParseError, "grid '" + std::string(spec) + "' is empty or ill-formed");
  std::vector<double> grid;
  for (long k = 0;; ++k) {
    double v = start + static_cast<double>(k) * step;
    if (v > stop + 1e-9 * step) break;
    v = std::round(v * 1e12) / 1e12;
    grid.push_back(v);
  }
  return grid;
}

inline json to_json(const IndexSet& u) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Empty>) return {{"kind", "empty"}};
        else if constexpr (std::is_same_v<T, Rectangle>) return {{"kind", "rect"}, {"corner", s.corner}};
        else if constexpr (std::is_same_v<T, OrientedArc>) return {{"kind", "oriented_arc"}, {"angle", s.angle}};
        else if constexpr (std::is_same_v<T, ShortestArc>) return {{"kind", "shortest_arc"}, {"angle", s.angle}};
        else return {{"kind", "chain"}, {"t", s.t}};
      },
      u);
}

inline IndexSet set_from_json(const json& j) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "empty") return Empty{};
    if (kind == "rect") return Rectangle{j.at("corner").get<std::vector<double>>()};
    if (kind == "oriented_arc") return OrientedArc{j.at("angle").get<double>()};
    if (kind == "shortest_arc") return shortest_arc_at(j.at("angle").get<double>());
    if (kind == "chain") return ChainPoint{j.at("t").get<double>()};
    throw Error(ErrorCode::ParseError, "unknown set kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad set: ") + e.what());
  }
}

inline std::vector<IndexSet> points_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "point set must be a JSON array");
  std::vector<IndexSet> out;
  for (const auto& item : j) out.push_back(set_from_json(item));
  return out;
}

/// A bare list of numbers like `{0.25,1}` becomes sets of the collection's
/// scalar kind (chain parameter or arc angle).
inline std::vector<IndexSet> points_from_scalars(const IndexingCollection& coll, std::string_view list) {
  std::string body(list);
  if (body.size() < 2 || body.front() != '{' || body.back() != '}')
    throw Error(ErrorCode::ParseError, "inline point list must look like {a,b,...}");
  body = body.substr(1, body.size() - 2);
  std::vector<IndexSet> out;
  std::stringstream ss(body);
  std::string token;
  while (std::getline(ss, token, ',')) {
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(token, &used);
      if (token.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad inline point '" + token + "'");
    }
    switch (coll.kind()) {
      case CollectionKind::TotallyOrderedChain: out.push_back(ChainPoint{v}); break;
      case CollectionKind::CircleOrientedArcs: out.push_back(OrientedArc{v}); break;
      case CollectionKind::CircleShortestArcs: out.push_back(shortest_arc_at(v)); break;
      case CollectionKind::RectanglesRN:
        if (coll.dimension() != 1)
          throw Error(ErrorCode::ParseError, "inline scalar points need a one-dimensional collection");
        out.push_back(Rectangle{{v}});
        break;
    }
  }
  if (out.empty()) throw Error(ErrorCode::ParseError, "inline point list is empty");
  return out;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, "'" + path + "': " + e.what());
  }
}

/// Flow file: {"collection": "rect:2", "knots": [{"t": 0, "set": {...}}, ...]}.
inline ElementaryFlow flow_from_json(const json& j) {
  try {
    const auto coll = parse_collection(j.at("collection").get<std::string>());
    std::vector<FlowKnot> knots;
    for (const auto& k : j.at("knots")) knots.push_back({k.at("t").get<double>(), set_from_json(k.at("set"))});
    return ElementaryFlow(coll, std::move(knots));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad flow: ") + e.what());
  }
}

inline json to_json(const ElementaryFlow& flow) {
  json knots = json::array();
  for (const auto& k : flow.knots()) knots.push_back({{"t", k.t}, {"set", to_json(k.set)}});
  return {{"collection", describe(flow.collection())}, {"knots", knots}};
}

/// Increment spec: {"base": set, "minus": [set, ...]}.
inline IncrementExpr increment_from_json(const IndexingCollection& coll, const json& j) {
  try {
    const auto base = set_from_json(j.at("base"));
    std::vector<IndexSet> minus;
    if (j.contains("minus")) minus = points_from_json(j.at("minus"));
    return increment_expand(coll, base, minus);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad increment: ") + e.what());
  }
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// n rows of n comma-separated values, 17 significant digits.
inline std::string matrix_to_csv(const Matrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return rows;
}

inline json to_json(const GramMatrix& g) {
  json labels = json::array();
  for (const auto& l : g.labels) labels.push_back(to_json(l));
  return {{"h", g.h.value()}, {"labels", labels}, {"entries", matrix_to_json(g.entries)}};
}

inline json to_json(const CriticalHReport& r, const std::string& points_file) {
  json grid = json::array();
  for (const auto& p : r.grid) grid.push_back({{"h", p.h}, {"min_eig", p.min_eigenvalue}});
  json out{{"points_file", points_file}, {"grid", grid}};
  out["bracket"] = r.bracket ? json{{"h_low", r.bracket->first}, {"h_high", r.bracket->second}} : json(nullptr);
  out["refined_critical_h"] = r.refined_critical_h ? json(*r.refined_critical_h) : json(nullptr);
  return out;
}

inline json to_json(const CheckReport& r) {
  json details = json::array();
  for (const auto& d : r.details) details.push_back({{"label", d.label}, {"value", d.value}, {"error", d.error}});
  return {{"check", r.check},         {"instance", r.instance}, {"max_abs_error", r.max_abs_error},
          {"tolerance", r.tolerance}, {"passed", r.passed},     {"reduction", r.reduction},
          {"details", details}};
}

/// One path per row, preceded by a comment header naming seed and generator.
inline std::string samples_to_csv(const SampleField& f) {
  std::string out = "# seed=" + std::to_string(f.seed) + " generator=" + std::string(f.generator) +
                    " h=" + format_double(f.h.value()) + " jitter=" + format_double(f.jitter) + "\n";
  return out + matrix_to_csv(f.values);
}

inline json sample_summary(const SampleField& f, const GramMatrix& analytic) {
  const auto empirical = empirical_gram(f);
  return {{"seed", f.seed},
          {"generator", std::string(f.generator)},
          {"n_paths", f.n_paths},
          {"h", f.h.value()},
          {"jitter", f.jitter},
          {"empirical_gram", matrix_to_json(empirical.entries)},
          {"analytic_gram", matrix_to_json(analytic.entries)},
          {"max_abs_error", max_abs_difference(empirical.entries, analytic.entries)}};
}

}  // namespace sifbm::io
