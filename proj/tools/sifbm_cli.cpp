// sifbm: command-line front end for the set-indexed fBm library.
//
// Exit codes: 0 success / all checks passed, 1 computational error or failed
// verdict, 2 usage or parse error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sifbm/io.hpp"
#include "sifbm/sifbm.hpp"

namespace {

using sifbm::io::json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct RunConfig {
  std::string collection;
  double h = 0.5;
  std::string points;
  std::string flow;
  std::string flows;
  std::string instance;
  std::string pairs;
  std::string grid;
  std::string out;
  std::string csv_out;
  std::string json_out;
  std::uint64_t seed = 42;
  std::size_t n_paths = 10000;
  double scale = 2.0;
  std::optional<double> tol;
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw sifbm::Error(sifbm::ErrorCode::ParseError, "cannot write '" + path + "'");
  out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<sifbm::IndexSet> load_points(const sifbm::IndexingCollection& coll, const std::string& arg) {
  if (arg.empty()) throw sifbm::Error(sifbm::ErrorCode::ParseError, "--points is required");
  std::vector<sifbm::IndexSet> pts;
  if (arg.front() == '{') {
    pts = sifbm::io::points_from_scalars(coll, arg);
  } else if (arg.front() == '[') {
    try {
      pts = sifbm::io::points_from_json(json::parse(arg));
    } catch (const json::exception& e) {
      throw sifbm::Error(sifbm::ErrorCode::ParseError, std::string("bad inline points: ") + e.what());
    }
  } else {
    pts = sifbm::io::points_from_json(sifbm::io::read_json_file(arg));
  }
  if (pts.empty()) throw sifbm::Error(sifbm::ErrorCode::ParseError, "point set is empty");
  return pts;
}

std::vector<std::vector<sifbm::IndexSet>> load_chains(const std::string& arg) {
  std::vector<std::vector<sifbm::IndexSet>> chains;
  if (arg.empty()) return chains;
  const auto j = sifbm::io::read_json_file(arg);
  if (!j.is_array()) throw sifbm::Error(sifbm::ErrorCode::ParseError, "flows file must be an array of chains");
  for (const auto& c : j) chains.push_back(sifbm::io::points_from_json(c));
  return chains;
}

int report_exit(const sifbm::CheckReport& r, const RunConfig& cfg) {
  emit(cfg.out, dump(sifbm::io::to_json(r)));
  return r.passed ? kExitOk : kExitFailure;
}

int cmd_gram(const RunConfig& cfg) {
  const auto coll = sifbm::io::parse_collection(cfg.collection);
  const auto pts = load_points(coll, cfg.points);
  const auto g = sifbm::gram(coll, sifbm::HurstParam{cfg.h}, pts);
  if (cfg.csv_out.empty() && cfg.json_out.empty()) {
    emit("", sifbm::io::matrix_to_csv(g.entries));
    return kExitOk;
  }
  if (!cfg.csv_out.empty()) emit(cfg.csv_out, sifbm::io::matrix_to_csv(g.entries));
  if (!cfg.json_out.empty()) emit(cfg.json_out, dump(sifbm::io::to_json(g)));
  return kExitOk;
}

int cmd_pd_scan(const RunConfig& cfg) {
  const auto coll = sifbm::io::parse_collection(cfg.collection);
  const auto pts = load_points(coll, cfg.points);
  const auto grid = sifbm::io::parse_grid(cfg.grid);
  const auto report =
      sifbm::critical_h_scan(coll, pts, grid, cfg.tol.value_or(sifbm::kDefaultPsdRelativeTolerance));
  emit(cfg.out, dump(sifbm::io::to_json(report, cfg.points)));
  return kExitOk;
}

int cmd_sample(const RunConfig& cfg) {
  const auto coll = sifbm::io::parse_collection(cfg.collection);
  const auto pts = load_points(coll, cfg.points);
  const sifbm::HurstParam h{cfg.h};
  const auto field = sifbm::sample_field(coll, h, pts, cfg.seed, cfg.n_paths);
  if (!cfg.csv_out.empty()) emit(cfg.csv_out, sifbm::io::samples_to_csv(field));
  if (field.n_paths >= 2)
    emit(cfg.json_out, dump(sifbm::io::sample_summary(field, sifbm::gram(coll, h, pts))));
  else if (cfg.csv_out.empty())
    emit("", sifbm::io::samples_to_csv(field));
  return kExitOk;
}

std::vector<double> default_clock_grid(const sifbm::ElementaryFlow& flow) {
  const double lo = flow.theta_min(), hi = flow.theta_max();
  if (!(hi > lo)) return {lo};
  std::vector<double> grid;
  for (int k = 1; k <= 10; ++k) grid.push_back(lo + (hi - lo) * k / 10.0);
  return grid;
}

int cmd_project(const RunConfig& cfg) {
  const auto flow = sifbm::io::flow_from_json(sifbm::io::read_json_file(cfg.flow));
  const sifbm::HurstParam h{cfg.h};
  const auto grid = cfg.grid.empty() ? default_clock_grid(flow) : sifbm::io::parse_grid(cfg.grid);
  const auto sets = sifbm::project_points(flow, grid);
  json projected = json::array();
  for (std::size_t i = 0; i < sets.size(); ++i) {
    projected.push_back({{"s", grid[i]},
                         {"t", flow.theta_inverse(grid[i])},
                         {"set", sifbm::io::to_json(sets[i])},
                         {"measure", sifbm::measure(flow.collection(), sets[i])}});
  }
  const auto pg = sifbm::gram(flow.collection(), h, sets);
  const auto analytic = sifbm::fbm_gram(h, grid);
  json out{{"flow", sifbm::io::to_json(flow)},
           {"h", h.value()},
           {"projected", projected},
           {"projected_gram", sifbm::io::matrix_to_json(pg.entries)},
           {"fbm_gram", sifbm::io::matrix_to_json(analytic)},
           {"max_abs_error", sifbm::max_abs_difference(pg.entries, analytic)}};
  emit(cfg.out, dump(out));
  return kExitOk;
}

int verify_projection(const RunConfig& cfg) {
  const auto flow = sifbm::io::flow_from_json(sifbm::io::read_json_file(cfg.flow));
  const auto grid = cfg.grid.empty() ? default_clock_grid(flow) : sifbm::io::parse_grid(cfg.grid);
  return report_exit(sifbm::check_projection_is_fbm(flow.collection(), sifbm::HurstParam{cfg.h}, flow, grid,
                                                    cfg.tol.value_or(sifbm::kDefaultCheckTolerance)),
                     cfg);
}

int verify_stationarity(const RunConfig& cfg) {
  const auto j = sifbm::io::read_json_file(cfg.instance);
  try {
    const auto coll = sifbm::io::parse_collection(j.at("collection").get<std::string>());
    const auto v = sifbm::io::set_from_json(j.at("v"));
    const auto u = sifbm::io::points_from_json(j.at("u_chain"));
    const auto a = sifbm::io::points_from_json(j.at("a_chain"));
    return report_exit(sifbm::check_stationarity(coll, sifbm::HurstParam{cfg.h}, v, u, a,
                                                 cfg.tol.value_or(sifbm::kDefaultCheckTolerance)),
                       cfg);
  } catch (const json::exception& e) {
    throw sifbm::Error(sifbm::ErrorCode::ParseError, std::string("bad stationarity instance: ") + e.what());
  }
}

int verify_self_similarity(const RunConfig& cfg) {
  const auto coll = sifbm::io::parse_collection(cfg.collection);
  const auto pts = load_points(coll, cfg.points);
  return report_exit(sifbm::check_self_similarity(coll, sifbm::HurstParam{cfg.h}, cfg.scale, pts,
                                                  cfg.tol.value_or(sifbm::kDefaultCheckTolerance)),
                     cfg);
}

int verify_outer_continuity(const RunConfig& cfg) {
  const auto coll = sifbm::io::parse_collection(cfg.collection);
  const auto pts = load_points(coll, cfg.points);
  return report_exit(sifbm::check_outer_continuity(coll, sifbm::HurstParam{cfg.h}, pts, cfg.tol.value_or(1e-2)),
                     cfg);
}

int verify_circle(const RunConfig& cfg) {
  std::vector<std::pair<double, double>> pairs;
  if (cfg.pairs.empty()) {
    constexpr double pi = std::numbers::pi;
    for (int i = 0; i <= 8; ++i)
      for (int k = i; k <= 8; ++k) pairs.emplace_back(pi * i / 8.0, pi * k / 8.0);
  } else {
    const auto j = sifbm::io::read_json_file(cfg.pairs);
    try {
      for (const auto& p : j) pairs.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    } catch (const json::exception& e) {
      throw sifbm::Error(sifbm::ErrorCode::ParseError, std::string("bad angle pairs: ") + e.what());
    }
  }
  return report_exit(sifbm::circle_triple_compare(sifbm::HurstParam{cfg.h}, pairs, cfg.tol.value_or(1e-12)), cfg);
}

int verify_characterization(const RunConfig& cfg) {
  const auto coll = sifbm::io::parse_collection(cfg.collection);
  const auto pts = load_points(coll, cfg.points);
  const auto chains = load_chains(cfg.flows);
  return report_exit(sifbm::characterization_crosscheck(coll, sifbm::HurstParam{cfg.h}, pts, chains,
                                                        cfg.tol.value_or(sifbm::kDefaultCheckTolerance)),
                     cfg);
}

int cmd_counterexample(const RunConfig& cfg) {
  const auto coll = sifbm::IndexingCollection::rectangles(2);
  const std::vector<sifbm::IndexSet> pts{sifbm::Rectangle{{1, 1}}, sifbm::Rectangle{{2, 1}}, sifbm::Rectangle{{1, 2}},
                                         sifbm::Rectangle{{2, 2}}};
  const json symbolic = {{"1", "2^{2H-1}", "2^{2H-1}", "(1+2^{4H}-3^{2H})/2"},
                         {"2^{2H-1}", "2^{2H}", "2^{2H-1}", "2^{4H-1}"},
                         {"2^{2H-1}", "2^{2H-1}", "2^{2H}", "2^{4H-1}"},
                         {"(1+2^{4H}-3^{2H})/2", "2^{4H-1}", "2^{4H-1}", "2^{4H}"}};
  json points = json::array();
  for (const auto& p : pts) points.push_back(sifbm::io::to_json(p));
  json cases = json::array();
  for (double hv : {0.75, 0.5}) {
    const auto g = sifbm::gram(coll, sifbm::HurstParam{hv}, pts);
    const auto verdict = sifbm::is_psd(g);
    cases.push_back({{"h", hv},
                     {"entries", sifbm::io::matrix_to_json(g.entries)},
                     {"eigenvalues", sifbm::eigenvalues_symmetric(g)},
                     {"min_eigenvalue", verdict.min_eigenvalue},
                     {"tolerance", verdict.tolerance},
                     {"psd", verdict.is_psd}});
  }
  emit(cfg.out, dump({{"collection", "rect:2"}, {"points", points}, {"symbolic", symbolic}, {"cases", cases}}));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Set-indexed fractional Brownian motion: covariances, PSD scans, sampling and checks"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print this help and exit");  // -h would clash with --h
  RunConfig cfg;

  auto add_h = [&](CLI::App* sub) {
    sub->add_option("--h", cfg.h, "Hurst parameter in (0,1)")->required();
  };
  auto add_collection = [&](CLI::App* sub) {
    sub->add_option("--collection", cfg.collection, "rect:<N> | circle:oriented | circle:shortest | chain[:map]")
        ->required();
  };
  auto add_points = [&](CLI::App* sub) {
    sub->add_option("--points", cfg.points, "JSON file, inline JSON array, or {a,b,...}")->required();
  };
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", cfg.out, "output file (default stdout)"); };
  auto add_tol = [&](CLI::App* sub) { sub->add_option("--tol", cfg.tol, "tolerance"); };

  auto* gram = app.add_subcommand("gram", "Gram matrix of Phi^H at a point set");
  add_collection(gram);
  add_h(gram);
  add_points(gram);
  gram->add_option("--csv", cfg.csv_out, "CSV output file");
  gram->add_option("--json", cfg.json_out, "JSON output file");

  auto* scan = app.add_subcommand("pd-scan", "minimum eigenvalue over an H grid");
  add_collection(scan);
  add_points(scan);
  scan->add_option("--grid", cfg.grid, "start:stop:step or JSON array")->required();
  add_tol(scan);
  add_out(scan);

  auto* sample = app.add_subcommand("sample", "seeded Gaussian samples at a point set");
  add_collection(sample);
  add_h(sample);
  add_points(sample);
  sample->add_option("--seed", cfg.seed, "64-bit seed");
  sample->add_option("--paths", cfg.n_paths, "number of paths")->check(CLI::PositiveNumber);
  sample->add_option("--csv", cfg.csv_out, "per-path CSV output file");
  sample->add_option("--json", cfg.json_out, "JSON summary output file (default stdout)");

  auto* project = app.add_subcommand("project", "m-standard projection along a flow");
  project->add_option("--flow", cfg.flow, "flow JSON file")->required();
  add_h(project);
  project->add_option("--grid", cfg.grid, "clock grid start:stop:step or JSON array");
  add_out(project);

  auto* verify = app.add_subcommand("verify", "structural checks");
  verify->require_subcommand(1);

  auto* v_proj = verify->add_subcommand("projection", "projection along a flow is fBm");
  v_proj->add_option("--flow", cfg.flow, "flow JSON file")->required();
  add_h(v_proj);
  v_proj->add_option("--grid", cfg.grid, "clock grid");
  add_tol(v_proj);
  add_out(v_proj);

  auto* v_stat = verify->add_subcommand("stationarity", "m-stationary C0-increments on one instance");
  v_stat->add_option("--instance", cfg.instance, "JSON {collection, v, u_chain, a_chain}")->required();
  add_h(v_stat);
  add_tol(v_stat);
  add_out(v_stat);

  auto* v_self = verify->add_subcommand("self-similarity", "self-similarity of index H");
  add_collection(v_self);
  add_h(v_self);
  add_points(v_self);
  v_self->add_option("--scale", cfg.scale, "scale factor a > 0");
  add_tol(v_self);
  add_out(v_self);

  auto* v_outer = verify->add_subcommand("outer-continuity", "variance decay along a decreasing chain");
  add_collection(v_outer);
  add_h(v_outer);
  add_points(v_outer);
  add_tol(v_outer);
  add_out(v_outer);

  auto* v_circle = verify->add_subcommand("circle", "half-circle coincidence of the three circle processes");
  add_h(v_circle);
  v_circle->add_option("--pairs", cfg.pairs, "JSON array of [a, b] angle pairs in [0, pi]");
  add_tol(v_circle);
  add_out(v_circle);

  auto* v_char = verify->add_subcommand("characterization", "finite-instance characterization cross-check");
  add_collection(v_char);
  add_h(v_char);
  add_points(v_char);
  v_char->add_option("--flows", cfg.flows, "JSON array of increasing chains of sets");
  add_tol(v_char);
  add_out(v_char);

  auto* counter = app.add_subcommand("counterexample", "the 4-rectangle matrix at H=3/4 and H=1/2");
  add_out(counter);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gram) return cmd_gram(cfg);
    if (*scan) return cmd_pd_scan(cfg);
    if (*sample) return cmd_sample(cfg);
    if (*project) return cmd_project(cfg);
    if (*counter) return cmd_counterexample(cfg);
    if (*v_proj) return verify_projection(cfg);
    if (*v_stat) return verify_stationarity(cfg);
    if (*v_self) return verify_self_similarity(cfg);
    if (*v_outer) return verify_outer_continuity(cfg);
    if (*v_circle) return verify_circle(cfg);
    if (*v_char) return verify_characterization(cfg);
  } catch (const sifbm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    const bool usage = e.code() == sifbm::ErrorCode::ParseError || e.code() == sifbm::ErrorCode::InvalidH;
    return usage ? kExitUsage : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
