// bykov-atlas: command-line front end for the section-map toolkit.
//
// Subcommands: params-check, segment-trace, reversals, tangency, cascade,
// spirals, fixed-points, elliptic-strip, horseshoe, timedelay,
// discrepancy-report. JSON config in, CSV/JSON/SVG out; fixed seed gives
// byte-identical CSV/JSON at any worker count.
//
// Exit codes: 0 success, 1 usage error, 2 domain/validation error,
// 3 internal numerical failure.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bykov/fields.hpp"
#include "bykov/io.hpp"
#include "bykov/maps.hpp"
#include "bykov/ode.hpp"
#include "bykov/params.hpp"
#include "bykov/regions.hpp"
#include "bykov/reversal.hpp"
#include "bykov/segment.hpp"
#include "bykov/spectra.hpp"
#include "bykov/spirals.hpp"
#include "bykov/svg.hpp"

namespace {

using nlohmann::json;
using bykov::operator+;
using bykov::operator-;
using bykov::operator*;

struct RunConfig {
  json raw;
  std::filesystem::path out_dir{"out"};
  std::uint64_t seed{0};
  std::set<std::string> formats{"csv"};
  int jobs{1};
  std::uint64_t config_hash{0};
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

RunConfig load_config(const std::string& path, const std::string& out_dir,
                      std::uint64_t seed, const std::string& formats, int jobs) {
  RunConfig cfg;
  std::ifstream in(path);
  if (!in) throw UsageError("config file not found: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    cfg.raw = json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError("config parse error in " + path + ": " + e.what());
  }
  cfg.out_dir = out_dir;
  cfg.seed = seed;
  cfg.config_hash = bykov::fnv1a(text);
  cfg.formats.clear();
  std::stringstream fs(formats);
  std::string tok;
  while (std::getline(fs, tok, ',')) {
    if (tok != "csv" && tok != "json" && tok != "svg")
      throw UsageError("unknown format: " + tok);
    cfg.formats.insert(tok);
  }
  cfg.jobs = std::max(1, jobs);
  return cfg;
}

bykov::ModelParams params_from_config(const RunConfig& cfg) {
  if (!cfg.raw.contains("params"))
    throw bykov::ParamError(bykov::ParamError::Kind::non_positive, "params", 0.0,
                            "config is missing the params block");
  const json& p = cfg.raw["params"];
  auto need = [&](const char* k) -> double {
    if (!p.contains(k))
      throw bykov::ParamError(bykov::ParamError::Kind::non_positive, k, 0.0,
                              std::string("params block is missing ") + k);
    return p[k].get<double>();
  };
  const double alpha1 = need("alpha1"), C1 = need("C1");
  const double alpha2 = need("alpha2"), E2 = need("E2");
  const double E1 = p.value("E1", 2.0 * C1);
  const double C2 = p.value("C2", 2.0 * E2);
  const double a = need("a");
  return bykov::validate_params(alpha1, C1, E1, alpha2, E2, C2, a);
}

// Index-order assembly keeps results deterministic at any worker count.
void parallel_for(int n, int jobs, const std::function<void(int)>& body) {
  if (jobs <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  const int nthreads = std::min(jobs, n);
  workers.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t)
    workers.emplace_back([&] {
      int i;
      while ((i = next.fetch_add(1)) < n) body(i);
    });
  for (auto& w : workers) w.join();
}

std::string fd(double v) { return bykov::format_double(v); }

void write_formats(const RunConfig& cfg, const std::string& stem,
                   const bykov::CsvTable& table, const json& as_json,
                   const bykov::PlotSpec* plot = nullptr) {
  if (cfg.formats.count("csv"))
    bykov::atomic_write(cfg.out_dir / (stem + ".csv"),
                        bykov::render_csv(table, cfg.config_hash, cfg.seed));
  if (cfg.formats.count("json")) {
    json doc;
    doc["provenance"] = {{"tool", bykov::kToolVersion},
                         {"config_hash", bykov::hex64(cfg.config_hash)},
                         {"seed", cfg.seed}};
    doc["data"] = as_json;
    bykov::atomic_write(cfg.out_dir / (stem + ".json"), doc.dump(2) + "\n");
  }
  if (plot && cfg.formats.count("svg"))
    bykov::atomic_write(cfg.out_dir / (stem + ".svg"), bykov::emit_svg(*plot));
}

// ---- subcommand bodies -----------------------------------------------------

int cmd_params_check(const RunConfig& cfg) {
  const auto p = params_from_config(cfg);
  const auto region = bykov::in_region_B(p);
  const json rat_cfg = cfg.raw.value("rationality", json::object());
  const auto rat = bykov::gamma_rationality(
      p, rat_cfg.value("max_denominator", std::int64_t{100000}),
      rat_cfg.value("tol", 1e-12));

  std::cout << "g1 " << fd(p.g1) << "\n"
            << "g2 " << fd(p.g2) << "\n"
            << "gamma " << fd(p.gamma) << "\n"
            << "region-B bounds (" << fd(region.lower) << ", " << fd(region.middle)
            << ", " << fd(region.upper) << ")\n"
            << "region-B member " << (region.inside ? "true" : "false") << "\n"
            << "gamma rationality " << rat.verdict() << " best " << rat.p << "/"
            << rat.q << " err " << fd(rat.error) << "\n";

  json j;
  j["g1"] = p.g1;
  j["g2"] = p.g2;
  j["gamma"] = p.gamma;
  j["region_B"] = {{"lower", region.lower},
                   {"middle", region.middle},
                   {"upper", region.upper},
                   {"inside", region.inside}};
  j["rationality"] = {{"verdict", rat.verdict()},
                      {"p", rat.p},
                      {"q", rat.q},
                      {"error", rat.error}};
  bykov::CsvTable t;
  t.columns = {"key", "value"};
  t.rows = {{"g1", fd(p.g1)},
            {"g2", fd(p.g2)},
            {"gamma", fd(p.gamma)},
            {"region_lower", fd(region.lower)},
            {"region_middle", fd(region.middle)},
            {"region_upper", fd(region.upper)},
            {"region_inside", region.inside ? "1" : "0"},
            {"rationality", rat.verdict()}};
  write_formats(cfg, "params_check", t, j);
  return 0;
}

int cmd_segment_trace(const RunConfig& cfg) {
  const auto p = params_from_config(cfg);
  const json sc = cfg.raw.value("segment", json::object());
  const double x0 = sc.value("x0", 0.0);
  const double s_min = sc.value("s_min", std::exp(-4.0 * bykov::kPi));
  const double s_max = sc.value("s_max", 1.0);
  const int n = sc.value("n", 2000);

  std::vector<double> grid(n);
  const double llo = std::log(s_min), lhi = std::log(s_max);
  for (int i = 0; i < n; ++i)
    grid[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
  const auto trace = bykov::segment_trace(p, x0, grid);

  bykov::CsvTable t;
  t.columns = {"s", "x2", "y2", "dx2ds", "valid"};
  json rows = json::array();
  bykov::PlotSpec plot;
  plot.kind = bykov::PlotKind::curve;
  plot.title = "segment image";
  plot.x_label = "s";
  plot.y_label = "y2";
  plot.series.resize(1);
  for (const auto& cs : trace.samples) {
    t.rows.push_back({fd(cs.s), fd(cs.point.x), fd(cs.point.y), fd(cs.dxds),
                      cs.valid ? "1" : "0"});
    rows.push_back({{"s", cs.s},
                    {"x2", cs.point.x},
                    {"y2", cs.point.y},
                    {"dx2ds", cs.dxds},
                    {"valid", cs.valid}});
    if (cs.valid) plot.series[0].push_back({cs.s, cs.point.y});
  }
  write_formats(cfg, "segment_trace", t, rows, &plot);
  return 0;
}

int cmd_reversals(const RunConfig& cfg, int n_max_cli) {
  const auto p = params_from_config(cfg);
  const json rc = cfg.raw.value("reversals", json::object());
  const int n_max = n_max_cli >= 0 ? n_max_cli : rc.value("n_max", 20);
  const auto phases = bykov::find_reversal_phases(p);
  if (phases.empty()) throw bykov::NoReversals();

  bykov::CsvTable t;
  t.columns = {"family", "n", "log_s", "s", "phi", "x_lift", "kind"};
  json rows = json::array();
  bykov::PlotSpec plot;
  plot.kind = bykov::PlotKind::ladder;
  plot.title = "reversal ladder";
  plot.x_label = "n";
  plot.y_label = "x_lift";
  for (std::size_t fidx = 0; fidx < phases.size(); ++fidx) {
    const auto events = bykov::reversal_sequence(p, phases[fidx], n_max,
                                                 /*allow_underflow=*/true);
    plot.series.emplace_back();
    for (const auto& ev : events) {
      t.rows.push_back({std::to_string(fidx), std::to_string(ev.n), fd(ev.log_s),
                        fd(ev.s_n), fd(ev.phi_n), fd(ev.x_lift),
                        ev.kind == bykov::ReversalKind::maximum ? "max" : "min"});
      rows.push_back({{"family", fidx},
                      {"n", ev.n},
                      {"log_s", ev.log_s},
                      {"s", ev.s_n},
                      {"phi", ev.phi_n},
                      {"x_lift", ev.x_lift}});
      plot.series.back().push_back({static_cast<double>(ev.n), ev.x_lift});
    }
  }
  write_formats(cfg, "reversals", t, rows, &plot);
  return 0;
}

int cmd_tangency(const RunConfig& cfg) {
  const auto p = params_from_config(cfg);
  const json tc = cfg.raw.value("tangency", json::object());
  const double line_x = tc.value("stable_line_x", 0.0);
  const int n_max = tc.value("n_max", 200);
  const double tol = tc.value("tol_angle", 0.1);
  const auto phases = bykov::find_reversal_phases(p);
  if (phases.empty()) throw bykov::NoReversals();

  bykov::CsvTable t;
  t.columns = {"family", "n", "x_lift", "circular_dist", "arc_length"};
  json rows = json::array();
  for (std::size_t fidx = 0; fidx < phases.size(); ++fidx) {
    for (const auto& c : bykov::tangency_search(p, line_x, phases[fidx], n_max, tol)) {
      t.rows.push_back({std::to_string(fidx), std::to_string(c.event.n),
                        fd(c.event.x_lift), fd(c.circular_dist), fd(c.arc_length)});
      rows.push_back({{"family", fidx},
                      {"n", c.event.n},
                      {"x_lift", c.event.x_lift},
                      {"circular_dist", c.circular_dist},
                      {"arc_length", c.arc_length}});
    }
  }
  write_formats(cfg, "tangency", t, rows);
  return 0;
}

int cmd_cascade(const RunConfig& cfg) {
  const auto p = params_from_config(cfg);
  const json cc = cfg.raw.value("cascade", json::object());
  const int k_max = cc.value("k_max", 2);
  const double line_x = cc.value("stable_line_x", 0.0);
  const double tol = cc.value("tol_angle", 0.5);
  const auto per_order = bykov::cascade_scan(p, k_max, line_x, tol);

  bykov::CsvTable t;
  t.columns = {"order", "s", "x_lift", "circular_dist", "arc_length"};
  json rows = json::array();
  for (std::size_t k = 0; k < per_order.size(); ++k)
    for (const auto& c : per_order[k]) {
      t.rows.push_back({std::to_string(k + 1), fd(c.event.s_n), fd(c.event.x_lift),
                        fd(c.circular_dist), fd(c.arc_length)});
      rows.push_back({{"order", k + 1},
                      {"s", c.event.s_n},
                      {"x_lift", c.event.x_lift},
                      {"circular_dist", c.circular_dist},
                      {"arc_length", c.arc_length}});
    }
  write_formats(cfg, "cascade", t, rows);
  return 0;
}

int cmd_spirals(const RunConfig& cfg) {
  const auto p = params_from_config(cfg);
  const json sc = cfg.raw.value("spirals", json::object());
  bykov::SpiralSegmentSpec st{sc.value("stable_x", 0.0),
                              sc.value("s_min", std::exp(-6.0 * bykov::kPi)),
                              sc.value("s_max", 1.0)};
  bykov::SpiralSegmentSpec un{sc.value("unstable_x", 0.0), st.s_min, st.s_max};
  const auto xs = bykov::spiral_intersections(p, st, un);

  bykov::CsvTable t;
  t.columns = {"r", "phi", "angle_between", "s_stable", "s_unstable"};
  json rows = json::array();
  for (const auto& x : xs) {
    t.rows.push_back({fd(x.point.r), fd(x.point.phi), fd(x.angle_between),
                      fd(x.s1), fd(x.s2)});
    rows.push_back({{"r", x.point.r},
                    {"phi", x.point.phi},
                    {"angle_between", x.angle_between},
                    {"s_stable", x.s1},
                    {"s_unstable", x.s2}});
  }
  write_formats(cfg, "spirals", t, rows);
  std::cout << xs.size() << " intersections\n";
  return 0;
}

int cmd_fixed_points(const RunConfig& cfg) {
  const auto p = params_from_config(cfg);
  const json fc = cfg.raw.value("fixed_points", json::object());
  bykov::SearchBox box{fc.value("x_min", -bykov::kPi), fc.value("x_max", bykov::kPi),
                       fc.value("y_min", 1e-6), fc.value("y_max", 1e-2)};
  const int grid = fc.value("grid", 12);
  const auto search = bykov::find_fixed_points(p, box, grid);

  bykov::CsvTable t;
  t.columns = {"x", "y", "residual", "det", "trace", "class"};
  json rows = json::array();
  for (const auto& fp : search.points) {
    t.rows.push_back({fd(fp.point.x), fd(fp.point.y), fd(fp.residual),
                      fd(fp.classification.det), fd(fp.classification.trace),
                      bykov::to_string(fp.classification.cls)});
    rows.push_back({{"x", fp.point.x},
                    {"y", fp.point.y},
                    {"residual", fp.residual},
                    {"det", fp.classification.det},
                    {"trace", fp.classification.trace},
                    {"class", bykov::to_string(fp.classification.cls)}});
  }
  write_formats(cfg, "fixed_points", t, rows);
  std::cout << search.points.size() << " fixed points ("
            << search.seeds_dropped << "/" << search.seeds_total
            << " seeds dropped)\n";
  return 0;
}

int cmd_elliptic_strip(const RunConfig& cfg) {
  const auto p = params_from_config(cfg);
  const json ec = cfg.raw.value("elliptic_strip", json::object());
  double phi0;
  if (ec.contains("phi0")) {
    phi0 = ec["phi0"].get<double>();
  } else {
    const auto phases = bykov::find_reversal_phases(p);
    if (phases.empty()) throw bykov::NoReversals();
    phi0 = phases.front();
  }
  const auto intervals =
      bykov::elliptic_strip(p, phi0, ec.value("y_max", 1e-2),
                            ec.value("points", 1000), ec.value("y_min", 1e-14));

  bykov::CsvTable t;
  t.columns = {"y_lo", "y_hi"};
  json rows = json::array();
  for (const auto& iv : intervals) {
    t.rows.push_back({fd(iv.y_lo), fd(iv.y_hi)});
    rows.push_back({{"y_lo", iv.y_lo}, {"y_hi", iv.y_hi}});
  }
  write_formats(cfg, "elliptic_strip", t, rows);
  return 0;
}

int cmd_horseshoe(const RunConfig& cfg) {
  const auto p = params_from_config(cfg);
  const json hc = cfg.raw.value("horseshoe", json::object());
  const auto strip = bykov::StripSpec::make(
      p, hc.value("k", 0), hc.value("y_ref", 1e-4), hc.value("x_min", -1.2e-4),
      hc.value("x_max", -4e-5));
  const auto ev = bykov::horseshoe_crossing(p, strip,
                                            hc.value("samples_per_arc", 500));

  json j;
  j["crossing"] = ev.crossing;
  j["reason"] = ev.reason;
  j["expansion_estimate"] = ev.expansion_estimate;
  j["method"] = ev.method;
  bykov::CsvTable t;
  t.columns = {"key", "value"};
  t.rows = {{"crossing", ev.crossing ? "1" : "0"},
            {"reason", ev.reason},
            {"expansion_estimate", fd(ev.expansion_estimate)},
            {"method", ev.method}};
  write_formats(cfg, "horseshoe", t, j);
  std::cout << "crossing " << (ev.crossing ? "true" : "false") << " expansion "
            << fd(ev.expansion_estimate) << "\n";
  return 0;
}

int cmd_timedelay(const RunConfig& cfg) {
  const json tc = cfg.raw.value("timedelay", json::object());
  const std::string field_name = tc.value("field", "michelson");
  bykov::FieldSpec field;
  if (field_name == "michelson") {
    field = bykov::michelson(tc.value("c", 1.0));
  } else {
    throw UsageError("unknown field: " + field_name);
  }
  auto vec3 = [&](const char* k, bykov::Vec3 dflt) {
    if (!tc.contains(k)) return dflt;
    const auto& a = tc[k];
    return bykov::Vec3{a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
  };
  const bykov::Vec3 p0 = vec3("p0", {1.0, 0.0, 0.0});
  const bykov::Vec3 p1 = vec3("p1", {1.4, 0.0, 0.0});
  const int N = tc.value("N", 41);
  const double r = tc.value("r", 4.0);
  const double t_max = tc.value("t_max", 100.0);
  const double spike_factor = tc.value("spike_factor", 2.0);

  // parallel per-sample scan with deterministic index-order assembly
  std::vector<bykov::TimeDelaySample> samples(N);
  parallel_for(N, cfg.jobs, [&](int i) {
    const double t = N > 1 ? static_cast<double>(i) / (N - 1) : 0.0;
    samples[i] = bykov::time_delay(field, p0 + t * (p1 - p0), r, t_max);
  });
  bykov::TimeDelayProfile prof;
  prof.samples = samples;
  for (int i = 1; i + 1 < N; ++i) {
    if (samples[i].T_plus > spike_factor * samples[i - 1].T_plus &&
        samples[i].T_plus > spike_factor * samples[i + 1].T_plus)
      prof.spikes_plus.push_back(i);
    if (samples[i].T_minus > spike_factor * samples[i - 1].T_minus &&
        samples[i].T_minus > spike_factor * samples[i + 1].T_minus)
      prof.spikes_minus.push_back(i);
  }

  bykov::CsvTable t;
  t.columns = {"index", "x0x",  "x0y",          "x0z",          "Tplus",
               "Tminus", "bounded_plus", "bounded_minus"};
  json rows = json::array();
  bykov::PlotSpec plot;
  plot.kind = bykov::PlotKind::profile;
  plot.title = "time delay";
  plot.x_label = "index";
  plot.y_label = "T";
  plot.log_y = true;
  plot.series.resize(2);
  for (int i = 0; i < N; ++i) {
    const auto& s = prof.samples[i];
    t.rows.push_back({std::to_string(i), fd(s.x0[0]), fd(s.x0[1]), fd(s.x0[2]),
                      fd(s.T_plus), fd(s.T_minus), s.bounded_plus ? "1" : "0",
                      s.bounded_minus ? "1" : "0"});
    rows.push_back({{"index", i},
                    {"x0", {s.x0[0], s.x0[1], s.x0[2]}},
                    {"Tplus", s.T_plus},
                    {"Tminus", s.T_minus},
                    {"bounded_plus", s.bounded_plus},
                    {"bounded_minus", s.bounded_minus}});
    plot.series[0].push_back({static_cast<double>(i), s.T_plus});
    plot.series[1].push_back({static_cast<double>(i), s.T_minus});
  }
  write_formats(cfg, "timedelay", t, rows, &plot);
  std::cout << prof.spikes_plus.size() << " spikes (+), "
            << prof.spikes_minus.size() << " spikes (-)\n";
  return 0;
}

int cmd_discrepancy_report(const RunConfig& cfg) {
  const auto p = params_from_config(cfg);
  const json dc = cfg.raw.value("discrepancy", json::object());
  const int n = dc.value("n", 400);
  const double s_min = dc.value("s_min", std::exp(-4.0 * bykov::kPi));
  const double s_max = dc.value("s_max", 0.9);
  std::vector<double> grid(n);
  const double llo = std::log(s_min), lhi = std::log(s_max);
  for (int i = 0; i < n; ++i)
    grid[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
  const auto rep = bykov::formula_discrepancy_report(p, grid);

  auto verdict_row = [](const bykov::FormulaVerdict& v) {
    return std::vector<std::string>{v.name, v.verdict, fd(v.max_rel_deviation),
                                    fd(v.factor_estimate)};
  };
  bykov::CsvTable t;
  t.columns = {"formula", "verdict", "max_rel_deviation", "factor_estimate"};
  t.rows = {verdict_row(rep.derived_vs_fd), verdict_row(rep.printed_vs_derived),
            verdict_row(rep.trace_formula)};
  json j;
  auto vj = [](const bykov::FormulaVerdict& v) {
    return json{{"name", v.name},
                {"verdict", v.verdict},
                {"max_rel_deviation", v.max_rel_deviation},
                {"factor_estimate", v.factor_estimate}};
  };
  j["derived_vs_fd"] = vj(rep.derived_vs_fd);
  j["printed_vs_derived"] = vj(rep.printed_vs_derived);
  j["trace_formula"] = vj(rep.trace_formula);
  j["reversal_condition"] = {{"printed_root_count_minus", rep.printed_root_count_minus},
                             {"printed_root_count_plus", rep.printed_root_count_plus},
                             {"oracle_root_count", rep.oracle_root_count},
                             {"min_A_printed", rep.min_A_printed},
                             {"max_A_printed", rep.max_A_printed},
                             {"verdict", rep.reversal_condition_verdict}};
  write_formats(cfg, "discrepancy_report", t, j);
  std::cout << "derived-vs-fd " << rep.derived_vs_fd.verdict << "\n"
            << "printed-vs-derived " << rep.printed_vs_derived.verdict << "\n"
            << "trace " << rep.trace_formula.verdict << "\n"
            << "reversal-condition " << rep.reversal_condition_verdict << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"section-map atlas for conservative Bykov cycles"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", formats = "csv";
  std::uint64_t seed = 0;
  int jobs = 0;
  int n_max_cli = -1;
  app.add_option("--config", config_path, "JSON configuration file")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "seed for randomized scans");
  app.add_option("--format", formats, "comma list of csv,json,svg");
  app.add_option("--jobs", jobs, "worker count (default: BYKOV_ATLAS_JOBS or 1)");

  const std::vector<std::string> names = {
      "params-check", "segment-trace", "reversals",      "tangency",
      "cascade",      "spirals",       "fixed-points",   "elliptic-strip",
      "horseshoe",    "timedelay",     "discrepancy-report"};
  for (const auto& n : names) {
    auto* sub = app.add_subcommand(n);
    sub->fallthrough();
    if (n == "reversals")
      sub->add_option("--nmax", n_max_cli, "highest reversal index");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (jobs == 0) {
    if (const char* env = std::getenv("BYKOV_ATLAS_JOBS")) jobs = std::atoi(env);
    if (jobs <= 0) jobs = 1;
  }

  try {
    const RunConfig cfg = load_config(config_path, out_dir, seed, formats, jobs);
    const std::string sub = app.get_subcommands().front()->get_name();
    if (sub == "params-check") return cmd_params_check(cfg);
    if (sub == "segment-trace") return cmd_segment_trace(cfg);
    if (sub == "reversals") return cmd_reversals(cfg, n_max_cli);
    if (sub == "tangency") return cmd_tangency(cfg);
    if (sub == "cascade") return cmd_cascade(cfg);
    if (sub == "spirals") return cmd_spirals(cfg);
    if (sub == "fixed-points") return cmd_fixed_points(cfg);
    if (sub == "elliptic-strip") return cmd_elliptic_strip(cfg);
    if (sub == "horseshoe") return cmd_horseshoe(cfg);
    if (sub == "timedelay") return cmd_timedelay(cfg);
    if (sub == "discrepancy-report") return cmd_discrepancy_report(cfg);
    std::cerr << "error: unknown subcommand " << sub << "\n";
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const bykov::ParamError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
