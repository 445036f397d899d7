#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "spectra_lab/cantor/dimension.hpp"
#include "spectra_lab/cantor/limit_geometry.hpp"
#include "spectra_lab/cantor/sumset.hpp"
#include "spectra_lab/cantor/thickness.hpp"
#include "spectra_lab/models/avoidance.hpp"
#include "spectra_lab/models/cat_map.hpp"
#include "spectra_lab/models/horseshoe.hpp"
#include "spectra_lab/models/markov_partition.hpp"
#include "spectra_lab/reports/config.hpp"
#include "spectra_lab/reports/expression.hpp"
#include "spectra_lab/spectra/cf_shift.hpp"
#include "spectra_lab/spectra/engine.hpp"
#include "spectra_lab/spectra/flow.hpp"

#ifndef SPECTRA_LAB_VERSION
#define SPECTRA_LAB_VERSION "0.3.0"
#endif

namespace spectra_lab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCertificateFailed = 2;

struct RunReport {
  json config;      // validated config echo
  json results;     // module payload, deterministic for a given config
  json provenance;  // tool, version, timestamp, wall time
  bool certified = true;
  bool certificate_failed = false;
  std::vector<std::pair<std::string, std::string>> attachments;  // extra files: path, content

  std::string rigor() const { return certified ? "certified" : "heuristic"; }
  int exit_code() const { return certificate_failed ? kExitCertificateFailed : kExitOk; }
  json to_json() const {
    return {{"config", config},
            {"results", results},
            {"rigor", rigor()},
            {"status", certificate_failed ? "certificate-failed" : "ok"},
            {"provenance", provenance}};
  }
};

namespace detail {

inline json real_json(const CertifiedReal& x) {
  json j{{"value", x.to_double()}, {"decimal", x.decimal(20)}};
  if (x.exact_sum()) j["exact"] = x.to_string();
  return j;
}

inline json surd_json(const QuadraticSurd& x) { return real_json(CertifiedReal(x)); }

template <class V>
json spectrum_payload(const std::vector<SpectrumSample<V>>& samples, double resolution) {
  json arr = json::array();
  for (const auto& s : samples) {
    json j{{"value", value_traits<V>::to_double(s.value)}, {"witness", s.witness}, {"period", s.period},
           {"kind", to_string(s.kind)}};
    if (auto e = value_traits<V>::exact_string(s.value)) j["value_exact"] = *e;
    arr.push_back(std::move(j));
  }
  auto rep = spectrum_report(samples, resolution);
  json gaps = json::array();
  for (const auto& [lo, hi] : rep.gaps) gaps.push_back({{"lo", lo}, {"hi", hi}});
  auto run = [](const std::optional<SpectrumRun>& r) -> json {
    if (!r) return nullptr;
    return {{"lo", r->lo}, {"hi", r->hi}, {"samples", r->samples}};
  };
  json hist = json::array();
  for (const auto& [edge, count] : rep.histogram) hist.push_back({edge, count});
  json summary{{"count", rep.sample_count}, {"resolution", rep.resolution}, {"densest", run(rep.densest)},
               {"longest", run(rep.longest)}, {"histogram", hist}, {"warnings", rep.warnings}};
  summary["min"] = rep.min ? json(*rep.min) : json(nullptr);
  summary["max"] = rep.max ? json(*rep.max) : json(nullptr);
  return {{"samples", arr}, {"gaps", gaps}, {"nonrigorous", true}, {"summary", summary}};
}

inline double to_d(const BigRational& q) { return q.convert_to<double>(); }

inline json run_spectrum(const json& c, RunReport& rep) {
  const std::string sys = c["system"];
  const int max_period = c["max_period"];
  const double resolution = c["resolution"];
  rep.certified = false;  // sampled spectra are never a certified picture of the spectrum
  json head{{"system", sys}, {"max_period", max_period}};
  std::string obs = c.contains("observable") ? c["observable"].get<std::string>() : "";
  json body;
  if (sys == "cf") {
    const int digits = c["digits"];
    head["digits"] = digits;
    CFShiftSystem s(digits);
    if (obs.empty() || obs == "height") {
      obs = "height";
      body = spectrum_payload(sample_spectrum(s, height_observable(), max_period), resolution);
    } else {
      Expression e(obs, {"alpha", "beta"});
      Observable<CFSequence, double> f{obs,
                                       [e](const CFSequence& x) {
                                         return e({cf_value(x.forward_from(0)).to_double(),
                                                   cf_value(x.backward_from(0)).to_double()});
                                       },
                                       std::nullopt};
      body = spectrum_payload(sample_spectrum(s, f, max_period), resolution);
    }
  } else if (sys == "catmap") {
    if (obs.empty()) obs = "cos(2*pi*x)";
    Expression e(obs, {"x", "y"});
    TorusSystem s(cat_map());
    Observable<TorusPoint, double> f{
        obs, [e](const TorusPoint& p) { return e({to_d(p.x), to_d(p.y)}); }, std::nullopt};
    body = spectrum_payload(sample_spectrum(s, f, max_period), resolution);
  } else if (sys == "horseshoe") {
    const BigRational ls = exact_from_json(c["lambda_s"]), lu = exact_from_json(c["lambda_u"]);
    HorseshoeSystem s(affine_horseshoe(ls, lu));
    head["lambda_s"] = rational_string(ls);
    head["lambda_u"] = rational_string(lu);
    head["dimension"] = s.horseshoe().dimension();
    if (obs.empty() || obs == "x+y") {
      obs = "x+y";
      body = spectrum_payload(sample_spectrum(s, horseshoe_coordinate_sum(), max_period), resolution);
    } else {
      Expression e(obs, {"x", "y"});
      Observable<HorseshoePoint, double> f{
          obs, [e](const HorseshoePoint& p) { return e({to_d(p.x), to_d(p.y)}); }, std::nullopt};
      body = spectrum_payload(sample_spectrum(s, f, max_period), resolution);
    }
  } else {
    std::optional<double> lip;
    if (c.contains("lipschitz_time")) lip = c["lipschitz_time"].get<double>();
    if (obs.empty()) {
      obs = "cos(2*pi*x)+s";
      if (!lip) lip = 1.0;
    }
    const std::string roof_text = c["roof"];
    Expression roof_e(roof_text, {"x", "y"});
    Expression e(obs, {"x", "y", "s"});
    auto susp = suspend(TorusSystem(cat_map()),
                        [roof_e](const TorusPoint& p) { return roof_e({to_d(p.x), to_d(p.y)}); }, roof_text);
    FlowObservable<TorusPoint> f{obs, [e](const TorusPoint& p, double s) { return e({to_d(p.x), to_d(p.y), s}); },
                                 lip};
    const int samples = c["samples"];
    Observable<TorusPoint, double> section{
        "max " + obs, [&](const TorusPoint& x) { return max_f_flow(susp, f, x, samples).value; }, std::nullopt};
    body = spectrum_payload(sample_spectrum(susp.base(), section, max_period), resolution);
    auto inc = flow_section_inclusion(susp, f, max_period);
    json entries = json::array();
    for (const auto& en : inc.entries)
      entries.push_back({{"witness", en.witness},
                         {"period", en.period},
                         {"section_value", en.section_value},
                         {"flow_value", en.flow_value},
                         {"ok", en.ok}});
    head["roof"] = roof_text;
    body["inclusion"] = {{"violations", inc.violations},
                         {"tolerance", inc.tolerance},
                         {"lipschitz_bounded", inc.certified},
                         {"entries", entries}};
    if (inc.violations > 0) rep.certificate_failed = true;
  }
  head["observable"] = obs;
  head.update(body);
  return head;
}

inline json run_cf(const json& c, RunReport& rep) {
  CFSequence x = CFSequence::make(c["left_period"].get<std::vector<Digit>>(), c["center"].get<std::vector<Digit>>(),
                                  c["right_period"].get<std::vector<Digit>>());
  x.origin = 0;
  const std::int64_t pos = c["position"];
  const int n_conv = c["convergents"];
  Digit top = 1;
  for (const auto* v : {&x.left_period, &x.center, &x.right_period})
    for (Digit d : *v) top = std::max(top, d);
  CFShiftSystem sys(static_cast<int>(top));
  auto fwd = x.forward_from(pos);
  json conv = json::array();
  for (const auto& q : convergents(fwd, static_cast<std::size_t>(n_conv))) conv.push_back(rational_string(q));
  CertifiedReal markov = markov_value_at(sys, height_observable(), x);
  auto lag = lagrange_value(sys, height_observable(), x);
  rep.certified = markov.exact_sum() && lag.value.exact_sum();
  return {{"sequence", x},
          {"position", pos},
          {"alpha", surd_json(cf_value(fwd))},
          {"beta", surd_json(cf_value(x.backward_from(pos)))},
          {"height", real_json(height_function(x, pos))},
          {"convergents", conv},
          {"markov_value", real_json(markov)},
          {"lagrange_value", real_json(lag.value)}};
}

inline std::pair<int, int> default_box_depths(const RegularCantorSet& k) {
  const double syms = std::max(2, k.symbol_count());
  int hi = static_cast<int>(std::floor(15 * std::log(2.0) / std::log(syms) + 1e-9));
  return {4, std::clamp(hi, 6, 12)};
}

inline json run_dimension(const json& c, RunReport& rep) {
  const std::string spec = c["set"];
  auto k = parse_cantor_set(spec);
  auto enc = hausdorff_dim(k, c["tol"].get<double>(), c["depth_cap"].get<int>());
  json history = json::array();
  for (const auto& r : enc.history)
    history.push_back({{"depth", r.depth}, {"lower", r.lower}, {"upper", r.upper}, {"estimate", r.estimate}});
  json out{{"set", k.label()},
           {"enclosure",
            {{"lower", enc.lower},
             {"upper", enc.upper},
             {"width", enc.width()},
             {"midpoint", enc.midpoint()},
             {"estimate", enc.estimate},
             {"depth", enc.depth},
             {"converged", enc.converged}}},
           {"history", history}};
  auto at_depth = [&](int d, json& row) {
    for (const auto& r : enc.history)
      if (r.depth == d) {
        row["lower"] = r.lower;
        row["upper"] = r.upper;
      }
  };
  json rows = json::array();
  if (c["box"].get<bool>()) {
    rep.certified = false;  // least-squares slope
    auto [lo, hi] = default_box_depths(k);
    if (c.contains("depths")) {
      lo = c["depths"][0];
      hi = c["depths"][1];
    }
    auto box = box_dim_estimate(k, lo, hi);
    json brows = json::array();
    for (const auto& r : box.rows) {
      json row{{"depth", r.depth}, {"scale", r.scale}, {"count", r.count}};
      brows.push_back(row);
      at_depth(r.depth, row);
      rows.push_back(row);
    }
    out["box"] = {{"slope", box.slope}, {"depths", {lo, hi}}, {"rows", brows}};
  } else {
    for (const auto& r : enc.history) rows.push_back({{"depth", r.depth}, {"lower", r.lower}, {"upper", r.upper}});
  }
  out["rows"] = rows;
  return out;
}

inline json thickness_json(const ThicknessEstimate& t) {
  json j{{"depth", t.depth}, {"infinite", t.infinite}, {"nested", t.nested}, {"parents", t.ledger.size()}};
  if (t.infinite) {
    j["lower_bound"] = "inf";
  } else {
    j["lower_bound"] = rational_string(t.lower_bound);
    j["value"] = t.value();
  }
  if (t.exact_min) j["exact_min"] = surd_json(*t.exact_min);
  return j;
}

inline json run_thickness(const json& c, RunReport& rep) {
  auto k = parse_cantor_set(c["set"].get<std::string>());
  int depth = c.contains("depth") ? c["depth"].get<int>() : default_thickness_depth(k);
  auto t = thickness(k, depth);
  rep.certified = t.nested || t.infinite;
  json j = thickness_json(t);
  j["set"] = k.label();
  return j;
}

inline ExactInterval exact_pair(const json& v) {
  return {QuadraticSurd::rational(exact_from_json(v[0])), QuadraticSurd::rational(exact_from_json(v[1]))};
}

inline json run_sumset(const json& c, RunReport& rep) {
  auto k = parse_cantor_set(c["K"].get<std::string>());
  auto k2 = parse_cantor_set(c["K2"].get<std::string>());
  auto cert = sumset_contains_interval(k, k2, exact_pair(c["target"]), c["depth_cap"].get<int>(),
                                       static_cast<std::size_t>(c["node_budget"].get<std::int64_t>()));
  rep.certified = cert.certified;
  rep.certificate_failed = !cert.certified;
  json j = certificate_json(cert);
  if (!c["proof"].get<bool>()) j.erase("nodes");
  j["K"] = k.label();
  j["K2"] = k2.label();
  return j;
}

inline json run_sweep(const json& c, RunReport& rep) {
  auto k = parse_cantor_set(c["K"].get<std::string>());
  auto k2 = parse_cantor_set(c["K2"].get<std::string>());
  auto range = exact_pair(c["t_range"]);
  BigRational a = range.lo.rational_value(), b = range.hi.rational_value();
  auto depth_for = [&](const RegularCantorSet& s) {
    return c.contains("thickness_depth") ? c["thickness_depth"].get<int>() : default_thickness_depth(s);
  };
  auto tau1 = thickness(k, depth_for(k)), tau2 = thickness(k2, depth_for(k2));
  rep.certified = (tau1.nested || tau1.infinite) && (tau2.nested || tau2.infinite);
  auto sw = stable_intersection_sweep(k, k2, a, b, c["steps"].get<int>(), tau1, tau2);
  json points = json::array();
  for (const auto& p : sw.points)
    points.push_back({{"t", to_d(p.t)}, {"t_exact", rational_string(p.t)}, {"status", to_string(p.status)}});
  json ranges = json::array();
  for (const auto& [lo, hi] : sw.certified_ranges)
    ranges.push_back({{"lo", rational_string(lo)}, {"hi", rational_string(hi)}, {"lo_approx", to_d(lo)},
                      {"hi_approx", to_d(hi)}});
  json out{{"K", k.label()},
           {"K2", k2.label()},
           {"thickness", {thickness_json(tau1), thickness_json(tau2)}},
           {"points", points},
           {"certified_ranges", ranges},
           {"any_certified", sw.any_certified()}};
  const int check = c["cross_check_depth"];
  if (check > 0) {
    json bad = json::array();
    std::size_t checked = 0;
    for (const auto& p : sw.points) {
      if (p.status != GapLemmaStatus::certified_nonempty) continue;
      ++checked;
      if (!intersection_survives(k, k2, p.t, check)) bad.push_back(rational_string(p.t));
    }
    out["cross_check"] = {{"depth", check}, {"checked", checked}, {"false_positives", bad}};
    if (!bad.empty()) rep.certificate_failed = true;
  }
  return out;
}

inline json run_avoid(const json& c, RunReport& rep) {
  const std::string sys = c["system"];
  SubshiftSFT base;
  std::optional<MarkovPartitionModel> model;
  if (sys == "catmap") {
    model = markov_partition_cat();
    base = model->coding;
  } else if (sys == "sft") {
    base = c["subshift"].get<SubshiftSFT>();
  } else {
    base = SubshiftSFT::full_shift(std::stoi(sys.substr(6)));
  }
  SubshiftSFT sub;
  int depth = 1;
  json forbidden;
  if (c.contains("forbid_cells")) {
    std::set<int> cells;
    for (int x : c["forbid_cells"]) cells.insert(x);
    forbidden = {{"cells", cells}};
    if (model) {
      sub = avoidance_subsystem(*model, cells).subsystem;
    } else {
      std::vector<bool> keep(static_cast<std::size_t>(base.size()), true);
      for (int x : cells) {
        if (x >= base.size()) throw std::invalid_argument("forbidden cell out of range");
        keep[static_cast<std::size_t>(x)] = false;
      }
      sub = base.restricted(keep, base.label() + "-avoid").pruned();
    }
  } else {
    FiniteWord w = c["forbid_word"].get<FiniteWord>();
    forbidden = {{"word", w}};
    depth = static_cast<int>(w.size());
    sub = model ? avoidance_subsystem(*model, w).subsystem : avoid_word(base, w);
  }
  const bool empty = sub.empty();
  json out{{"system", sys}, {"original", base}, {"forbidden", forbidden}, {"depth", depth},
           {"subsystem", sub}, {"empty", empty}};
  if (empty) {
    out["note"] = "no orbit avoids the forbidden set";
    out["dimension"] = 0.0;
    return out;
  }
  auto rho = spectral_radius(sub);
  out["spectral_radius"] = {{"lower", rho.lower}, {"upper", rho.upper}};
  auto dim_of = [&](double r) {
    if (r <= 1.0) return 0.0;
    return model ? 2.0 * std::log(r) / std::log(model->automorphism.lambda.to_double())
                 : std::log(r) / std::log(1.0 / c["ratio"].get<double>());
  };
  out["dimension"] = model ? invariant_set_dimension(model->automorphism, sub) : symbolic_dimension(sub, c["ratio"]);
  out["dimension_bounds"] = {dim_of(rho.lower), dim_of(rho.upper)};
  if (!model) out["ratio"] = c["ratio"];
  rep.certified = true;
  return out;
}

inline json run_catmap(const json& c, RunReport& rep) {
  const int max_p = c["max_period"];
  auto t = cat_map();
  auto m = markov_partition_cat();
  json counts = json::array();
  std::ostringstream csv;
  csv << "p,x_num,x_den,y_num,y_den\n";
  const bool want_points = c.contains("points");
  for (int p = 1; p <= max_p; ++p) {
    auto pts = periodic_points(t, p);
    BigInt formula = periodic_point_count(t, p);
    bool match = BigInt(static_cast<long long>(pts.size())) == formula;
    if (!match) rep.certificate_failed = true;
    counts.push_back({{"p", p}, {"enumerated", pts.size()}, {"trace_formula", formula.str()}, {"match", match}});
    if (want_points)
      for (const auto& q : pts)
        csv << p << ',' << numerator(q.x) << ',' << denominator(q.x) << ',' << numerator(q.y) << ','
            << denominator(q.y) << '\n';
  }
  json cells = json::array();
  for (std::size_t i = 0; i < m.cells.size(); ++i) {
    const auto& cell = m.cells[i];
    cells.push_back({{"index", i},
                     {"rectangle", cell.rect},
                     {"crosses", cell.target},
                     {"alpha", {cell.box.alpha.lo.to_string(), cell.box.alpha.hi.to_string()}},
                     {"beta", {cell.box.beta.lo.to_string(), cell.box.beta.hi.to_string()}},
                     {"area", surd_json(cell.area)}});
  }
  auto rho = spectral_radius(m.coding);
  if (want_points) rep.attachments.push_back({c["points"].get<std::string>(), csv.str()});
  return {{"matrix", t.matrix},
          {"lambda", surd_json(t.lambda)},
          {"counts", counts},
          {"partition",
           {{"cells", cells},
            {"coding", m.coding},
            {"total_area", m.total_area().to_string()},
            {"spectral_radius", {rho.lower, rho.upper}}}}};
}

inline json run_limitgeom(const json& c, RunReport& rep) {
  rep.certified = false;  // fitted ratio
  auto k = parse_cantor_set(c["set"].get<std::string>());
  FiniteWord theta = c["theta"].get<FiniteWord>();
  const int lo = c["n_range"][0], hi = c["n_range"][1], points = c["points"];
  // a short itinerary is repeated periodically to the needed length
  FiniteWord full;
  while (full.size() < static_cast<std::size_t>(hi) + 2) full.push_back(theta[full.size() % theta.size()]);
  auto fit = limit_geometry_cauchy(k, full, lo, hi, points);
  json dist = json::array();
  for (std::size_t i = 0; i < fit.distances.size(); ++i)
    dist.push_back({{"n", lo + static_cast<int>(i)}, {"sup_distance", fit.distances[i]},
                    {"cylinder_length", fit.lengths[i]}});
  auto g = limit_geometry(k, full, hi, points);
  json grid = json::array(), values = json::array();
  for (std::size_t i = 0; i < g.grid.size(); ++i) {
    grid.push_back(g.grid[i].to_double());
    values.push_back(g.values[i].to_double());
  }
  return {{"set", k.label()},
          {"theta", full},
          {"n_range", {lo, hi}},
          {"distances", dist},
          {"ratio", fit.ratio},
          {"cauchy_constant", fit.constant},
          {"derivative_bounds",
           {{"c_min", k.derivative_bounds().c_min.to_double()}, {"c_max", k.derivative_bounds().c_max.to_double()}}},
          {"geometry",
           {{"n", hi}, {"grid", grid}, {"values", values}, {"log_derivative", g.log_derivative},
            {"branch_reverses", g.branch_reverses}}}};
}

inline std::string utc_timestamp(std::chrono::system_clock::time_point t) {
  std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace detail

// Decimal with 15 significant digits.
inline std::string csv_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

// Headerful CSV from a report JSON (the whole report or its results object).
inline std::string emit_plot_data(const json& report, const std::string& kind) {
  const json& r = report.contains("results") ? report["results"] : report;
  std::ostringstream out;
  auto need = [&](const char* key, const char* what) {
    if (!r.contains(key) || !r[key].is_array())
      throw std::invalid_argument("plot kind '" + kind + "' needs " + what + " report (missing '" + key + "')");
  };
  auto num = [](const json& v) { return v.is_number() ? csv_number(v.get<double>()) : std::string(); };
  if (kind == "spectrum-rug") {
    need("samples", "a spectrum");
    out << "value,period,witness\n";
    for (const auto& s : r["samples"])
      out << num(s["value"]) << ',' << s["period"].get<int>() << ',' << csv_field(s["witness"].get<std::string>())
          << '\n';
  } else if (kind == "sweep") {
    need("points", "a sweep");
    out << "t,status\n";
    for (const auto& p : r["points"]) out << num(p["t"]) << ',' << p["status"].get<std::string>() << '\n';
  } else if (kind == "dimension-vs-depth") {
    need("rows", "a dimension");
    out << "depth,scale,count,lower,upper\n";
    for (const auto& row : r["rows"]) {
      out << row["depth"].get<int>() << ',' << (row.contains("scale") ? num(row["scale"]) : "") << ','
          << (row.contains("count") ? std::to_string(row["count"].get<std::size_t>()) : "") << ','
          << (row.contains("lower") ? num(row["lower"]) : "") << ',' << (row.contains("upper") ? num(row["upper"]) : "")
          << '\n';
    }
  } else {
    throw std::invalid_argument("unknown plot kind '" + kind + "'");
  }
  return out.str();
}

// Validated config in, report out. Certificate failures are results (exit code 2), not
// exceptions; anything thrown is an operational error.
inline RunReport run(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const auto now = std::chrono::system_clock::now();
  RunReport rep;
  rep.config = config.echo();
  const json& c = config.params;
  const std::string& cmd = config.command;
  if (cmd == "spectrum") {
    rep.results = detail::run_spectrum(c, rep);
  } else if (cmd == "cf") {
    rep.results = detail::run_cf(c, rep);
  } else if (cmd == "dimension") {
    rep.results = detail::run_dimension(c, rep);
  } else if (cmd == "thickness") {
    rep.results = detail::run_thickness(c, rep);
  } else if (cmd == "sumset") {
    rep.results = detail::run_sumset(c, rep);
  } else if (cmd == "sweep") {
    rep.results = detail::run_sweep(c, rep);
  } else if (cmd == "avoid") {
    rep.results = detail::run_avoid(c, rep);
  } else if (cmd == "catmap") {
    rep.results = detail::run_catmap(c, rep);
  } else if (cmd == "limitgeom") {
    rep.results = detail::run_limitgeom(c, rep);
  } else if (cmd == "report") {
    json source = json::parse(detail::read_file(c["input"]));
    if (!config.plot) throw ConfigError("plot", "required for the report command");
    std::string data = emit_plot_data(source, *config.plot);
    rep.results = {{"input", c["input"]}, {"plot", *config.plot}, {"csv", data}};
    if (source.contains("rigor")) rep.certified = source["rigor"] == "certified";
  } else {
    throw std::invalid_argument("unknown command '" + cmd + "'");
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  rep.provenance = {{"tool", "spectra_lab"},
                    {"version", SPECTRA_LAB_VERSION},
                    {"timestamp", detail::utc_timestamp(now)},
                    {"wall_time_s", wall}};
  return rep;
}

// Writes content to path through a temporary file in the same directory and a rename.
inline void write_atomically(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(std::chrono::steady_clock::now().time_since_epoch().count());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path + ": " + ec.message());
  }
}

// Renders every output before writing any, so a failure leaves no partial results. Returns
// the text meant for stdout (JSON when no out path is set, CSV for the report command).
inline std::string write_outputs(const ExperimentConfig& config, const RunReport& rep) {
  std::vector<std::pair<std::string, std::string>> files = rep.attachments;
  std::string stdout_text;
  if (config.command == "report") {
    std::string data = rep.results["csv"];
    if (config.csv) {
      files.push_back({*config.csv, data});
    } else {
      stdout_text = data;
    }
    if (config.out) files.push_back({*config.out, rep.to_json().dump(2) + "\n"});
  } else {
    std::string report = rep.to_json().dump(2) + "\n";
    if (config.plot) {
      if (!config.csv) throw ConfigError("csv", "required when plot is given");
      files.push_back({*config.csv, emit_plot_data(rep.results, *config.plot)});
    }
    if (config.out) {
      files.push_back({*config.out, report});
    } else {
      stdout_text = report;
    }
  }
  for (const auto& [path, content] : files) write_atomically(path, content);
  return stdout_text;
}

}  // namespace spectra_lab
