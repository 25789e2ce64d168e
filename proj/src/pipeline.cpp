#include "idi/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "idi/correlations.hpp"

namespace idi {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); }

template <class T>
T get_or(const Json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    bad(std::string("field '") + key + "' has the wrong type");
  }
}

const Json& section(const Json& j, const char* key) {
  static const Json empty = Json::object();
  if (!j.contains(key)) return empty;
  if (!j.at(key).is_object()) bad(std::string("'") + key + "' must be an object");
  return j.at(key);
}

std::vector<Vec2> parse_positions(const Json& arr, int dim) {
  if (!arr.is_array()) bad("'emitters' must be an array");
  std::vector<Vec2> out;
  for (const Json& e : arr) {
    std::vector<double> c;
    if (e.is_number()) {
      c.push_back(e.get<double>());
    } else if (e.is_array() && std::all_of(e.begin(), e.end(), [](const Json& v) { return v.is_number(); })) {
      c = e.get<std::vector<double>>();
    } else {
      bad("each emitter must be a number or an array of numbers");
    }
    if (static_cast<int>(c.size()) != dim) bad("emitter coordinate count differs from grid.dim");
    out.push_back({c[0], dim == 2 ? c[1] : 0.0});
  }
  return out;
}

Scenario parse_scenario(const Json& s) {
  Scenario sc;
  sc.pixels = get_or<int>(s, "pixels", 0);
  sc.count = get_or<double>(s, "count", 0.0);
  sc.magnitudes = get_or<std::vector<double>>(s, "magnitudes", {});
  sc.truth_phases = get_or<std::vector<double>>(s, "truth_phases", {});
  if (sc.pixels < 2) bad("scenario.pixels must be >= 2");
  if (!(sc.count >= 1.0)) bad("scenario.count must be >= 1");
  if (static_cast<int>(sc.magnitudes.size()) != sc.pixels) {
    bad("scenario.magnitudes needs one entry per pixel index");
  }
  if (!sc.truth_phases.empty() && static_cast<int>(sc.truth_phases.size()) != sc.pixels) {
    bad("scenario.truth_phases needs one entry per pixel index");
  }
  if (!s.contains("abs_closure") || !s.at("abs_closure").is_array()) {
    bad("scenario.abs_closure must be an array");
  }
  for (const Json& e : s.at("abs_closure")) {
    const int m = get_or<int>(e, "m", 0);
    const int n = get_or<int>(e, "n", 0);
    const double v = get_or<double>(e, "value", -1.0);
    if (m < 1 || n < 1 || m + n >= sc.pixels) bad("scenario closure indices out of range");
    if (v < 0.0 || v > kPi) bad("scenario closure |Phi| must lie in [0, pi]");
    const QIndex a{std::max(m, n), 0}, b{std::min(m, n), 0};
    sc.closures.push_back({{a, b, classify(a, b)}, std::cos(v), v});
  }
  return sc;
}

}  // namespace

void validate(const RunConfig& c) {
  if (c.dim != 1 && c.dim != 2) bad("grid.dim must be 1 or 2");
  if (c.pixels < 2) bad("grid.pixels must be >= 2");
  if (c.period < 0) bad("grid.period must be positive");
  if (c.order < 2 || c.order > 4) bad("pipeline.order must be 2, 3 or 4");
  const Tolerances& t = c.tolerances;
  for (double v : {t.tol, t.clamp, t.g4, t.mag}) {
    if (!(v > 0.0) || !std::isfinite(v)) bad("all tolerances must be positive and finite");
  }
  if (!(c.noise_sigma >= 0.0) || !std::isfinite(c.noise_sigma)) bad("noise.sigma must be >= 0");
  if (!std::isfinite(c.gauge)) bad("pipeline.gauge must be finite");
  for (const std::string& f : c.formats) {
    if (f != "json" && f != "csv") bad("unknown output format '" + f + "'");
  }
  if (!c.scenario && c.emitters.empty()) bad("'emitters' must list at least one position");
  const int period = c.period == 0 ? c.pixels : c.period;
  for (const Vec2& p : c.emitters) {
    for (double v : {p.x, p.y}) {
      if (!std::isfinite(v) || v != std::round(v) || v < 0 || v > period - 1) {
        bad("emitter positions must be integer lattice sites in 0..P-1");
      }
    }
  }
}

RunConfig parse_run_config(const Json& j) {
  if (!j.is_object()) bad("configuration must be a JSON object");
  RunConfig c;
  const Json& grid = section(j, "grid");
  c.dim = get_or<int>(grid, "dim", 1);
  c.pixels = get_or<int>(grid, "pixels", 9);
  c.period = get_or<int>(grid, "period", 0);
  if (j.contains("emitters")) c.emitters = parse_positions(j.at("emitters"), c.dim);

  const Json& pipe = section(j, "pipeline");
  c.order = get_or<int>(pipe, "order", 3);
  c.use_g4_pruning = get_or<bool>(pipe, "use_g4_pruning", false);
  c.gauge = get_or<double>(pipe, "gauge", 0.0);
  c.both_reflections = get_or<bool>(pipe, "both_reflections", false);

  const Json& tol = section(j, "tolerances");
  c.tolerances.tol = get_or<double>(tol, "tol", c.tolerances.tol);
  c.tolerances.clamp = get_or<double>(tol, "clamp", c.tolerances.clamp);
  c.tolerances.g4 = get_or<double>(tol, "g4", c.tolerances.g4);
  c.tolerances.mag = get_or<double>(tol, "mag", c.tolerances.mag);

  const Json& noise = section(j, "noise");
  c.noise_sigma = get_or<double>(noise, "sigma", 0.0);
  if (noise.contains("seed") && !noise.at("seed").is_null()) {
    c.seed = get_or<std::uint64_t>(noise, "seed", 0);
  }

  const Json& out = section(j, "output");
  c.out_dir = get_or<std::string>(out, "dir", c.out_dir);
  c.formats = get_or<std::vector<std::string>>(out, "formats", c.formats);

  if (j.contains("scenario")) {
    if (!j.at("scenario").is_object()) bad("'scenario' must be an object");
    c.scenario = parse_scenario(j.at("scenario"));
    c.pixels = c.scenario->pixels;
  }
  validate(c);
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    bad("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_run_config(j);
}

Json RunConfig::to_json() const {
  Json j;
  Json pos = Json::array();
  for (const Vec2& p : emitters) {
    pos.push_back(dim == 2 ? Json::array({p.x, p.y}) : Json(p.x));
  }
  j["emitters"] = pos;
  j["grid"] = {{"dim", dim}, {"pixels", pixels}, {"period", period == 0 ? pixels : period}};
  j["pipeline"] = {{"order", order},
                   {"use_g4_pruning", use_g4_pruning},
                   {"gauge", gauge},
                   {"both_reflections", both_reflections}};
  j["tolerances"] = {{"tol", tolerances.tol},
                     {"clamp", tolerances.clamp},
                     {"g4", tolerances.g4},
                     {"mag", tolerances.mag}};
  // The seed is inert without noise; leaving it out keeps noise-free outputs
  // independent of it.
  j["noise"] = {{"sigma", noise_sigma}, {"seed", noise_sigma > 0.0 ? Json(seed) : Json(nullptr)}};
  j["output"] = {{"dir", out_dir}, {"formats", formats}};
  if (scenario) {
    Json closures = Json::array();
    for (const ClosureMeasurement& m : scenario->closures) {
      closures.push_back({{"m", m.equation.m.x}, {"n", m.equation.n.x}, {"value", m.abs_phase}});
    }
    j["scenario"] = {{"pixels", scenario->pixels},
                     {"count", scenario->count},
                     {"magnitudes", scenario->magnitudes},
                     {"abs_closure", closures},
                     {"truth_phases", scenario->truth_phases}};
  }
  return j;
}

QGrid grid_of(const RunConfig& c) {
  return QGrid::periodic(c.dim, c.pixels, c.period == 0 ? c.pixels : c.period);
}

EmitterConfig emitters_of(const RunConfig& c) { return EmitterConfig(c.dim, c.emitters); }

std::vector<CorrelationTable> simulate(const RunConfig& config, Exec exec) {
  validate(config);
  if (config.scenario) bad("simulate needs emitter positions, not a scenario");
  const StructureFactorTable table = structure_factor(emitters_of(config), grid_of(config), -1, exec);
  std::vector<CorrelationTable> out;
  for (int order = 2; order <= config.order; ++order) {
    CorrelationTable t;
    t.order = order;
    t.tuples = correlation_tuples(order, config.pixels, config.dim);
    t.values = correlation_values(order, table, t.tuples, exec);
    out.push_back(std::move(t));
  }
  if (config.noise_sigma > 0.0) {
    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> noise(0.0, config.noise_sigma);
    for (CorrelationTable& t : out) {
      for (double& v : t.values) v += noise(rng);
    }
  }
  return out;
}

namespace {

std::vector<G4Sample> g4_samples_for(int pixels, std::span<const double> values) {
  std::vector<G4Sample> out;
  const auto tuples = default_g4_tuples(pixels);
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    out.push_back({tuples[i][0], tuples[i][1], tuples[i][2], values[i]});
  }
  return out;
}

}  // namespace

RetrievalOutcome run_retrieval(const RunConfig& config) {
  validate(config);
  if (config.dim != 1) bad("retrieval runs on 1D grids only");
  RetrievalOutcome out;
  const int pixels = config.pixels;
  out.pixels = pixels;
  const Tolerances& tol = config.tolerances;
  std::vector<double> truth_phase(pixels, 0.0);
  bool have_truth = false;

  if (config.scenario) {
    const Scenario& sc = *config.scenario;
    out.count_estimate = out.count_used = sc.count;
    out.magnitudes = sc.magnitudes;
    out.measurements = sc.closures;
    if (!sc.truth_phases.empty()) {
      have_truth = true;
      truth_phase = sc.truth_phases;
    }
  } else {
    const QGrid grid = grid_of(config);
    const EmitterConfig emitters = emitters_of(config);
    const StructureFactorTable table = structure_factor(emitters, grid, -1, Exec::parallel);

    std::vector<std::vector<QIndex>> g2_tuples;
    for (int u = 0; u < pixels; ++u) g2_tuples.push_back({QIndex{u, 0}});
    std::vector<std::vector<QIndex>> g3_tuples;
    for (const ClosureEquation& eq : canonical_equations(pixels, 1)) g3_tuples.push_back({eq.m, eq.n});
    std::vector<std::vector<QIndex>> g4_tuples;
    if (config.use_g4_pruning) {
      for (const auto& t : default_g4_tuples(pixels)) g4_tuples.push_back({t[0], t[1], t[2]});
    }
    std::vector<double> g2v = correlation_values(2, table, g2_tuples, Exec::serial);
    std::vector<double> g3v = correlation_values(3, table, g3_tuples, Exec::serial);
    std::vector<double> g4v;
    if (!g4_tuples.empty()) {
      // Tuples reaching past the pixel range are still simulated; pruning
      // skips the ones it cannot predict from M magnitudes.
      g4v = correlation_values(4, table, g4_tuples, Exec::serial);
    }
    if (config.noise_sigma > 0.0) {
      std::mt19937_64 rng(config.seed);
      std::normal_distribution<double> noise(0.0, config.noise_sigma);
      for (double& v : g2v) v += noise(rng);
      for (double& v : g3v) v += noise(rng);
      for (double& v : g4v) v += noise(rng);
    }

    out.count_estimate = invert_g2_count(g2v[0]);
    // The emitter count is an integer; the rounding residual stays in the
    // report as count_estimate.
    out.count_used = std::max(1.0, std::round(out.count_estimate));
    for (int u = 0; u < pixels; ++u) {
      out.magnitudes.push_back(invert_g2_magnitude(g2v[u], out.count_used, tol.clamp));
    }
    out.defined.assign(pixels, true);
    const double nn = out.count_used;
    for (int u = 1; u < pixels; ++u) {
      const double m = out.magnitudes[u];
      out.defined[u] = m * m > tol.mag * nn * nn;
    }
    const auto eqs = canonical_equations(pixels, 1);
    for (std::size_t e = 0; e < eqs.size(); ++e) {
      const ClosureEquation& eq = eqs[e];
      const int a = eq.m.x, b = eq.n.x, c = a + b;
      if (!out.defined[a] || !out.defined[b] || !out.defined[c]) continue;
      out.measurements.push_back(invert_g3_cosine(
          eq, g3v[e], nn, {out.magnitudes[a], out.magnitudes[b], out.magnitudes[c]}, 0.0, tol.clamp));
    }
    if (!g4v.empty()) out.g4_samples = g4_samples_for(pixels, g4v);

    have_truth = true;
    for (int u = 0; u < pixels; ++u) truth_phase[u] = std::arg(table.at({u, 0}));
  }

  const double nn = out.count_used;
  if (out.defined.empty()) {
    out.defined.assign(pixels, true);
    for (int u = 1; u < pixels; ++u) {
      const double m = out.magnitudes[u];
      out.defined[u] = m * m > tol.mag * nn * nn;
    }
  }

  if (config.scenario && config.use_g4_pruning && have_truth) {
    const QGrid grid{1, pixels, 1.0};
    const StructureFactorTable synthetic =
        StructureFactorTable::from_half(grid, pixels - 1, nn, [&](QIndex u) {
          return std::polar(out.magnitudes[u.x], truth_phase[u.x]);
        });
    std::vector<double> values;
    for (const auto& t : default_g4_tuples(pixels)) {
      const auto idx = g4_closed_indices(t[0], t[1], t[2]);
      const bool fits = std::all_of(idx.begin(), idx.end(),
                                    [&](QIndex u) { return u.extent() <= pixels - 1; });
      values.push_back(fits ? g4_closed(synthetic, t[0], t[1], t[2]) : 0.0);
    }
    out.g4_samples = g4_samples_for(pixels, values);
  }

  RetrievalOptions options;
  options.gauge_phase = config.gauge;
  options.both_reflections = config.both_reflections;
  options.tol = tol.tol;
  out.g3_report = retrieve_1d(pixels, out.measurements, options, out.defined);

  if (config.use_g4_pruning) {
    out.pruned = prune_with_g4(out.g3_report, out.magnitudes, nn, out.g4_samples, tol.g4, tol.tol);
  }

  if (have_truth) {
    PhaseMap truth;
    for (int u = 0; u < pixels; ++u) {
      if (out.defined[u]) truth[{u, 0}] = wrap_phase(truth_phase[u]);
    }
    out.truth = truth;
    for (const PhaseHypothesis& h : out.final_report().hypotheses) {
      out.alignment.push_back(gauge_fit(to_phase_map(h), truth, 1));
      const double e = out.alignment.back().error;
      if (!out.best_alignment_error || e < *out.best_alignment_error) out.best_alignment_error = e;
    }
  }
  return out;
}

Json provenance(const RunConfig& config) {
  return {{"tool", kToolName}, {"version", kToolVersion}, {"config", config.to_json()}};
}

Json equation_json(const ClosureEquation& eq, int dim) {
  if (dim == 1) return {{"m", eq.m.x}, {"n", eq.n.x}};
  return {{"m", {eq.m.x, eq.m.y}}, {"n", {eq.n.x, eq.n.y}}};
}

namespace {

Json report_section(const RetrievalReport& r) {
  Json j;
  j["status"] = to_string(r.status);
  j["anchor"] = r.anchor;
  j["hypothesis_count"] = r.hypotheses.size();
  j["ambiguity"] = r.ambiguity;
  return j;
}

Json equations_json(const std::vector<ClosureEquation>& eqs) {
  Json arr = Json::array();
  for (const ClosureEquation& e : eqs) arr.push_back(equation_json(e, 1));
  return arr;
}

}  // namespace

Json report_json(const RunConfig& config, const RetrievalOutcome& o) {
  const RetrievalReport& r = o.final_report();
  Json j = provenance(config);
  j["pixels"] = o.pixels;
  j["count_estimate"] = o.count_estimate;
  j["count_used"] = o.count_used;
  j["magnitudes"] = o.magnitudes;
  Json meas = Json::array();
  for (const ClosureMeasurement& m : o.measurements) {
    Json e = equation_json(m.equation, 1);
    e["cos"] = m.cos_value;
    e["abs_phase"] = m.abs_phase;
    meas.push_back(e);
  }
  j["closure_measurements"] = meas;
  j["status"] = to_string(r.status);
  j["anchor"] = r.anchor;
  j["ambiguity"] = r.ambiguity;
  j["undefined_indices"] = r.undefined;
  j["equations_skipped"] = equations_json(r.skipped);
  j["equations_missing"] = equations_json(r.missing);
  Json used = Json::object();
  for (int t = 0; t < static_cast<int>(r.equations_used.size()); ++t) {
    if (!r.equations_used[t].empty()) used[std::to_string(t)] = equations_json(r.equations_used[t]);
  }
  j["equations_used"] = used;

  Json hyps = Json::array();
  for (std::size_t i = 0; i < r.hypotheses.size(); ++i) {
    const PhaseHypothesis& h = r.hypotheses[i];
    Json phases = Json::object();
    for (std::size_t u = 0; u < h.phases.size(); ++u) {
      if (h.phases[u]) phases[std::to_string(u)] = *h.phases[u];
    }
    Json signs = Json::array();
    for (const SignChoice& s : h.signs) {
      Json e = equation_json(s.equation, 1);
      e["sign"] = s.sign;
      signs.push_back(e);
    }
    Json hj{{"phases", phases}, {"signs", signs}};
    if (i < o.alignment.size()) {
      hj["alignment"] = {{"reflection", o.alignment[i].reflection},
                         {"ramp", o.alignment[i].ramp.x},
                         {"error", o.alignment[i].error}};
    }
    hyps.push_back(hj);
  }
  j["hypotheses"] = hyps;
  if (o.best_alignment_error) {
    j["alignment_error"] = *o.best_alignment_error;
  } else {
    j["alignment_error"] = nullptr;
  }
  if (o.pruned) {
    j["g3_only"] = report_section(o.g3_report);
    j["g4_pruning"] = {{"samples_used", r.g4_samples_used},
                       {"samples_skipped", r.g4_samples_skipped},
                       {"eps_g4", config.tolerances.g4}};
  }
  return j;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string correlation_csv(const RunConfig& config, const CorrelationTable& table, int dim) {
  std::ostringstream out;
  out << "# " << kToolName << ' ' << kToolVersion << " config=" << config.to_json().dump() << '\n';
  const int args = table.order - 1;
  for (int a = 1; a <= args; ++a) {
    out << 'u' << a << (dim == 2 ? "x," : ",");
    if (dim == 2) out << 'u' << a << "y,";
  }
  out << 'g' << table.order << '\n';
  for (std::size_t i = 0; i < table.tuples.size(); ++i) {
    for (QIndex u : table.tuples[i]) {
      out << u.x << ',';
      if (dim == 2) out << u.y << ',';
    }
    out << format_number(table.values[i]) << '\n';
  }
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw Error(ErrorCode::Io, "failed writing '" + path + "'");
}

}  // namespace idi
