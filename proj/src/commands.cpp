#include "idi/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "idi/pipeline.hpp"
#include "idi/verify.hpp"

namespace idi {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ContradictoryMeasurements:
    case ErrorCode::InsufficientCoverage:
    case ErrorCode::BranchLimitExceeded:
    case ErrorCode::AllHypothesesPruned:
    case ErrorCode::CosOutOfRange:
    case ErrorCode::OutOfRange:
    case ErrorCode::DegenerateInput:
    case ErrorCode::ImaginaryResidue:
      return 2;
    case ErrorCode::Io:
      return 3;
    default:
      return 1;
  }
}

namespace {

struct Overrides {
  std::string config_path;
  std::optional<int> order;
  bool prune_g4 = false;
  bool both_reflections = false;
  std::optional<double> tol;
  std::optional<double> noise_sigma;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> plot_path;
};

RunConfig load_with(const Overrides& o) {
  RunConfig c = load_run_config(o.config_path);
  if (o.order) c.order = *o.order;
  if (o.prune_g4) c.use_g4_pruning = true;
  if (o.both_reflections) c.both_reflections = true;
  if (o.tol) c.tolerances.tol = *o.tol;
  if (o.noise_sigma) c.noise_sigma = *o.noise_sigma;
  if (o.seed) c.seed = *o.seed;
  if (o.out_dir) c.out_dir = *o.out_dir;
  validate(c);
  return c;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create output directory '" + dir + "': " + ec.message());
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

bool wants(const RunConfig& c, const char* format) {
  return std::find(c.formats.begin(), c.formats.end(), format) != c.formats.end();
}

std::string plot_header(const Json& prov) { return "# " + prov.dump() + "\nseries,x,y\n"; }

int cmd_simulate(const Overrides& o, std::ostream& out) {
  const RunConfig c = load_with(o);
  const std::vector<CorrelationTable> tables = simulate(c);
  ensure_dir(c.out_dir);
  std::vector<std::string> written;
  if (wants(c, "csv")) {
    for (const CorrelationTable& t : tables) {
      const std::string path = join(c.out_dir, "g" + std::to_string(t.order) + ".csv");
      write_file(path, correlation_csv(c, t, c.dim));
      written.push_back(path);
    }
  }
  if (wants(c, "json")) {
    Json j = provenance(c);
    Json arr = Json::array();
    for (const CorrelationTable& t : tables) {
      Json rows = Json::array();
      for (std::size_t i = 0; i < t.tuples.size(); ++i) {
        Json args = Json::array();
        for (QIndex u : t.tuples[i]) args.push_back(c.dim == 2 ? Json::array({u.x, u.y}) : Json(u.x));
        rows.push_back({{"u", args}, {"value", t.values[i]}});
      }
      arr.push_back({{"order", t.order}, {"rows", rows}});
    }
    j["tables"] = arr;
    const std::string path = join(c.out_dir, "simulation.json");
    write_file(path, j.dump(2) + "\n");
    written.push_back(path);
  }
  if (o.plot_path) {
    // g2 against the index; 2D indices are flattened as x + M * y.
    std::string csv = plot_header(provenance(c));
    const CorrelationTable& t = tables.front();
    for (std::size_t i = 0; i < t.tuples.size(); ++i) {
      const QIndex u = t.tuples[i][0];
      csv += "g2," + std::to_string(u.x + c.pixels * u.y) + "," + format_number(t.values[i]) + "\n";
    }
    write_file(*o.plot_path, csv);
    written.push_back(*o.plot_path);
  }
  for (const std::string& p : written) out << "wrote " << p << "\n";
  return 0;
}

int cmd_enumerate(int pixels, int dim, const std::optional<std::string>& out_dir, std::ostream& out) {
  const std::vector<ClosureEquation> eqs = enumerate_equations(pixels, dim);
  const EquationCensus census = census_of(eqs);
  const EquationCensus formula = census_closed_form(pixels, dim);
  Json j{{"tool", kToolName}, {"version", kToolVersion}, {"config", {{"pixels", pixels}, {"dim", dim}}}};
  j["total"] = census.total;
  j["trivial"] = census.trivial;
  j["redundant"] = census.redundant;
  j["canonical"] = census.canonical;
  j["formula_canonical"] = formula.canonical;
  j["match"] = census == formula;
  j["unknowns"] = unknown_count(pixels, dim);
  Json list = Json::array();
  for (const ClosureEquation& e : eqs) {
    if (e.cls == EquationClass::canonical) list.push_back(equation_json(e, dim));
  }
  j["equations"] = list;
  const std::string text = j.dump(2) + "\n";
  out << text;
  if (out_dir) {
    ensure_dir(*out_dir);
    write_file(join(*out_dir, "enumerate.json"), text);
  }
  return census == formula ? 0 : 2;
}

int cmd_retrieve(const Overrides& o, std::ostream& out) {
  const RunConfig c = load_with(o);
  const RetrievalOutcome result = run_retrieval(c);
  const RetrievalReport& r = result.final_report();
  ensure_dir(c.out_dir);
  if (wants(c, "json")) write_file(join(c.out_dir, "retrieval.json"), report_json(c, result).dump(2) + "\n");
  if (wants(c, "csv")) {
    std::string csv = "# " + provenance(c).dump() + "\nhypothesis,u,phase\n";
    for (std::size_t h = 0; h < r.hypotheses.size(); ++h) {
      const auto& phases = r.hypotheses[h].phases;
      for (std::size_t u = 0; u < phases.size(); ++u) {
        if (phases[u]) csv += std::to_string(h) + "," + std::to_string(u) + "," + format_number(*phases[u]) + "\n";
      }
    }
    write_file(join(c.out_dir, "phases.csv"), csv);
  }
  if (o.plot_path) {
    // Retrieved phases after applying each hypothesis's best gauge, against truth.
    std::string csv = plot_header(provenance(c));
    if (result.truth) {
      for (std::size_t h = 0; h < r.hypotheses.size(); ++h) {
        const GaugeFit& fit = result.alignment[h];
        for (const auto& [u, phase] : to_phase_map(r.hypotheses[h])) {
          const double aligned = wrap_phase(fit.reflection * phase + fit.ramp.x * u.x);
          csv += "hypothesis" + std::to_string(h) + "," + format_number(result.truth->at(u)) + "," +
                 format_number(aligned) + "\n";
        }
      }
    }
    write_file(*o.plot_path, csv);
  }
  out << "status: " << to_string(r.status) << ", hypotheses: " << r.hypotheses.size();
  if (result.best_alignment_error) out << ", alignment error: " << *result.best_alignment_error;
  out << "\n";
  return 0;
}

int cmd_verify(const std::string& scope, std::ostream& out) {
  const CheckList checks = verify_scope(scope);
  for (const Check& c : checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name << "  residual=" << c.residual
        << " threshold=" << c.threshold;
    if (!c.pass && !c.detail.empty()) out << "  worst at " << c.detail;
    out << "\n";
  }
  const bool ok = all_pass(checks);
  out << (ok ? "all checks passed" : "some checks failed") << "\n";
  return ok ? 0 : 2;
}

void add_run_options(CLI::App* cmd, Overrides& o, bool retrieval) {
  cmd->add_option("--config", o.config_path, "run configuration (JSON)")->required();
  cmd->add_option("--noise-sigma", o.noise_sigma, "additive Gaussian noise on every g value");
  cmd->add_option("--seed", o.seed, "noise generator seed");
  cmd->add_option("--out", o.out_dir, "output directory (overrides output.dir)");
  cmd->add_option("--emit-plot-data", o.plot_path, "write x/y plot columns to this CSV file");
  if (retrieval) {
    cmd->add_flag("--prune-g4", o.prune_g4, "prune hypotheses with g4 samples");
    cmd->add_flag("--both-reflections", o.both_reflections, "keep both point-reflection branches");
    cmd->add_option("--tol", o.tol, "phase intersection tolerance");
  } else {
    cmd->add_option("--order", o.order, "highest correlation order (2, 3 or 4)");
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Photon-correlation simulation and closure-phase retrieval", kToolName};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  Overrides sim, ret;
  CLI::App* simulate_cmd = app.add_subcommand("simulate", "write g2/g3/g4 tables for a configuration");
  add_run_options(simulate_cmd, sim, false);

  int pixels = 0, dim = 1;
  std::optional<std::string> enum_out;
  CLI::App* enumerate_cmd = app.add_subcommand("enumerate", "closure-equation census for an M-pixel grid");
  enumerate_cmd->add_option("--pixels,-M", pixels, "pixels per axis")->required()->check(CLI::Range(2, 4096));
  enumerate_cmd->add_option("--dim,-d", dim, "grid dimension")->check(CLI::IsMember({1, 2}));
  enumerate_cmd->add_option("--out", enum_out, "also write enumerate.json here");

  CLI::App* retrieve_cmd = app.add_subcommand("retrieve", "recover structure-factor phases");
  add_run_options(retrieve_cmd, ret, true);

  std::string scope = "all";
  CLI::App* verify_cmd = app.add_subcommand("verify", "run the built-in consistency checks");
  verify_cmd->add_option("--scope", scope, "oracle, counting, g4-consistency or all")
      ->check(CLI::IsMember({"oracle", "counting", "g4-consistency", "all"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*simulate_cmd) return cmd_simulate(sim, out);
    if (*enumerate_cmd) return cmd_enumerate(pixels, dim, enum_out, out);
    if (*retrieve_cmd) return cmd_retrieve(ret, out);
    if (*verify_cmd) return cmd_verify(scope, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return 1;
}

}  // namespace idi
