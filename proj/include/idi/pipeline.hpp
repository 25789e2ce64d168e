#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "idi/closure.hpp"
#include "idi/emitters.hpp"
#include "idi/kernels.hpp"
#include "idi/retrieval.hpp"

namespace idi {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "idiphase";
inline constexpr const char* kToolVersion = "0.1.0";

struct Tolerances {
  double tol = kDefaultPhaseTol;
  double clamp = kDefaultClamp;
  double g4 = kDefaultG4Tol;
  /// Relative magnitude floor; the absolute threshold is mag * N.
  double mag = 1e-12;
};

/// Measurements given directly instead of simulated from emitters (used for
/// the closure-only worked example).
struct Scenario {
  int pixels = 0;
  double count = 0.0;
  std::vector<double> magnitudes;
  std::vector<ClosureMeasurement> closures;
  /// Ground-truth phases per index; only used to synthesize g4 samples and to
  /// score the result.
  std::vector<double> truth_phases;
};

struct RunConfig {
  int dim = 1;
  std::vector<Vec2> emitters;
  int pixels = 9;
  int period = 0;  // 0 means period = pixels
  int order = 3;
  bool use_g4_pruning = false;
  double gauge = 0.0;
  bool both_reflections = false;
  Tolerances tolerances;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::vector<std::string> formats{"json", "csv"};
  std::optional<Scenario> scenario;

  Json to_json() const;
};

/// Throws InvalidConfig with the offending field in the message.
RunConfig parse_run_config(const Json& j);
RunConfig load_run_config(const std::string& path);
void validate(const RunConfig& config);

QGrid grid_of(const RunConfig& config);
EmitterConfig emitters_of(const RunConfig& config);

struct CorrelationTable {
  int order = 2;
  std::vector<std::vector<QIndex>> tuples;
  std::vector<double> values;
};

/// Exact tables for every order up to config.order, plus optional additive
/// Gaussian noise. With sigma = 0 the generator is never touched.
std::vector<CorrelationTable> simulate(const RunConfig& config, Exec exec = Exec::parallel);

struct RetrievalOutcome {
  int pixels = 0;
  double count_estimate = 0.0;
  double count_used = 0.0;
  std::vector<double> magnitudes;
  std::vector<bool> defined;
  std::vector<ClosureMeasurement> measurements;
  std::vector<G4Sample> g4_samples;
  RetrievalReport g3_report;
  std::optional<RetrievalReport> pruned;
  /// Ground-truth phases on the defined indices, when known.
  std::optional<PhaseMap> truth;
  std::vector<GaugeFit> alignment;  // one per final hypothesis
  std::optional<double> best_alignment_error;

  const RetrievalReport& final_report() const { return pruned ? *pruned : g3_report; }
};

/// Forward simulation (or scenario), inversion, sign lifting, optional g4
/// pruning, and gauge alignment against the ground truth.
RetrievalOutcome run_retrieval(const RunConfig& config);

Json provenance(const RunConfig& config);
Json report_json(const RunConfig& config, const RetrievalOutcome& outcome);
Json equation_json(const ClosureEquation& eq, int dim);

/// CSV text with a leading '#' provenance line and a header row; numbers use
/// 17 significant digits.
std::string correlation_csv(const RunConfig& config, const CorrelationTable& table, int dim);
std::string format_number(double v);

void write_file(const std::string& path, const std::string& content);

}  // namespace idi
