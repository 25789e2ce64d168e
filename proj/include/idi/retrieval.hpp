#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "idi/closure.hpp"
#include "idi/emitters.hpp"

namespace idi {

inline constexpr double kDefaultPhaseTol = 1e-6;
inline constexpr double kDefaultG4Tol = 1e-8;

/// Finite set of wrapped phases; no two members closer than `tol`.
class CandidateSet {
 public:
  explicit CandidateSet(double tol = kDefaultPhaseTol) : tol_(tol) {}
  CandidateSet(std::initializer_list<double> values, double tol = kDefaultPhaseTol);

  /// Adds wrap(value) unless an existing member lies within tol.
  void insert(double value);
  bool contains(double value) const;

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  double tol() const { return tol_; }

 private:
  double tol_;
  std::vector<double> values_;
};

/// {phi(m) + phi(n) + |Phi|, phi(m) + phi(n) - |Phi|}, a singleton when |Phi|
/// is 0 or pi within tol.
CandidateSet candidate_set_for(double phi_m, double phi_n, double abs_phase,
                               double tol = kDefaultPhaseTol);

/// Members of the first set that every other set also contains within tol.
CandidateSet intersect(std::span<const CandidateSet> sets, double tol = kDefaultPhaseTol);

enum class RetrievalStatus { unique, ambiguous, contradictory };

const char* to_string(RetrievalStatus s);

struct SignChoice {
  ClosureEquation equation;
  int sign = +1;
};

/// One branch of the sign-ambiguity tree: phases per 1D index (empty where the
/// phase is undefined or not reached) and the closure-phase signs it used.
struct PhaseHypothesis {
  std::vector<std::optional<double>> phases;
  std::vector<SignChoice> signs;
};

struct RetrievalOptions {
  /// Phase assigned to the gauge anchor (the first index with a defined phase,
  /// normally 1).
  double gauge_phase = 0.0;
  /// Keep both point-reflection branches instead of fixing the first
  /// informative sign to +.
  bool both_reflections = false;
  double tol = kDefaultPhaseTol;
  std::size_t max_hypotheses = 1u << 16;
};

struct RetrievalReport {
  int pixels = 0;
  int anchor = -1;
  RetrievalStatus status = RetrievalStatus::contradictory;
  std::vector<PhaseHypothesis> hypotheses;
  /// Distinct phase values per index across hypotheses (0 where undefined).
  std::vector<int> ambiguity;
  std::vector<std::vector<ClosureEquation>> equations_used;
  /// Canonical equations touching an index whose phase is undefined.
  std::vector<ClosureEquation> skipped;
  /// Canonical equations without a supplied measurement.
  std::vector<ClosureEquation> missing;
  std::vector<int> undefined;
  std::size_t g4_samples_used = 0;
  std::size_t g4_samples_skipped = 0;
};

/// Sequential sign-ambiguity lifting on a 1D grid of `pixels` indices.
/// `defined[u]` marks indices whose phase is defined (|S| above threshold);
/// an empty vector means all are. Throws ContradictoryMeasurements,
/// InsufficientCoverage or BranchLimitExceeded.
RetrievalReport retrieve_1d(int pixels, std::span<const ClosureMeasurement> measurements,
                            const RetrievalOptions& options = {},
                            const std::vector<bool>& defined = {});

/// Recomputes status and per-index ambiguity counts from the hypotheses.
void summarize(RetrievalReport& report, double tol);

struct G4Sample {
  QIndex u1, u2, u3;
  double value = 0.0;
};

/// Diagonal tuples (u, u, u) for u = 1 .. floor((M - 1) / 3).
std::vector<std::array<QIndex, 3>> default_g4_tuples(int pixels);

/// Drops hypotheses whose predicted g4 (collected closed form evaluated with
/// the hypothesis phases, the given magnitudes |S(0..M-1)| and N) misses a
/// covered sample by more than eps_g4. Throws AllHypothesesPruned.
RetrievalReport prune_with_g4(const RetrievalReport& report, std::span<const double> magnitudes,
                              double n, std::span<const G4Sample> samples,
                              double eps_g4 = kDefaultG4Tol, double tol = kDefaultPhaseTol);

using PhaseMap = std::map<QIndex, double>;

PhaseMap to_phase_map(const PhaseHypothesis& h);

struct GaugeFit {
  int reflection = +1;
  Vec2 ramp;
  double error = 0.0;
};

/// Best reflection s and linear ramp a minimizing
/// max_u |wrap(s * retrieved(u) + a . u - truth(u))|.
GaugeFit gauge_fit(const PhaseMap& retrieved, const PhaseMap& truth, int dim);

double gauge_align(const PhaseMap& retrieved, const PhaseMap& truth, int dim);

}  // namespace idi
