#include "idi/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "idi/correlations.hpp"

namespace idi {

CandidateSet::CandidateSet(std::initializer_list<double> values, double tol) : tol_(tol) {
  for (double v : values) insert(v);
}

bool CandidateSet::contains(double value) const {
  return std::any_of(values_.begin(), values_.end(),
                     [&](double v) { return wrapped_distance(v, value) <= tol_; });
}

void CandidateSet::insert(double value) {
  if (!contains(value)) values_.push_back(wrap_phase(value));
}

CandidateSet candidate_set_for(double phi_m, double phi_n, double abs_phase, double tol) {
  CandidateSet out(tol);
  out.insert(phi_m + phi_n + abs_phase);
  out.insert(phi_m + phi_n - abs_phase);
  return out;
}

CandidateSet intersect(std::span<const CandidateSet> sets, double tol) {
  CandidateSet out(tol);
  if (sets.empty()) return out;
  for (double v : sets.front().values()) {
    const bool everywhere = std::all_of(sets.begin() + 1, sets.end(), [&](const CandidateSet& s) {
      return std::any_of(s.values().begin(), s.values().end(),
                         [&](double w) { return wrapped_distance(v, w) <= tol; });
    });
    if (everywhere) out.insert(v);
  }
  return out;
}

const char* to_string(RetrievalStatus s) {
  switch (s) {
    case RetrievalStatus::unique: return "unique";
    case RetrievalStatus::ambiguous: return "ambiguous";
    case RetrievalStatus::contradictory: return "contradictory";
  }
  return "unknown";
}

namespace {

struct SignedCandidate {
  double value;
  int sign;
};

bool near_zero_or_pi(double abs_phase, double tol) {
  return abs_phase <= tol || kPi - abs_phase <= tol;
}

std::vector<SignedCandidate> signed_candidates(double base, double abs_phase, bool plus_only,
                                               double tol) {
  std::vector<SignedCandidate> out{{wrap_phase(base + abs_phase), +1}};
  if (plus_only || near_zero_or_pi(abs_phase, tol)) return out;
  out.push_back({wrap_phase(base - abs_phase), -1});
  return out;
}

}  // namespace

void summarize(RetrievalReport& report, double tol) {
  report.ambiguity.assign(report.pixels, 0);
  for (int u = 0; u < report.pixels; ++u) {
    CandidateSet seen(tol);
    for (const PhaseHypothesis& h : report.hypotheses) {
      if (u < static_cast<int>(h.phases.size()) && h.phases[u]) seen.insert(*h.phases[u]);
    }
    report.ambiguity[u] = static_cast<int>(seen.size());
  }
  if (report.hypotheses.empty()) {
    report.status = RetrievalStatus::contradictory;
  } else if (report.hypotheses.size() == 1) {
    report.status = RetrievalStatus::unique;
  } else {
    report.status = RetrievalStatus::ambiguous;
  }
}

RetrievalReport retrieve_1d(int pixels, std::span<const ClosureMeasurement> measurements,
                            const RetrievalOptions& options, const std::vector<bool>& defined_in) {
  if (pixels < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 pixels");
  if (!(options.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "phase tolerance must be > 0");
  std::vector<bool> defined = defined_in.empty() ? std::vector<bool>(pixels, true) : defined_in;
  if (static_cast<int>(defined.size()) != pixels) {
    throw Error(ErrorCode::InvalidArgument, "defined-mask length differs from pixel count");
  }
  defined[0] = true;

  std::map<std::pair<int, int>, double> abs_phase;
  for (const ClosureMeasurement& cm : measurements) {
    const int a = std::max(cm.equation.m.x, cm.equation.n.x);
    const int b = std::min(cm.equation.m.x, cm.equation.n.x);
    if (cm.equation.m.y != 0 || cm.equation.n.y != 0) {
      throw Error(ErrorCode::InvalidArgument, "2D measurement passed to 1D retrieval");
    }
    if (b <= 0 || a + b >= pixels) continue;
    abs_phase[{a, b}] = cm.abs_phase;
  }

  RetrievalReport report;
  report.pixels = pixels;
  report.equations_used.resize(pixels);
  for (int u = 0; u < pixels; ++u) {
    if (!defined[u]) report.undefined.push_back(u);
  }
  for (int u = 1; u < pixels; ++u) {
    if (defined[u]) {
      report.anchor = u;
      break;
    }
  }

  PhaseHypothesis root;
  root.phases.assign(pixels, std::nullopt);
  root.phases[0] = 0.0;
  if (report.anchor > 0) root.phases[report.anchor] = wrap_phase(options.gauge_phase);
  std::vector<PhaseHypothesis> live{root};

  bool fix_next_sign = !options.both_reflections;
  const double tol = options.tol;

  for (int t = 2; t < pixels; ++t) {
    std::vector<ClosureEquation> usable;
    for (int n = 1; 2 * n <= t; ++n) {
      const ClosureEquation eq{{t - n, 0}, {n, 0}, EquationClass::canonical};
      if (!defined[t] || !defined[t - n] || !defined[n]) {
        report.skipped.push_back(eq);
      } else if (!abs_phase.contains({t - n, n})) {
        report.missing.push_back(eq);
      } else {
        usable.push_back(eq);
      }
    }
    if (!defined[t] || t == report.anchor) continue;
    if (usable.empty()) {
      throw Error(ErrorCode::InsufficientCoverage,
                  "no usable closure equation determines phi(" + std::to_string(t) + ")");
    }

    std::vector<double> phis;
    std::vector<bool> plus_only;
    for (const ClosureEquation& eq : usable) {
      const double p = abs_phase.at({eq.m.x, eq.n.x});
      phis.push_back(p);
      const bool fix = fix_next_sign && !near_zero_or_pi(p, tol);
      plus_only.push_back(fix);
      if (fix) fix_next_sign = false;
    }

    std::vector<PhaseHypothesis> next;
    for (const PhaseHypothesis& h : live) {
      std::vector<std::vector<SignedCandidate>> sets;
      for (std::size_t e = 0; e < usable.size(); ++e) {
        const double base = *h.phases[usable[e].m.x] + *h.phases[usable[e].n.x];
        sets.push_back(signed_candidates(base, phis[e], plus_only[e], tol));
      }
      for (const SignedCandidate& c : sets.front()) {
        PhaseHypothesis child = h;
        child.signs.push_back({usable.front(), c.sign});
        bool ok = true;
        for (std::size_t e = 1; e < sets.size() && ok; ++e) {
          const auto hit = std::find_if(sets[e].begin(), sets[e].end(), [&](const SignedCandidate& o) {
            return wrapped_distance(o.value, c.value) <= tol;
          });
          if (hit == sets[e].end()) {
            ok = false;
          } else {
            child.signs.push_back({usable[e], hit->sign});
          }
        }
        if (!ok) continue;
        child.phases[t] = c.value;
        next.push_back(std::move(child));
        if (next.size() > options.max_hypotheses) {
          throw Error(ErrorCode::BranchLimitExceeded,
                      "more than " + std::to_string(options.max_hypotheses) +
                          " hypotheses at phi(" + std::to_string(t) + ")");
        }
      }
    }
    if (next.empty()) {
      throw Error(ErrorCode::ContradictoryMeasurements,
                  "no consistent value for phi(" + std::to_string(t) + ")");
    }
    live = std::move(next);
    report.equations_used[t] = std::move(usable);
  }

  report.hypotheses = std::move(live);
  summarize(report, tol);
  return report;
}

std::vector<std::array<QIndex, 3>> default_g4_tuples(int pixels) {
  std::vector<std::array<QIndex, 3>> out;
  for (int u = 1; u <= (pixels - 1) / 3; ++u) out.push_back({QIndex{u, 0}, QIndex{u, 0}, QIndex{u, 0}});
  return out;
}

RetrievalReport prune_with_g4(const RetrievalReport& report, std::span<const double> magnitudes,
                              double n, std::span<const G4Sample> samples, double eps_g4,
                              double tol) {
  const int pixels = report.pixels;
  if (static_cast<int>(magnitudes.size()) != pixels) {
    throw Error(ErrorCode::InvalidArgument, "need one magnitude per pixel index");
  }
  const std::set<int> undefined(report.undefined.begin(), report.undefined.end());
  const QGrid grid{1, std::max(pixels, 2), 1.0};

  // Samples reaching past the pixel grid cannot be predicted by any
  // hypothesis.
  std::vector<bool> in_grid(samples.size());
  RetrievalReport out = report;
  out.g4_samples_used = 0;
  out.g4_samples_skipped = 0;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto idx = g4_closed_indices(samples[s].u1, samples[s].u2, samples[s].u3);
    in_grid[s] = std::all_of(idx.begin(), idx.end(),
                             [&](QIndex u) { return u.y == 0 && u.extent() <= pixels - 1; });
    (in_grid[s] ? out.g4_samples_used : out.g4_samples_skipped)++;
  }

  out.hypotheses.clear();
  for (const PhaseHypothesis& h : report.hypotheses) {
    const auto covered = [&](QIndex u) {
      const int a = u.x < 0 ? -u.x : u.x;
      return undefined.contains(a) || h.phases[a].has_value();
    };
    const StructureFactorTable table =
        StructureFactorTable::from_half(grid, pixels - 1, n, [&](QIndex u) {
          return std::polar(magnitudes[u.x], h.phases[u.x].value_or(0.0));
        });
    bool keep = true;
    for (std::size_t s = 0; s < samples.size() && keep; ++s) {
      if (!in_grid[s]) continue;
      const G4Sample& smp = samples[s];
      const auto idx = g4_closed_indices(smp.u1, smp.u2, smp.u3);
      if (!std::all_of(idx.begin(), idx.end(), covered)) continue;
      const double predicted = g4_closed(table, smp.u1, smp.u2, smp.u3);
      if (std::abs(predicted - smp.value) > eps_g4) keep = false;
    }
    if (keep) out.hypotheses.push_back(h);
  }
  if (out.hypotheses.empty()) {
    char eps[32];
    std::snprintf(eps, sizeof eps, "%.3g", eps_g4);
    throw Error(ErrorCode::AllHypothesesPruned,
                std::string("no hypothesis reproduces the g4 samples within ") + eps);
  }
  summarize(out, tol);
  return out;
}

PhaseMap to_phase_map(const PhaseHypothesis& h) {
  PhaseMap out;
  for (std::size_t u = 0; u < h.phases.size(); ++u) {
    if (h.phases[u]) out[QIndex{static_cast<int>(u), 0}] = *h.phases[u];
  }
  return out;
}

namespace {

double fit_error(const PhaseMap& retrieved, const PhaseMap& truth, int s, Vec2 a) {
  double worst = 0.0;
  auto t = truth.begin();
  for (auto r = retrieved.begin(); r != retrieved.end(); ++r, ++t) {
    const QIndex u = r->first;
    const double d = wrap_phase(s * r->second + a.x * u.x + a.y * u.y - t->second);
    worst = std::max(worst, std::abs(d));
  }
  return worst;
}

// Ternary search along one coordinate around a, within +-width.
Vec2 refine_axis(const PhaseMap& r, const PhaseMap& t, int s, Vec2 a, bool along_x, double width) {
  double lo = (along_x ? a.x : a.y) - width;
  double hi = (along_x ? a.x : a.y) + width;
  const auto at = [&](double v) {
    Vec2 b = a;
    (along_x ? b.x : b.y) = v;
    return b;
  };
  for (int it = 0; it < 80; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (fit_error(r, t, s, at(m1)) <= fit_error(r, t, s, at(m2))) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  const Vec2 b = at(0.5 * (lo + hi));
  return fit_error(r, t, s, b) < fit_error(r, t, s, a) ? b : a;
}

}  // namespace

GaugeFit gauge_fit(const PhaseMap& retrieved, const PhaseMap& truth, int dim) {
  if (retrieved.size() != truth.size() ||
      !std::equal(retrieved.begin(), retrieved.end(), truth.begin(),
                  [](const auto& a, const auto& b) { return a.first == b.first; })) {
    throw Error(ErrorCode::InvalidArgument, "phase assignments cover different index sets");
  }
  std::vector<QIndex> keys;
  int widest = 1;
  for (const auto& [u, _] : retrieved) {
    if (!u.is_zero()) keys.push_back(u);
    widest = std::max(widest, std::abs(u.x) + std::abs(u.y));
  }
  std::sort(keys.begin(), keys.end(), [](QIndex a, QIndex b) {
    const int ea = std::abs(a.x) + std::abs(a.y), eb = std::abs(b.x) + std::abs(b.y);
    return ea != eb ? ea < eb : a < b;
  });

  GaugeFit best{+1, {}, std::numeric_limits<double>::infinity()};
  for (int s : {+1, -1}) {
    std::vector<Vec2> candidates{{0.0, 0.0}};
    const auto offset = [&](QIndex u) { return wrap_phase(truth.at(u) - s * retrieved.at(u)); };
    if (dim == 1) {
      for (QIndex u : keys) {
        const int span = std::abs(u.x);
        for (int k = 0; k < span; ++k) candidates.push_back({(offset(u) + kTwoPi * k) / u.x, 0.0});
      }
    } else {
      const std::size_t limit = std::min<std::size_t>(keys.size(), 8);
      bool any_pair = false;
      for (std::size_t i = 0; i < limit; ++i) {
        for (std::size_t j = i + 1; j < limit; ++j) {
          const QIndex u = keys[i], v = keys[j];
          const int det = u.x * v.y - u.y * v.x;
          if (det == 0) continue;
          any_pair = true;
          const int ku = std::abs(u.x) + std::abs(u.y), kv = std::abs(v.x) + std::abs(v.y);
          for (int k1 = 0; k1 < ku; ++k1) {
            for (int k2 = 0; k2 < kv; ++k2) {
              const double du = offset(u) + kTwoPi * k1, dv = offset(v) + kTwoPi * k2;
              candidates.push_back({(du * v.y - dv * u.y) / det, (u.x * dv - v.x * du) / det});
            }
          }
        }
      }
      if (!any_pair) {
        for (QIndex u : keys) {
          const double len2 = u.x * u.x + u.y * u.y;
          const int span = std::abs(u.x) + std::abs(u.y);
          for (int k = 0; k < span; ++k) {
            const double c = (offset(u) + kTwoPi * k) / len2;
            candidates.push_back({c * u.x, c * u.y});
          }
        }
      }
    }

    Vec2 local{};
    double local_err = std::numeric_limits<double>::infinity();
    for (Vec2 a : candidates) {
      const double e = fit_error(retrieved, truth, s, a);
      if (e < local_err) {
        local_err = e;
        local = a;
      }
    }
    const double width = kPi / (2.0 * widest);
    for (int sweep = 0; sweep < (dim == 2 ? 3 : 1); ++sweep) {
      local = refine_axis(retrieved, truth, s, local, true, width);
      if (dim == 2) local = refine_axis(retrieved, truth, s, local, false, width);
    }
    local_err = fit_error(retrieved, truth, s, local);
    if (local_err < best.error) best = {s, local, local_err};
  }
  return best;
}

double gauge_align(const PhaseMap& retrieved, const PhaseMap& truth, int dim) {
  return gauge_fit(retrieved, truth, dim).error;
}

}  // namespace idi
