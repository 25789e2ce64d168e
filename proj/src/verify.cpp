#include "idi/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "idi/closure.hpp"
#include "idi/correlations.hpp"
#include "idi/oracle.hpp"
#include "idi/pipeline.hpp"

namespace idi {

namespace {

struct Worst {
  double value = 0.0;
  std::string where;

  void update(double r, const std::string& at) {
    if (!(r <= value)) {  // also catches NaN
      value = r;
      where = at;
    }
  }
};

Check make_check(std::string name, const Worst& w, double threshold) {
  return {std::move(name), w.value <= threshold, w.value, threshold, w.where};
}

EmitterConfig random_config(std::mt19937_64& rng, int dim, int n, double period) {
  std::uniform_real_distribution<double> pos(0.0, period);
  std::vector<Vec2> p;
  for (int i = 0; i < n; ++i) {
    const double x = pos(rng);
    const double y = dim == 2 ? pos(rng) : 0.0;
    p.push_back({x, y});
  }
  return EmitterConfig(dim, std::move(p));
}

QIndex random_index(std::mt19937_64& rng, int dim, int span) {
  std::uniform_int_distribution<int> c(-span, span);
  const int x = c(rng);
  const int y = dim == 2 ? c(rng) : 0;
  return {x, y};
}

std::string label(int k, int n, int draw) {
  std::ostringstream s;
  s << "k=" << k << " N=" << n << " draw=" << draw;
  return s.str();
}

double closed_form(int k, const StructureFactorTable& t, std::span<const QIndex> u) {
  switch (k) {
    case 2: return g2(t, u[0]);
    case 3: return g3(t, u[0], u[1]);
    default: return g4_closed(t, u[0], u[1], u[2]);
  }
}

}  // namespace

CheckList verify_oracle(std::uint64_t seed, int configs, int tuples) {
  std::mt19937_64 rng(seed);
  constexpr int kPixels = 4;
  constexpr int kPeriod = 8;
  CheckList out;
  for (int k = 2; k <= 4; ++k) {
    Worst closed, assembled;
    for (int n = 2; n <= 6; ++n) {
      for (int c = 0; c < configs; ++c) {
        const int dim = 1 + c % 2;
        const EmitterConfig cfg = random_config(rng, dim, n, kPeriod);
        const QGrid grid = QGrid::periodic(dim, kPixels, kPeriod);
        const StructureFactorTable table = structure_factor(cfg, grid);
        for (int t = 0; t < tuples; ++t) {
          std::vector<QIndex> u;
          for (int a = 0; a < k - 1; ++a) u.push_back(random_index(rng, dim, kPixels - 1));
          const auto det = oracle::detector_from_differences(grid, u);
          const double truth = oracle::expectation_bruteforce(k, cfg, det);
          closed.update(std::abs(closed_form(k, table, u) - truth), label(k, n, c));
          if (k == 4) {
            assembled.update(std::abs(g4_assembled(table, u[0], u[1], u[2]) - truth), label(k, n, c));
          }
        }
      }
    }
    out.push_back(make_check("g" + std::to_string(k) + " closed form vs pairing sum", closed, 1e-10));
    if (k == 4) out.push_back(make_check("g4 24-term assembly vs pairing sum", assembled, 1e-10));
  }
  return out;
}

CheckList verify_degenerate() {
  Worst w2, w3, w4;
  const QIndex z{};
  for (int n = 1; n <= 8; ++n) {
    std::vector<double> xs(n);
    std::iota(xs.begin(), xs.end(), 0.0);
    const EmitterConfig cfg = EmitterConfig::line(xs);
    const StructureFactorTable table = structure_factor(cfg, QGrid::periodic(1, 4, 8));
    const double dn = n;
    const std::string at = "N=" + std::to_string(n);
    w2.update(std::abs(g2(table, z) - 2.0 * (1.0 - 1.0 / dn)), at);
    w3.update(std::abs(g3(table, z, z) - 6.0 * (1.0 - 1.0 / dn) * (1.0 - 2.0 / dn)), at);
    const std::vector<Vec2> det(4, Vec2{});
    const double truth = oracle::expectation_bruteforce(4, cfg, det);
    w4.update(std::max(std::abs(g4_closed(table, z, z, z) - truth),
                       std::abs(g4_assembled(table, z, z, z) - truth)),
              at);
  }
  return {make_check("g2(0) = 2(1-1/N) exactly", w2, 0.0),
          make_check("g3(0,0) = 6(1-1/N)(1-2/N)", w3, 1e-12),
          make_check("g4(0,0,0) vs pairing sum", w4, 1e-10)};
}

CheckList verify_counting() {
  CheckList out;
  Worst census;
  for (int dim = 1; dim <= 2; ++dim) {
    const int top = dim == 1 ? 16 : 6;
    for (int m = 2; m <= top; ++m) {
      const EquationCensus e = census_of(enumerate_equations(m, dim));
      const EquationCensus f = census_closed_form(m, dim);
      const bool sum_ok = e.total == e.trivial + e.redundant + e.canonical;
      const double diff = std::abs(double(e.total - f.total)) + std::abs(double(e.trivial - f.trivial)) +
                          std::abs(double(e.redundant - f.redundant)) +
                          std::abs(double(e.canonical - f.canonical)) + (sum_ok ? 0.0 : 1.0);
      census.update(diff, "M=" + std::to_string(m) + " d=" + std::to_string(dim));
    }
  }
  out.push_back(make_check("census matches closed forms (1D M<=16, 2D M<=6)", census, 0.0));

  Worst printed;
  printed.update(std::abs(double(census_closed_form(9, 1).canonical - 16)), "F1(9)");
  printed.update(std::abs(double(census_closed_form(3, 2).canonical - 11)), "F2(3)");
  printed.update(std::abs(double(unknown_count(9, 1) - 23)), "unknowns(9,1)");
  printed.update(std::abs(double(unknown_count(3, 2) - 17)), "unknowns(3,2)");
  out.push_back(make_check("printed counts 16, 11 and unknowns 23, 17", printed, 0.0));

  // The M = 9 list as printed; the last line is read with the definitional
  // right-hand side phi(8) - 2 phi(4).
  const std::vector<std::pair<int, int>> list_1d{{1, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}, {6, 1},
                                                 {7, 1}, {2, 2}, {3, 2}, {4, 2}, {5, 2}, {6, 2},
                                                 {3, 3}, {4, 3}, {5, 3}, {4, 4}};
  std::set<std::pair<int, int>> want1(list_1d.begin(), list_1d.end()), got1;
  for (const ClosureEquation& e : canonical_equations(9, 1)) got1.insert({e.m.x, e.n.x});
  Worst l1;
  l1.update(got1 == want1 && got1.size() == 16 ? 0.0 : 1.0, "9-pixel list");
  out.push_back(make_check("9-pixel canonical list equals the 16 printed equations", l1, 0.0));

  using Pair = std::pair<QIndex, QIndex>;
  const std::vector<Pair> list_2d{{{1, 0}, {1, 0}}, {{0, 1}, {0, 1}}, {{1, 0}, {0, 1}},
                                  {{1, 0}, {1, 1}}, {{2, 0}, {0, 1}}, {{0, 1}, {1, 1}},
                                  {{0, 2}, {1, 0}}, {{1, 0}, {1, 2}}, {{2, 0}, {0, 2}},
                                  {{2, 1}, {0, 1}}, {{1, 1}, {1, 1}}};
  const auto unordered = [](QIndex a, QIndex b) { return a < b ? Pair{b, a} : Pair{a, b}; };
  std::set<Pair> want2, got2;
  for (const auto& [a, b] : list_2d) want2.insert(unordered(a, b));
  for (const ClosureEquation& e : canonical_equations(3, 2)) got2.insert(unordered(e.m, e.n));
  Worst l2;
  l2.update(got2 == want2 && got2.size() == 11 ? 0.0 : 1.0, "3x3 list");
  out.push_back(make_check("3x3 canonical list equals the 11 printed equations", l2, 0.0));
  return out;
}

CheckList verify_g4_consistency(std::uint64_t seed, int cases) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  Worst diff, imag;
  for (int c = 0; c < cases; ++c) {
    const int n = 2 + c % 5;
    const int dim = 1 + (c / 5) % 2;
    const EmitterConfig cfg = random_config(rng, dim, n, 8.0);
    const StructureFactorTable table = structure_factor(cfg, QGrid::periodic(dim, 4, 8));
    const QIndex a = random_index(rng, dim, 3), b = random_index(rng, dim, 3),
                 d = random_index(rng, dim, 3);
    const std::string at = "case " + std::to_string(c) + " N=" + std::to_string(n);
    diff.update(std::abs(g4_closed(table, a, b, d) - g4_assembled(table, a, b, d)), at);
    imag.update(std::abs(g4_assembled_complex(table, a, b, d).imag()), at);
  }
  return {make_check("collected g4 vs 24-term assembly", diff, 1e-10),
          make_check("24-term assembly imaginary residue", imag, 1e-10)};
}

namespace {

RunConfig worked_example_config(bool prune) {
  RunConfig c;
  Scenario s;
  s.pixels = 5;
  s.count = 4.0;
  // |S(1)| != |S(2)| so that g4(1,1,1) separates the phi(3) branches.
  s.magnitudes = {4.0, 2.0, 1.0, 1.5, 1.0};
  s.truth_phases = {0.0, 0.0, 1.0, 0.0, 1.0};
  for (auto [m, n] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {3, 1}, {2, 2}}) {
    const QIndex a{m, 0}, b{n, 0};
    s.closures.push_back({{a, b, classify(a, b)}, std::cos(1.0), 1.0});
  }
  c.scenario = s;
  c.pixels = 5;
  c.use_g4_pruning = prune;
  return c;
}

// Largest distance between two phase sets in either direction, or 10 when
// their sizes differ.
double set_distance(const std::vector<double>& got, const std::vector<double>& want) {
  if (got.size() != want.size()) return 10.0;
  const auto one_way = [](const std::vector<double>& from, const std::vector<double>& to) {
    double worst = 0.0;
    for (double a : from) {
      double best = 10.0;
      for (double b : to) best = std::min(best, wrapped_distance(a, b));
      worst = std::max(worst, best);
    }
    return worst;
  };
  const double worst = std::max(one_way(got, want), one_way(want, got));
  return worst;
}

std::vector<double> distinct_values(const RetrievalReport& r, int u) {
  CandidateSet s(1e-9);
  for (const PhaseHypothesis& h : r.hypotheses) {
    if (h.phases[u]) s.insert(*h.phases[u]);
  }
  return s.values();
}

}  // namespace

CheckList verify_worked_example() {
  CheckList out;
  try {
    const RetrievalOutcome plain = run_retrieval(worked_example_config(false));
    const RetrievalReport& r = plain.g3_report;
    Worst w;
    w.update(set_distance(distinct_values(r, 2), {1.0}), "phi(2)");
    w.update(set_distance(distinct_values(r, 3), {2.0, 0.0}), "phi(3)");
    w.update(set_distance(distinct_values(r, 4), {3.0, 1.0}), "phi(4)");
    w.update(r.status == RetrievalStatus::ambiguous ? 0.0 : 10.0, "status");
    out.push_back(make_check("g3 only: phi(2)=1, phi(3) in {2,0}, phi(4) in {3,1}", w, 1e-9));

    const RetrievalOutcome pruned = run_retrieval(worked_example_config(true));
    const RetrievalReport& p = pruned.final_report();
    Worst v;
    v.update(set_distance(distinct_values(p, 3), {0.0}), "phi(3)");
    v.update(set_distance(distinct_values(p, 4), {1.0}), "phi(4)");
    v.update(p.status == RetrievalStatus::unique ? 0.0 : 10.0, "status");
    out.push_back(make_check("with g4(1,1,1): unique, phi(4)=1", v, 1e-9));
  } catch (const Error& e) {
    out.push_back({"worked example", false, 0.0, 1e-9, e.what()});
  }
  return out;
}

CheckList verify_end_to_end(std::uint64_t seed, int runs) {
  std::mt19937_64 rng(seed + 1);
  constexpr double kAlign = 1e-6;
  Worst contained_g3, contained_g4, count_growth, unique_err;
  int failures = 0;
  std::string first_failure;
  for (int run = 0; run < runs; ++run) {
    const int n = 3 + run % 6;
    std::vector<int> sites(9);
    std::iota(sites.begin(), sites.end(), 0);
    std::shuffle(sites.begin(), sites.end(), rng);
    RunConfig c;
    c.pixels = 9;
    c.period = 9;
    c.order = 4;
    c.use_g4_pruning = true;
    for (int i = 0; i < n; ++i) c.emitters.push_back({double(sites[i]), 0.0});
    const std::string at = "run " + std::to_string(run) + " N=" + std::to_string(n);
    try {
      const RetrievalOutcome o = run_retrieval(c);
      double best_g3 = 10.0;
      for (const PhaseHypothesis& h : o.g3_report.hypotheses) {
        best_g3 = std::min(best_g3, gauge_align(to_phase_map(h), *o.truth, 1));
      }
      contained_g3.update(best_g3, at);
      contained_g4.update(o.best_alignment_error.value_or(10.0), at);
      const double growth = double(o.pruned->hypotheses.size()) - double(o.g3_report.hypotheses.size());
      count_growth.update(std::max(0.0, growth), at);
      if (o.pruned->status == RetrievalStatus::unique) unique_err.update(*o.best_alignment_error, at);
    } catch (const Error& e) {
      if (failures++ == 0) first_failure = at + ": " + e.what();
    }
  }
  CheckList out{make_check("truth within g3 hypotheses (mod gauge)", contained_g3, kAlign),
                make_check("truth survives g4 pruning (mod gauge)", contained_g4, kAlign),
                make_check("pruning never increases hypothesis count", count_growth, 0.0),
                make_check("unique results align within 1e-6", unique_err, kAlign)};
  out.push_back({"pipeline completes on every run", failures == 0, double(failures), 0.0, first_failure});
  return out;
}

CheckList verify_symmetry(std::uint64_t seed, int configs) {
  std::mt19937_64 rng(seed + 2);
  std::uniform_real_distribution<double> shift(-3.0, 3.0);
  constexpr int kPixels = 4;
  Worst herm, linear, mags, reflect, invariant;
  for (int c = 0; c < configs; ++c) {
    const int dim = 1 + c % 2;
    const int n = 2 + c % 6;
    const EmitterConfig cfg = random_config(rng, dim, n, 8.0);
    const QGrid grid = QGrid::periodic(dim, kPixels, 8);
    const StructureFactorTable t = structure_factor(cfg, grid);
    const Vec2 delta{shift(rng), dim == 2 ? shift(rng) : 0.0};
    const StructureFactorTable ts = structure_factor(shift_config(cfg, delta), grid);
    const StructureFactorTable tr = structure_factor(reflect_config(cfg), grid);
    const std::string at = "config " + std::to_string(c);
    const double floor = 1e-6 * n;

    for (std::size_t s = 0; s < t.values().size(); ++s) {
      const QIndex u = t.index_of_slot(s);
      herm.update(std::abs(t.at(-u) - std::conj(t.at(u))), at);
      mags.update(std::abs(ts.magnitude(u) - t.magnitude(u)), at);
      if (t.magnitude(u) < floor) continue;
      const Vec2 q = grid.momentum(u);
      linear.update(std::abs(wrap_phase(std::arg(ts.at(u)) - std::arg(t.at(u)) - dot(q, delta))), at);
      reflect.update(std::abs(wrap_phase(std::arg(tr.at(u)) + std::arg(t.at(u)))), at);
    }
    for (int k = 0; k < 5; ++k) {
      const QIndex a = random_index(rng, dim, kPixels - 1), b = random_index(rng, dim, kPixels - 1),
                   d = random_index(rng, dim, kPixels - 1);
      for (const StructureFactorTable* other : {&ts, &tr}) {
        invariant.update(std::abs(g2(*other, a) - g2(t, a)), at);
        invariant.update(std::abs(g3(*other, a, b) - g3(t, a, b)), at);
        invariant.update(std::abs(g4_closed(*other, a, b, d) - g4_closed(t, a, b, d)), at);
      }
    }
  }
  return {make_check("Hermitian symmetry S(-u) = conj S(u)", herm, 0.0),
          make_check("shift keeps magnitudes", mags, 1e-10),
          make_check("shift adds q.dR to every phase", linear, 1e-10),
          make_check("reflection negates every phase", reflect, 1e-10),
          make_check("g2, g3, g4 invariant under shift and reflection", invariant, 1e-10)};
}

CheckList verify_permutations() {
  const std::vector<std::vector<int>> expected{{1, 1}, {1, 3, 2}, {1, 6, 3, 8, 6}};
  Worst counts;
  for (int k = 2; k <= 4; ++k) {
    std::vector<int> by_type(5, 0);
    int consistent = 0;
    for (const oracle::Permutation& p : oracle::enumerate_permutations(k)) {
      ++by_type[static_cast<int>(p.kind())];
      if (std::accumulate(p.cycle_type.begin(), p.cycle_type.end(), 0) == k) ++consistent;
    }
    std::vector<int> got;
    for (int c : by_type) {
      if (c > 0) got.push_back(c);
    }
    const int total = std::accumulate(got.begin(), got.end(), 0);
    const int fact = k == 2 ? 2 : k == 3 ? 6 : 24;
    counts.update(got == expected[k - 2] && total == fact && consistent == fact ? 0.0 : 1.0,
                  "S" + std::to_string(k));
  }
  Worst del;
  for (int i = 1; i <= 6; ++i) {
    for (int j = 1; j <= 6; ++j) {
      for (int k = 1; k <= 6; ++k) {
        for (int l = 1; l <= 6; ++l) {
          const int d = std::abs(oracle::del_product(i, j, k, l) - oracle::del_expansion(i, j, k, l));
          del.update(d, "(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) +
                            "," + std::to_string(l) + ")");
        }
      }
    }
  }
  return {make_check("S2/S3/S4 type counts (1,1) (1,3,2) (1,6,3,8,6)", counts, 0.0),
          make_check("delta-product expansion over {1..6}^4", del, 0.0)};
}

CheckList verify_scope(const std::string& scope) {
  const auto append = [](CheckList& a, CheckList b) { a.insert(a.end(), b.begin(), b.end()); };
  CheckList out;
  if (scope == "oracle") {
    append(out, verify_oracle());
  } else if (scope == "counting") {
    append(out, verify_counting());
  } else if (scope == "g4-consistency") {
    append(out, verify_g4_consistency());
  } else if (scope == "all") {
    append(out, verify_oracle());
    append(out, verify_degenerate());
    append(out, verify_counting());
    append(out, verify_g4_consistency());
    append(out, verify_worked_example());
    append(out, verify_end_to_end());
    append(out, verify_symmetry());
    append(out, verify_permutations());
  } else {
    throw Error(ErrorCode::InvalidArgument,
                "unknown verify scope '" + scope + "' (oracle, counting, g4-consistency, all)");
  }
  return out;
}

bool all_pass(const CheckList& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

}  // namespace idi
