#pragma once

#include <array>
#include <vector>

#include "idi/emitters.hpp"

namespace idi {

enum class EquationClass { trivial, redundant, canonical };

const char* to_string(EquationClass c);

/// Closure relation Phi(m, n) = phi(m + n) - phi(m) - phi(n).
///
/// Each unordered pair {(m, n), (n, m)} has one representative, the ordering
/// with the lexicographically larger m; the other ordering is redundant. A
/// representative with a zero argument is trivial, every other representative
/// is canonical.
struct ClosureEquation {
  QIndex m;
  QIndex n;
  EquationClass cls = EquationClass::canonical;

  QIndex target() const { return m + n; }
  friend bool operator==(const ClosureEquation& a, const ClosureEquation& b) {
    return a.m == b.m && a.n == b.n;
  }
};

EquationClass classify(QIndex m, QIndex n);

struct EquationCensus {
  long long total = 0;
  long long trivial = 0;
  long long redundant = 0;
  long long canonical = 0;

  friend bool operator==(const EquationCensus&, const EquationCensus&) = default;
};

/// g3 inversion result for one closure equation. Only |Phi| is observable.
struct ClosureMeasurement {
  ClosureEquation equation;
  double cos_value = 1.0;
  double abs_phase = 0.0;
};

/// All (m, n) with non-negative components and m + n inside the M-pixel grid,
/// ordered by target u (lexicographic) then by m (lexicographic).
std::vector<ClosureEquation> enumerate_equations(int pixels, int dim);

/// Only the canonical equations, in enumeration order.
std::vector<ClosureEquation> canonical_equations(int pixels, int dim);

EquationCensus census_of(const std::vector<ClosureEquation>& equations);

/// Closed-form counts, even or odd branch by parity of M.
EquationCensus census_closed_form(int pixels, int dim);

/// Canonical count plus the phases not fixed by phi(0) = 0 and the gauge:
/// M - 2 in 1D, M^2 - 3 in 2D.
long long unknown_count(int pixels, int dim);

/// Emitter count from g2 at zero difference: N = 2 / (2 - g2(0)).
double invert_g2_count(double g2_at_zero);

inline constexpr double kDefaultClamp = 1e-9;

/// |S| from a g2 value and N, clamping overshoot within `clamp` * N^2.
double invert_g2_magnitude(double g2_value, double n, double clamp = kDefaultClamp);

/// cos Phi (and |Phi|) from a g3 value given N and the three magnitudes
/// |S(u1)|, |S(u2)|, |S(u1 + u2)|.
ClosureMeasurement invert_g3_cosine(const ClosureEquation& equation, double g3_value, double n,
                                    std::array<double, 3> mags, double eps_mag = -1.0,
                                    double clamp = kDefaultClamp);

}  // namespace idi
