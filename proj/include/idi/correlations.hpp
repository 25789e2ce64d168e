#pragma once

#include <array>
#include <span>

#include "idi/emitters.hpp"

namespace idi {

/// Conjugacy classes of S_4; each class yields one closed-form contribution.
enum class CycleType { identity, transposition, double_transposition, three_cycle, four_cycle };

const char* to_string(CycleType t);

/// Complex degree of coherence S(q(u)) / N.
Complex g1_cdc(const StructureFactorTable& table, QIndex u);

/// 1 - 2/N + |S(u)|^2 / N^2.
double g2(const StructureFactorTable& table, QIndex u);

/// Third-order correlation for differences u1 = k2 - k1, u2 = k3 - k2.
///
/// The closure-phase term |S1||S2||S12| cos(phi12 - phi1 - phi2) is evaluated
/// as Re(conj(S1) conj(S2) S12), which is the same quantity, symmetric under
/// u1 <-> u2 in floating point, and well defined when a magnitude vanishes.
double g3(const StructureFactorTable& table, QIndex u1, QIndex u2);

// Restricted pairing sums over mutually distinct emitter indices, one per
// permutation type. Arguments are index vectors; every composite index of the
// closed form is read from the table.
Complex p1(double n);
Complex p2(const StructureFactorTable& table, QIndex q);
Complex p3(const StructureFactorTable& table, QIndex q1, QIndex q2);
Complex p4(const StructureFactorTable& table, QIndex q1, QIndex q2, QIndex q3);
Complex p5(const StructureFactorTable& table, QIndex q1, QIndex q2, QIndex q3, QIndex q4);

/// Dispatches on type; `args` must hold 0, 1, 2, 3 or 4 indices respectively.
Complex p_contribution(CycleType type, const StructureFactorTable& table,
                       std::span<const QIndex> args);

/// Difference vectors of a four-detector tuple: q1..q3 given, q4 = q1 + q2,
/// q5 = q1 + q2 + q3, q6 = q2 + q3.
struct G4Differences {
  QIndex q1, q2, q3, q4, q5, q6;
  static G4Differences from(QIndex u1, QIndex u2, QIndex u3) {
    return {u1, u2, u3, u1 + u2, u1 + u2 + u3, u2 + u3};
  }
};

/// Sum of the 24 permutation contributions divided by N^4, before dropping the
/// imaginary residue (which cancels pairwise).
Complex g4_assembled_complex(const StructureFactorTable& table, QIndex u1, QIndex u2, QIndex u3);

/// Reference fourth-order correlation: real part of the 24-term assembly.
double g4_assembled(const StructureFactorTable& table, QIndex u1, QIndex u2, QIndex u3);

/// Fully collected fourth-order expression in magnitude / cosine form.
double g4_closed(const StructureFactorTable& table, QIndex u1, QIndex u2, QIndex u3);

/// Every index the collected g4 expression reads (with repetition removed).
std::vector<QIndex> g4_closed_indices(QIndex u1, QIndex u2, QIndex u3);

}  // namespace idi
