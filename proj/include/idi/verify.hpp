#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Self-checks shared by the `verify` command and the acceptance test. Each
// suite returns one entry per sub-check with the worst residual it saw.

namespace idi {

struct Check {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  double threshold = 0.0;
  std::string detail;
};

using CheckList = std::vector<Check>;

inline constexpr std::uint64_t kVerifySeed = 20240917;

/// Closed-form g2, g3, g4 against the brute-force pairing sum.
CheckList verify_oracle(std::uint64_t seed = kVerifySeed, int configs = 20, int tuples = 10);
/// Fully degenerate values g2(0), g3(0,0), g4(0,0,0) for N = 1..8.
CheckList verify_degenerate();
/// Enumerated census vs closed forms, and the printed M = 9 / 3x3 lists.
CheckList verify_counting();
/// Collected g4 against the 24-term assembly.
CheckList verify_g4_consistency(std::uint64_t seed = kVerifySeed, int cases = 50);
/// The five-index sign-lifting example with and without g4(1,1,1).
CheckList verify_worked_example();
/// Random 9-pixel configurations through the whole pipeline.
CheckList verify_end_to_end(std::uint64_t seed = kVerifySeed, int runs = 100);
/// Hermitian symmetry, shift and reflection behavior, gauge invariance.
CheckList verify_symmetry(std::uint64_t seed = kVerifySeed, int configs = 50);
/// Symmetric-group type counts and the delta-product expansion.
CheckList verify_permutations();

/// Scope names: oracle, counting, g4-consistency, all. Throws
/// InvalidArgument for anything else.
CheckList verify_scope(const std::string& scope);

bool all_pass(const CheckList& checks);

}  // namespace idi
