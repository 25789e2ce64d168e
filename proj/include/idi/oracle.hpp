#pragma once

#include <array>
#include <span>
#include <vector>

#include "idi/correlations.hpp"
#include "idi/emitters.hpp"

// Brute-force ground truth for the correlation closed forms. Nothing in here
// reads a StructureFactorTable: every sum is built from emitter positions and
// detector momenta directly.

namespace idi::oracle {

/// Element of S_k in one-line notation (image[a] = sigma(a+1), values 1..k).
struct Permutation {
  std::vector<int> image;
  /// Cycle lengths, descending, fixed points included (sums to k).
  std::vector<int> cycle_type;

  int order() const { return static_cast<int>(image.size()); }
  CycleType kind() const;
};

/// Cycle lengths of a one-line permutation (1-based images).
std::vector<int> cycle_lengths(std::span<const int> image);

/// All k! permutations of S_k in lexicographic image order, k in 2..4.
std::vector<Permutation> enumerate_permutations(int k);

/// Largest emitter count accepted for fourth-order brute force.
inline constexpr int kMaxEmittersOrder4 = 12;

/// Precomputed pairing-rule sum split by leading emitter index, so the outer
/// loop can be distributed while the reduction order stays fixed.
class PairingSum {
 public:
  PairingSum(int k, const EmitterConfig& config, std::span<const Vec2> detector);

  int order() const { return k_; }
  int emitters() const { return n_; }

  /// Sum over all distinct tuples starting with emitter `lead`, all sigma.
  Complex partial(int lead) const;

  /// Adds partials in index order, normalizes by N^k, checks the imaginary
  /// residue.
  double finish(std::span<const Complex> partials, double imag_tol) const;

 private:
  int k_;
  int n_;
  std::vector<Complex> phase_;  // exp(i k_a . R_j), row-major in a
  std::vector<std::array<int, 4>> perms_;
};

/// Normalized k-th order correlation from the pairing rule:
///   (1/N^k) sum_{distinct i_1..i_k} sum_{sigma in S_k}
///       prod_a exp(i k_a.R_{i_a}) exp(-i k_a.R_{i_sigma(a)})
/// Partial sums are accumulated per leading emitter index and combined in
/// index order. Throws ImaginaryResidue if the imaginary part exceeds
/// `imag_tol`, OracleTooLarge for k = 4 with N > kMaxEmittersOrder4.
double expectation_bruteforce(int k, const EmitterConfig& config, std::span<const Vec2> detector,
                              double imag_tol = 1e-10);

/// Detector momenta k_1 = 0, k_{a+1} = k_a + q(u_a) for consecutive index
/// differences.
std::vector<Vec2> detector_from_differences(const QGrid& grid, std::span<const QIndex> diffs);

/// (1 - d_ij)(1 - d_ik)(1 - d_il)(1 - d_jk)(1 - d_jl)(1 - d_kl).
int del_product(int i, int j, int k, int l);

/// The same weight written as the expanded sum of Kronecker-delta products.
int del_expansion(int i, int j, int k, int l);

/// sum_{i,j,k,l} del(i,j,k,l) * (phase factor of the representative
/// permutation of `type`), with physical momenta. Argument counts follow the
/// p-contribution of the same type (0, 1, 2, 3, 4).
Complex restricted_pairing_sum(CycleType type, const EmitterConfig& config,
                               std::span<const Vec2> q);

}  // namespace idi::oracle
