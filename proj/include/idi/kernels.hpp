#pragma once

#include <span>
#include <vector>

#include "idi/emitters.hpp"

// Grid-wide evaluation kernels. Each takes an execution policy; the parallel
// path distributes independent slots or tuples over OpenMP threads and writes
// each result to a fixed position, so its output is bit-identical to the
// serial path.

namespace idi {

enum class Exec { serial, parallel };

/// Structure factor over the whole index box. Reach < 0 selects the order-4
/// requirement for the pixel grid.
StructureFactorTable structure_factor(const EmitterConfig& config, const QGrid& grid, int reach,
                                      Exec exec);

/// Difference tuples of a correlation order: order 2 gives every index of the
/// non-negative pixel box; order k > 2 gives (k - 1) non-negative indices whose
/// sum stays inside the box. Lexicographic order.
std::vector<std::vector<QIndex>> correlation_tuples(int order, int pixels, int dim);

/// g2, g3 or g4 (collected form) for each tuple.
std::vector<double> correlation_values(int order, const StructureFactorTable& table,
                                       std::span<const std::vector<QIndex>> tuples, Exec exec);

namespace oracle {

/// Brute-force pairing sum with the per-lead partial sums computed in
/// parallel and reduced in index order.
double expectation_bruteforce(int k, const EmitterConfig& config, std::span<const Vec2> detector,
                              double imag_tol, Exec exec);

}  // namespace oracle

}  // namespace idi
