#include "idi/kernels.hpp"

#include "idi/correlations.hpp"
#include "idi/oracle.hpp"

namespace idi {

StructureFactorTable structure_factor(const EmitterConfig& config, const QGrid& grid, int reach,
                                      Exec exec) {
  if (exec == Exec::serial) return structure_factor(config, grid, reach);
  grid.validate();
  if (config.dim() != grid.dim) {
    throw Error(ErrorCode::DimensionMismatch, "config dimension " + std::to_string(config.dim()) +
                                                  " vs grid dimension " + std::to_string(grid.dim));
  }
  if (reach < 0) reach = required_reach(4, grid.pixels - 1);

  // Evaluate the non-negative half into a scratch table, then mirror it the
  // same way the serial builder does.
  const int side = 2 * reach + 1;
  const long long slots = static_cast<long long>(side) * (grid.dim == 2 ? side : 1);
  std::vector<Complex> half(static_cast<std::size_t>(slots));
  const StructureFactorTable layout(grid, reach, config.count(), half);
#pragma omp parallel for schedule(static)
  for (long long s = 0; s < slots; ++s) {
    const QIndex u = layout.index_of_slot(static_cast<std::size_t>(s));
    if (u < QIndex{}) continue;
    half[static_cast<std::size_t>(s)] = structure_factor_at(config, grid.momentum(u));
  }
  return StructureFactorTable::from_half(grid, reach, config.count(),
                                         [&](QIndex u) { return half[layout.slot(u)]; });
}

std::vector<std::vector<QIndex>> correlation_tuples(int order, int pixels, int dim) {
  if (order < 2 || order > 4) throw Error(ErrorCode::InvalidArgument, "order must be 2, 3 or 4");
  if (pixels < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 pixels");
  if (dim != 1 && dim != 2) throw Error(ErrorCode::InvalidArgument, "dimension must be 1 or 2");
  const int ymax = dim == 2 ? pixels - 1 : 0;
  std::vector<QIndex> box;
  for (int x = 0; x < pixels; ++x) {
    for (int y = 0; y <= ymax; ++y) box.push_back({x, y});
  }
  const auto inside = [&](QIndex u) { return u.x < pixels && u.y <= ymax; };

  std::vector<std::vector<QIndex>> out;
  std::vector<QIndex> cur;
  const auto extend = [&](auto& self, QIndex sum) -> void {
    if (static_cast<int>(cur.size()) == order - 1) {
      out.push_back(cur);
      return;
    }
    for (QIndex u : box) {
      if (!inside(sum + u)) continue;
      cur.push_back(u);
      self(self, sum + u);
      cur.pop_back();
    }
  };
  extend(extend, QIndex{});
  return out;
}

std::vector<double> correlation_values(int order, const StructureFactorTable& table,
                                       std::span<const std::vector<QIndex>> tuples, Exec exec) {
  if (order < 2 || order > 4) throw Error(ErrorCode::InvalidArgument, "order must be 2, 3 or 4");
  for (const auto& t : tuples) {
    if (static_cast<int>(t.size()) != order - 1) {
      throw Error(ErrorCode::InvalidArgument, "tuple length does not match the order");
    }
  }
  const auto eval = [&](const std::vector<QIndex>& t) {
    switch (order) {
      case 2: return g2(table, t[0]);
      case 3: return g3(table, t[0], t[1]);
      default: return g4_closed(table, t[0], t[1], t[2]);
    }
  };
  const long long count = static_cast<long long>(tuples.size());
  std::vector<double> out(tuples.size());
  if (exec == Exec::serial) {
    for (long long i = 0; i < count; ++i) out[i] = eval(tuples[i]);
    return out;
  }
  // Out-of-range lookups throw; exceptions must not escape an OpenMP region.
  bool failed = false;
#pragma omp parallel for schedule(dynamic, 16)
  for (long long i = 0; i < count; ++i) {
    try {
      out[i] = eval(tuples[i]);
    } catch (const Error&) {
#pragma omp atomic write
      failed = true;
    }
  }
  if (failed) {
    // Rerun serially to raise the first error in tuple order.
    for (long long i = 0; i < count; ++i) out[i] = eval(tuples[i]);
  }
  return out;
}

namespace oracle {

double expectation_bruteforce(int k, const EmitterConfig& config, std::span<const Vec2> detector,
                              double imag_tol, Exec exec) {
  if (exec == Exec::serial) return expectation_bruteforce(k, config, detector, imag_tol);
  const PairingSum sum(k, config, detector);
  const int n = sum.emitters();
  std::vector<Complex> partials(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (int lead = 0; lead < n; ++lead) partials[lead] = sum.partial(lead);
  return sum.finish(partials, imag_tol);
}

}  // namespace oracle

}  // namespace idi
