#pragma once

#include <complex>
#include <random>
#include <vector>

#include "idi/emitters.hpp"

namespace test {

inline idi::EmitterConfig random_config(std::mt19937_64& rng, int dim, int n, double period = 8.0) {
  std::uniform_real_distribution<double> pos(0.0, period);
  std::vector<idi::Vec2> p;
  for (int i = 0; i < n; ++i) {
    const double x = pos(rng);
    p.push_back({x, dim == 2 ? pos(rng) : 0.0});
  }
  return idi::EmitterConfig(dim, std::move(p));
}

inline idi::QIndex random_index(std::mt19937_64& rng, int dim, int span) {
  std::uniform_int_distribution<int> c(-span, span);
  const int x = c(rng);
  return {x, dim == 2 ? c(rng) : 0};
}

// Structure factor straight from the definition, for cross-checks.
inline std::complex<double> direct_sum(const idi::EmitterConfig& cfg, idi::Vec2 q) {
  std::complex<double> s{};
  for (const idi::Vec2& r : cfg.positions()) s += std::exp(std::complex<double>(0.0, -(q.x * r.x + q.y * r.y)));
  return s;
}

}  // namespace test
