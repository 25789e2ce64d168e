#pragma once

#include <compare>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "idi/errors.hpp"

namespace idi {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Integer pixel-difference vector. One-dimensional grids leave `y` at zero.
/// Ordering is lexicographic (x first), which is the order used everywhere an
/// enumeration or a canonical representative is needed.
struct QIndex {
  int x = 0;
  int y = 0;

  constexpr auto operator<=>(const QIndex&) const = default;

  constexpr bool is_zero() const { return x == 0 && y == 0; }
  constexpr QIndex operator-() const { return {-x, -y}; }
  constexpr QIndex& operator+=(QIndex o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr QIndex& operator-=(QIndex o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  friend constexpr QIndex operator+(QIndex a, QIndex b) { return a += b; }
  friend constexpr QIndex operator-(QIndex a, QIndex b) { return a -= b; }
  friend constexpr QIndex operator*(int s, QIndex a) { return {s * a.x, s * a.y}; }

  /// Largest absolute component.
  constexpr int extent() const {
    const int ax = x < 0 ? -x : x;
    const int ay = y < 0 ? -y : y;
    return ax > ay ? ax : ay;
  }
};

std::string to_string(QIndex u, int dim);

/// Real 2-vector used for emitter positions and physical momenta.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

/// Wraps an angle into (-pi, pi].
double wrap_phase(double angle);

/// Distance between two angles on the circle, in [0, pi].
double wrapped_distance(double a, double b);

/// Positions of N point emitters in lattice units, d in {1, 2}.
class EmitterConfig {
 public:
  EmitterConfig(int dim, std::vector<Vec2> positions);

  static EmitterConfig line(std::span<const double> xs);
  static EmitterConfig line(std::initializer_list<double> xs);

  int dim() const { return dim_; }
  int count() const { return static_cast<int>(positions_.size()); }
  const std::vector<Vec2>& positions() const { return positions_; }

 private:
  int dim_;
  std::vector<Vec2> positions_;
};

/// Detector discretization: index u maps to momentum step * u.
struct QGrid {
  int dim = 1;
  int pixels = 2;
  double step = kPi;

  /// Step 2*pi/period, so integer-lattice structure factors repeat every
  /// `period` indices.
  static QGrid periodic(int dim, int pixels, int period);

  Vec2 momentum(QIndex u) const { return {step * u.x, step * u.y}; }
  void validate() const;
};

/// Structure factor sampled on every index with components in [-reach, reach].
/// Immutable once built; negative indices hold the exact conjugate of their
/// mirror.
class StructureFactorTable {
 public:
  StructureFactorTable(QGrid grid, int reach, double count, std::vector<Complex> values);

  /// Builds a table from a generator evaluated on the lexicographically
  /// non-negative half of the index box; the other half is mirrored by
  /// conjugation.
  template <class Fn>
  static StructureFactorTable from_half(QGrid grid, int reach, double count, Fn&& fn);

  const QGrid& grid() const { return grid_; }
  int dim() const { return grid_.dim; }
  int reach() const { return reach_; }
  double count() const { return count_; }

  bool contains(QIndex u) const;
  const Complex& at(QIndex u) const;
  double magnitude(QIndex u) const { return std::abs(at(u)); }

  /// Default threshold below which a phase counts as undefined.
  double default_mag_eps() const { return 1e-12 * count_; }

  const std::vector<Complex>& values() const { return values_; }
  std::size_t slot(QIndex u) const;
  QIndex index_of_slot(std::size_t slot) const;

 private:
  QGrid grid_;
  int reach_;
  double count_;
  std::vector<Complex> values_;
};

/// Table reach needed so that every composite index used by correlations up to
/// `order` stays inside the table for differences with extent `max_extent`.
int required_reach(int order, int max_extent);

/// Direct sum over emitters at an arbitrary physical momentum.
Complex structure_factor_at(const EmitterConfig& config, Vec2 q);

/// Serial reference evaluation. Reach defaults to the order-4 requirement for
/// indices inside the pixel grid.
StructureFactorTable structure_factor(const EmitterConfig& config, const QGrid& grid,
                                      int reach = -1);

/// arg S(q(u)) wrapped to (-pi, pi]. Throws UndefinedPhase when |S| < eps_mag
/// (default 1e-12 * N).
double phase_of(const StructureFactorTable& table, QIndex u, double eps_mag = -1.0);

/// Translates every position by -delta (origin moved to +delta).
EmitterConfig shift_config(const EmitterConfig& config, Vec2 delta);

/// Point reflection through the origin.
EmitterConfig reflect_config(const EmitterConfig& config);

// ---------------------------------------------------------------------------

template <class Fn>
StructureFactorTable StructureFactorTable::from_half(QGrid grid, int reach, double count,
                                                     Fn&& fn) {
  const int side = 2 * reach + 1;
  const int ny = grid.dim == 2 ? side : 1;
  std::vector<Complex> values(static_cast<std::size_t>(side) * ny);
  const int ylo = grid.dim == 2 ? -reach : 0;
  const int yhi = grid.dim == 2 ? reach : 0;
  for (int y = ylo; y <= yhi; ++y) {
    for (int x = -reach; x <= reach; ++x) {
      const QIndex u{x, y};
      if (u < QIndex{}) continue;
      const std::size_t here = static_cast<std::size_t>(x + reach) +
                               static_cast<std::size_t>(side) * (y - ylo);
      const std::size_t mirror = static_cast<std::size_t>(-x + reach) +
                                 static_cast<std::size_t>(side) * (-y - ylo);
      values[here] = fn(u);
      if (mirror != here) values[mirror] = std::conj(values[here]);
    }
  }
  return StructureFactorTable(grid, reach, count, std::move(values));
}

}  // namespace idi
