#include "idi/emitters.hpp"

#include <cmath>
#include <sstream>

namespace idi {

std::string to_string(QIndex u, int dim) {
  std::ostringstream os;
  if (dim == 2) {
    os << '(' << u.x << ',' << u.y << ')';
  } else {
    os << u.x;
  }
  return os.str();
}

double wrap_phase(double angle) {
  double r = std::remainder(angle, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

double wrapped_distance(double a, double b) { return std::abs(wrap_phase(a - b)); }

EmitterConfig::EmitterConfig(int dim, std::vector<Vec2> positions)
    : dim_(dim), positions_(std::move(positions)) {
  if (dim_ != 1 && dim_ != 2) {
    throw Error(ErrorCode::InvalidArgument, "emitter dimension must be 1 or 2");
  }
  if (positions_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "at least one emitter is required");
  }
  for (const Vec2& p : positions_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorCode::InvalidArgument, "emitter position is not finite");
    }
    if (dim_ == 1 && p.y != 0.0) {
      throw Error(ErrorCode::InvalidArgument, "1D emitter with non-zero y component");
    }
  }
}

EmitterConfig EmitterConfig::line(std::span<const double> xs) {
  std::vector<Vec2> pos;
  pos.reserve(xs.size());
  for (double x : xs) pos.push_back({x, 0.0});
  return EmitterConfig(1, std::move(pos));
}

EmitterConfig EmitterConfig::line(std::initializer_list<double> xs) {
  return line(std::span<const double>(xs.begin(), xs.size()));
}

QGrid QGrid::periodic(int dim, int pixels, int period) {
  if (period < 1) throw Error(ErrorCode::InvalidArgument, "period must be positive");
  QGrid g{dim, pixels, kTwoPi / period};
  g.validate();
  return g;
}

void QGrid::validate() const {
  if (dim != 1 && dim != 2) throw Error(ErrorCode::InvalidArgument, "grid dimension must be 1 or 2");
  if (pixels < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least 2 pixels per axis");
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw Error(ErrorCode::InvalidArgument, "grid step must be positive");
  }
}

StructureFactorTable::StructureFactorTable(QGrid grid, int reach, double count,
                                           std::vector<Complex> values)
    : grid_(grid), reach_(reach), count_(count), values_(std::move(values)) {
  grid_.validate();
  if (reach_ < 0) throw Error(ErrorCode::InvalidArgument, "negative table reach");
  const std::size_t side = 2 * static_cast<std::size_t>(reach_) + 1;
  const std::size_t expected = grid_.dim == 2 ? side * side : side;
  if (values_.size() != expected) {
    throw Error(ErrorCode::InvalidArgument, "table value count does not match reach");
  }
  if (!(count_ >= 1.0)) throw Error(ErrorCode::InvalidArgument, "emitter count must be >= 1");
}

bool StructureFactorTable::contains(QIndex u) const {
  if (grid_.dim == 1 && u.y != 0) return false;
  return u.extent() <= reach_;
}

std::size_t StructureFactorTable::slot(QIndex u) const {
  if (!contains(u)) {
    throw Error(ErrorCode::IndexOutOfRange,
                "index " + to_string(u, grid_.dim) + " outside table reach " + std::to_string(reach_));
  }
  const std::size_t side = 2 * static_cast<std::size_t>(reach_) + 1;
  const std::size_t ix = static_cast<std::size_t>(u.x + reach_);
  if (grid_.dim == 1) return ix;
  return ix + side * static_cast<std::size_t>(u.y + reach_);
}

QIndex StructureFactorTable::index_of_slot(std::size_t s) const {
  const std::size_t side = 2 * static_cast<std::size_t>(reach_) + 1;
  const int x = static_cast<int>(s % side) - reach_;
  if (grid_.dim == 1) return {x, 0};
  return {x, static_cast<int>(s / side) - reach_};
}

const Complex& StructureFactorTable::at(QIndex u) const { return values_[slot(u)]; }

int required_reach(int order, int max_extent) {
  switch (order) {
    case 1:
    case 2: return max_extent;
    case 3: return 2 * max_extent;
    case 4: return 4 * max_extent;
    default: throw Error(ErrorCode::InvalidArgument, "correlation order must be 1..4");
  }
}

Complex structure_factor_at(const EmitterConfig& config, Vec2 q) {
  Complex sum{0.0, 0.0};
  for (const Vec2& r : config.positions()) {
    const double arg = -dot(q, r);
    sum += Complex(std::cos(arg), std::sin(arg));
  }
  return sum;
}

StructureFactorTable structure_factor(const EmitterConfig& config, const QGrid& grid, int reach) {
  grid.validate();
  if (config.dim() != grid.dim) {
    throw Error(ErrorCode::DimensionMismatch, "config dimension " + std::to_string(config.dim()) +
                                                  " vs grid dimension " + std::to_string(grid.dim));
  }
  if (reach < 0) reach = required_reach(4, grid.pixels - 1);
  return StructureFactorTable::from_half(grid, reach, config.count(), [&](QIndex u) {
    return structure_factor_at(config, grid.momentum(u));
  });
}

double phase_of(const StructureFactorTable& table, QIndex u, double eps_mag) {
  if (eps_mag < 0.0) eps_mag = table.default_mag_eps();
  const Complex s = table.at(u);
  if (std::abs(s) < eps_mag) {
    throw Error(ErrorCode::UndefinedPhase, "|S| below threshold at " + to_string(u, table.dim()));
  }
  return wrap_phase(std::arg(s));
}

EmitterConfig shift_config(const EmitterConfig& config, Vec2 delta) {
  std::vector<Vec2> pos = config.positions();
  if (config.dim() == 1) delta.y = 0.0;
  for (Vec2& p : pos) p = p - delta;
  return EmitterConfig(config.dim(), std::move(pos));
}

EmitterConfig reflect_config(const EmitterConfig& config) {
  std::vector<Vec2> pos = config.positions();
  for (Vec2& p : pos) p = -p;
  if (config.dim() == 1) {
    for (Vec2& p : pos) p.y = 0.0;
  }
  return EmitterConfig(config.dim(), std::move(pos));
}

}  // namespace idi
