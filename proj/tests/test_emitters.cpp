#include "doctest.h"

#include <cmath>

#include "idi/emitters.hpp"
#include "support.hpp"

using namespace idi;

TEST_CASE("single emitter at the origin has S = 1 and zero phase everywhere") {
  const auto table = structure_factor(EmitterConfig::line({0.0}), QGrid::periodic(1, 5, 5));
  for (int u = -table.reach(); u <= table.reach(); ++u) {
    CHECK(table.at({u, 0}) == Complex(1.0, 0.0));
    CHECK(phase_of(table, {u, 0}) == 0.0);
  }
}

TEST_CASE("S(0) equals the emitter count exactly") {
  std::mt19937_64 rng(11);
  for (int n = 1; n <= 7; ++n) {
    const auto cfg = test::random_config(rng, 1 + n % 2, n);
    const auto table = structure_factor(cfg, QGrid::periodic(cfg.dim(), 4, 8));
    CHECK(table.at({0, 0}) == Complex(n, 0.0));
  }
}

TEST_CASE("two emitters at 0 and R: |S|^2 = 2 + 2 cos(q R)") {
  const double r = 3.0;
  const QGrid grid = QGrid::periodic(1, 6, 7);
  const auto table = structure_factor(EmitterConfig::line({0.0, r}), grid);
  for (int u = 0; u < 6; ++u) {
    const double q = grid.momentum({u, 0}).x;
    CHECK(std::norm(table.at({u, 0})) == doctest::Approx(2.0 + 2.0 * std::cos(q * r)).epsilon(1e-13));
  }
}

TEST_CASE("table entries match the defining sum and are Hermitian") {
  std::mt19937_64 rng(12);
  for (int dim = 1; dim <= 2; ++dim) {
    const auto cfg = test::random_config(rng, dim, 5);
    const QGrid grid = QGrid::periodic(dim, 3, 8);
    const auto table = structure_factor(cfg, grid);
    for (std::size_t s = 0; s < table.values().size(); ++s) {
      const QIndex u = table.index_of_slot(s);
      CHECK(std::abs(table.at(u) - test::direct_sum(cfg, grid.momentum(u))) < 1e-12);
      CHECK(table.at(-u) == std::conj(table.at(u)));
      CHECK(table.magnitude(u) <= 5.0 + 1e-12);
    }
  }
}

TEST_CASE("phase is odd in the index") {
  std::mt19937_64 rng(13);
  const auto cfg = test::random_config(rng, 1, 6);
  const auto table = structure_factor(cfg, QGrid::periodic(1, 5, 8));
  for (int u = 1; u <= 4; ++u) {
    CHECK(wrapped_distance(phase_of(table, {-u, 0}), -phase_of(table, {u, 0})) < 1e-14);
  }
}

TEST_CASE("destructive interference leaves the phase undefined") {
  // Atoms at 0 and P/2: q(1) R = pi, so S(1) = 1 + e^{-i pi} = 0 up to rounding.
  const auto table = structure_factor(EmitterConfig::line({0.0, 4.0}), QGrid::periodic(1, 3, 8));
  CHECK(table.magnitude({1, 0}) < 1e-12);
  CHECK_THROWS_AS(phase_of(table, {1, 0}), Error);
  try {
    phase_of(table, {1, 0});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UndefinedPhase);
  }
  CHECK(phase_of(table, {2, 0}) == doctest::Approx(0.0));
}

TEST_CASE("shift theorem: magnitudes kept, phases ramp by q . dR") {
  std::mt19937_64 rng(14);
  const QGrid grid = QGrid::periodic(1, 9, 9);
  const auto cfg = test::random_config(rng, 1, 5, 9.0);
  CHECK(shift_config(cfg, {0.0, 0.0}).positions() == cfg.positions());
  const auto base = structure_factor(cfg, grid);
  const auto moved = structure_factor(shift_config(cfg, {1.0, 0.0}), grid);
  for (int u = 0; u < 9; ++u) {
    const QIndex i{u, 0};
    CHECK(std::abs(moved.magnitude(i) - base.magnitude(i)) < 1e-12);
    const double d = wrap_phase(phase_of(moved, i) - phase_of(base, i) - grid.momentum(i).x);
    CHECK(std::abs(d) < 1e-12);
  }
}

TEST_CASE("reflection conjugates the structure factor") {
  const QGrid grid = QGrid::periodic(1, 5, 8);
  const auto sym = EmitterConfig::line({-1.5, 1.5});
  const auto a = structure_factor(sym, grid);
  const auto b = structure_factor(reflect_config(sym), grid);
  for (int u = 0; u < 5; ++u) CHECK(std::abs(a.at({u, 0}) - b.at({u, 0})) < 1e-15);

  const auto one = EmitterConfig::line({0.0});
  CHECK(reflect_config(one).positions() == std::vector<Vec2>{{-0.0, 0.0}});

  std::mt19937_64 rng(15);
  const auto cfg = test::random_config(rng, 2, 4);
  const QGrid g2d = QGrid::periodic(2, 3, 8);
  const auto t = structure_factor(cfg, g2d);
  const auto r = structure_factor(reflect_config(cfg), g2d);
  for (std::size_t s = 0; s < t.values().size(); ++s) {
    const QIndex u = t.index_of_slot(s);
    CHECK(std::abs(r.magnitude(u) - t.magnitude(u)) < 1e-12);
    if (t.magnitude(u) > 1e-6) CHECK(wrapped_distance(phase_of(r, u), -phase_of(t, u)) < 1e-12);
  }
}

TEST_CASE("phase wrapping maps into (-pi, pi]") {
  CHECK(wrap_phase(-kPi) == kPi);
  CHECK(wrap_phase(kPi) == kPi);
  CHECK(wrap_phase(3.0 * kPi) == doctest::Approx(kPi));
  CHECK(wrap_phase(0.5 + 4.0 * kPi) == doctest::Approx(0.5));
  CHECK(wrapped_distance(kPi - 0.1, -kPi + 0.1) == doctest::Approx(0.2));
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(EmitterConfig(1, {}), Error);
  CHECK_THROWS_AS(EmitterConfig(3, {{0.0, 0.0}}), Error);
  CHECK_THROWS_AS(EmitterConfig::line({std::nan("")}), Error);
  CHECK_THROWS_AS(QGrid::periodic(1, 1, 4), Error);
  CHECK_THROWS_AS(QGrid::periodic(1, 4, 0), Error);

  const auto cfg = EmitterConfig::line({0.0, 1.0});
  try {
    structure_factor(cfg, QGrid::periodic(2, 3, 3));
    FAIL("dimension mismatch accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
  const auto table = structure_factor(cfg, QGrid::periodic(1, 3, 3), 2);
  CHECK(table.contains({2, 0}));
  CHECK_FALSE(table.contains({3, 0}));
  CHECK_FALSE(table.contains({0, 1}));
  CHECK_THROWS_AS(table.at({3, 0}), Error);
}

TEST_CASE("default reach covers order-4 composites of the pixel box") {
  const auto table = structure_factor(EmitterConfig::line({0.0, 2.0}), QGrid::periodic(1, 4, 4));
  CHECK(table.reach() == required_reach(4, 3));
  CHECK(required_reach(2, 5) == 5);
  CHECK(required_reach(3, 5) == 10);
  CHECK_THROWS_AS(required_reach(5, 1), Error);
}
