#include "doctest.h"

#include "idi/correlations.hpp"
#include "idi/kernels.hpp"
#include "idi/oracle.hpp"
#include "support.hpp"

using namespace idi;

TEST_CASE("parallel structure factor is bit-identical to serial") {
  std::mt19937_64 rng(61);
  for (int dim = 1; dim <= 2; ++dim) {
    const auto cfg = test::random_config(rng, dim, 40);
    const QGrid g = QGrid::periodic(dim, 9, 9);
    const auto a = structure_factor(cfg, g, -1, Exec::serial);
    const auto b = structure_factor(cfg, g, -1, Exec::parallel);
    CHECK(a.reach() == required_reach(4, 8));
    CHECK(a.values() == b.values());
    CHECK(a.values() == structure_factor(cfg, g).values());
  }
}

TEST_CASE("correlation tuples") {
  CHECK(correlation_tuples(2, 9, 1).size() == 9);
  CHECK(correlation_tuples(2, 3, 2).size() == 9);
  // Pairs of non-negative integers with a + b <= 8.
  const auto t3 = correlation_tuples(3, 9, 1);
  CHECK(t3.size() == 45);
  CHECK(t3.front() == std::vector<QIndex>{{0, 0}, {0, 0}});
  CHECK(t3.back() == std::vector<QIndex>{{8, 0}, {0, 0}});
  CHECK(std::is_sorted(t3.begin(), t3.end()));
  // Triples with a + b + c <= 8: C(11, 3).
  CHECK(correlation_tuples(4, 9, 1).size() == 165);
  for (const auto& t : correlation_tuples(3, 3, 2)) {
    CHECK(t[0].x + t[1].x < 3);
    CHECK(t[0].y + t[1].y < 3);
  }
  CHECK_THROWS_AS(correlation_tuples(5, 9, 1), Error);
}

TEST_CASE("parallel correlation values match serial and the scalar functions") {
  std::mt19937_64 rng(62);
  const auto cfg = test::random_config(rng, 1, 7, 9.0);
  const auto table = structure_factor(cfg, QGrid::periodic(1, 9, 9));
  for (int order = 2; order <= 4; ++order) {
    const auto tuples = correlation_tuples(order, 9, 1);
    const auto s = correlation_values(order, table, tuples, Exec::serial);
    const auto p = correlation_values(order, table, tuples, Exec::parallel);
    CHECK(s == p);
    for (std::size_t i = 0; i < tuples.size(); i += 7) {
      const auto& u = tuples[i];
      const double want = order == 2 ? g2(table, u[0])
                          : order == 3 ? g3(table, u[0], u[1])
                                       : g4_closed(table, u[0], u[1], u[2]);
      CHECK(s[i] == want);
    }
  }
}

TEST_CASE("parallel errors are rethrown with the serial error") {
  const auto table = structure_factor(EmitterConfig::line({0.0, 1.0}), QGrid::periodic(1, 4, 4), 3);
  const auto tuples = correlation_tuples(4, 4, 1);
  try {
    correlation_values(4, table, tuples, Exec::parallel);
    FAIL("short table accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IndexOutOfRange);
  }
}

TEST_CASE("parallel oracle equals the serial reduction") {
  std::mt19937_64 rng(63);
  for (int k = 2; k <= 4; ++k) {
    const auto cfg = test::random_config(rng, 2, 9);
    std::vector<Vec2> det;
    std::uniform_real_distribution<double> q(-2.0, 2.0);
    for (int i = 0; i < k; ++i) det.push_back({q(rng), q(rng)});
    const double s = oracle::expectation_bruteforce(k, cfg, det, 1e-9, Exec::serial);
    const double p = oracle::expectation_bruteforce(k, cfg, det, 1e-9, Exec::parallel);
    CHECK(s == p);
    CHECK(s == oracle::expectation_bruteforce(k, cfg, det));
  }
}
