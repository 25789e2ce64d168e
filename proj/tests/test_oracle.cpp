#include "doctest.h"

#include <map>

#include "idi/oracle.hpp"
#include "support.hpp"

using namespace idi;
using namespace idi::oracle;

TEST_CASE("symmetric groups S2, S3, S4 by cycle type") {
  const auto count = [](int k) {
    std::map<CycleType, int> by;
    for (const Permutation& p : enumerate_permutations(k)) ++by[p.kind()];
    return by;
  };
  CHECK(enumerate_permutations(2).size() == 2);
  CHECK(enumerate_permutations(3).size() == 6);
  CHECK(enumerate_permutations(4).size() == 24);

  auto s2 = count(2);
  CHECK(s2[CycleType::identity] == 1);
  CHECK(s2[CycleType::transposition] == 1);

  auto s3 = count(3);
  CHECK(s3[CycleType::identity] == 1);
  CHECK(s3[CycleType::transposition] == 3);
  CHECK(s3[CycleType::three_cycle] == 2);

  auto s4 = count(4);
  CHECK(s4[CycleType::identity] == 1);
  CHECK(s4[CycleType::transposition] == 6);
  CHECK(s4[CycleType::double_transposition] == 3);
  CHECK(s4[CycleType::three_cycle] == 8);
  CHECK(s4[CycleType::four_cycle] == 6);

  CHECK(enumerate_permutations(2).front().image == std::vector<int>{1, 2});
  CHECK(enumerate_permutations(4).back().image == std::vector<int>{4, 3, 2, 1});
  CHECK_THROWS_AS(enumerate_permutations(1), Error);
  CHECK_THROWS_AS(enumerate_permutations(5), Error);
}

TEST_CASE("cycle decomposition") {
  CHECK(cycle_lengths(std::vector<int>{2, 3, 4, 1}) == std::vector<int>{4});
  CHECK(cycle_lengths(std::vector<int>{2, 1, 4, 3}) == std::vector<int>{2, 2});
  CHECK(cycle_lengths(std::vector<int>{1, 3, 2, 4}) == std::vector<int>{2, 1, 1});
  CHECK(cycle_lengths(std::vector<int>{2, 3, 1}) == std::vector<int>{3});
}

TEST_CASE("pairing sum: fewer emitters than photons gives zero") {
  const auto one = EmitterConfig::line({0.3});
  const std::vector<Vec2> k2{{0.0, 0.0}, {1.0, 0.0}};
  CHECK(expectation_bruteforce(2, one, k2) == 0.0);
  const auto two = EmitterConfig::line({0.0, 1.0});
  const std::vector<Vec2> k3{{0.0, 0.0}, {1.0, 0.0}, {0.4, 0.0}};
  CHECK(expectation_bruteforce(3, two, k3) == 0.0);
}

TEST_CASE("pairing sum at equal detector momenta gives 2(1 - 1/N)") {
  std::mt19937_64 rng(31);
  for (int n = 1; n <= 7; ++n) {
    const auto cfg = test::random_config(rng, 2, n);
    const std::vector<Vec2> k{{0.7, -0.2}, {0.7, -0.2}};
    CHECK(expectation_bruteforce(2, cfg, k) == doctest::Approx(2.0 * (1.0 - 1.0 / n)).epsilon(1e-14));
  }
}

TEST_CASE("second-order pairing sum agrees with a hand-written double loop") {
  std::mt19937_64 rng(32);
  const auto cfg = test::random_config(rng, 1, 5);
  const std::vector<Vec2> k{{0.3, 0.0}, {1.1, 0.0}};
  Complex sum{};
  const auto& r = cfg.positions();
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      if (i == j) continue;
      // identity pairs every operator with itself; the swap exchanges them.
      sum += 1.0;
      sum += std::exp(Complex(0.0, (k[0].x - k[1].x) * (r[i].x - r[j].x)));
    }
  }
  CHECK(expectation_bruteforce(2, cfg, k) == doctest::Approx(sum.real() / 25.0).epsilon(1e-14));
}

TEST_CASE("fourth-order guard and argument checks") {
  std::vector<double> xs(13);
  for (int i = 0; i < 13; ++i) xs[i] = i;
  const std::vector<Vec2> k4(4);
  try {
    expectation_bruteforce(4, EmitterConfig::line(xs), k4);
    FAIL("N = 13 accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OracleTooLarge);
  }
  xs.pop_back();
  CHECK(expectation_bruteforce(4, EmitterConfig::line(xs), k4) ==
        doctest::Approx(24.0 * (11.0 / 12) * (10.0 / 12) * (9.0 / 12)));
  const std::vector<Vec2> k3(3);
  CHECK_THROWS_AS(expectation_bruteforce(4, EmitterConfig::line({0.0}), k3), Error);
  CHECK_THROWS_AS(expectation_bruteforce(5, EmitterConfig::line({0.0}), k3), Error);
}

TEST_CASE("detector momenta from consecutive differences") {
  const QGrid g = QGrid::periodic(2, 3, 4);
  const std::vector<QIndex> d{{1, 0}, {0, 2}, {-1, 1}};
  const auto k = detector_from_differences(g, d);
  REQUIRE(k.size() == 4);
  CHECK(k[0] == Vec2{0.0, 0.0});
  CHECK(k[1].x == doctest::Approx(kPi / 2));
  CHECK(k[2].y == doctest::Approx(kPi));
  CHECK(k[3].x == doctest::Approx(0.0));
  CHECK(k[3].y == doctest::Approx(3 * kPi / 2));
}

TEST_CASE("delta product equals its expansion on {1..6}^4") {
  int mismatches = 0, nonzero = 0;
  for (int i = 1; i <= 6; ++i)
    for (int j = 1; j <= 6; ++j)
      for (int k = 1; k <= 6; ++k)
        for (int l = 1; l <= 6; ++l) {
          if (del_product(i, j, k, l) != del_expansion(i, j, k, l)) ++mismatches;
          nonzero += del_product(i, j, k, l);
        }
  CHECK(mismatches == 0);
  CHECK(nonzero == 6 * 5 * 4 * 3);
}

TEST_CASE("restricted identity sum counts distinct ordered 4-tuples") {
  CHECK(restricted_pairing_sum(CycleType::identity, EmitterConfig::line({0.0, 1.0, 2.0}), {}) ==
        Complex(0.0, 0.0));
  CHECK(restricted_pairing_sum(CycleType::identity, EmitterConfig::line({0.0, 1.0, 2.0, 5.0}), {}) ==
        Complex(24.0, 0.0));
  const std::vector<Vec2> one{{1.0, 0.0}};
  CHECK_THROWS_AS(restricted_pairing_sum(CycleType::identity, EmitterConfig::line({0.0}), one), Error);
}

TEST_CASE("partials are reduced in lead order") {
  std::mt19937_64 rng(33);
  const auto cfg = test::random_config(rng, 1, 6);
  const std::vector<Vec2> k{{0.0, 0.0}, {0.5, 0.0}, {1.3, 0.0}};
  const PairingSum sum(3, cfg, k);
  std::vector<Complex> parts;
  for (int i = 0; i < sum.emitters(); ++i) parts.push_back(sum.partial(i));
  CHECK(sum.finish(parts, 1e-10) == expectation_bruteforce(3, cfg, k));
  std::vector<Complex> skewed = parts;
  skewed[0] += Complex(0.0, 1.0);
  CHECK_THROWS_AS(sum.finish(skewed, 1e-10), Error);
}
