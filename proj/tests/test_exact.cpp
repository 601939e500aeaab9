#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "espair/exact.hpp"
#include "espair/harmonic.hpp"
#include "espair/model.hpp"
#include "espair/random_models.hpp"
#include "espair/rng.hpp"

using namespace espair;

namespace {

// First-principles oracle for rademacher_flip(2) with f = x1 * x2: walk the
// four sign patterns by hand, Y = -X, Z_i built directly from the
// definition. Independent of the engine's enumeration.
struct RademacherParityOracle {
  double lhs = 0.0;
  double rhs1 = 0.0, rhs2 = 0.0;
  RademacherParityOracle() {
    for (int x1 : {-1, 1})
      for (int x2 : {-1, 1}) {
        const double w = 0.25;
        const int y1 = -x1, y2 = -x2;
        const double z0 = double(y1) * y2;
        const double z1 = double(x1) * y2;
        const double z2 = double(x1) * x2;
        lhs += w * (z2 - z0) * (z2 - z0);
        rhs1 += w * (z1 - z0) * (z1 - z0);
        rhs2 += w * (z2 - z1) * (z2 - z1);
      }
  }
};

}  // namespace

TEST_CASE("single coordinate collapses to one increment") {
  SplitMix64 rng(31);
  for (int t = 0; t < 20; ++t) {
    const auto pair = random_arbitrary_pair(rng, 2 + int(rng.below(4)));
    const auto m = make_product_model({pair});
    const auto f = random_real_table(rng, m.dimension);
    const auto rep = compute_sides(m, f);
    REQUIRE(rep.rhs_terms.size() == 1);
    REQUIRE(rep.lhs == rep.rhs_terms[0]);
  }
}

TEST_CASE("parity of both coordinates under the global flip") {
  const RademacherParityOracle oracle;
  REQUIRE(oracle.lhs == 0.0);
  REQUIRE(oracle.rhs1 == 4.0);
  REQUIRE(oracle.rhs2 == 4.0);

  const auto m = rademacher_flip(2);
  const auto rep = compute_sides(m, parity_table(m, {1, 2}));
  REQUIRE(rep.lhs == Catch::Approx(oracle.lhs).margin(1e-12));
  REQUIRE(rep.rhs_terms[0] == Catch::Approx(oracle.rhs1).margin(1e-12));
  REQUIRE(rep.rhs_terms[1] == Catch::Approx(oracle.rhs2).margin(1e-12));
  REQUIRE(rep.satisfied);  // 0 <= 1 * 8
}

TEST_CASE("three-point different-law model attains the factor n") {
  const auto m = three_point_different_law(3);
  const auto rep = verify(m, product_sign_table(m));
  REQUIRE(rep.lhs == 9.0);
  REQUIRE(rep.rhs_sum == 3.0);
  REQUIRE(rep.ratio);
  REQUIRE(*rep.ratio == 3.0);
  REQUIRE(rep.bound == 3.0);  // n; and the ratio attains it
  REQUIRE(rep.satisfied);
  REQUIRE(rep.cauchy_schwarz_ok);

  const auto m4 = three_point_different_law(4);
  const auto rep4 = verify(m4, product_sign_table(m4));
  REQUIRE(rep4.lhs == 16.0);
  REQUIRE(rep4.rhs_sum == 4.0);
  REQUIRE(*rep4.ratio == 4.0);
  REQUIRE(rep4.satisfied);
}

TEST_CASE("dictator on the flip model achieves the exchangeable bound") {
  const auto m = rademacher_flip(3);
  const auto rep = verify(m, parity_table(m, {1}));
  REQUIRE(rep.bound == 1.0);
  REQUIRE(rep.ratio);
  REQUIRE(*rep.ratio == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(rep.satisfied);
}

TEST_CASE("character on the shift model hits the closed-form ratio") {
  const auto m = cyclic_shift(2, 5);
  const auto rep = verify(m, character_table(m, {1, 1}));
  const double expected = 1.0 + std::cos(2 * kPi / 5);
  REQUIRE(rep.ratio);
  REQUIRE(*rep.ratio == Catch::Approx(expected).margin(1e-9));
  // bound: min(rho((5,5)), cycle constant 5/2) = rho = the same closed form
  REQUIRE(rep.bound == Catch::Approx(expected).margin(1e-9));
  REQUIRE(rep.satisfied);
}

TEST_CASE("degenerate identical pair: both sides vanish") {
  const auto pair = make_pair_law({0.0, 1.0}, {0.3, 0.0, 0.0, 0.7});
  const auto m = make_product_model({pair, pair});
  SplitMix64 rng(5);
  const auto rep = compute_sides(m, random_real_table(rng, m.dimension));
  REQUIRE(rep.lhs == 0.0);
  REQUIRE(rep.rhs_sum == 0.0);
  REQUIRE_FALSE(rep.ratio.has_value());
  REQUIRE(rep.satisfied);
}

TEST_CASE("universal Cauchy-Schwarz ceiling on arbitrary models") {
  SplitMix64 rng(99);
  for (int t = 0; t < 100; ++t) {
    const auto m = random_model(rng, 4, 4, [](SplitMix64& r, int s) {
      return random_arbitrary_pair(r, s);
    });
    const auto f = (t % 2 == 0) ? random_real_table(rng, m.dimension)
                                : random_complex_table(rng, m.dimension);
    const auto rep = verify(m, f);
    REQUIRE(rep.cauchy_schwarz_ok);
    REQUIRE(rep.lhs <= double(m.coordinates()) * rep.rhs_sum + 1e-10);
  }
}

TEST_CASE("exchangeable certification over random models and functions") {
  SplitMix64 rng(100);
  for (int t = 0; t < 100; ++t) {
    const auto m = random_model(rng, 4, 4, [](SplitMix64& r, int s) {
      return random_exchangeable_pair(r, s);
    });
    const auto f = (t % 2 == 0) ? random_real_table(rng, m.dimension)
                                : random_complex_table(rng, m.dimension);
    const auto rep = compute_sides(m, f);
    REQUIRE(rep.bound == 1.0);
    REQUIRE(rep.lhs <= rep.rhs_sum + 1e-10);
    REQUIRE(rep.satisfied);
  }
}

TEST_CASE("independent-copy certification") {
  SplitMix64 rng(101);
  for (int t = 0; t < 100; ++t) {
    const auto m = random_model(rng, 4, 4, [](SplitMix64& r, int s) {
      return random_rank_one_pair(r, s);
    });
    const auto f = random_real_table(rng, m.dimension);
    const auto rep = compute_sides(m, f);
    REQUIRE(rep.lhs <= rep.rhs_sum + 1e-10);
  }
}

// Needs equal X and Y marginals: with different marginals the telescoping
// weights before and after coordinate i differ, and relabeling genuinely
// changes the increment sums (the three-point model shows this).
TEST_CASE("relabeling coordinates of identical pairs permutes the rhs terms") {
  SplitMix64 rng(77);
  for (int t = 0; t < 20; ++t) {
    const auto pair = (t % 2 == 0) ? random_circulation_pair(rng, 3)
                                   : random_exchangeable_pair(rng, 3);
    const auto m = make_product_model({pair, pair, pair});
    const auto f = random_real_table(rng, m.dimension);

    // g(x_1, x_2, x_3) = f(x_3, x_1, x_2): coordinate i of g plays the role
    // of coordinate sigma(i) of f with sigma = (2, 0, 1).
    const std::vector<int> sigma{2, 0, 1};
    FunctionTable g;
    g.kind = f.kind;
    g.values.resize(m.dimension);
    for (std::size_t idx = 0; idx < m.dimension; ++idx) {
      const auto d = m.digits_of(idx);
      g.values[m.index_of({d[sigma[0]], d[sigma[1]], d[sigma[2]]})] =
          f.values[idx];
    }

    const auto rf = compute_sides(m, f);
    const auto rg = compute_sides(m, g);
    REQUIRE(rg.lhs == Catch::Approx(rf.lhs).margin(1e-12));
    for (int i = 0; i < 3; ++i)
      REQUIRE(rg.rhs_terms[i] ==
              Catch::Approx(rf.rhs_terms[sigma[i]]).margin(1e-12));
  }
}

TEST_CASE("engine guards") {
  SECTION("enumeration guard refuses huge supports") {
    SplitMix64 rng(1);
    std::vector<PairLaw> pairs;
    for (int i = 0; i < 6; ++i) pairs.push_back(random_arbitrary_pair(rng, 6));
    const auto m = make_product_model(pairs);  // 36^6 support tuples
    const auto f = random_real_table(rng, m.dimension);
    REQUIRE_THROWS_AS(compute_sides(m, f), Error);
  }
  SECTION("table length mismatch") {
    const auto m = rademacher_flip(2);
    REQUIRE_THROWS_AS(compute_sides(m, make_real_table({1, 2, 3})), Error);
  }
  SECTION("non-finite values") {
    const auto m = rademacher_flip(1);
    REQUIRE_THROWS_AS(compute_sides(m, make_real_table({1.0, INFINITY})), Error);
  }
}
