#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "espair/flows.hpp"
#include "espair/model.hpp"
#include "espair/random_models.hpp"
#include "espair/rng.hpp"

using namespace espair;

namespace {

std::vector<double> rebuild(const CycleDecomposition& dec, int s) {
  std::vector<double> joint(std::size_t(s) * s, 0.0);
  for (const auto& c : dec.components) {
    const int len = int(c.cycle.size());
    for (int i = 0; i < len; ++i)
      joint[std::size_t(c.cycle[i]) * s + c.cycle[(i + 1) % len]] +=
          c.weight / len;
  }
  return joint;
}

double weight_sum(const CycleDecomposition& dec) {
  double w = 0.0;
  for (const auto& c : dec.components) w += c.weight;
  return w;
}

}  // namespace

TEST_CASE("is_circulation") {
  REQUIRE(is_circulation(cyclic_shift(1, 3).pairs[0]));
  REQUIRE_FALSE(is_circulation(
      parse_model(R"({"pairs":[{"values":[0,1],"joint":[[0,1],[0,0]]}]})")
          .pairs[0]));
  SplitMix64 rng(17);
  for (int t = 0; t < 30; ++t)
    REQUIRE(is_circulation(random_exchangeable_pair(rng, 2 + int(rng.below(5)))));
}

TEST_CASE("shift on Z_3 is a single unit 3-cycle") {
  const auto dec = decompose_cycles(cyclic_shift(1, 3).pairs[0]);
  REQUIRE(dec.components.size() == 1);
  REQUIRE(dec.components[0].cycle == std::vector<int>{0, 1, 2});
  REQUIRE(dec.components[0].weight == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(dec.max_cycle_length == 3);
  REQUIRE(dec.refined_constant == 1.5);
}

TEST_CASE("uniform 2x2 splits into a 2-cycle and two self-loops") {
  const auto pair = make_pair_law({0.0, 1.0}, {0.25, 0.25, 0.25, 0.25});
  const auto dec = decompose_cycles(pair);
  REQUIRE(dec.components.size() == 3);
  REQUIRE(dec.components[0].cycle == std::vector<int>{0, 1});
  REQUIRE(dec.components[0].weight == Catch::Approx(0.5).margin(1e-12));
  REQUIRE(dec.components[1].cycle == std::vector<int>{0});
  REQUIRE(dec.components[1].weight == Catch::Approx(0.25).margin(1e-12));
  REQUIRE(dec.components[2].cycle == std::vector<int>{1});
  REQUIRE(dec.components[2].weight == Catch::Approx(0.25).margin(1e-12));
  REQUIRE(dec.max_cycle_length == 2);
  REQUIRE(dec.refined_constant == 1.0);
}

TEST_CASE("half shift plus half diagonal") {
  const double third = 1.0 / 3.0;
  std::vector<double> joint(9, 0.0);
  for (int a = 0; a < 3; ++a) {
    joint[std::size_t(a) * 3 + (a + 1) % 3] = 0.5 * third;
    joint[std::size_t(a) * 3 + a] = 0.5 * third;
  }
  const auto dec = decompose_cycles(make_pair_law({0, 1, 2}, joint));
  REQUIRE(dec.components.size() == 4);
  REQUIRE(dec.components[0].cycle == std::vector<int>{0, 1, 2});
  REQUIRE(dec.components[0].weight == Catch::Approx(0.5).margin(1e-12));
  for (int i = 1; i < 4; ++i)
    REQUIRE(dec.components[i].weight == Catch::Approx(1.0 / 6).margin(1e-12));
  REQUIRE(dec.refined_constant == 1.5);

  const auto back = rebuild(dec, 3);
  const auto pair = make_pair_law({0, 1, 2}, joint);
  for (std::size_t e = 0; e < 9; ++e)
    REQUIRE(back[e] == Catch::Approx(pair.joint[e]).margin(1e-12));
}

TEST_CASE("random circulations reconstruct exactly") {
  SplitMix64 rng(2024);
  for (int t = 0; t < 120; ++t) {
    const int s = 2 + int(rng.below(5));
    const auto pair = random_circulation_pair(rng, s);
    const auto dec = decompose_cycles(pair);

    const auto back = rebuild(dec, s);
    for (std::size_t e = 0; e < back.size(); ++e)
      REQUIRE(std::abs(back[e] - pair.joint[e]) <= 1e-12);
    REQUIRE(weight_sum(dec) == Catch::Approx(1.0).margin(1e-12));

    int positive = 0;
    for (double w : pair.joint)
      if (w > 0.0) ++positive;
    REQUIRE(int(dec.components.size()) <= positive);

    for (const auto& c : dec.components) {  // simple cycles: distinct nodes
      std::vector<bool> seen(std::size_t(s), false);
      for (int v : c.cycle) {
        REQUIRE_FALSE(seen[v]);
        seen[v] = true;
      }
      REQUIRE(c.weight > 0.0);
    }
  }
}

TEST_CASE("exchangeable pairs decompose into cycles of length at most 2") {
  SplitMix64 rng(2025);
  for (int t = 0; t < 100; ++t) {
    const auto pair = random_exchangeable_pair(rng, 2 + int(rng.below(5)));
    for (const auto& c : decompose_cycles(pair).components)
      REQUIRE(c.cycle.size() <= 2);
  }
}

TEST_CASE("decomposition is deterministic") {
  SplitMix64 rng(31337);
  const auto pair = random_circulation_pair(rng, 5);
  const auto a = decompose_cycles(pair);
  const auto b = decompose_cycles(pair);
  REQUIRE(a.components.size() == b.components.size());
  for (std::size_t i = 0; i < a.components.size(); ++i) {
    REQUIRE(a.components[i].cycle == b.components[i].cycle);
    REQUIRE(a.components[i].weight == b.components[i].weight);
  }
}

TEST_CASE("model-level refined constant") {
  REQUIRE(refined_constant(rademacher_flip(3)) == 1.0);
  REQUIRE(refined_constant(cyclic_shift(2, 5)) == 2.5);

  SplitMix64 rng(41);
  std::vector<PairLaw> pairs{cyclic_shift(1, 3).pairs[0],
                             random_exchangeable_pair(rng, 3)};
  REQUIRE(refined_constant(make_product_model(pairs)) == 1.5);

  REQUIRE_THROWS_AS(refined_constant(three_point_different_law(2)), Error);
}

TEST_CASE("non-circulations are rejected") {
  const auto bad =
      parse_model(R"({"pairs":[{"values":[0,1],"joint":[[0,1],[0,0]]}]})");
  REQUIRE_THROWS_AS(decompose_cycles(bad.pairs[0]), Error);
}

TEST_CASE("randomized peeling diagnostic never exceeds the greedy length") {
  SplitMix64 rng(55);
  for (int t = 0; t < 20; ++t) {
    const auto pair = random_circulation_pair(rng, 2 + int(rng.below(5)));
    const int greedy = decompose_cycles(pair).max_cycle_length;
    const int diag = randomized_min_max_cycle_length(pair, 20, 1234 + t);
    REQUIRE(diag >= 1);
    REQUIRE(diag <= greedy);
  }
}
