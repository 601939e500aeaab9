#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "espair/model.hpp"
#include "espair/random_models.hpp"
#include "espair/rng.hpp"

using namespace espair;

TEST_CASE("flags from the joint matrix") {
  SECTION("symmetric uniform 2x2 is exchangeable and identically distributed") {
    const auto m = parse_model(
        R"({"pairs":[{"values":[-1,1],"joint":[[0.25,0.25],[0.25,0.25]]}]})");
    REQUIRE(m.pairs[0].exchangeable);
    REQUIRE(m.pairs[0].identically_distributed);
  }
  SECTION("Z_3 shift is identically distributed but not exchangeable") {
    const auto m = parse_model(
        R"({"pairs":[{"values":[0,1,2],
             "joint":[[0,0.3333333333333333,0],[0,0,0.3333333333333333],
                      [0.3333333333333333,0,0]]}]})");
    REQUIRE_FALSE(m.pairs[0].exchangeable);
    REQUIRE(m.pairs[0].identically_distributed);
  }
  SECTION("different marginals are accepted but flagged") {
    const auto m =
        parse_model(R"({"pairs":[{"values":[0,1],"joint":[[0,1],[0,0]]}]})");
    REQUIRE_FALSE(m.pairs[0].identically_distributed);
    REQUIRE_FALSE(m.pairs[0].exchangeable);
  }
  SECTION("exchangeable implies identically distributed") {
    SplitMix64 rng(11);
    for (int t = 0; t < 50; ++t) {
      const auto pair = random_exchangeable_pair(rng, 2 + int(rng.below(4)));
      REQUIRE(pair.exchangeable);
      REQUIRE(pair.identically_distributed);
    }
  }
}

TEST_CASE("parse_model validation") {
  REQUIRE_THROWS_AS(parse_model("not json"), Error);
  REQUIRE_THROWS_AS(parse_model(R"({"no_pairs":true})"), Error);
  REQUIRE_THROWS_AS(
      parse_model(R"({"pairs":[{"values":[0,1],"joint":[[0.5,-0.1],[0.3,0.3]]}]})"),
      Error);  // negative probability
  REQUIRE_THROWS_AS(
      parse_model(R"({"pairs":[{"values":[0,1],"joint":[[0.5,0.5],[0.05,0.05]]}]})"),
      Error);  // mass deviation above 1e-9
  REQUIRE_THROWS_AS(
      parse_model(R"({"pairs":[{"values":[1,1],"joint":[[0.5,0],[0,0.5]]}]})"),
      Error);  // duplicate values
  REQUIRE_THROWS_AS(
      parse_model(R"({"pairs":[{"values":[0,1],"joint":[[1,0,0],[0,0,0]]}]})"),
      Error);  // not square over values

  SECTION("tiny mass deviation is renormalized") {
    const auto m = parse_model(
        R"({"pairs":[{"values":[0,1],"joint":[[0.2500000001,0.25],[0.25,0.25]]}]})");
    double sum = 0.0;
    for (double w : m.pairs[0].joint) sum += w;
    REQUIRE(sum == Catch::Approx(1.0).margin(1e-12));
  }
  SECTION("values are sorted into canonical order with the joint permuted") {
    const auto m = parse_model(
        R"({"pairs":[{"values":[1,-1],"joint":[[0.1,0.2],[0.3,0.4]]}]})");
    REQUIRE(m.pairs[0].values == std::vector<double>{-1.0, 1.0});
    REQUIRE(m.pairs[0].p(0, 0) == 0.4);  // old (1,1) block
    REQUIRE(m.pairs[0].p(0, 1) == 0.3);
    REQUIRE(m.pairs[0].p(1, 0) == 0.2);
    REQUIRE(m.pairs[0].p(1, 1) == 0.1);
  }
}

TEST_CASE("builtin models") {
  SECTION("rademacher_flip") {
    const auto m = rademacher_flip(2);
    REQUIRE(m.coordinates() == 2);
    REQUIRE(m.dimension == 4);
    for (const auto& pair : m.pairs) {
      REQUIRE(pair.values == std::vector<double>{-1.0, 1.0});
      REQUIRE(pair.p(0, 0) == 0.0);
      REQUIRE(pair.p(0, 1) == 0.5);
      REQUIRE(pair.p(1, 0) == 0.5);
      REQUIRE(pair.p(1, 1) == 0.0);
      REQUIRE(pair.exchangeable);
    }
  }
  SECTION("cyclic_shift") {
    const auto m = cyclic_shift(1, 3);
    const auto& pair = m.pairs[0];
    REQUIRE(pair.p(0, 1) == Catch::Approx(1.0 / 3).margin(1e-15));
    REQUIRE(pair.p(1, 2) == Catch::Approx(1.0 / 3).margin(1e-15));
    REQUIRE(pair.p(2, 0) == Catch::Approx(1.0 / 3).margin(1e-15));
    REQUIRE(pair.p(0, 0) == 0.0);
    REQUIRE(pair.identically_distributed);
    REQUIRE_FALSE(pair.exchangeable);
    REQUIRE(cyclic_shift(2, 2).pairs[0].exchangeable);  // m = 2 is symmetric
  }
  SECTION("three_point_different_law") {
    const auto m = three_point_different_law(3);
    REQUIRE(m.coordinates() == 3);
    for (const auto& pair : m.pairs) {
      REQUIRE(pair.values == std::vector<double>{-1.0, 0.0, 1.0});
      REQUIRE(pair.p(0, 1) == 0.5);
      REQUIRE(pair.p(2, 1) == 0.5);
      REQUIRE_FALSE(pair.identically_distributed);
      REQUIRE_FALSE(pair.exchangeable);
    }
  }
  SECTION("independent_copy is rank-one and exchangeable") {
    const auto m = independent_copy(2, {0.25, 0.75});
    const auto& pair = m.pairs[0];
    REQUIRE(pair.p(0, 0) == Catch::Approx(0.0625).margin(1e-15));
    REQUIRE(pair.p(0, 1) == Catch::Approx(0.1875).margin(1e-15));
    REQUIRE(pair.p(1, 1) == Catch::Approx(0.5625).margin(1e-15));
    REQUIRE(pair.exchangeable);
  }
  SECTION("parameter validation") {
    REQUIRE_THROWS_AS(build_builtin("no_such_model", {1}), Error);
    REQUIRE_THROWS_AS(rademacher_flip(0), Error);
    REQUIRE_THROWS_AS(cyclic_shift(1, 0), Error);
    REQUIRE_THROWS_AS(independent_copy(1, {0.5, 0.2}), Error);
    REQUIRE_THROWS_AS(independent_copy(1, {-0.5, 1.5}), Error);
    REQUIRE_THROWS_AS(build_builtin("cyclic_shift", {1.5, 3}), Error);
    REQUIRE(build_builtin("cyclic_shift", {2, 5}).dimension == 25);
  }
}

TEST_CASE("mixed-radix indexing, coordinate 0 slowest") {
  std::vector<PairLaw> pairs{rademacher_flip(1).pairs[0],
                             cyclic_shift(1, 3).pairs[0]};
  const auto m = make_product_model(pairs);
  REQUIRE(m.dimension == 6);
  REQUIRE(m.index_of({1, 2}) == 5);
  REQUIRE(m.index_of({0, 1}) == 1);
  REQUIRE(m.digits_of(4) == std::vector<int>{1, 1});
  for (std::size_t i = 0; i < m.dimension; ++i)
    REQUIRE(m.index_of(m.digits_of(i)) == i);
}

TEST_CASE("builtin functions") {
  SECTION("parity of one coordinate is the dictator table") {
    const auto m = rademacher_flip(2);
    const auto f = parity_table(m, {1});
    REQUIRE(f.values[0].real() == -1.0);
    REQUIRE(f.values[1].real() == -1.0);
    REQUIRE(f.values[2].real() == 1.0);
    REQUIRE(f.values[3].real() == 1.0);
    REQUIRE(f.is_real());
  }
  SECTION("sin_sum evaluates on the coordinate values") {
    const auto m = cyclic_shift(2, 3);
    const auto f = sin_sum_table(m);
    REQUIRE(f.values[m.index_of({1, 2})].real() ==
            Catch::Approx(std::sin(3.0)).margin(1e-15));
  }
  SECTION("character is constant in coordinates with u_j = 0") {
    const auto m = cyclic_shift(2, 3);
    const auto f = character_table(m, {1, 0});
    REQUIRE_FALSE(f.is_real());
    for (int a1 = 0; a1 < 3; ++a1) {
      const std::complex<double> expected{std::cos(2 * 3.14159265358979323846 * a1 / 3),
                                          std::sin(2 * 3.14159265358979323846 * a1 / 3)};
      for (int a2 = 0; a2 < 3; ++a2) {
        const auto z = f.values[m.index_of({a1, a2})];
        REQUIRE(std::abs(z - expected) < 1e-12);
      }
    }
  }
  SECTION("product_sign matches its definition") {
    const auto m = three_point_different_law(2);
    const auto f = product_sign_table(m);
    REQUIRE(f.values[m.index_of({0, 2})].real() == -2.0);  // x = (-1, 1)
    REQUIRE(f.values[m.index_of({2, 1})].real() == 1.0);   // x = (1, 0)
    REQUIRE(f.values[m.index_of({1, 1})].real() == 0.0);   // x = (0, 0)
  }
  SECTION("errors") {
    const auto m = rademacher_flip(2);
    REQUIRE_THROWS_AS(parity_table(m, {3}), Error);
    REQUIRE_THROWS_AS(character_table(m, {2, 0}), Error);
    REQUIRE_THROWS_AS(character_table(m, {0}), Error);
    REQUIRE_THROWS_AS(linear_table(m, {1.0}), Error);
    REQUIRE_THROWS_AS(build_function_builtin("nope", {}, m), Error);
    REQUIRE_THROWS_AS(build_function_builtin("sin_sum", {1}, m), Error);
  }
}

TEST_CASE("parse_function") {
  const auto m = rademacher_flip(2);
  SECTION("explicit real table") {
    const auto f = parse_function(R"({"table":[1,2,3,4]})", m);
    REQUIRE(f.is_real());
    REQUIRE(f.values[2].real() == 3.0);
  }
  SECTION("complex entries as [re, im]") {
    const auto f = parse_function(R"({"table":[1,[0,1],2,3]})", m);
    REQUIRE_FALSE(f.is_real());
    REQUIRE(f.values[1] == std::complex<double>(0.0, 1.0));
  }
  SECTION("builtin dispatch") {
    const auto f = parse_function(R"({"builtin":"parity","params":[1]})", m);
    REQUIRE(f.values[0].real() == -1.0);
  }
  SECTION("errors") {
    REQUIRE_THROWS_AS(parse_function(R"({"table":[1,2,3]})", m), Error);
    REQUIRE_THROWS_AS(parse_function(R"({"table":[1,2,3,"x"]})", m), Error);
    REQUIRE_THROWS_AS(parse_function("[]", m), Error);
  }
}

TEST_CASE("serialize / parse round-trip is the identity on canonical models") {
  SECTION("hand-built model with non-integer values") {
    const auto m = parse_model(
        R"({"pairs":[{"values":[-1.5,0.25,3],
             "joint":[[0.1,0.05,0.05],[0.2,0.1,0.1],[0.1,0.1,0.2]]}]})");
    const auto again = parse_model(serialize_model(m));
    REQUIRE(again.pairs[0].values == m.pairs[0].values);
    REQUIRE(again.pairs[0].joint == m.pairs[0].joint);
  }
  SECTION("random models round-trip bitwise") {
    SplitMix64 rng(202501);
    for (int t = 0; t < 25; ++t) {
      const auto m = random_model(rng, 3, 4, [](SplitMix64& r, int s) {
        return random_arbitrary_pair(r, s);
      });
      const auto again = parse_model(serialize_model(m));
      REQUIRE(again.coordinates() == m.coordinates());
      for (int i = 0; i < m.coordinates(); ++i) {
        REQUIRE(again.pairs[i].values == m.pairs[i].values);
        REQUIRE(again.pairs[i].joint == m.pairs[i].joint);
        REQUIRE(again.pairs[i].exchangeable == m.pairs[i].exchangeable);
        REQUIRE(again.pairs[i].identically_distributed ==
                m.pairs[i].identically_distributed);
      }
    }
  }
}
