#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stnabla/form.hpp"

using namespace stnabla;

TEST_CASE("weyl characters are orthonormal") {
  for (auto [t, n] : {std::pair<char, int>{'A', 1}, {'A', 2}, {'B', 2}, {'G', 2}}) {
    RootSystem rs(t, n);
    ChiCache cache(rs);
    std::vector<Weight> picks;
    if (n == 1) {
      picks = {Weight{0}, Weight{1}, Weight{4}, Weight{7}};
    } else {
      picks = {Weight{0, 0}, Weight{1, 0}, Weight{1, 1}, Weight{2, 1}};
    }
    for (const auto& la : picks)
      for (const auto& mu : picks) {
        Int expect = (la == mu) ? 1 : 0;
        CHECK(bracket(cache.chi(la), cache.chi(mu)) == expect);
      }
  }
}

TEST_CASE("bracket agrees with coefficient extraction") {
  RootSystem a2('A', 2);
  ChiCache cache(a2);
  Character m = cache.chi(Weight{2, 1}) + cache.chi(Weight{0, 0}).scaled(3) - cache.chi(Weight{1, 1});
  NablaExpansion e = nabla_expand(a2, m);
  CHECK(e.at(Weight{2, 1}) == 1);
  CHECK(e.at(Weight{0, 0}) == 3);
  CHECK(e.at(Weight{1, 1}) == -1);
  for (const auto& la : {Weight{2, 1}, Weight{0, 0}, Weight{1, 1}, Weight{3, 3}}) {
    Int via_bracket = bracket(m, cache.chi(la));
    Int via_points = nabla_coefficient(a2, m, la);
    Int via_expand = e.count(la) ? e.at(la) : Int(0);
    CHECK(via_bracket == via_points);
    CHECK(via_points == via_expand);
  }
  // Chi-basis pairing matches the lazy convolution route.
  Character n = cache.chi(Weight{1, 1}).scaled(2) + cache.chi(Weight{2, 1});
  CHECK(bracket(m, n) == bracket(e, nabla_expand(a2, n)));
}

TEST_CASE("symmetry, duality, adjunction") {
  RootSystem a2('A', 2);
  ChiCache cache(a2);
  Character m = cache.chi(Weight{2, 0}) - cache.chi(Weight{0, 1}).scaled(2);
  Character n = cache.chi(Weight{1, 1}) + cache.chi(Weight{2, 0});
  Character v = cache.chi(Weight{1, 0});
  CHECK(bracket(m, n) == bracket(n, m));
  CHECK(bracket(m, n) == bracket(m.dual(), n.dual()));
  CHECK(bracket(m.multiply(v), n) == bracket(m, n.multiply(v.dual())));
}

TEST_CASE("pairing a non-dominant twisted simple against a small tilting character") {
  // p = 3: ch T(4) = chi(4) + chi(0), ch L(12) = ch L(4)^(3) has support
  // {12, 6, -6, -12}; the pairing comes out negative, which is exactly the
  // failure of T(4) tensor L(12) to carry a costandard filtration shape.
  RootSystem a1('A', 1);
  ChiCache cache(a1);
  Character t4 = cache.chi(Weight{4}) + cache.chi(Weight{0});
  Character l12(&a1);
  for (int w : {12, 6, -6, -12}) l12.add(Weight{w}, 1);
  CHECK(bracket(t4, l12) == -1);

  // p = 5 analogue: ch T(8) = chi(8) + chi(0), L(40) = L(8)^(5).
  Character t8 = cache.chi(Weight{8}) + cache.chi(Weight{0});
  Character l40(&a1);
  for (int w : {40, 30, 20, 10, -10, -20, -30, -40}) l40.add(Weight{w}, 1);
  CHECK(bracket(t8, l40) == -1);
}

TEST_CASE("bracket of chi-basis expansions is the dot product") {
  NablaExpansion a{{Weight{3}, Int(2)}, {Weight{1}, Int(-1)}};
  NablaExpansion b{{Weight{3}, Int(5)}, {Weight{0}, Int(7)}};
  CHECK(bracket(a, b) == 10);
}
