// Steinberg-weight decomposition layer against hand-computed rank-1 data and
// the structural theorems that pin every multiplicity at desk scale.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stnabla/steinberg.hpp"

#include <algorithm>
#include <map>

using namespace stnabla;

namespace {

using Entries = std::map<Weight, Int, WeightLess>;

NablaExpansion chi_of(const Weight& w) { return NablaExpansion{{w, Int(1)}}; }

}  // namespace

TEST_CASE("tilting multiplicities of the Steinberg tensor at rank one") {
  ModularTables t3('A', 1, 3, false);
  SteinbergContext c3(t3, 1);

  CHECK(c3.t_numbers(Weight{2}, Weight{0}).entries ==
        Entries{{Weight{4}, Int(1)}, {Weight{2}, Int(1)}});
  CHECK(c3.t_numbers(Weight{0}, Weight{1}).entries == Entries{{Weight{3}, Int(1)}});
  CHECK(c3.t_numbers(Weight{2}, Weight{1}).entries ==
        Entries{{Weight{5}, Int(1)}, {Weight{3}, Int(2)}});
  CHECK(c3.t_numbers(Weight{2}, Weight{1}).complete);
  CHECK(c3.t_numbers(Weight{2}, Weight{1}).hypotheses.empty());
  CHECK_THROWS_AS(c3.t_numbers(Weight{6}, Weight{0}), input_error);

  ModularTables t5('A', 1, 5, false);
  SteinbergContext c5(t5, 1);
  CHECK(c5.t_numbers(Weight{1}, Weight{0}).entries == Entries{{Weight{5}, Int(1)}});
}

TEST_CASE("tilting multiplicities conserve the character") {
  ModularTables t3('A', 1, 3, false);
  SteinbergContext ctx(t3, 1);
  Weight la{2};
  Weight mu{1};
  MultiplicityMap out = ctx.t_numbers(la, mu);
  REQUIRE(out.complete);

  NablaExpansion sum = out.residual;
  for (const auto& [nu, c] : out.entries)
    nabla_add(sum, t3.tilting(nu).coeffs, c);
  NablaExpansion product = nabla_product(t3.chi(), t3.tilting(ctx.steinberg_weight() + mu).coeffs,
                                         chi_of(la), 3, 0);
  CHECK(sum == product);
}

TEST_CASE("partial tilting decomposition reports honest residual") {
  ModularTables t('A', 2, 3, false);
  SteinbergContext ctx(t, 1);
  MultiplicityMap out = ctx.t_numbers(Weight{1, 1}, Weight{0, 0});
  CHECK_FALSE(out.complete);
  CHECK(out.entries.empty());
  NablaExpansion product =
      nabla_product(t.chi(), t.tilting(Weight{2, 2}).coeffs, chi_of(Weight{1, 1}), 3, 0);
  CHECK(out.residual == product);
}

TEST_CASE("digit-built tilting inputs are flagged as hypotheses") {
  ModularTables t('A', 2, 3, true);
  SteinbergContext ctx(t, 1);
  MultiplicityMap out = ctx.t_numbers(Weight{0, 0}, Weight{3, 0});
  CHECK(out.entries == Entries{{Weight{5, 2}, Int(1)}});
  REQUIRE(out.complete);
  CHECK(std::find(out.hypotheses.begin(), out.hypotheses.end(), std::string(kHypDigitTilting)) !=
        out.hypotheses.end());
}

TEST_CASE("socle multiplicities by digit reflection") {
  ModularTables t3('A', 1, 3, false);
  SteinbergContext c3(t3, 1);
  CHECK(c3.s_numbers(Weight{2}, Weight{0}).entries ==
        Entries{{Weight{0}, Int(1)}, {Weight{2}, Int(1)}});
  CHECK(c3.s_numbers(Weight{0}, Weight{0}).entries == Entries{{Weight{2}, Int(1)}});
  CHECK(c3.s_numbers(Weight{2}, Weight{1}).entries ==
        Entries{{Weight{5}, Int(1)}, {Weight{1}, Int(2)}});

  ModularTables t5('A', 1, 5, false);
  SteinbergContext c5(t5, 1);
  CHECK(c5.s_numbers(Weight{1}, Weight{0}).entries == Entries{{Weight{3}, Int(1)}});

  // Below p = 2h-2 the reflection step needs the Donkin flag.
  ModularTables plain('A', 2, 3, false);
  SteinbergContext cp(plain, 1);
  CHECK_THROWS_AS(cp.s_numbers(Weight{0, 0}, Weight{0, 0}), input_error);
  ModularTables flagged('A', 2, 3, true);
  SteinbergContext cf(flagged, 1);
  MultiplicityMap s = cf.s_numbers(Weight{0, 0}, Weight{0, 0});
  CHECK(s.entries == Entries{{Weight{2, 2}, Int(1)}});
  CHECK(std::find(s.hypotheses.begin(), s.hypotheses.end(), std::string(kHypDonkinAssumed)) !=
        s.hypotheses.end());
}

TEST_CASE("three socle evaluations agree where the theorems overlap") {
  for (int p : {3, 5}) {
    ModularTables t('A', 1, p, false);
    SteinbergContext ctx(t, 1);
    int gamma_cap = p * (p - 1);
    for (int l = 0; l < gamma_cap; ++l) {
      Weight la{l};
      MultiplicityMap s = ctx.s_numbers(la, Weight{0});
      for (int n = 0; n <= 3 * p; ++n) {
        Weight nu{n};
        Int direct = ctx.s_direct(la, Weight{0}, nu);
        CHECK(direct == s.at(nu));
        CHECK(direct == ctx.s_recursive(la, Weight{0}, nu));
        CHECK(direct <= ctx.s_upper_bound(la, Weight{0}, nu));
      }
    }
  }
}

TEST_CASE("direct socle values from the frozen examples") {
  ModularTables t3('A', 1, 3, false);
  SteinbergContext c3(t3, 1);
  CHECK(c3.s_direct(Weight{2}, Weight{0}, Weight{0}) == 1);
  CHECK(c3.s_direct(Weight{2}, Weight{0}, Weight{1}) == 0);
  ModularTables t5('A', 1, 5, false);
  SteinbergContext c5(t5, 1);
  CHECK(c5.s_direct(Weight{1}, Weight{0}, Weight{3}) == 1);

  // At nu = 9 the raw coefficient of chi(5) in ch St * ch L(9) is -1, but the
  // digit reflection of 9 is 11, outside the tilting region, so the socle
  // multiplicity is zero.
  CHECK(c3.s_direct(Weight{5}, Weight{0}, Weight{9}) == 0);
  CHECK(c3.s_recursive(Weight{5}, Weight{0}, Weight{9}) == 0);
  CHECK(c3.s_upper_bound(Weight{5}, Weight{0}, Weight{9}) == 0);
}

TEST_CASE("tilting multiplicities at level two split across digits") {
  ModularTables t('A', 1, 3, false);
  SteinbergContext ctx(t, 2);

  CHECK(ctx.t_numbers(Weight{5}, Weight{0}).entries ==
        Entries{{Weight{13}, Int(1)}, {Weight{11}, Int(1)}});
  CHECK(ctx.t_numbers(Weight{8}, Weight{0}).entries ==
        Entries{{Weight{16}, Int(1)}, {Weight{14}, Int(1)}, {Weight{10}, Int(1)},
                {Weight{8}, Int(1)}});
  CHECK(ctx.t_numbers(Weight{4}, Weight{0}).entries ==
        Entries{{Weight{12}, Int(1)}, {Weight{8}, Int(1)}});

  // Steinberg lower digit certifies the product formula.
  for (int nu = 0; nu <= 20; ++nu) {
    InductiveValue v = ctx.t_inductive(Weight{5}, 1, Weight{nu});
    if (!v.applicable) continue;
    CHECK(v.value == ctx.t_numbers(Weight{5}, Weight{0}).at(Weight{nu}));
  }
  InductiveValue at13 = ctx.t_inductive(Weight{5}, 1, Weight{13});
  REQUIRE(at13.applicable);
  CHECK(at13.value == 1);
  CHECK(at13.certificate == "the lower digit of lambda is a Steinberg weight");

  // No certificate at lambda = 4: lower digit is not Steinberg and nabla(4)
  // is not simple.
  CHECK_FALSE(ctx.t_inductive(Weight{4}, 1, Weight{12}).applicable);

  // u out of range at level one.
  SteinbergContext one(t, 1);
  CHECK_FALSE(one.t_inductive(Weight{2}, 1, Weight{4}).applicable);
}

TEST_CASE("no factorization certificate for the misleading level-two weight") {
  ModularTables t('A', 1, 5, false);
  SteinbergContext ctx(t, 2);
  InductiveValue v = ctx.t_inductive(Weight{6}, 1, Weight{30});
  CHECK_FALSE(v.applicable);
  CHECK(v.reason == "no certificate for splitting the costandard module across the digit levels");

  // Steinberg lower digit still certifies at p = 5.
  InductiveValue ok = ctx.t_inductive(Weight{19}, 1, Weight{28});
  CHECK(ok.applicable);
  MultiplicityMap direct = ctx.t_numbers(Weight{19}, Weight{0});
  for (const auto& [nu, c] : direct.entries) {
    InductiveValue w = ctx.t_inductive(Weight{19}, 1, nu);
    if (!w.applicable) continue;
    CHECK(w.value == c);
  }
}

TEST_CASE("lower bound chain for digit products") {
  ModularTables t('A', 1, 3, false);
  SteinbergContext ctx(t, 2);
  for (int l : {4, 5, 7}) {
    MultiplicityMap full = ctx.t_numbers(Weight{l}, Weight{0});
    for (const auto& [nu, c] : full.entries) {
      (void)c;
      BoundCheck b = ctx.t_lower_bound_check(Weight{l}, 1, nu);
      if (!b.checked) continue;
      CHECK(b.holds);
    }
  }
  BoundCheck at12 = ctx.t_lower_bound_check(Weight{4}, 1, Weight{12});
  REQUIRE(at12.checked);
  CHECK(at12.holds);
}

TEST_CASE("Frobenius-kernel Hom dimensions against the closed form") {
  ModularTables t3('A', 1, 3, false);
  SteinbergContext c3(t3, 1);
  for (int n = 0; n <= 9; ++n) {
    Int expected = 0;
    if (n >= 2 && (n - 2) % 3 == 0) expected = (n - 2) / 3 + 1;
    CHECK(c3.hom_dim_gr(Weight{0}, chi_of(Weight{n})) == expected);
  }
  CHECK(c3.hom_dim_gr(Weight{2}, chi_of(Weight{4})) == 1);
  CHECK(c3.hom_dim_gr(Weight{2}, chi_of(Weight{2})) == 0);
  CHECK(c3.hom_dim_gr(Weight{2}, chi_of(Weight{0})) == 1);
  CHECK(c3.hom_dim_gr(Weight{0}, NablaExpansion{}) == 0);

  ModularTables t5('A', 1, 5, false);
  SteinbergContext c25(t5, 2);
  CHECK(c25.hom_dim_gr(Weight{0}, chi_of(Weight{24})) == 1);
  CHECK(c25.hom_dim_gr(Weight{0}, chi_of(Weight{49})) == 2);
  CHECK(c25.hom_dim_gr(Weight{0}, chi_of(Weight{10})) == 0);

  ModularTables a2('A', 2, 3, false);
  SteinbergContext c2(a2, 1);
  CHECK(c2.hom_dim_gr(Weight{0, 0}, chi_of(Weight{2, 2})) == 1);
  CHECK(c2.hom_dim_gr(Weight{0, 0}, chi_of(Weight{5, 2})) == 3);
  CHECK(c2.hom_dim_gr(Weight{0, 0}, chi_of(Weight{3, 3})) == 0);
  CHECK(c2.hom_dim_gr(Weight{0, 0}, chi_of(Weight{8, 8})) == 27);
}

TEST_CASE("finite-group Hom dimensions") {
  ModularTables t3('A', 1, 3, false);
  SteinbergContext ctx(t3, 1);
  CHECK(ctx.hom_dim_gfq(Weight{0}, chi_of(Weight{2})) == 1);
  CHECK(ctx.hom_dim_gfq(Weight{0}, chi_of(Weight{5})) == 0);
  CHECK(ctx.hom_dim_gfq(Weight{0}, chi_of(Weight{8})) == 2);
  CHECK(ctx.hom_dim_gfq(Weight{0}, NablaExpansion{}) == 0);
}

TEST_CASE("Frobenius-kernel injective multiplicities") {
  ModularTables t('A', 1, 3, false);
  SteinbergContext ctx(t, 1);
  CHECK(ctx.d_numbers(Weight{2}).entries ==
        Entries{{Weight{0}, Int(1)}, {Weight{2}, Int(1)}});
  CHECK(ctx.d_numbers(Weight{0}).entries == Entries{{Weight{2}, Int(1)}});
  CHECK(ctx.d_numbers(Weight{1}).entries == Entries{{Weight{1}, Int(1)}});

  // Dimension bookkeeping with the known injective dimensions 2p, 2p, p.
  std::map<Weight, Int, WeightLess> qdim{
      {Weight{0}, Int(6)}, {Weight{1}, Int(6)}, {Weight{2}, Int(3)}};
  MultiplicityMap d = ctx.d_numbers(Weight{2});
  Int total = 0;
  for (const auto& [nu, c] : d.entries) total += c * qdim.at(nu);
  CHECK(total == 9);
}

TEST_CASE("finite-group projective multiplicities") {
  ModularTables t('A', 1, 3, false);
  SteinbergContext ctx(t, 1);
  CHECK(ctx.p_numbers(Weight{0}).entries == Entries{{Weight{2}, Int(1)}});
  CHECK(ctx.p_numbers(Weight{2}).entries ==
        Entries{{Weight{0}, Int(1)}, {Weight{2}, Int(2)}});

  // Dimension bookkeeping with the projective dimensions of the group algebra.
  std::map<Weight, Int, WeightLess> pdim{
      {Weight{0}, Int(3)}, {Weight{1}, Int(6)}, {Weight{2}, Int(3)}};
  MultiplicityMap p = ctx.p_numbers(Weight{2});
  Int total = 0;
  for (const auto& [nu, c] : p.entries) total += c * pdim.at(nu);
  CHECK(total == 9);
}

TEST_CASE("form of hat tilting against simple characters") {
  ModularTables t3('A', 1, 3, false);
  SteinbergContext c3(t3, 1);

  FormComparison diag = c3.form_tilting_vs_simple(Weight{0}, Weight{0}, Weight{0}, Weight{0});
  CHECK(diag.value == 1);
  REQUIRE(diag.predicted.has_value());
  CHECK(*diag.predicted == 1);

  FormComparison off = c3.form_tilting_vs_simple(Weight{0}, Weight{0}, Weight{1}, Weight{1});
  CHECK(off.value == 0);
  REQUIRE(off.predicted.has_value());
  CHECK(*off.predicted == 0);

  FormComparison shifted = c3.form_tilting_vs_simple(Weight{0}, Weight{1}, Weight{0}, Weight{1});
  CHECK(shifted.value == 1);
  REQUIRE(shifted.predicted.has_value());
  CHECK(*shifted.predicted == 1);

  // The anomaly weight evades the prediction because both halves of the mu
  // condition fail there.
  FormComparison bad = c3.form_tilting_vs_simple(Weight{0}, Weight{0}, Weight{0}, Weight{4});
  CHECK(bad.value == -1);
  CHECK_FALSE(bad.predicted.has_value());
  CHECK_FALSE(bad.unverified.empty());

  ModularTables t5('A', 1, 5, false);
  SteinbergContext c5(t5, 1);
  FormComparison bad5 = c5.form_tilting_vs_simple(Weight{0}, Weight{0}, Weight{0}, Weight{8});
  CHECK(bad5.value == -1);
  CHECK_FALSE(bad5.predicted.has_value());
}

TEST_CASE("reciprocity between tilting and decomposition multiplicities") {
  ModularTables t('A', 1, 3, false);
  SteinbergContext ctx(t, 1);

  ReciprocityResult a = ctx.reciprocity_check(Weight{1}, Weight{0}, Weight{3});
  CHECK(a.lhs == 1);
  CHECK(a.rhs == 1);
  CHECK(a.hypotheses_certified);
  CHECK(a.verdict == "match, hypotheses certified");

  ReciprocityResult b = ctx.reciprocity_check(Weight{0}, Weight{0}, Weight{4});
  CHECK(b.lhs == 1);
  CHECK(b.rhs == 1);
  CHECK(b.hypotheses_certified);

  // At the anomaly weight the linkage hypothesis fails and the two sides
  // differ by exactly one.
  ReciprocityResult c = ctx.reciprocity_check(Weight{0}, Weight{0}, Weight{12});
  CHECK(c.lhs == 0);
  CHECK(c.rhs == 1);
  CHECK_FALSE(c.hypotheses_certified);
  CHECK(c.verdict == "mismatch, hypotheses unverified");
  CHECK_FALSE(c.notes.empty());
}

TEST_CASE("indecomposability criterion is consistent at rank one") {
  for (int p : {3, 5}) {
    ModularTables t('A', 1, p, false);
    SteinbergContext ctx(t, 1);
    for (int l = 0; l < p; ++l) {
      DonkinReport rep = ctx.donkin_criterion(Weight{l}, Weight{2 * p});
      CHECK(rep.consistent);
      CHECK(rep.conclusive);
      CHECK(rep.checked == p * (2 * p + 1));
    }
  }
}

TEST_CASE("counterexample suite at rank one") {
  ModularTables t3('A', 1, 3, false);
  SteinbergContext c3(t3, 1);
  CounterexampleReport r3 = c3.counterexample_suite();
  CHECK(r3.anomaly_weight == Weight{12});
  REQUIRE(r3.value_known);
  CHECK(r3.value == -1);
  CHECK(r3.predicted == -1);
  CHECK(r3.unverified.empty());
  CHECK_FALSE(r3.sl5_checks);

  ModularTables t5('A', 1, 5, false);
  SteinbergContext c5(t5, 1);
  CounterexampleReport r5 = c5.counterexample_suite();
  CHECK(r5.anomaly_weight == Weight{40});
  REQUIRE(r5.value_known);
  CHECK(r5.value == -1);

  // p < h refuses.
  ModularTables t2('A', 2, 2, false);
  SteinbergContext c2(t2, 1);
  CHECK_THROWS_AS(c2.counterexample_suite(), input_error);
}

TEST_CASE("counterexample suite cross checks for special linear rank five") {
  ModularTables t('A', 4, 5, true);
  SteinbergContext ctx(t, 1);
  CounterexampleReport rep = ctx.counterexample_suite();
  CHECK(rep.anomaly_weight == Weight{5, 0, 0, 5});
  REQUIRE(rep.sl5_checks);
  CHECK(rep.jantzen_identity);
  REQUIRE(rep.multiplicity_known);
  CHECK(rep.socle_multiplicity == 1);
  // The hat tilting character at (8,8,8,8) has no certified derivation, so
  // the direct side of the identity is reported blocked.
  CHECK_FALSE(rep.value_known);
  CHECK_FALSE(rep.lhs_known);
  CHECK_FALSE(rep.lhs_blocked.empty());
  CHECK_FALSE(rep.blocked.empty());
}
