// Verification suites. Every check recomputes an identity through at least
// two independent paths (closed form vs table derivation, direct vs digit
// product, character arithmetic vs module combinatorics) and fails loudly on
// the first disagreement. Each check also carries a wall-clock budget; going
// over budget is a failure even when the values agree.

#include "stnabla/verify.hpp"

#include <chrono>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "stnabla/steinberg.hpp"

namespace stnabla {

namespace {

struct check_failure : std::runtime_error {
  explicit check_failure(const std::string& what) : std::runtime_error(what) {}
};

void require(bool ok, const std::string& what) {
  if (!ok) throw check_failure(what);
}

NablaExpansion single(const Weight& w) { return NablaExpansion{{w, Int(1)}}; }

std::string describe(const Weight& w) { return to_string(w); }

// ---------------------------------------------------------------------------
// Check 1: bilinear form axioms on random virtual characters.

Weight random_dominant(std::mt19937& gen, int rank, int cap) {
  Weight w = Weight::zero(rank);
  std::uniform_int_distribution<int> coord(0, cap);
  for (int i = 0; i < rank; ++i) w[i] = coord(gen);
  return w;
}

NablaExpansion random_virtual(std::mt19937& gen, int rank, int cap) {
  std::uniform_int_distribution<int> terms(1, 3);
  std::uniform_int_distribution<int> coeff(-3, 3);
  NablaExpansion e;
  int n = terms(gen);
  for (int i = 0; i < n; ++i) {
    int c = coeff(gen);
    if (c == 0) c = 1;
    nabla_add(e, random_dominant(gen, rank, cap), Int(c));
  }
  return e;
}

void form_axioms_for(char type, int rank, int pairs, unsigned seed) {
  RootSystem rs(type, rank);
  ChiCache cache(rs);
  std::mt19937 gen(seed);
  for (int i = 0; i < pairs; ++i) {
    Character a = synthesize(cache, random_virtual(gen, rank, 12));
    Character b = synthesize(cache, random_virtual(gen, rank, 12));
    require(bracket(a, b) == bracket(b, a), "form symmetry failed");
    Character v = cache.chi(random_dominant(gen, rank, 4));
    require(bracket(a.multiply(v), b) == bracket(a, b.multiply(v.dual())),
            "form adjunction against a tensor factor failed");
    require(bracket(a.dual(), b.dual()) == bracket(a, b), "form duality failed");
    Weight la = random_dominant(gen, rank, 12);
    Weight mu = random_dominant(gen, rank, 12);
    require(bracket(cache.chi(la), cache.chi(mu)) == Int(la == mu ? 1 : 0),
            "Weyl characters are not orthonormal at " + describe(la) + ", " + describe(mu));
    require(bracket(cache.chi(la), cache.chi(la)) == 1,
            "Weyl character has norm other than one at " + describe(la));
  }
}

void check_form_axioms(std::string& detail) {
  form_axioms_for('A', 1, 100, 2711u);
  form_axioms_for('A', 2, 100, 2713u);
  detail = "200 random pairs at ranks one and two";
}

// ---------------------------------------------------------------------------
// Check 2: expansion round trip and agreement of the two bracket paths.

void bracket_paths_for(char type, int rank, int pairs, unsigned seed) {
  RootSystem rs(type, rank);
  ChiCache cache(rs);
  std::mt19937 gen(seed);
  for (int i = 0; i < pairs; ++i) {
    NablaExpansion ea = random_virtual(gen, rank, 12);
    NablaExpansion eb = random_virtual(gen, rank, 12);
    Character a = synthesize(cache, ea);
    Character b = synthesize(cache, eb);
    require(nabla_expand(rs, a) == ea, "expansion does not invert synthesis");
    require(nabla_expand(rs, b) == eb, "expansion does not invert synthesis");
    Int direct = bracket(a, b);
    require(direct == bracket(ea, eb), "alternating-sum bracket disagrees with the basis bracket");
    require(direct == nabla_coefficient(rs, a.multiply(b.dual()), Weight::zero(rank)),
            "bracket disagrees with the trivial coefficient of a times the dual");
  }
}

void check_bracket_paths(std::string& detail) {
  bracket_paths_for('A', 1, 100, 3001u);
  bracket_paths_for('A', 2, 100, 3011u);
  detail = "200 random pairs, three evaluation paths each";
}

// ---------------------------------------------------------------------------
// Check 3: digit reflection is an involution, stabilizes the restricted box,
// and splits across Frobenius digits.

void digit_reflection_rank_one(int p) {
  RootSystem rs('A', 1);
  const int q2 = p * p;
  std::set<Weight, WeightLess> image;
  for (int l = 0; l < q2; ++l) {
    Weight la{l};
    Weight w = rs.digit_reflect(la, p, 2);
    require(rs.in_restricted(w, q2), "reflection left the restricted box at " + describe(la));
    require(rs.digit_reflect(w, p, 2) == la, "reflection is not an involution at " + describe(la));
    image.insert(w);
  }
  require(static_cast<int>(image.size()) == q2, "reflection is not a bijection on the box");
  for (int l = 0; l < 2 * q2; ++l) {
    Weight la{l};
    require(rs.digit_reflect(rs.digit_reflect(la, p, 2), p, 2) == la,
            "reflection is not an involution above the box at " + describe(la));
  }
  for (int l0 = 0; l0 < p; ++l0)
    for (int l1 = 0; l1 < 2 * p; ++l1) {
      Weight la{l0 + p * l1};
      Weight split = rs.digit_reflect(Weight{l0}, p, 1) +
                     scaled_weight(rs.digit_reflect(Weight{l1}, p, 1), p);
      require(rs.digit_reflect(la, p, 2) == split,
              "reflection does not split across digits at " + describe(la));
    }
}

void digit_reflection_rank_two(int p) {
  RootSystem rs('A', 2);
  std::set<Weight, WeightLess> image;
  for (int x = 0; x < p; ++x)
    for (int y = 0; y < p; ++y) {
      Weight la{x, y};
      Weight w = rs.digit_reflect(la, p, 1);
      require(rs.in_restricted(w, p), "reflection left the restricted box at " + describe(la));
      require(rs.digit_reflect(w, p, 1) == la, "reflection is not an involution at " + describe(la));
      image.insert(w);
    }
  require(static_cast<int>(image.size()) == p * p, "reflection is not a bijection on the box");
  for (int x0 = 0; x0 < p; ++x0)
    for (int y0 = 0; y0 < p; ++y0)
      for (int x1 = 0; x1 < p; ++x1)
        for (int y1 = 0; y1 < p; ++y1) {
          Weight la{x0 + p * x1, y0 + p * y1};
          Weight split = rs.digit_reflect(Weight{x0, y0}, p, 1) +
                         scaled_weight(rs.digit_reflect(Weight{x1, y1}, p, 1), p);
          require(rs.digit_reflect(la, p, 2) == split,
                  "reflection does not split across digits at " + describe(la));
        }
}

void check_digit_reflection(std::string& detail) {
  for (int p : {2, 3, 5}) {
    digit_reflection_rank_one(p);
    digit_reflection_rank_two(p);
  }
  detail = "exhaustive on the level-two box at rank one and digit pairs at rank two";
}

// ---------------------------------------------------------------------------
// Check 4: the sum formula against the digit-derived rank-one composition
// series.

void sum_formula_rank_one(int p) {
  ModularTables tables('A', 1, p, false);
  const RootSystem& rs = tables.rs();
  ChiCache& cache = tables.chi();
  const int top = 30;

  // Independent simple characters: product of Frobenius twists of the digits.
  std::vector<NablaExpansion> simple_oracle(top + 1);
  for (int m = 0; m <= top; ++m) {
    NablaExpansion e = single(Weight{m % p});
    int rest = m / p;
    for (int i = 1; rest > 0; ++i, rest /= p)
      if (rest % p > 0) e = nabla_product(cache, e, single(Weight{rest % p}), p, i);
    simple_oracle[m] = e;
  }

  // Peel a character top-down in the oracle basis; nullopt on any negative
  // coefficient.
  auto peel = [&](NablaExpansion rem) -> std::optional<std::map<Weight, Int, WeightLess>> {
    std::map<Weight, Int, WeightLess> comp;
    while (!rem.empty()) {
      auto w = peel_max(rs, rem);
      Int c = rem.find(*w)->second;
      if (c < 0 || (*w)[0] > top) return std::nullopt;
      comp[*w] += c;
      nabla_add(rem, simple_oracle[(*w)[0]], -c);
    }
    return comp;
  };

  for (int m = 0; m <= top; ++m) {
    Weight la{m};
    auto oracle = peel(single(la));
    require(oracle.has_value(), "digit-derived series is negative at " + describe(la));
    auto derived = tables.expand_into_simples(single(la));
    require(derived == *oracle, "table-layer composition series disagrees at " + describe(la));

    auto jsf = peel(jantzen_nabla(rs, la, p));
    require(jsf.has_value(), "sum formula is negative in simple characters at " + describe(la));
    std::map<Weight, Int, WeightLess> lower = *oracle;
    lower.erase(la);
    for (const auto& [w, c] : lower)
      require(jsf->count(w) == 1 && jsf->at(w) >= c,
              "sum formula misses the factor " + describe(w) + " of " + describe(la));
    for (const auto& [w, c] : *jsf) {
      (void)c;
      require(lower.count(w) == 1,
              "sum formula names " + describe(w) + " outside the series of " + describe(la));
    }
  }
}

void check_sum_formula(std::string& detail) {
  for (int p : {2, 3, 5}) sum_formula_rank_one(p);
  detail = "all highest weights up to 30 at p = 2, 3, 5";
}

// ---------------------------------------------------------------------------
// Check 5: Frobenius-kernel Hom dimensions at lambda = 0 against the closed
// form: dim nabla(mu) when nu = (q-1) rho + q mu, zero otherwise.

void hom_closed_form_rank_one(int p, int r) {
  ModularTables tables('A', 1, p, false);
  SteinbergContext ctx(tables, r);
  std::int64_t q = 1;
  for (int i = 0; i < r; ++i) q *= p;
  for (int n = 0; n <= 3 * q; ++n) {
    Int expected = 0;
    if (n >= q - 1 && (n - (q - 1)) % q == 0)
      expected = weyl_dimension(tables.rs(), Weight{static_cast<int>((n - (q - 1)) / q)});
    require(ctx.hom_dim_gr(Weight{0}, single(Weight{n})) == expected,
            "Hom dimension differs from the closed form at " + describe(Weight{n}));
  }
}

void check_hom_closed_form(std::string& detail) {
  for (int p : {3, 5})
    for (int r : {1, 2}) hom_closed_form_rank_one(p, r);

  ModularTables a2('A', 2, 3, false);
  SteinbergContext ctx(a2, 1);
  for (int x = 0; x <= 8; ++x)
    for (int y = 0; y <= 8; ++y) {
      Weight nu{x, y};
      Int expected = 0;
      if (x % 3 == 2 && y % 3 == 2)
        expected = weyl_dimension(a2.rs(), Weight{(x - 2) / 3, (y - 2) / 3});
      require(ctx.hom_dim_gr(Weight{0, 0}, single(nu)) == expected,
              "Hom dimension differs from the closed form at " + describe(nu));
    }
  detail = "rank one p = 3, 5 at levels one and two; rank two p = 3";
}

// ---------------------------------------------------------------------------
// Check 6: socle numbers from three definitions, the upper bound, duality,
// and character conservation of the tilting decomposition.

void socle_consistency_rank_one(int p) {
  ModularTables tables('A', 1, p, false);
  SteinbergContext ctx(tables, 1);
  const Weight zero = Weight::zero(1);
  const int q = p;
  for (int l = 0; l < p * (p - 1); ++l) {
    Weight la{l};
    MultiplicityMap s = ctx.s_numbers(la, zero);
    require(s.complete, "socle map must be complete at rank one");
    for (int n = 0; n <= 3 * q; ++n) {
      Weight nu{n};
      Int direct = ctx.s_direct(la, zero, nu);
      require(direct == s.at(nu), "socle value disagrees with the reflected tilting value at " +
                                      describe(la) + ", " + describe(nu));
      require(direct == ctx.s_recursive(la, zero, nu),
              "recursive socle value disagrees at " + describe(la) + ", " + describe(nu));
      require(direct <= ctx.s_upper_bound(la, zero, nu),
              "socle value exceeds its upper bound at " + describe(la) + ", " + describe(nu));
      Weight las = tables.rs().dual_weight(la);
      Weight nus = tables.rs().dual_weight(nu);
      require(direct == ctx.s_direct(las, zero, nus),
              "socle duality fails at " + describe(la) + ", " + describe(nu));
    }

    MultiplicityMap t = ctx.t_numbers(la, zero);
    require(t.complete, "tilting map must be complete at rank one");
    NablaExpansion sum;
    for (const auto& [nu, c] : t.entries) nabla_add(sum, tables.tilting(nu).coeffs, c);
    NablaExpansion product =
        nabla_product(tables.chi(), tables.tilting(Weight{q - 1}).coeffs, single(la), p, 0);
    require(sum == product, "tilting decomposition does not conserve the character at " +
                                describe(la));
  }
}

void check_socle_consistency(std::string& detail) {
  for (int p : {3, 5}) socle_consistency_rank_one(p);
  detail = "all lambda in the level-one tilting region, p = 3, 5";
}

// ---------------------------------------------------------------------------
// Check 7: digit-splitting inductive formula and its lower bound chain
// against directly computed decompositions at level two.

void inductive_rank_one(int p, int* certified, int* bounded) {
  ModularTables tables('A', 1, p, false);
  SteinbergContext ctx(tables, 2);
  const int cap = p * p * (p - 1);
  for (int l = 0; l < cap; ++l) {
    Weight la{l};
    MultiplicityMap direct = ctx.t_numbers(la, Weight{0});
    require(direct.complete, "level-two decomposition must be complete at rank one");

    std::vector<Weight> probes;
    for (const auto& [nu, c] : direct.entries) {
      (void)c;
      probes.push_back(nu);
    }
    probes.push_back(Weight{p * p - 1 + l + 2});
    probes.push_back(Weight{std::max(0, p * p - 1 + l - 2 * p)});

    for (const Weight& nu : probes) {
      InductiveValue v = ctx.t_inductive(la, 1, nu);
      if (v.applicable) {
        ++*certified;
        require(v.value == direct.at(nu),
                "inductive value disagrees with the direct decomposition at " + describe(la) +
                    ", " + describe(nu));
      }
      BoundCheck b = ctx.t_lower_bound_check(la, 1, nu);
      if (b.checked) {
        ++*bounded;
        require(b.holds, "lower bound chain fails at " + describe(la) + ", " + describe(nu) +
                             ": " + b.detail);
      }
    }
  }
}

void check_inductive(std::string& detail) {
  int certified = 0;
  int bounded = 0;
  for (int p : {3, 5}) inductive_rank_one(p, &certified, &bounded);
  require(certified > 0, "no instance certified the inductive hypotheses");
  require(bounded > 0, "no instance admitted the bound chain");
  std::ostringstream note;
  note << certified << " certified equalities, " << bounded << " bound chains";
  detail = note.str();
}

// ---------------------------------------------------------------------------
// Check 8: reciprocity wherever its hypotheses certify, and the negative
// bracket at the anomaly weight.

void check_reciprocity_anomaly(std::string& detail) {
  ModularTables tables('A', 1, 3, false);
  SteinbergContext ctx(tables, 1);
  int certified = 0;
  for (int l = 0; l < 3; ++l)
    for (int s = 0; s <= 3; ++s)
      for (int m = 0; m <= 14; ++m) {
        ReciprocityResult rr = ctx.reciprocity_check(Weight{l}, Weight{s}, Weight{m});
        if (!rr.hypotheses_certified) continue;
        ++certified;
        require(rr.lhs == rr.rhs, "certified reciprocity fails at lambda " + describe(Weight{l}) +
                                      ", sigma " + describe(Weight{s}) + ", mu " +
                                      describe(Weight{m}));
      }
  require(certified >= 10, "too few certified reciprocity instances");

  for (int p : {3, 5}) {
    ModularTables t('A', 1, p, false);
    SteinbergContext c(t, 1);
    CounterexampleReport rep = c.counterexample_suite();
    require(rep.anomaly_weight == Weight{2 * p * (p - 1)}, "anomaly weight is misplaced");
    require(rep.value_known, "anomaly bracket is undetermined");
    require(rep.value == -1, "anomaly bracket is not minus one at p = " + std::to_string(p));
  }
  std::ostringstream note;
  note << certified << " certified reciprocity instances; bracket -1 at p = 3, 5";
  detail = note.str();
}

// ---------------------------------------------------------------------------
// Check 9: the indecomposability criterion never fires where the tilting
// conjecture is a theorem.

void check_indecomposability_criterion(std::string& detail) {
  std::int64_t checked = 0;
  for (int p : {2, 3, 5}) {
    ModularTables tables('A', 1, p, false);
    SteinbergContext ctx(tables, 1);
    for (int l = 0; l < p; ++l) {
      DonkinReport rep = ctx.donkin_criterion(Weight{l}, Weight{4 * p});
      require(rep.conclusive, "criterion could not evaluate every bracket");
      require(rep.consistent, rep.failures.empty()
                                  ? "criterion inconsistent"
                                  : "criterion fired: " + rep.failures.front());
      checked += rep.checked;
    }
  }
  std::ostringstream note;
  note << checked << " brackets, all matching the Kronecker pattern";
  detail = note.str();
}

// ---------------------------------------------------------------------------
// Check 10: the rank-four cross checks around the hat-weight counterexample.

void check_rank_four(std::string& detail) {
  ModularTables tables('A', 4, 5, false);
  SteinbergContext ctx(tables, 1);

  Weight w1001{1, 0, 0, 1};
  require(tables.decomposition_multiplicity(w1001, w1001) == 1,
          "Weyl module does not have its own top");
  require(tables.decomposition_multiplicity(w1001, Weight::zero(4)) == 1,
          "trivial factor of the (1,0,0,1) Weyl module is not one");

  CounterexampleReport rep = ctx.counterexample_suite();
  require(rep.sl5_checks, "rank-four cross checks did not run");
  require(rep.jantzen_identity, "sum formula identity fails at (1,0,0,1)");
  require(rep.multiplicity_known, "socle factor multiplicity is undetermined");
  require(rep.socle_multiplicity == 1, "socle factor multiplicity is not one");

  std::ostringstream note;
  if (rep.lhs_known && rep.rhs_known) {
    require(rep.identity_lhs == rep.identity_rhs, "the displayed identity fails");
    note << "identity evaluated, both sides " << rep.identity_lhs.str();
  } else {
    if (!rep.lhs_known) {
      require(!rep.lhs_blocked.empty(), "left side undetermined without a named blocker");
      note << "left side blocked: " << rep.lhs_blocked;
    }
    if (!rep.rhs_known) {
      require(!rep.rhs_blocked.empty(), "right side undetermined without a named blocker");
      if (!rep.lhs_known) note << "; ";
      note << "right side blocked: " << rep.rhs_blocked;
    }
  }
  detail = note.str();
}

// ---------------------------------------------------------------------------

struct Check {
  const char* name;
  int budget_seconds;
  void (*body)(std::string&);
};

constexpr Check kChecks[] = {
    {"form-axioms", 10, check_form_axioms},
    {"expansion-round-trip", 10, check_bracket_paths},
    {"digit-reflection", 5, check_digit_reflection},
    {"rank-one-sum-formula", 5, check_sum_formula},
    {"homdim-closed-form", 60, check_hom_closed_form},
    {"socle-tilting-consistency", 30, check_socle_consistency},
    {"inductive-formulas", 60, check_inductive},
    {"reciprocity-anomaly", 30, check_reciprocity_anomaly},
    {"indecomposability-criterion", 30, check_indecomposability_criterion},
    {"rank-four-counterexample", 900, check_rank_four},
};

CheckResult run_one(const Check& check) {
  CheckResult out;
  out.name = check.name;
  auto start = std::chrono::steady_clock::now();
  try {
    check.body(out.detail);
    out.pass = true;
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail = e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (out.pass && out.seconds > check.budget_seconds) {
    out.pass = false;
    std::ostringstream note;
    note << "over the " << check.budget_seconds << "s budget (" << out.seconds << "s)";
    out.detail = note.str();
  }
  return out;
}

std::vector<CheckResult> run_range(std::initializer_list<int> indices) {
  std::vector<CheckResult> out;
  for (int i : indices) out.push_back(run_one(kChecks[i]));
  return out;
}

}  // namespace

std::vector<std::string> verify_suites() {
  return {"a1-core", "form-axioms", "sl5-counterexample"};
}

std::vector<CheckResult> run_verify_suite(const std::string& name) {
  if (name == "form-axioms") return run_range({0, 1});
  if (name == "a1-core") return run_range({2, 3, 4, 5, 6, 7, 8});
  if (name == "sl5-counterexample") return run_range({9});
  throw input_error("unknown verification suite '" + name + "'");
}

std::vector<CheckResult> run_acceptance() {
  return run_range({0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
}

}  // namespace stnabla
