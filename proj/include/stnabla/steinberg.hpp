// Decompositions attached to the r-th Steinberg weight: tilting and socle
// multiplicities of St_r (x) nabla(lambda), Hom dimensions over Frobenius
// kernels and finite Chevalley groups, pairings of hat tilting modules with
// simple characters, reciprocity, and the indecomposability criterion.
// Everything is exact character arithmetic on top of ModularTables.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stnabla/char_table.hpp"
#include "stnabla/form.hpp"

namespace stnabla {

// Notes attached to results whose derivation leaned on an unproven hypothesis.
inline constexpr const char* kHypBigP = "p >= 2h-2";
inline constexpr const char* kHypDonkinAssumed = "Donkin tilting conjecture assumed";
inline constexpr const char* kHypDigitTilting =
    "tilting digit factorization used below p = 2h-2";

// One family of multiplicities keyed by dominant weight. Entries hold the
// values that were pinned down; blocked lists weights whose value could not
// be certified together with the reason; residual is character mass a partial
// tilting decomposition could not attribute. complete is false whenever
// blocked or residual is nonempty.
struct MultiplicityMap {
  std::string kind;
  std::map<Weight, Int, WeightLess> entries;
  std::map<Weight, std::string, WeightLess> blocked;
  NablaExpansion residual;
  bool complete = true;
  std::vector<std::string> hypotheses;

  Int at(const Weight& w) const {
    auto it = entries.find(w);
    return it == entries.end() ? Int(0) : it->second;
  }
};

// Outcome of the digit-splitting formula for tilting multiplicities. The
// formula only applies under a certified tensor factorization of the
// costandard module; reason explains a refusal.
struct InductiveValue {
  bool applicable = false;
  std::string reason;
  std::string certificate;
  Int value;
  std::vector<std::string> hypotheses;
};

// Result of checking the lower-bound chain for one weight. checked is false
// when an input was undetermined or a precondition failed; detail carries the
// computed values or the reason for skipping.
struct BoundCheck {
  bool checked = false;
  bool holds = false;
  std::string detail;
};

// Pairing of a hat tilting character with a simple character, together with
// the theorem-predicted value when every hypothesis could be certified.
struct FormComparison {
  Int value;
  std::optional<Int> predicted;
  std::vector<std::string> certified;
  std::vector<std::string> unverified;
  std::vector<std::string> hypotheses;
};

// Both sides of the tilting-simple reciprocity at one weight triple.
struct ReciprocityResult {
  Int lhs;
  Int rhs;
  bool hypotheses_certified = false;
  bool donkin_assumed = false;
  std::string verdict;
  std::vector<std::string> notes;
};

// Exhaustive bracket test against the delta pattern up to a search bound.
// conclusive is false when some simple characters were unavailable.
struct DonkinReport {
  bool consistent = false;
  bool conclusive = false;
  std::int64_t checked = 0;
  std::vector<std::string> failures;
  std::map<Weight, std::string, WeightLess> blocked;
};

// The negative bracket value at the anomaly weight, plus the SL_5 cross
// checks when the context is type A rank 4 with p = 5, r = 1. Fields are
// reported as known or blocked; nothing is ever silently guessed.
struct CounterexampleReport {
  Weight anomaly_weight;
  bool value_known = false;
  Int value;
  std::string value_blocked;
  Int predicted{-1};
  std::vector<std::string> hypotheses;
  std::vector<std::string> unverified;
  bool sl5_checks = false;
  bool jantzen_identity = false;
  bool multiplicity_known = false;
  Int socle_multiplicity;
  bool lhs_known = false;
  Int identity_lhs;
  std::string lhs_blocked;
  bool rhs_known = false;
  Int identity_rhs;
  std::string rhs_blocked;
  std::map<Weight, std::string, WeightLess> blocked;
};

// All operations for one fixed Frobenius level r over a shared table store.
// Methods are thread safe because ModularTables is. Undetermined characters
// surface as undetermined_error unless the operation has a per-entry blocked
// channel; violated preconditions surface as input_error.
class SteinbergContext {
 public:
  SteinbergContext(ModularTables& tables, int r);

  const RootSystem& rs() const { return tables_.rs(); }
  ModularTables& tables() { return tables_; }
  int p() const { return tables_.p(); }
  int r() const { return r_; }
  std::int64_t q() const { return q_; }
  // (q-1)rho, the highest weight of the r-th Steinberg module.
  const Weight& steinberg_weight() const { return steinberg_; }
  bool big_p() const { return tables_.p() >= 2 * rs().coxeter_number() - 2; }

  // Multiplicities of the indecomposable tilting summands of
  // T((q-1)rho + mu) (x) nabla(lambda); lambda must lie in the tilting region.
  MultiplicityMap t_numbers(const Weight& la, const Weight& mu);

  // Multiplicities of the simple socle summands, obtained from t_numbers by
  // the digit reflection; needs p >= 2h-2 or the Donkin flag and
  // lambda + mu in the tilting region.
  MultiplicityMap s_numbers(const Weight& la, const Weight& mu);

  // One socle multiplicity straight from characters: coefficient of
  // chi(lambda*) in ch T((q-1)rho + mu) * ch L(nu*). The coefficient is only
  // read where the tensor has a good filtration (nu or its digit reflection
  // in the tilting region); elsewhere the multiplicity is zero.
  Int s_direct(const Weight& la, const Weight& mu, const Weight& nu);

  // Unconditional upper bound: same coefficient with chi(nu*) in place of the
  // simple character.
  Int s_upper_bound(const Weight& la, const Weight& mu, const Weight& nu);

  // The upper bound corrected by the lower composition factors of nabla(nu*),
  // recursing strictly downward in the dominance order. Factors whose
  // Steinberg tensor carries no good filtration certificate are read from
  // characters instead of recursively.
  Int s_recursive(const Weight& la, const Weight& mu, const Weight& nu);

  // Digit-splitting evaluation of t_lambda at nu, certified or refused.
  InductiveValue t_inductive(const Weight& la, int u, const Weight& nu);

  // Checks t_lambda(nu) >= digit product, and the full chain through the
  // double sum when p >= 2h-2.
  BoundCheck t_lower_bound_check(const Weight& la, int u, const Weight& nu);

  // dim Hom over the r-th Frobenius kernel from T((q-1)rho + lambda) to the
  // virtual module with chi-expansion m.
  Int hom_dim_gr(const Weight& la, const NablaExpansion& m);

  // Same Hom dimension over the finite Chevalley group of q points.
  Int hom_dim_gfq(const Weight& la, const NablaExpansion& m);

  // Multiplicities of the injective indecomposables in
  // St_r (x) nabla(lambda) over the Frobenius kernel, indexed by restricted
  // weights.
  MultiplicityMap d_numbers(const Weight& la);

  // Multiplicities of the projective indecomposables over the finite group.
  MultiplicityMap p_numbers(const Weight& la);

  // [[ T(hat(lambda) + q sigma), L(nu + q mu) ]] with the theorem-predicted
  // delta value when the hypotheses certify; lambda and nu restricted.
  FormComparison form_tilting_vs_simple(const Weight& la, const Weight& sigma,
                                        const Weight& nu, const Weight& mu);

  // [T(hat(lambda) + q sigma) : nabla(mu)] against [nabla(mu) : L(lambda + q sigma)].
  ReciprocityResult reciprocity_check(const Weight& la, const Weight& sigma, const Weight& mu);

  // Evaluates [[ T(hat(lambda)), L(nu) (x) Delta(mu)^(r) ]] for all restricted
  // nu and all mu below the componentwise bound against the delta pattern.
  DonkinReport donkin_criterion(const Weight& la, const Weight& bound);

  // The bracket value -1 at the anomaly weight q(p-h+1)alpha_0, with the
  // SL_5 specific cross checks; needs p >= h.
  CounterexampleReport counterexample_suite();

  // All weights with coordinates in [0, q-1].
  std::vector<Weight> restricted_box() const;

 private:
  void require_weight(const Weight& w, const char* what) const;
  bool nabla_is_simple(const Weight& la);
  std::int64_t power(int u) const;
  // nu = lo + qu * hi with lo - (qu-1)rho restricted for qu; empty when some
  // coordinate of nu is below qu-1.
  std::optional<std::pair<Weight, Weight>> split_above_steinberg(const Weight& nu,
                                                                 std::int64_t qu) const;
  void check_t_support(const Weight& la, const Weight& mu, const MultiplicityMap& out) const;
  Int entry_or(const MultiplicityMap& map, const Weight& w) const;
  // Coefficient of chi(lambda*) in ch T((q-1)rho + mu) * ch L(nu*), read with
  // no good filtration certificate.
  Int socle_read(const Weight& la, const Weight& mu, const Weight& nu);
  // True when St (x) L(psi) has a good filtration certificate: psi in the
  // tilting region, or upper digit in the r = 0 region given p >= 2h-2 or
  // the Donkin flag.
  bool socle_certified(const Weight& psi) const;
  Int inductive_double_sum(const Weight& la0, const Weight& la1, int u, const Weight& nu0,
                           const Weight& nu1, std::vector<std::string>* hyps);
  Int hom_dim(const Weight& la, const NablaExpansion& m, bool finite_group);

  ModularTables& tables_;
  int r_;
  std::int64_t q_;
  Weight steinberg_;
};

// w scaled by k with overflow checking.
Weight scaled_weight(const Weight& w, std::int64_t k);

}  // namespace stnabla
