// Simple and tilting characters at a prime p, in the basis of Weyl characters:
// closed forms where they exist, the Jantzen sum formula as the determinacy
// engine for restricted simples, digit factorizations between Frobenius
// layers, and user-supplied tables for everything else.

#pragma once

#include <optional>
#include <string>

#include "stnabla/character.hpp"

namespace stnabla {

enum class Provenance {
  kClosedForm,       // linkage-trivial weights, Steinberg weights, rank-one formulas
  kJsfDetermined,    // restricted simple pinned by the sum formula
  kDigitProduct,     // simple assembled from its base-p digits
  kDonkinRecursion,  // tilting assembled from its base-p digits
  kUserSupplied,     // loaded from a table file
};

std::string provenance_name(Provenance p);
Provenance provenance_from_name(const std::string& s);

struct TableEntry {
  NablaExpansion coeffs;
  Provenance provenance = Provenance::kUserSupplied;
  // Set when the entry relied on the tilting digit factorization outside the
  // range p >= 2h-2 where it is a theorem.
  bool donkin_hypothesis = false;
};

// One serializable character table: a (type, rank, p, kind) header plus
// entries keyed by highest weight.
struct CharTable {
  char type = 'A';
  int rank = 1;
  int p = 2;
  std::string kind;  // "simple" or "tilting"
  std::map<Weight, TableEntry, WeightLess> entries;

  static CharTable load(const std::string& path);
  void save(const std::string& path) const;
  std::string to_json() const;
  static CharTable from_json(const std::string& text);
  // Top coefficient one, dominant support below the top; tilting multiplicities
  // nonnegative. Throws input_error on violation.
  void validate(const RootSystem& rs) const;
};

// Sum of the characters of the higher layers of the Jantzen filtration of the
// Weyl module with highest weight la, as chi-basis coefficients. Empty exactly
// when the Weyl module is simple.
NablaExpansion jantzen_nabla(const RootSystem& rs, const Weight& la, int p);
Character jantzen_sum(ChiCache& cache, const Weight& la, int p);

// The support element maximal for (level, then lexicographic) order; peeling
// in this order always removes a weight nothing else can still contribute to.
std::optional<Weight> peel_max(const RootSystem& rs, const NablaExpansion& e);

// Shared store of simple and tilting characters for one (type, rank, p).
// All derivations are exact; anything not derivable reports undetermined
// rather than guessing. Thread safe.
class ModularTables {
 public:
  ModularTables(char type, int rank, int p, bool assume_donkin);

  const RootSystem& rs() const { return rs_; }
  ChiCache& chi() { return chi_; }
  int p() const { return p_; }
  bool assume_donkin() const { return assume_donkin_; }

  // chi-basis coefficients of ch L(la) / ch T(la). Throws undetermined_error
  // when no derivation applies and no table entry is loaded.
  TableEntry simple(const Weight& la);
  TableEntry tilting(const Weight& la);

  // chi-basis coefficients of ch L(la) on the cone {xi : xi >= floor} only.
  // Sum-formula multiplicities pin decomposition numbers one weight at a time
  // (the Jantzen layers decrease), so ambiguity strictly below the cone does
  // not spoil coefficients inside it. Entries are partial and never exported.
  NablaExpansion simple_cone(const Weight& la, const Weight& floor);

  // [nabla(mu) : L(target)]. Peels from the top; terms that cannot lie above
  // the target are discarded unexpanded, so an ambiguous simple blocks the
  // query only when the target is below it.
  Int decomposition_multiplicity(const Weight& mu, const Weight& target);

  // Full decomposition of a genuine (nonvirtual) character given in the chi
  // basis into simple multiplicities.
  std::map<Weight, Int, WeightLess> expand_into_simples(const NablaExpansion& c);

  struct TiltingDecomposition {
    std::map<Weight, Int, WeightLess> mult;
    NablaExpansion residual;  // nonempty only when complete is false
    bool complete = true;
  };
  // Greedy top-down split into indecomposable tilting characters; stops with
  // the residual when a needed tilting character is undetermined.
  TiltingDecomposition decompose_into_tiltings(const NablaExpansion& c);

  void load_table(const std::string& path);
  // Snapshot of one kind's store for serialization or caching.
  CharTable snapshot(const std::string& kind);
  void absorb(const CharTable& table);  // merge entries (table wins on conflict)

 private:
  struct PairLess {
    bool operator()(const std::pair<Weight, Weight>& a, const std::pair<Weight, Weight>& b) const {
      WeightLess less;
      if (less(a.first, b.first)) return true;
      if (less(b.first, a.first)) return false;
      return less(a.second, b.second);
    }
  };

  TableEntry derive_simple(const Weight& la);
  TableEntry derive_tilting(const Weight& la);
  NablaExpansion derive_simple_cone(const Weight& la, const Weight& floor);
  std::optional<TableEntry> lookup(const std::map<Weight, TableEntry, WeightLess>& store, const Weight& la);

  RootSystem rs_;
  ChiCache chi_;
  int p_;
  bool assume_donkin_;
  std::mutex mutex_;
  std::map<Weight, TableEntry, WeightLess> simple_;
  std::map<Weight, TableEntry, WeightLess> tilting_;
  std::map<Weight, std::string, WeightLess> simple_failed_;
  std::map<std::pair<Weight, Weight>, NablaExpansion, PairLess> cone_;
  std::map<std::pair<Weight, Weight>, std::string, PairLess> cone_failed_;
};

}  // namespace stnabla
