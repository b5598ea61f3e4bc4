// Virtual characters of a semisimple group: full weight-multiplicity tables,
// Weyl characters via Freudenthal multiplicities, expansion in the basis of
// Weyl characters, and products evaluated directly in that basis.

#pragma once

#include <map>
#include <unordered_map>
#include <vector>

#include "stnabla/root_system.hpp"

namespace stnabla {

// A W-invariant virtual character stored as its full support. Suitable for
// moderate dimensions; large products should stay in the chi basis instead.
class Character {
 public:
  using Map = std::unordered_map<Weight, Int, WeightHash>;

  explicit Character(const RootSystem* rs) : rs_(rs) {}

  const RootSystem& root_system() const { return *rs_; }
  const Map& support() const { return map_; }
  bool empty() const { return map_.empty(); }

  Int at(const Weight& w) const {
    auto it = map_.find(w);
    return it == map_.end() ? Int(0) : it->second;
  }
  void add(const Weight& w, const Int& m) {
    if (m == 0) return;
    auto [it, fresh] = map_.emplace(w, m);
    if (!fresh) {
      it->second += m;
      if (it->second == 0) map_.erase(it);
    }
  }

  // Sum of all multiplicities; the dimension of the virtual module.
  Int dim() const;

  bool operator==(const Character& o) const;
  bool operator!=(const Character& o) const { return !(*this == o); }

  Character operator+(const Character& o) const;
  Character operator-(const Character& o) const;
  Character scaled(const Int& k) const;
  Character multiply(const Character& o) const;
  // Support scaled by p^r; r >= 1 (the identity twist is not a twist).
  Character frobenius_twist(int p, int r) const;
  Character dual() const;

  bool weyl_invariant() const;

 private:
  const RootSystem* rs_;
  Map map_;
};

// Dominant weight multiplicities of one Weyl character, with its dimension.
struct DominantTable {
  Weight top;
  std::map<Weight, Int, WeightLess> mult;
  Int dim;
};

// Exact dimension by the Weyl dimension formula.
Int weyl_dimension(const RootSystem& rs, const Weight& la);

// Per-root-system store of Freudenthal tables and small expanded characters.
// Thread safe; all entries are immutable once inserted.
class ChiCache {
 public:
  explicit ChiCache(const RootSystem& rs) : rs_(rs) {}

  const RootSystem& root_system() const { return rs_; }
  const DominantTable& dominant_table(const Weight& la);
  // Full orbit expansion of the Weyl character chi(la).
  Character chi(const Weight& la);
  std::size_t orbit_size(const Weight& dominant);

 private:
  const RootSystem& rs_;
  std::mutex mutex_;
  std::map<Weight, DominantTable, WeightLess> tables_;
  std::map<Weight, Character, WeightLess> expanded_;
};

// Coefficient vector in the basis of Weyl characters, keyed by dominant weight.
using NablaExpansion = std::map<Weight, Int, WeightLess>;

// chi(la) for arbitrary la as a signed multiple of a dominant chi, via the
// shifted dot action: empty when la + rho lies on a wall.
NablaExpansion chi_virtual(const RootSystem& rs, const Weight& la);

// Expansion of a W-invariant virtual character in the chi basis; exact and
// total. The alternating-sum coefficient formula needs no recursion.
NablaExpansion nabla_expand(const RootSystem& rs, const Character& c);

// Sum of full Weyl characters with the given coefficients.
Character synthesize(ChiCache& cache, const NablaExpansion& e);

// Sum of coefficient * dimension; the dimension of the virtual module.
Int dimension_of(const RootSystem& rs, const NablaExpansion& e);

// chi-basis coefficients of a * twist(b) where twist scales support by p^r
// (r = 0 means a plain product). The twisted factor is enumerated weight by
// weight against intact Weyl characters from the other factor.
NablaExpansion nabla_product(ChiCache& cache, const NablaExpansion& a, const NablaExpansion& b, int p, int r);

// Convenience accumulation helpers.
void nabla_add(NablaExpansion& acc, const Weight& w, const Int& m);
void nabla_add(NablaExpansion& acc, const NablaExpansion& inc, const Int& scale);

}  // namespace stnabla
