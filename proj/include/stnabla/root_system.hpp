// Root systems of types A-D and G_2 at small rank: Cartan data, positive roots
// and coroots, the full Weyl group as explicit matrices, dominance and dot-action
// combinatorics, base-q digit maps, and strong linkage.

#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "stnabla/basics.hpp"

namespace stnabla {

// Row-major action matrix on fundamental coordinates.
using ActionMatrix = std::array<std::int32_t, kMaxRank * kMaxRank>;

struct WeylElement {
  ActionMatrix m{};
  int length = 0;
  int sign() const { return (length % 2 == 0) ? 1 : -1; }
};

struct PositiveRoot {
  Weight fund;                                   // the root in fundamental coordinates
  std::array<std::int32_t, kMaxRank> coroot{};   // its coroot in simple-coroot coordinates
  std::array<std::int32_t, kMaxRank> root{};     // the root in simple-root coordinates
  bool is_short = false;
};

// Result of normalizing the shifted dot action: either lambda + rho lies on a
// reflection wall (zero == true), or w(lambda + rho) - rho is dominant for a
// unique w whose sign is recorded.
struct DotNormal {
  bool zero = false;
  int sign = 1;
  Weight dom;
};

class RootSystem {
 public:
  RootSystem(char type, int rank);

  char type() const { return type_; }
  int rank() const { return rank_; }
  // cartan(i, j) = <alpha_i, alpha_j^vee>
  std::int32_t cartan(int i, int j) const { return cartan_[idx(i, j)]; }
  const std::vector<PositiveRoot>& positive_roots() const { return positive_; }
  const std::vector<WeylElement>& weyl() const { return weyl_; }
  const WeylElement& longest_element() const { return weyl_[w0_]; }
  int coxeter_number() const { return h_; }
  const Weight& rho() const { return rho_; }
  const PositiveRoot& highest_short_root() const { return positive_[alpha0_]; }
  std::int64_t cartan_det() const { return det_; }

  Weight apply(const WeylElement& w, const Weight& v) const;
  Weight simple_reflect(int i, const Weight& v) const;

  // <v, beta^vee> for a stored positive root.
  std::int64_t pairing(const Weight& v, const PositiveRoot& beta) const;
  std::int64_t pair_highest_short_coroot(const Weight& v) const;

  bool is_dominant(const Weight& v) const;
  Weight dominant_representative(const Weight& v) const;
  std::vector<Weight> weyl_orbit(const Weight& dominant) const;
  DotNormal dot_normalize(const Weight& v) const;
  // -w_0(v); an involution on dominant weights.
  Weight dual_weight(const Weight& v) const;

  // Integral dominance order: mu - la a nonnegative integer combination of
  // simple roots. The rational variant drops integrality (cone containment).
  bool dominance_leq(const Weight& la, const Weight& mu) const;
  bool dominance_leq_rational(const Weight& la, const Weight& mu) const;

  // det * (root coordinates of v); entries of the adjugate transpose applied to v.
  std::array<std::int64_t, kMaxRank> scaled_root_coords(const Weight& v) const;
  // Sum of scaled root coordinates; a strictly monotone height for dominance steps.
  std::int64_t level(const Weight& v) const;

  // det * (v, u) under the Weyl-invariant form normalized so short roots have
  // squared length 2 * (type-dependent integer); exactness is all that matters.
  std::int64_t scaled_inner(const Weight& v, const Weight& u) const;

  // Base-q digit maps on dominant weights.
  bool in_restricted(const Weight& la, std::int64_t q) const;
  std::pair<Weight, Weight> digit_decompose(const Weight& la, std::int64_t q) const;
  // On restricted digits: la0 |-> (q-1)rho - la0^*, extended q-linearly to the quotient.
  Weight digit_reflect(const Weight& la, int p, int r) const;
  // 2(q-1)rho - la^* for restricted la: the highest weight whose tilting module
  // restricts to the injective hull of L(la) over the r-th Frobenius kernel.
  Weight hat_weight(const Weight& la, int p, int r) const;
  // <la, alpha_0^vee> < p^r (p - h + 1); empty when p < h.
  bool in_tilting_region(const Weight& la, int p, int r) const;

  // Reflexive-transitive closure of la' = s_{beta, np} . la'' <= la'' descending
  // from mu; all chain members stay in the dominance interval [la, mu].
  bool strongly_linked(const Weight& la, const Weight& mu, int p) const;

  // All dominant mu <= la in the integral dominance order (la itself included).
  std::vector<Weight> dominant_below(const Weight& la) const;
  // All dominant mu with scale * mu <= bound in the rational dominance order.
  std::vector<Weight> dominant_scaled_below(std::int64_t scale, const Weight& bound) const;

  // The |W| points w(la + rho) - rho with signs; distinct when la is dominant.
  std::vector<std::pair<Weight, int>> dot_points(const Weight& la) const;

  std::string name() const;

 private:
  static std::size_t idx(int i, int j) { return static_cast<std::size_t>(i) * kMaxRank + static_cast<std::size_t>(j); }
  void build_cartan();
  void build_roots();
  void build_weyl();
  void check_tables();

  char type_;
  int rank_;
  std::array<std::int32_t, kMaxRank * kMaxRank> cartan_{};
  std::array<std::int64_t, kMaxRank> sym_{};  // integer symmetrizer d_i with a(i,j) d_j symmetric
  std::array<std::int64_t, kMaxRank * kMaxRank> adjT_{};  // adjugate of cartan transpose
  std::int64_t det_ = 1;
  std::vector<PositiveRoot> positive_;
  std::size_t alpha0_ = 0;
  std::vector<WeylElement> weyl_;
  std::size_t w0_ = 0;
  int h_ = 0;
  Weight rho_;

  struct LinkKeyLess {
    bool operator()(const std::tuple<int, Weight, Weight>& a, const std::tuple<int, Weight, Weight>& b) const {
      WeightLess less;
      if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
      if (less(std::get<1>(a), std::get<1>(b))) return true;
      if (less(std::get<1>(b), std::get<1>(a))) return false;
      return less(std::get<2>(a), std::get<2>(b));
    }
  };

  mutable std::mutex linkage_mutex_;
  mutable std::map<std::tuple<int, Weight, Weight>, bool, LinkKeyLess> linkage_memo_;
};

}  // namespace stnabla
