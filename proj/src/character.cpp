#include "stnabla/character.hpp"

#include <algorithm>

namespace stnabla {

Int Character::dim() const {
  Int acc = 0;
  for (const auto& [w, m] : map_) acc += m;
  return acc;
}

bool Character::operator==(const Character& o) const {
  if (map_.size() != o.map_.size()) return false;
  for (const auto& [w, m] : map_) {
    auto it = o.map_.find(w);
    if (it == o.map_.end() || it->second != m) return false;
  }
  return true;
}

Character Character::operator+(const Character& o) const {
  Character r = *this;
  for (const auto& [w, m] : o.map_) r.add(w, m);
  return r;
}

Character Character::operator-(const Character& o) const {
  Character r = *this;
  for (const auto& [w, m] : o.map_) r.add(w, -m);
  return r;
}

Character Character::scaled(const Int& k) const {
  Character r(rs_);
  if (k == 0) return r;
  for (const auto& [w, m] : map_) r.map_.emplace(w, m * k);
  return r;
}

Character Character::multiply(const Character& o) const {
  const Map& small = map_.size() <= o.map_.size() ? map_ : o.map_;
  const Map& large = map_.size() <= o.map_.size() ? o.map_ : map_;
  Character r(rs_);
  for (const auto& [w1, m1] : small)
    for (const auto& [w2, m2] : large) r.add(w1 + w2, m1 * m2);
  return r;
}

Character Character::frobenius_twist(int p, int r) const {
  if (r < 1) throw input_error("Frobenius twist needs r >= 1");
  std::int64_t q = 1;
  for (int i = 0; i < r; ++i) q *= p;
  if (q > INT32_MAX / 64) throw input_error("p^r too large");
  Character out(rs_);
  for (const auto& [w, m] : map_) out.map_.emplace(w * static_cast<std::int32_t>(q), m);
  return out;
}

Character Character::dual() const {
  Character out(rs_);
  for (const auto& [w, m] : map_) out.map_.emplace(-w, m);
  return out;
}

bool Character::weyl_invariant() const {
  for (const auto& [w, m] : map_)
    if (at(rs_->dominant_representative(w)) != m) return false;
  return true;
}

Int weyl_dimension(const RootSystem& rs, const Weight& la) {
  Int num = 1, den = 1;
  Weight shifted = la + rs.rho();
  for (const auto& beta : rs.positive_roots()) {
    num *= rs.pairing(shifted, beta);
    den *= rs.pairing(rs.rho(), beta);
  }
  if (num % den != 0) throw invariant_error("Weyl dimension is not integral");
  return num / den;
}

const DominantTable& ChiCache::dominant_table(const Weight& la) {
  if (!rs_.is_dominant(la)) throw input_error("Weyl character table needs a dominant weight");
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = tables_.find(la);
    if (it != tables_.end()) return it->second;
  }
  DominantTable t;
  t.top = la;
  auto weights = rs_.dominant_below(la);
  t.mult[la] = 1;
  const Weight shifted_top = la + rs_.rho();
  const std::int64_t top_norm = rs_.scaled_inner(shifted_top, shifted_top);
  const std::int64_t top_level = rs_.level(la);
  for (std::size_t i = 1; i < weights.size(); ++i) {
    const Weight& mu = weights[i];
    Weight shifted = mu + rs_.rho();
    std::int64_t denom = top_norm - rs_.scaled_inner(shifted, shifted);
    if (denom <= 0) throw invariant_error("Freudenthal denominator must be positive");
    Int rhs = 0;
    for (const auto& beta : rs_.positive_roots()) {
      std::int64_t beta_level = rs_.level(beta.fund);
      std::int64_t kmax = (top_level - rs_.level(mu)) / beta_level;
      for (std::int64_t k = 1; k <= kmax; ++k) {
        Weight nu = mu + beta.fund * static_cast<std::int32_t>(k);
        auto it = t.mult.find(rs_.dominant_representative(nu));
        if (it == t.mult.end()) continue;
        rhs += it->second * rs_.scaled_inner(nu, beta.fund);
      }
    }
    rhs *= 2;
    if (rhs % denom != 0) throw invariant_error("Freudenthal multiplicity is not integral");
    Int m = rhs / denom;
    if (m < 0) throw invariant_error("negative Freudenthal multiplicity");
    if (m != 0) t.mult[mu] = m;
  }
  t.dim = 0;
  for (const auto& [mu, m] : t.mult) t.dim += m * Int(static_cast<std::uint64_t>(rs_.weyl_orbit(mu).size()));
  if (t.dim != weyl_dimension(rs_, la))
    throw invariant_error("Freudenthal table dimension disagrees with the Weyl formula");
  std::lock_guard<std::mutex> lock(mutex_);
  return tables_.emplace(la, std::move(t)).first->second;
}

Character ChiCache::chi(const Weight& la) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = expanded_.find(la);
    if (it != expanded_.end()) return it->second;
  }
  const DominantTable& t = dominant_table(la);
  Character c(&rs_);
  for (const auto& [mu, m] : t.mult)
    for (const auto& w : rs_.weyl_orbit(mu)) c.add(w, m);
  if (t.dim <= 100000) {
    std::lock_guard<std::mutex> lock(mutex_);
    expanded_.emplace(la, c);
  }
  return c;
}

std::size_t ChiCache::orbit_size(const Weight& dominant) {
  return rs_.weyl_orbit(dominant).size();
}

NablaExpansion chi_virtual(const RootSystem& rs, const Weight& la) {
  NablaExpansion out;
  DotNormal dn = rs.dot_normalize(la);
  if (!dn.zero) out[dn.dom] = dn.sign;
  return out;
}

NablaExpansion nabla_expand(const RootSystem& rs, const Character& c) {
  NablaExpansion out;
  std::map<Weight, bool, WeightLess> candidates;
  for (const auto& [w, m] : c.support()) {
    DotNormal dn = rs.dot_normalize(w);
    if (!dn.zero) candidates.emplace(dn.dom, true);
  }
  for (const auto& [kappa, unused] : candidates) {
    Int coeff = 0;
    for (const auto& [pt, sign] : rs.dot_points(kappa)) coeff += Int(sign) * c.at(pt);
    if (coeff != 0) out[kappa] = coeff;
  }
  return out;
}

Character synthesize(ChiCache& cache, const NablaExpansion& e) {
  Character out(&cache.root_system());
  for (const auto& [kappa, coeff] : e) {
    Character piece = cache.chi(kappa);
    for (const auto& [w, m] : piece.support()) out.add(w, m * coeff);
  }
  return out;
}

Int dimension_of(const RootSystem& rs, const NablaExpansion& e) {
  Int acc = 0;
  for (const auto& [kappa, coeff] : e) acc += coeff * weyl_dimension(rs, kappa);
  return acc;
}

void nabla_add(NablaExpansion& acc, const Weight& w, const Int& m) {
  if (m == 0) return;
  auto [it, fresh] = acc.emplace(w, m);
  if (!fresh) {
    it->second += m;
    if (it->second == 0) acc.erase(it);
  }
}

void nabla_add(NablaExpansion& acc, const NablaExpansion& inc, const Int& scale) {
  if (scale == 0) return;
  for (const auto& [w, m] : inc) nabla_add(acc, w, m * scale);
}

NablaExpansion nabla_product(ChiCache& cache, const NablaExpansion& a, const NablaExpansion& b, int p, int r) {
  const RootSystem& rs = cache.root_system();
  if (r < 0) throw input_error("twist exponent must be nonnegative");
  std::int64_t q = 1;
  for (int i = 0; i < r; ++i) q *= p;
  if (q > INT32_MAX / 64) throw input_error("p^r too large");

  // The twisted factor loses its Weyl-character shape, so it is the one taken
  // apart weight by weight; the identity holds for any W-invariant function.
  // Without a twist either side works, so take apart the cheaper one.
  const NablaExpansion* intact = &a;
  const NablaExpansion* apart = &b;
  if (r == 0) {
    Int cost_a = 0, cost_b = 0;
    for (const auto& [k, c] : a) cost_a += weyl_dimension(rs, k);
    for (const auto& [k, c] : b) cost_b += weyl_dimension(rs, k);
    if (cost_a < cost_b) std::swap(intact, apart);
  }

  NablaExpansion out;
  for (const auto& [kp, bk] : *apart) {
    const DominantTable& table = cache.dominant_table(kp);
    for (const auto& [mu, m] : table.mult) {
      Int weight_scale = bk * m;
      for (const auto& xi : rs.weyl_orbit(mu)) {
        Weight shift = xi * static_cast<std::int32_t>(q);
        for (const auto& [kappa, ak] : *intact) {
          DotNormal dn = rs.dot_normalize(kappa + shift);
          if (dn.zero) continue;
          nabla_add(out, dn.dom, ak * weight_scale * dn.sign);
        }
      }
    }
  }
  return out;
}

}  // namespace stnabla
