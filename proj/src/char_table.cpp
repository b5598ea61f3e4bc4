#include "stnabla/char_table.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace stnabla {

namespace {

using njson = nlohmann::ordered_json;

// Valuation of n at p; n > 0.
int valuation(std::int64_t n, int p) {
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

// The closure of the lowest alcove. Every pairing <la+rho, beta> then stays
// at most p, the sum formula is empty, and costandard = simple = tilting.
bool in_lowest_closure(const RootSystem& rs, const Weight& la, int p) {
  return rs.pair_highest_short_coroot(la + rs.rho()) <= p;
}

// All coordinates equal to p^s - 1 for one s >= 1.
bool is_steinberg_weight(const RootSystem& rs, const Weight& la, int p) {
  std::int64_t c = la[0];
  for (int i = 1; i < rs.rank(); ++i)
    if (la[i] != c) return false;
  if (c < p - 1) return false;
  std::int64_t q = c + 1;
  while (q % p == 0) q /= p;
  return q == 1;
}

}  // namespace

std::string provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kClosedForm: return "closed-form";
    case Provenance::kJsfDetermined: return "jsf-determined";
    case Provenance::kDigitProduct: return "digit-product";
    case Provenance::kDonkinRecursion: return "donkin-recursion";
    case Provenance::kUserSupplied: return "user-supplied";
  }
  throw invariant_error("unknown provenance");
}

Provenance provenance_from_name(const std::string& s) {
  if (s == "closed-form") return Provenance::kClosedForm;
  if (s == "jsf-determined") return Provenance::kJsfDetermined;
  if (s == "digit-product") return Provenance::kDigitProduct;
  if (s == "donkin-recursion") return Provenance::kDonkinRecursion;
  if (s == "user-supplied") return Provenance::kUserSupplied;
  throw input_error("unknown provenance '" + s + "'");
}

NablaExpansion jantzen_nabla(const RootSystem& rs, const Weight& la, int p) {
  if (!rs.is_dominant(la)) throw input_error("sum formula needs a dominant weight");
  if (p < 2) throw input_error("p must be at least 2");
  NablaExpansion out;
  for (const auto& beta : rs.positive_roots()) {
    std::int64_t c = rs.pairing(la + rs.rho(), beta);
    for (std::int64_t n = p; n < c; n += p) {
      Weight reflected = la - beta.fund * static_cast<std::int32_t>(c - n);
      DotNormal dn = rs.dot_normalize(reflected);
      if (!dn.zero) nabla_add(out, dn.dom, Int(valuation(n, p) * dn.sign));
    }
  }
  return out;
}

Character jantzen_sum(ChiCache& cache, const Weight& la, int p) {
  return synthesize(cache, jantzen_nabla(cache.root_system(), la, p));
}

std::optional<Weight> peel_max(const RootSystem& rs, const NablaExpansion& e) {
  std::optional<Weight> best;
  std::int64_t best_level = 0;
  for (const auto& [w, m] : e) {
    std::int64_t lv = rs.level(w);
    if (!best || lv > best_level || (lv == best_level && WeightLess{}(*best, w))) {
      best = w;
      best_level = lv;
    }
  }
  return best;
}

CharTable CharTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open table file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

CharTable CharTable::from_json(const std::string& text) {
  njson j;
  try {
    j = njson::parse(text);
  } catch (const std::exception& e) {
    throw input_error(std::string("table is not valid JSON: ") + e.what());
  }
  CharTable t;
  try {
    std::string type = j.at("type").get<std::string>();
    if (type.size() != 1) throw input_error("table type must be a single letter");
    t.type = type[0];
    t.rank = j.at("rank").get<int>();
    t.p = j.at("p").get<int>();
    t.kind = j.at("kind").get<std::string>();
    if (t.kind != "simple" && t.kind != "tilting")
      throw input_error("table kind must be 'simple' or 'tilting'");
    for (const auto& entry : j.at("entries")) {
      Weight w = Weight::zero(t.rank);
      const auto& coords = entry.at("weight");
      if (static_cast<int>(coords.size()) != t.rank) throw input_error("table weight has wrong rank");
      for (int i = 0; i < t.rank; ++i) w[i] = coords[static_cast<std::size_t>(i)].get<std::int32_t>();
      TableEntry te;
      te.provenance = provenance_from_name(entry.at("provenance").get<std::string>());
      if (entry.contains("donkin_hypothesis")) te.donkin_hypothesis = entry.at("donkin_hypothesis").get<bool>();
      for (const auto& [key, val] : entry.at("nabla_coeffs").items()) {
        if (key.size() < 2 || key.front() != '[' || key.back() != ']')
          throw input_error("coefficient key '" + key + "' is not a bracketed weight");
        Weight k = parse_weight(key.substr(1, key.size() - 2), t.rank);
        te.coeffs[k] = Int(val.get<std::string>());
      }
      t.entries[w] = std::move(te);
    }
  } catch (const input_error&) {
    throw;
  } catch (const std::exception& e) {
    throw input_error(std::string("malformed table: ") + e.what());
  }
  return t;
}

std::string CharTable::to_json() const {
  njson j;
  j["type"] = std::string(1, type);
  j["rank"] = rank;
  j["p"] = p;
  j["kind"] = kind;
  j["entries"] = njson::array();
  for (const auto& [w, te] : entries) {
    njson e;
    e["weight"] = njson::array();
    for (int i = 0; i < w.rank(); ++i) e["weight"].push_back(w[i]);
    e["provenance"] = provenance_name(te.provenance);
    e["donkin_hypothesis"] = te.donkin_hypothesis;
    njson coeffs = njson::object();
    for (const auto& [k, m] : te.coeffs) coeffs[weight_key(k)] = m.str();
    e["nabla_coeffs"] = std::move(coeffs);
    j["entries"].push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

void CharTable::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write table file '" + path + "'");
  out << to_json();
}

void CharTable::validate(const RootSystem& rs) const {
  if (rs.type() != type || rs.rank() != rank)
    throw input_error("table is for " + std::string(1, type) + std::to_string(rank) + ", not " + rs.name());
  for (const auto& [w, te] : entries) {
    if (!rs.is_dominant(w)) throw input_error("table weight " + to_string(w) + " is not dominant");
    auto top = te.coeffs.find(w);
    if (top == te.coeffs.end() || top->second != 1)
      throw input_error("table entry " + to_string(w) + " must have top coefficient 1");
    for (const auto& [k, m] : te.coeffs) {
      if (!rs.is_dominant(k))
        throw input_error("table entry " + to_string(w) + " has non-dominant support at " + to_string(k));
      if (!rs.dominance_leq(k, w))
        throw input_error("table entry " + to_string(w) + " has support above its top at " + to_string(k));
      if (kind == "tilting" && m < 0)
        throw input_error("tilting entry " + to_string(w) + " has a negative multiplicity");
    }
  }
}

ModularTables::ModularTables(char type, int rank, int p, bool assume_donkin)
    : rs_(type, rank), chi_(rs_), p_(p), assume_donkin_(assume_donkin) {
  if (p < 2) throw input_error("p must be at least 2");
  // Primality keeps valuations and digit splits meaningful.
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) throw input_error("p must be prime");
}

std::optional<TableEntry> ModularTables::lookup(const std::map<Weight, TableEntry, WeightLess>& store, const Weight& la) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = store.find(la);
  if (it == store.end()) return std::nullopt;
  return it->second;
}

TableEntry ModularTables::simple(const Weight& la) {
  if (!rs_.is_dominant(la)) throw input_error("simple characters are indexed by dominant weights");
  if (auto hit = lookup(simple_, la)) return *hit;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = simple_failed_.find(la);
    if (it != simple_failed_.end()) throw undetermined_error(it->second);
  }
  TableEntry out;
  try {
    out = derive_simple(la);
  } catch (const undetermined_error& e) {
    std::lock_guard<std::mutex> lock(mutex_);
    simple_failed_.emplace(la, e.what());
    throw;
  }
  std::lock_guard<std::mutex> lock(mutex_);
  return simple_.emplace(la, std::move(out)).first->second;
}

TableEntry ModularTables::derive_simple(const Weight& la) {
  if (la.is_zero() || in_lowest_closure(rs_, la, p_) || is_steinberg_weight(rs_, la, p_)) {
    TableEntry te;
    te.coeffs[la] = 1;
    te.provenance = Provenance::kClosedForm;
    return te;
  }
  if (!rs_.in_restricted(la, p_)) {
    auto [lo, hi] = rs_.digit_decompose(la, p_);
    TableEntry a = simple(lo);
    TableEntry b = simple(hi);
    TableEntry te;
    te.coeffs = nabla_product(chi_, a.coeffs, b.coeffs, p_, 1);
    te.provenance = Provenance::kDigitProduct;
    te.donkin_hypothesis = a.donkin_hypothesis || b.donkin_hypothesis;
    return te;
  }
  // Restricted and not covered by a closed form: the sum formula determines
  // the character exactly when its simple multiplicities are all 0 or 1.
  NablaExpansion jsf = jantzen_nabla(rs_, la, p_);
  std::map<Weight, Int, WeightLess> sim;
  try {
    sim = expand_into_simples(jsf);
  } catch (const undetermined_error& e) {
    throw undetermined_error("simple character at " + to_string(la) + ": " + e.what());
  }
  TableEntry te;
  te.coeffs[la] = 1;
  for (const auto& [psi, m] : sim) {
    if (m > 1)
      throw undetermined_error("simple character at " + to_string(la) +
                               " is not pinned by the sum formula: multiplicity " + m.str() + " at " +
                               to_string(psi));
    TableEntry piece = simple(psi);
    nabla_add(te.coeffs, piece.coeffs, -m);
    te.donkin_hypothesis = te.donkin_hypothesis || piece.donkin_hypothesis;
  }
  te.provenance = Provenance::kJsfDetermined;
  return te;
}

TableEntry ModularTables::tilting(const Weight& la) {
  if (!rs_.is_dominant(la)) throw input_error("tilting characters are indexed by dominant weights");
  if (auto hit = lookup(tilting_, la)) return *hit;
  TableEntry out = derive_tilting(la);
  std::lock_guard<std::mutex> lock(mutex_);
  return tilting_.emplace(la, std::move(out)).first->second;
}

TableEntry ModularTables::derive_tilting(const Weight& la) {
  if (la.is_zero() || in_lowest_closure(rs_, la, p_) || is_steinberg_weight(rs_, la, p_)) {
    TableEntry te;
    te.coeffs[la] = 1;
    te.provenance = Provenance::kClosedForm;
    return te;
  }
  if (rs_.rank() == 1) {
    std::int64_t m = la[0];
    if (m <= 2 * p_ - 2) {
      // One wall reflection inside the first two alcoves.
      TableEntry te;
      te.coeffs[la] = 1;
      te.coeffs[Weight{static_cast<std::int32_t>(2 * p_ - 2 - m)}] = 1;
      te.provenance = Provenance::kClosedForm;
      return te;
    }
  }
  bool deep = true;
  for (int i = 0; i < rs_.rank(); ++i)
    if (la[i] < p_ - 1) deep = false;
  if (deep && (p_ >= 2 * rs_.coxeter_number() - 2 || assume_donkin_)) {
    Weight mu0 = Weight::zero(rs_.rank());
    for (int i = 0; i < rs_.rank(); ++i)
      mu0[i] = static_cast<std::int32_t>(p_ - 1 + ((la[i] - (p_ - 1)) % p_));
    Weight la1 = Weight::zero(rs_.rank());
    for (int i = 0; i < rs_.rank(); ++i) la1[i] = static_cast<std::int32_t>((la[i] - mu0[i]) / p_);
    if (!la1.is_zero()) {
      TableEntry a = tilting(mu0);
      TableEntry b = tilting(la1);
      TableEntry te;
      te.coeffs = nabla_product(chi_, a.coeffs, b.coeffs, p_, 1);
      te.provenance = Provenance::kDonkinRecursion;
      te.donkin_hypothesis =
          (p_ < 2 * rs_.coxeter_number() - 2) || a.donkin_hypothesis || b.donkin_hypothesis;
      return te;
    }
  }
  throw undetermined_error("tilting character at " + to_string(la) +
                           " is outside every derivable family; supply a table entry");
}

NablaExpansion ModularTables::simple_cone(const Weight& la, const Weight& floor) {
  if (!rs_.is_dominant(la) || !rs_.is_dominant(floor))
    throw input_error("cone-restricted simples are indexed by dominant weights");
  // The chi support of ch L(la) sits below la, so an unreachable floor means
  // an empty restriction.
  if (!rs_.dominance_leq(floor, la)) return {};
  std::pair<Weight, Weight> key{la, floor};
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cone_.find(key);
    if (it != cone_.end()) return it->second;
    auto bad = cone_failed_.find(key);
    if (bad != cone_failed_.end()) throw undetermined_error(bad->second);
  }
  NablaExpansion out;
  try {
    out = derive_simple_cone(la, floor);
  } catch (const undetermined_error& e) {
    std::lock_guard<std::mutex> lock(mutex_);
    cone_failed_.emplace(key, e.what());
    throw;
  }
  std::lock_guard<std::mutex> lock(mutex_);
  return cone_.emplace(key, std::move(out)).first->second;
}

NablaExpansion ModularTables::derive_simple_cone(const Weight& la, const Weight& floor) {
  // A fully determined character answers every cone.
  try {
    TableEntry full = simple(la);
    NablaExpansion out;
    for (const auto& [k, m] : full.coeffs)
      if (rs_.dominance_leq(floor, k)) out[k] = m;
    return out;
  } catch (const undetermined_error&) {
  }
  if (!rs_.in_restricted(la, p_)) {
    // Digit products mix weights across the whole support, so the factors are
    // needed in full; the full derivation above already failed here.
    throw undetermined_error("simple character at " + to_string(la) +
                             " has an undetermined digit factor; no cone restriction can help");
  }
  NablaExpansion work = jantzen_nabla(rs_, la, p_);
  std::vector<std::pair<Weight, NablaExpansion>> layer;
  while (auto xi = peel_max(rs_, work)) {
    if (!rs_.dominance_leq(floor, *xi)) {
      work.erase(*xi);
      continue;
    }
    Int m = work.at(*xi);
    if (m < 0)
      throw invariant_error("sum formula of " + to_string(la) + " has negative cone multiplicity at " +
                            to_string(*xi));
    if (m > 1)
      throw undetermined_error("simple character at " + to_string(la) +
                               " is not pinned by the sum formula inside the cone: multiplicity " + m.str() +
                               " at " + to_string(*xi));
    NablaExpansion piece = simple_cone(*xi, floor);
    nabla_add(work, piece, -1);
    layer.emplace_back(*xi, std::move(piece));
  }
  NablaExpansion out;
  out[la] = 1;
  for (const auto& [xi, piece] : layer) nabla_add(out, piece, -1);
  return out;
}

Int ModularTables::decomposition_multiplicity(const Weight& mu, const Weight& target) {
  if (!rs_.is_dominant(mu) || !rs_.is_dominant(target))
    throw input_error("decomposition multiplicities are indexed by dominant weights");
  NablaExpansion work;
  work[mu] = 1;
  while (auto xi = peel_max(rs_, work)) {
    if (!rs_.dominance_leq(target, *xi)) {
      // Nothing below xi can reach back up to the target, so the whole branch
      // rooted here is irrelevant and need not be expanded.
      work.erase(*xi);
      continue;
    }
    Int m = work.at(*xi);
    if (m < 0)
      throw invariant_error("negative multiplicity of " + to_string(*xi) + " while expanding " + to_string(mu));
    if (*xi == target) return m;
    NablaExpansion piece;
    try {
      piece = simple_cone(*xi, target);
    } catch (const undetermined_error& e) {
      throw undetermined_error("multiplicity [" + to_string(mu) + " : " + to_string(target) +
                               "] is blocked at " + to_string(*xi) + ": " + e.what());
    }
    nabla_add(work, piece, -m);
  }
  return 0;
}

std::map<Weight, Int, WeightLess> ModularTables::expand_into_simples(const NablaExpansion& c) {
  NablaExpansion work = c;
  std::map<Weight, Int, WeightLess> out;
  while (auto xi = peel_max(rs_, work)) {
    Int m = work.at(*xi);
    if (m < 0)
      throw invariant_error("character is not a nonnegative combination of simples: " + m.str() + " at " +
                            to_string(*xi));
    TableEntry piece = simple(*xi);
    out[*xi] = m;
    nabla_add(work, piece.coeffs, -m);
  }
  return out;
}

ModularTables::TiltingDecomposition ModularTables::decompose_into_tiltings(const NablaExpansion& c) {
  TiltingDecomposition result;
  NablaExpansion work = c;
  while (auto xi = peel_max(rs_, work)) {
    Int m = work.at(*xi);
    if (m < 0)
      throw invariant_error("character is not a nonnegative combination of tilting characters: " + m.str() +
                            " at " + to_string(*xi));
    TableEntry piece;
    try {
      piece = tilting(*xi);
    } catch (const undetermined_error&) {
      result.residual = work;
      result.complete = false;
      return result;
    }
    result.mult[*xi] = m;
    nabla_add(work, piece.coeffs, -m);
  }
  return result;
}

void ModularTables::load_table(const std::string& path) {
  CharTable t = CharTable::load(path);
  if (t.type != rs_.type() || t.rank != rs_.rank() || t.p != p_)
    throw input_error("table file '" + path + "' is for " + std::string(1, t.type) + std::to_string(t.rank) +
                      " at p=" + std::to_string(t.p) + ", not " + rs_.name() + " at p=" + std::to_string(p_));
  t.validate(rs_);
  absorb(t);
}

CharTable ModularTables::snapshot(const std::string& kind) {
  if (kind != "simple" && kind != "tilting") throw input_error("kind must be 'simple' or 'tilting'");
  CharTable t;
  t.type = rs_.type();
  t.rank = rs_.rank();
  t.p = p_;
  t.kind = kind;
  std::lock_guard<std::mutex> lock(mutex_);
  t.entries = (kind == "simple") ? simple_ : tilting_;
  return t;
}

void ModularTables::absorb(const CharTable& table) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto& store = (table.kind == "simple") ? simple_ : tilting_;
  for (const auto& [w, te] : table.entries) store[w] = te;
}

}  // namespace stnabla
