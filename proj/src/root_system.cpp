#include "stnabla/root_system.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <unordered_set>

namespace stnabla {

namespace {

std::int64_t floordiv(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t det_small(const std::int64_t* m, int n, int stride) {
  if (n == 1) return m[0];
  std::int64_t acc = 0;
  for (int j = 0; j < n; ++j) {
    std::int64_t minor[kMaxRank * kMaxRank];
    for (int r = 1; r < n; ++r) {
      int cc = 0;
      for (int c = 0; c < n; ++c) {
        if (c == j) continue;
        minor[(r - 1) * (n - 1) + cc] = m[r * stride + c];
        ++cc;
      }
    }
    std::int64_t term = m[j] * det_small(minor, n - 1, n - 1);
    acc += (j % 2 == 0) ? term : -term;
  }
  return acc;
}

}  // namespace

RootSystem::RootSystem(char type, int rank) : type_(type), rank_(rank) {
  if (rank < 1 || rank > 4) throw input_error("rank must be between 1 and 4");
  switch (type) {
    case 'A':
      break;
    case 'B':
    case 'C':
      if (rank < 2) throw input_error("types B and C need rank at least 2");
      break;
    case 'D':
      if (rank < 3) throw input_error("type D needs rank at least 3");
      break;
    case 'G':
      if (rank != 2) throw input_error("type G has rank 2");
      break;
    default:
      throw input_error(std::string("unknown type '") + type + "'; expected one of A B C D G");
  }
  build_cartan();
  build_roots();
  build_weyl();
  check_tables();
}

void RootSystem::build_cartan() {
  for (int i = 0; i < rank_; ++i) cartan_[idx(i, i)] = 2;
  // Simply laced chain; B, C, G adjust the last bond below.
  for (int i = 0; i + 1 < rank_; ++i) {
    cartan_[idx(i, i + 1)] = -1;
    cartan_[idx(i + 1, i)] = -1;
  }
  if (type_ == 'B') {
    cartan_[idx(rank_ - 2, rank_ - 1)] = -2;  // alpha_rank short
  } else if (type_ == 'C') {
    cartan_[idx(rank_ - 1, rank_ - 2)] = -2;  // alpha_rank long
  } else if (type_ == 'G') {
    cartan_[idx(1, 0)] = -3;  // alpha_1 short
  } else if (type_ == 'D') {
    // Fork: nodes rank-1 and rank both hang off node rank-2.
    cartan_[idx(rank_ - 2, rank_ - 1)] = 0;
    cartan_[idx(rank_ - 1, rank_ - 2)] = 0;
    cartan_[idx(rank_ - 3, rank_ - 1)] = -1;
    cartan_[idx(rank_ - 1, rank_ - 3)] = -1;
  }

  // Integer symmetrizer: propagate d_j a(i,j) = d_i a(j,i) along bonds from d_0 = 1,
  // then clear denominators. Ratios are 1, 2, or 3, so numerators stay tiny.
  std::array<std::int64_t, kMaxRank> num{}, den{};
  num[0] = 1;
  den[0] = 1;
  std::array<bool, kMaxRank> seen{};
  seen[0] = true;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int i = queue.front();
    queue.pop_front();
    for (int j = 0; j < rank_; ++j) {
      if (seen[static_cast<std::size_t>(j)] || cartan_[idx(i, j)] == 0) continue;
      num[static_cast<std::size_t>(j)] = num[static_cast<std::size_t>(i)] * cartan_[idx(j, i)];
      den[static_cast<std::size_t>(j)] = den[static_cast<std::size_t>(i)] * cartan_[idx(i, j)];
      seen[static_cast<std::size_t>(j)] = true;
      queue.push_back(j);
    }
  }
  std::int64_t lcm = 1;
  for (int i = 0; i < rank_; ++i) {
    std::int64_t d = std::abs(den[static_cast<std::size_t>(i)]);
    lcm = lcm / std::gcd(lcm, d) * d;
  }
  for (int i = 0; i < rank_; ++i)
    sym_[static_cast<std::size_t>(i)] = num[static_cast<std::size_t>(i)] * (lcm / den[static_cast<std::size_t>(i)]);
  std::int64_t g = 0;
  for (int i = 0; i < rank_; ++i) g = std::gcd(g, sym_[static_cast<std::size_t>(i)]);
  for (int i = 0; i < rank_; ++i) sym_[static_cast<std::size_t>(i)] /= g;
  for (int i = 0; i < rank_; ++i)
    for (int j = 0; j < rank_; ++j)
      if (cartan_[idx(i, j)] * sym_[static_cast<std::size_t>(j)] != cartan_[idx(j, i)] * sym_[static_cast<std::size_t>(i)])
        throw invariant_error("symmetrizer failed to symmetrize the Cartan matrix");

  // Determinant and adjugate of the transpose; used for root coordinates.
  std::int64_t at[kMaxRank * kMaxRank];
  for (int i = 0; i < rank_; ++i)
    for (int j = 0; j < rank_; ++j) at[i * rank_ + j] = cartan_[idx(j, i)];
  det_ = det_small(at, rank_, rank_);
  if (det_ <= 0) throw invariant_error("Cartan determinant must be positive");
  for (int i = 0; i < rank_; ++i) {
    for (int j = 0; j < rank_; ++j) {
      if (rank_ == 1) {
        adjT_[idx(i, j)] = 1;
        continue;
      }
      std::int64_t minor[kMaxRank * kMaxRank];
      int rr = 0;
      for (int r = 0; r < rank_; ++r) {
        if (r == j) continue;
        int cc = 0;
        for (int c = 0; c < rank_; ++c) {
          if (c == i) continue;
          minor[rr * (rank_ - 1) + cc] = at[r * rank_ + c];
          ++cc;
        }
        ++rr;
      }
      std::int64_t cof = det_small(minor, rank_ - 1, rank_ - 1);
      adjT_[idx(i, j)] = (((i + j) % 2) == 0) ? cof : -cof;
    }
  }
  for (int i = 0; i < rank_; ++i)
    for (int j = 0; j < rank_; ++j)
      if (adjT_[idx(i, j)] <= 0) throw invariant_error("inverse Cartan matrix must be entrywise positive");

  rho_ = Weight::zero(rank_);
  for (int i = 0; i < rank_; ++i) rho_[i] = 1;
}

void RootSystem::build_roots() {
  struct Raw {
    std::array<std::int32_t, kMaxRank> root{};
    std::array<std::int32_t, kMaxRank> coroot{};
  };
  auto key = [&](const std::array<std::int32_t, kMaxRank>& b) {
    Weight w = Weight::zero(rank_);
    for (int i = 0; i < rank_; ++i) w[i] = b[static_cast<std::size_t>(i)];
    return w;
  };
  std::map<Weight, Raw, WeightLess> pool;
  std::deque<Raw> frontier;
  for (int i = 0; i < rank_; ++i) {
    Raw r;
    r.root[static_cast<std::size_t>(i)] = 1;
    r.coroot[static_cast<std::size_t>(i)] = 1;
    pool[key(r.root)] = r;
    frontier.push_back(r);
  }
  while (!frontier.empty()) {
    Raw cur = frontier.front();
    frontier.pop_front();
    for (int i = 0; i < rank_; ++i) {
      Raw nxt = cur;
      std::int64_t pr = 0, pc = 0;
      for (int j = 0; j < rank_; ++j) {
        pr += static_cast<std::int64_t>(cur.root[static_cast<std::size_t>(j)]) * cartan_[idx(j, i)];
        pc += static_cast<std::int64_t>(cartan_[idx(i, j)]) * cur.coroot[static_cast<std::size_t>(j)];
      }
      nxt.root[static_cast<std::size_t>(i)] -= static_cast<std::int32_t>(pr);
      nxt.coroot[static_cast<std::size_t>(i)] -= static_cast<std::int32_t>(pc);
      bool positive = true;
      for (int j = 0; j < rank_; ++j)
        if (nxt.root[static_cast<std::size_t>(j)] < 0) positive = false;
      if (!positive) continue;
      auto [it, fresh] = pool.emplace(key(nxt.root), nxt);
      if (fresh) frontier.push_back(nxt);
    }
  }

  std::int64_t min_norm = 0;
  std::vector<std::int64_t> norms;
  for (const auto& [fund_b, raw] : pool) {
    std::int64_t norm = 0;
    for (int i = 0; i < rank_; ++i)
      for (int j = 0; j < rank_; ++j)
        norm += static_cast<std::int64_t>(raw.root[static_cast<std::size_t>(i)]) * raw.root[static_cast<std::size_t>(j)] *
                cartan_[idx(i, j)] * sym_[static_cast<std::size_t>(j)];
    norms.push_back(norm);
    if (min_norm == 0 || norm < min_norm) min_norm = norm;
  }
  std::size_t k = 0;
  for (const auto& [fund_b, raw] : pool) {
    PositiveRoot pr;
    pr.root = raw.root;
    pr.coroot = raw.coroot;
    pr.fund = Weight::zero(rank_);
    for (int i = 0; i < rank_; ++i) {
      std::int64_t v = 0;
      for (int j = 0; j < rank_; ++j)
        v += static_cast<std::int64_t>(raw.root[static_cast<std::size_t>(j)]) * cartan_[idx(j, i)];
      pr.fund[i] = static_cast<std::int32_t>(v);
    }
    pr.is_short = (norms[k++] == min_norm);
    positive_.push_back(pr);
  }

  std::size_t dominant_short = 0;
  bool found = false;
  for (std::size_t i = 0; i < positive_.size(); ++i) {
    if (!positive_[i].is_short) continue;
    if (!is_dominant(positive_[i].fund)) continue;
    if (found) throw invariant_error("more than one dominant short root");
    dominant_short = i;
    found = true;
  }
  if (!found) throw invariant_error("no dominant short root");
  alpha0_ = dominant_short;
}

void RootSystem::build_weyl() {
  auto compose = [&](const ActionMatrix& a, const ActionMatrix& b) {
    ActionMatrix c{};
    for (int i = 0; i < rank_; ++i)
      for (int k = 0; k < rank_; ++k) {
        std::int64_t acc = 0;
        for (int j = 0; j < rank_; ++j)
          acc += static_cast<std::int64_t>(a[idx(i, j)]) * b[idx(j, k)];
        c[idx(i, k)] = static_cast<std::int32_t>(acc);
      }
    return c;
  };

  std::array<ActionMatrix, kMaxRank> gen{};
  for (int j = 0; j < rank_; ++j) {
    ActionMatrix s{};
    for (int i = 0; i < rank_; ++i) s[idx(i, i)] = 1;
    for (int i = 0; i < rank_; ++i) s[idx(i, j)] -= cartan_[idx(j, i)];
    gen[static_cast<std::size_t>(j)] = s;
  }

  ActionMatrix id{};
  for (int i = 0; i < rank_; ++i) id[idx(i, i)] = 1;
  std::map<ActionMatrix, std::size_t> index;
  weyl_.push_back({id, 0});
  index[id] = 0;
  std::deque<std::size_t> frontier{0};
  while (!frontier.empty()) {
    std::size_t cur = frontier.front();
    frontier.pop_front();
    for (int j = 0; j < rank_; ++j) {
      ActionMatrix nm = compose(weyl_[cur].m, gen[static_cast<std::size_t>(j)]);
      auto [it, fresh] = index.emplace(nm, weyl_.size());
      if (fresh) {
        weyl_.push_back({nm, weyl_[cur].length + 1});
        frontier.push_back(it->second);
      }
    }
  }

  int max_len = 0;
  for (const auto& w : weyl_) max_len = std::max(max_len, w.length);
  std::size_t longest_count = 0;
  for (std::size_t i = 0; i < weyl_.size(); ++i) {
    if (weyl_[i].length == max_len) {
      w0_ = i;
      ++longest_count;
    }
  }
  if (longest_count != 1) throw invariant_error("longest Weyl element is not unique");
  if (static_cast<std::size_t>(max_len) != positive_.size())
    throw invariant_error("maximal length does not match the number of positive roots");

  for (const auto& w : weyl_) {
    std::int64_t m[kMaxRank * kMaxRank];
    for (int i = 0; i < rank_; ++i)
      for (int j = 0; j < rank_; ++j) m[i * rank_ + j] = w.m[idx(i, j)];
    if (det_small(m, rank_, rank_) != w.sign())
      throw invariant_error("Weyl element determinant disagrees with length parity");
  }
}

void RootSystem::check_tables() {
  std::uint64_t order = 1, roots = 0;
  int h = 0;
  std::uint64_t fact = 1;
  for (int i = 2; i <= rank_ + 1; ++i) fact *= static_cast<std::uint64_t>(i);
  switch (type_) {
    case 'A': {
      order = fact;
      roots = static_cast<std::uint64_t>(rank_) * (rank_ + 1) / 2;
      h = rank_ + 1;
      break;
    }
    case 'B':
    case 'C': {
      std::uint64_t f = 1;
      for (int i = 2; i <= rank_; ++i) f *= static_cast<std::uint64_t>(i);
      order = f << rank_;
      roots = static_cast<std::uint64_t>(rank_) * rank_;
      h = 2 * rank_;
      break;
    }
    case 'D': {
      std::uint64_t f = 1;
      for (int i = 2; i <= rank_; ++i) f *= static_cast<std::uint64_t>(i);
      order = f << (rank_ - 1);
      roots = static_cast<std::uint64_t>(rank_) * (rank_ - 1);
      h = 2 * rank_ - 2;
      break;
    }
    case 'G':
      order = 12;
      roots = 6;
      h = 6;
      break;
  }
  if (weyl_.size() != order) throw invariant_error("Weyl group order mismatch");
  if (positive_.size() != roots) throw invariant_error("positive root count mismatch");
  h_ = h;
  if (pair_highest_short_coroot(rho_) + 1 != h)
    throw invariant_error("Coxeter number does not match the highest short coroot height");
  for (int i = 0; i < rank_; ++i)
    if (positive_[alpha0_].coroot[static_cast<std::size_t>(i)] < 1)
      throw invariant_error("highest short coroot must involve every simple coroot");
}

Weight RootSystem::apply(const WeylElement& w, const Weight& v) const {
  Weight r = Weight::zero(rank_);
  for (int i = 0; i < rank_; ++i) {
    std::int64_t acc = 0;
    for (int k = 0; k < rank_; ++k) acc += static_cast<std::int64_t>(w.m[idx(i, k)]) * v[k];
    r[i] = static_cast<std::int32_t>(acc);
  }
  return r;
}

Weight RootSystem::simple_reflect(int i, const Weight& v) const {
  Weight r = v;
  for (int k = 0; k < rank_; ++k) r[k] -= cartan_[idx(i, k)] * v[i];
  return r;
}

std::int64_t RootSystem::pairing(const Weight& v, const PositiveRoot& beta) const {
  std::int64_t acc = 0;
  for (int i = 0; i < rank_; ++i) acc += static_cast<std::int64_t>(v[i]) * beta.coroot[static_cast<std::size_t>(i)];
  return acc;
}

std::int64_t RootSystem::pair_highest_short_coroot(const Weight& v) const {
  return pairing(v, positive_[alpha0_]);
}

bool RootSystem::is_dominant(const Weight& v) const {
  for (int i = 0; i < rank_; ++i)
    if (v[i] < 0) return false;
  return true;
}

Weight RootSystem::dominant_representative(const Weight& v) const {
  Weight w = v;
  for (;;) {
    int neg = -1;
    for (int i = 0; i < rank_; ++i)
      if (w[i] < 0) {
        neg = i;
        break;
      }
    if (neg < 0) return w;
    w = simple_reflect(neg, w);
  }
}

std::vector<Weight> RootSystem::weyl_orbit(const Weight& dominant) const {
  std::unordered_set<Weight, WeightHash> seen;
  std::vector<Weight> out;
  for (const auto& w : weyl_) {
    Weight img = apply(w, dominant);
    if (seen.insert(img).second) out.push_back(img);
  }
  return out;
}

DotNormal RootSystem::dot_normalize(const Weight& v) const {
  DotNormal result;
  Weight w = v + rho_;
  int sign = 1;
  for (;;) {
    int neg = -1;
    for (int i = 0; i < rank_; ++i)
      if (w[i] < 0) {
        neg = i;
        break;
      }
    if (neg < 0) break;
    w = simple_reflect(neg, w);
    sign = -sign;
  }
  for (int i = 0; i < rank_; ++i)
    if (w[i] == 0) {
      result.zero = true;
      return result;
    }
  result.sign = sign;
  result.dom = w - rho_;
  return result;
}

Weight RootSystem::dual_weight(const Weight& v) const {
  return -apply(weyl_[w0_], v);
}

bool RootSystem::dominance_leq(const Weight& la, const Weight& mu) const {
  auto u = scaled_root_coords(mu - la);
  for (int i = 0; i < rank_; ++i) {
    if (u[static_cast<std::size_t>(i)] < 0) return false;
    if (u[static_cast<std::size_t>(i)] % det_ != 0) return false;
  }
  return true;
}

bool RootSystem::dominance_leq_rational(const Weight& la, const Weight& mu) const {
  auto u = scaled_root_coords(mu - la);
  for (int i = 0; i < rank_; ++i)
    if (u[static_cast<std::size_t>(i)] < 0) return false;
  return true;
}

std::array<std::int64_t, kMaxRank> RootSystem::scaled_root_coords(const Weight& v) const {
  std::array<std::int64_t, kMaxRank> u{};
  for (int i = 0; i < rank_; ++i) {
    std::int64_t acc = 0;
    for (int j = 0; j < rank_; ++j) acc += adjT_[idx(i, j)] * v[j];
    u[static_cast<std::size_t>(i)] = acc;
  }
  return u;
}

std::int64_t RootSystem::level(const Weight& v) const {
  auto u = scaled_root_coords(v);
  std::int64_t acc = 0;
  for (int i = 0; i < rank_; ++i) acc += u[static_cast<std::size_t>(i)];
  return acc;
}

std::int64_t RootSystem::scaled_inner(const Weight& v, const Weight& u) const {
  auto ru = scaled_root_coords(u);
  std::int64_t acc = 0;
  for (int j = 0; j < rank_; ++j)
    acc += sym_[static_cast<std::size_t>(j)] * v[j] * ru[static_cast<std::size_t>(j)];
  return acc;
}

bool RootSystem::in_restricted(const Weight& la, std::int64_t q) const {
  for (int i = 0; i < rank_; ++i)
    if (la[i] < 0 || la[i] >= q) return false;
  return true;
}

std::pair<Weight, Weight> RootSystem::digit_decompose(const Weight& la, std::int64_t q) const {
  if (!is_dominant(la)) throw input_error("digit decomposition needs a dominant weight");
  if (q < 2) throw invariant_error("digit base must be at least 2");
  Weight lo = Weight::zero(rank_), hi = Weight::zero(rank_);
  for (int i = 0; i < rank_; ++i) {
    lo[i] = static_cast<std::int32_t>(la[i] % q);
    hi[i] = static_cast<std::int32_t>(la[i] / q);
  }
  return {lo, hi};
}

Weight RootSystem::digit_reflect(const Weight& la, int p, int r) const {
  std::int64_t q = 1;
  for (int i = 0; i < r; ++i) q *= p;
  if (q > INT32_MAX / 4) throw input_error("p^r too large");
  auto [lo, hi] = digit_decompose(la, q);
  return rho_ * static_cast<std::int32_t>(q - 1) - dual_weight(lo) + hi * static_cast<std::int32_t>(q);
}

Weight RootSystem::hat_weight(const Weight& la, int p, int r) const {
  std::int64_t q = 1;
  for (int i = 0; i < r; ++i) q *= p;
  if (q > INT32_MAX / 4) throw input_error("p^r too large");
  if (!in_restricted(la, q)) throw input_error("hat weight is defined on the restricted region");
  return rho_ * static_cast<std::int32_t>(2 * (q - 1)) - dual_weight(la);
}

bool RootSystem::in_tilting_region(const Weight& la, int p, int r) const {
  if (!is_dominant(la)) return false;
  std::int64_t q = 1;
  for (int i = 0; i < r; ++i) q *= p;
  std::int64_t bound = q * (p - h_ + 1);
  return pair_highest_short_coroot(la) < bound;
}

bool RootSystem::strongly_linked(const Weight& la, const Weight& mu, int p) const {
  if (p < 2) throw input_error("strong linkage needs p >= 2");
  {
    std::lock_guard<std::mutex> lock(linkage_mutex_);
    auto it = linkage_memo_.find({p, la, mu});
    if (it != linkage_memo_.end()) return it->second;
  }
  bool result = false;
  if (la == mu) {
    result = true;
  } else if (dominance_leq(la, mu)) {
    // Downward reflections keep every chain member inside [la, mu], so the
    // search below is exhaustive.
    std::unordered_set<Weight, WeightHash> seen{mu};
    std::deque<Weight> frontier{mu};
    while (!frontier.empty() && !result) {
      Weight xi = frontier.front();
      frontier.pop_front();
      for (const auto& beta : positive_) {
        std::int64_t c = pairing(xi + rho_, beta);
        for (std::int64_t n = p * floordiv(c - 1, p);; n -= p) {
          Weight eta = xi - beta.fund * static_cast<std::int32_t>(c - n);
          if (!dominance_leq(la, eta)) break;
          if (eta == la) {
            result = true;
            break;
          }
          if (seen.insert(eta).second) frontier.push_back(eta);
        }
        if (result) break;
      }
    }
  }
  std::lock_guard<std::mutex> lock(linkage_mutex_);
  linkage_memo_[{p, la, mu}] = result;
  return result;
}

std::vector<Weight> RootSystem::dominant_below(const Weight& la) const {
  std::vector<Weight> out;
  if (!is_dominant(la)) return out;
  auto top = scaled_root_coords(la);
  std::array<std::int64_t, kMaxRank> cap{};
  for (int i = 0; i < rank_; ++i) cap[static_cast<std::size_t>(i)] = floordiv(top[static_cast<std::size_t>(i)], det_);
  std::array<std::int64_t, kMaxRank> k{};
  for (;;) {
    Weight mu = la;
    for (int i = 0; i < rank_; ++i)
      for (int j = 0; j < rank_; ++j)
        mu[j] -= static_cast<std::int32_t>(k[static_cast<std::size_t>(i)]) * cartan_[idx(i, j)];
    if (is_dominant(mu)) out.push_back(mu);
    int pos = rank_ - 1;
    while (pos >= 0 && k[static_cast<std::size_t>(pos)] == cap[static_cast<std::size_t>(pos)]) {
      k[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++k[static_cast<std::size_t>(pos)];
  }
  std::sort(out.begin(), out.end(), [&](const Weight& a, const Weight& b) {
    std::int64_t lv_a = level(a), lv_b = level(b);
    if (lv_a != lv_b) return lv_a > lv_b;
    return WeightLess{}(a, b);
  });
  return out;
}

std::vector<Weight> RootSystem::dominant_scaled_below(std::int64_t scale, const Weight& bound) const {
  std::vector<Weight> out;
  std::int64_t cap = pair_highest_short_coroot(bound);
  if (cap < 0) return out;
  std::int64_t box = cap / scale;
  std::array<std::int64_t, kMaxRank> c{};
  for (;;) {
    std::int64_t height = 0;
    for (int i = 0; i < rank_; ++i)
      height += c[static_cast<std::size_t>(i)] * positive_[alpha0_].coroot[static_cast<std::size_t>(i)];
    if (height * scale <= cap) {
      Weight mu = Weight::zero(rank_);
      for (int i = 0; i < rank_; ++i) mu[i] = static_cast<std::int32_t>(c[static_cast<std::size_t>(i)]);
      Weight scaled = mu * static_cast<std::int32_t>(scale);
      if (dominance_leq_rational(scaled, bound)) out.push_back(mu);
    }
    int pos = rank_ - 1;
    while (pos >= 0 && c[static_cast<std::size_t>(pos)] == box) {
      c[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++c[static_cast<std::size_t>(pos)];
  }
  std::sort(out.begin(), out.end(), WeightLess{});
  return out;
}

std::vector<std::pair<Weight, int>> RootSystem::dot_points(const Weight& la) const {
  std::vector<std::pair<Weight, int>> out;
  out.reserve(weyl_.size());
  Weight shifted = la + rho_;
  for (const auto& w : weyl_) out.push_back({apply(w, shifted) - rho_, w.sign()});
  return out;
}

std::string RootSystem::name() const {
  return std::string(1, type_) + std::to_string(rank_);
}

}  // namespace stnabla
