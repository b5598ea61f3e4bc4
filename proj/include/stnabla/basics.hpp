// Shared scalar and weight types plus the error taxonomy used across the library.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace stnabla {

// Exact integers everywhere; convolution coefficients overflow 64 bits already
// for moderate Steinberg weights at rank 4.
using Int = boost::multiprecision::cpp_int;

// Malformed user input (CLI exit code 1).
struct input_error : std::runtime_error {
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// A requested value exists mathematically but the engine cannot certify it
// from closed forms, the determinacy rule, or user tables (CLI exit code 2).
struct undetermined_error : std::runtime_error {
  explicit undetermined_error(const std::string& what) : std::runtime_error(what) {}
};

// An internal consistency check failed; results cannot be trusted (CLI exit code 3).
struct invariant_error : std::logic_error {
  explicit invariant_error(const std::string& what) : std::logic_error(what) {}
};

inline constexpr int kMaxRank = 8;

// A weight in fundamental-weight coordinates: entry i is the pairing with the
// i-th simple coroot. Fixed capacity keeps weights cheap to copy and hash.
struct Weight {
  std::array<std::int32_t, kMaxRank> c{};
  std::uint8_t n = 0;

  Weight() = default;
  Weight(std::initializer_list<std::int32_t> xs) {
    if (xs.size() > kMaxRank) throw input_error("weight rank exceeds capacity");
    n = static_cast<std::uint8_t>(xs.size());
    std::size_t i = 0;
    for (auto x : xs) c[i++] = x;
  }
  static Weight zero(int rank) {
    Weight w;
    w.n = static_cast<std::uint8_t>(rank);
    return w;
  }

  int rank() const { return n; }
  std::int32_t operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
  std::int32_t& operator[](int i) { return c[static_cast<std::size_t>(i)]; }

  bool operator==(const Weight& o) const { return n == o.n && c == o.c; }
  bool operator!=(const Weight& o) const { return !(*this == o); }

  bool is_zero() const {
    for (int i = 0; i < n; ++i)
      if (c[static_cast<std::size_t>(i)] != 0) return false;
    return true;
  }

  Weight operator+(const Weight& o) const {
    Weight r = *this;
    for (int i = 0; i < n; ++i) r[i] += o[i];
    return r;
  }
  Weight operator-(const Weight& o) const {
    Weight r = *this;
    for (int i = 0; i < n; ++i) r[i] -= o[i];
    return r;
  }
  Weight operator-() const {
    Weight r = *this;
    for (int i = 0; i < n; ++i) r[i] = -r[i];
    return r;
  }
  Weight operator*(std::int32_t k) const {
    Weight r = *this;
    for (int i = 0; i < n; ++i) r[i] *= k;
    return r;
  }
};

// Lexicographic order; used wherever deterministic iteration matters.
struct WeightLess {
  bool operator()(const Weight& a, const Weight& b) const {
    if (a.n != b.n) return a.n < b.n;
    for (int i = 0; i < a.n; ++i)
      if (a.c[static_cast<std::size_t>(i)] != b.c[static_cast<std::size_t>(i)])
        return a.c[static_cast<std::size_t>(i)] < b.c[static_cast<std::size_t>(i)];
    return false;
  }
};

struct WeightHash {
  std::size_t operator()(const Weight& w) const {
    std::uint64_t h = 1469598103934665603ull;
    for (int i = 0; i < w.n; ++i) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(w.c[static_cast<std::size_t>(i)]));
      h *= 1099511628211ull;
    }
    h ^= w.n;
    h *= 1099511628211ull;
    return static_cast<std::size_t>(h);
  }
};

// "2,0,1" form used on the command line.
std::string to_string(const Weight& w);
Weight parse_weight(const std::string& text, int rank);

// "[2,0,1]" form used as JSON object keys.
std::string weight_key(const Weight& w);

}  // namespace stnabla
