#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "montest/errors.hpp"
#include "montest/zp.hpp"

namespace montest {

/// An element of the additive group Z_p^d, written multiplicatively.
struct GroupVector {
  u32 p = 2;
  std::vector<u32> coords;

  GroupVector() = default;
  GroupVector(u32 p_, std::vector<u32> c) : p(p_), coords(std::move(c)) {
    for (u32& x : coords) x %= p;
  }

  static GroupVector zero(u32 p, std::size_t d) { return GroupVector(p, std::vector<u32>(d, 0)); }

  static GroupVector unit(u32 p, std::size_t d, std::size_t i) {
    GroupVector v = zero(p, d);
    v.coords.at(i) = 1;
    return v;
  }

  std::size_t dim() const noexcept { return coords.size(); }

  bool is_zero() const noexcept {
    for (u32 x : coords)
      if (x != 0) return false;
    return true;
  }

  /// Mixed-radix index: coordinate i has weight p^i.
  u64 index() const noexcept {
    u64 idx = 0;
    for (std::size_t i = coords.size(); i-- > 0;) idx = idx * p + coords[i];
    return idx;
  }

  static GroupVector from_index(u32 p, std::size_t d, u64 idx) {
    GroupVector v = zero(p, d);
    for (std::size_t i = 0; i < d; ++i) {
      v.coords[i] = static_cast<u32>(idx % p);
      idx /= p;
    }
    return v;
  }

  std::string str() const {
    std::string out = "(";
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(coords[i]);
    }
    return out + ")";
  }

  friend bool operator==(const GroupVector&, const GroupVector&) = default;
  friend auto operator<=>(const GroupVector&, const GroupVector&) = default;
};

inline void check_compatible(const GroupVector& x, const GroupVector& y) {
  if (x.p != y.p || x.dim() != y.dim()) {
    throw UsageError("group vectors differ in modulus or dimension: " + x.str() + " mod " +
                     std::to_string(x.p) + " vs " + y.str() + " mod " + std::to_string(y.p));
  }
}

/// Group operation: componentwise addition mod p.
inline GroupVector group_vec_mul(const GroupVector& x, const GroupVector& y) {
  check_compatible(x, y);
  GroupVector z = x;
  for (std::size_t i = 0; i < z.coords.size(); ++i) {
    z.coords[i] += y.coords[i];
    if (z.coords[i] >= z.p) z.coords[i] -= z.p;
  }
  return z;
}

/// i-th power: every coordinate times i mod p. Powers 0 and p are the identity.
inline GroupVector group_vec_pow(const GroupVector& v, u64 i) {
  GroupVector z = v;
  u64 e = i % v.p;
  for (u32& c : z.coords) c = static_cast<u32>(c * e % v.p);
  return z;
}

/// Rank over Z_p by Gaussian elimination with first-nonzero pivots.
inline std::size_t rank_mod_p(const std::vector<GroupVector>& vectors) {
  if (vectors.empty()) return 0;
  const PrimeModulus mod(vectors.front().p);
  const std::size_t d = vectors.front().dim();
  std::vector<std::vector<u32>> rows;
  rows.reserve(vectors.size());
  for (const GroupVector& v : vectors) {
    check_compatible(vectors.front(), v);
    rows.push_back(v.coords);
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < d && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    const u32 inv = mod.inv(rows[rank][col]);
    for (u32& x : rows[rank]) x = mod.mul(x, inv);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      const u32 f = rows[r][col];
      for (std::size_t c = col; c < d; ++c) rows[r][c] = mod.sub(rows[r][c], mod.mul(f, rows[rank][c]));
    }
    ++rank;
  }
  return rank;
}

}  // namespace montest
