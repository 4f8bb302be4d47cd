#pragma once

#include <cstdint>
#include <string>

#include "montest/errors.hpp"

namespace montest {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

namespace detail {

inline u64 mulmod64(u64 a, u64 b, u64 m) {
  return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

inline u64 powmod64(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod64(result, base, m);
    base = mulmod64(base, base, m);
    exp >>= 1;
  }
  return result;
}

}  // namespace detail

/// Deterministic Miller-Rabin; exact for every 64-bit input.
inline bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % small == 0) return n == small;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = detail::powmod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = detail::mulmod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// A prime p with arithmetic on residues in [0, p).
///
/// p is limited to 31 bits so that sums of two residues and products fit in u64.
class PrimeModulus {
 public:
  explicit PrimeModulus(u64 p) : p_(static_cast<u32>(p)) {
    if (p >= (1ULL << 31) || !is_prime_u64(p)) {
      throw UsageError("modulus " + std::to_string(p) + " is not a prime below 2^31");
    }
  }

  u32 value() const noexcept { return p_; }

  u32 reduce(i64 x) const noexcept {
    i64 r = x % static_cast<i64>(p_);
    return static_cast<u32>(r < 0 ? r + p_ : r);
  }
  u32 reduce_u(u64 x) const noexcept { return static_cast<u32>(x % p_); }

  u32 add(u32 a, u32 b) const noexcept {
    u32 s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  u32 sub(u32 a, u32 b) const noexcept { return a >= b ? a - b : a + p_ - b; }
  u32 neg(u32 a) const noexcept { return a == 0 ? 0 : p_ - a; }
  u32 mul(u32 a, u32 b) const noexcept { return static_cast<u32>(static_cast<u64>(a) * b % p_); }

  u32 pow(u32 base, u64 exp) const noexcept { return static_cast<u32>(detail::powmod64(base, exp, p_)); }

  /// Inverse by Fermat; throws on zero.
  u32 inv(u32 a) const {
    if (a % p_ == 0) throw PreconditionError("zero has no inverse mod " + std::to_string(p_));
    return pow(a, p_ - 2);
  }

  friend bool operator==(const PrimeModulus& a, const PrimeModulus& b) noexcept { return a.p_ == b.p_; }

 private:
  u32 p_;
};

/// Smallest e >= 0 with p^e >= x.
inline u32 ceil_log(u64 p, u64 x) {
  u32 e = 0;
  u64 acc = 1;
  while (acc < x) {
    acc *= p;
    ++e;
  }
  return e;
}

/// p^e, throwing ResourceError past 2^62.
inline u64 checked_pow(u64 p, u32 e) {
  u64 acc = 1;
  for (u32 i = 0; i < e; ++i) {
    if (acc > (1ULL << 62) / p) throw ResourceError("p^e overflows: p=" + std::to_string(p) + " e=" + std::to_string(e));
    acc *= p;
  }
  return acc;
}

}  // namespace montest
