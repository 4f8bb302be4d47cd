#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "montest/errors.hpp"
#include "montest/rng.hpp"
#include "montest/zp.hpp"

namespace montest {

/// Dense polynomials over Z_p, coefficient i is the y^i coefficient. Helpers keep them trimmed.
namespace zpoly {

using Poly = std::vector<u32>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly sub(const PrimeModulus& m, Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = m.sub(a[i], b[i]);
  trim(a);
  return a;
}

inline Poly mul(const PrimeModulus& m, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = m.add(out[i + j], m.mul(a[i], b[j]));
  }
  trim(out);
  return out;
}

/// a mod b; b must be nonzero.
inline Poly rem(const PrimeModulus& m, Poly a, const Poly& b) {
  trim(a);
  const u32 lead_inv = m.inv(b.back());
  while (a.size() >= b.size()) {
    const u32 f = m.mul(a.back(), lead_inv);
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = m.sub(a[shift + i], m.mul(f, b[i]));
    trim(a);
  }
  return a;
}

inline Poly gcd(const PrimeModulus& m, Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(m, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

/// a^(p^times) mod r by repeated Frobenius.
inline Poly frobenius_pow(const PrimeModulus& m, Poly a, const Poly& r, u32 times) {
  for (u32 t = 0; t < times; ++t) {
    Poly acc{1};
    Poly base = a;
    for (u64 e = m.value(); e > 0; e >>= 1) {
      if (e & 1) acc = rem(m, mul(m, acc, base), r);
      base = rem(m, mul(m, base, base), r);
    }
    a = std::move(acc);
  }
  return a;
}

/// Rabin's test for a monic r of degree n >= 1.
inline bool is_irreducible(const PrimeModulus& m, const Poly& r) {
  const u32 n = static_cast<u32>(r.size() - 1);
  if (n == 1) return true;
  const Poly y{0, 1};
  if (!sub(m, frobenius_pow(m, y, r, n), y).empty()) return false;
  u32 rest = n;
  for (u32 q = 2; q <= rest; ++q) {
    if (rest % q != 0) continue;
    while (rest % q == 0) rest /= q;
    Poly g = gcd(m, sub(m, frobenius_pow(m, y, r, n / q), y), r);
    if (g.size() != 1) return false;
  }
  return true;
}

}  // namespace zpoly

/// The coefficient ring Z_p[y]/(r(y)) for a monic r of degree ell.
///
/// Elements are length-ell residue vectors. With r irreducible this is GF(p^ell);
/// the identity tester also uses it with a random, possibly reducible r.
class CoeffRing {
 public:
  using Elem = std::vector<u32>;

  CoeffRing(PrimeModulus p, std::vector<u32> monic) : mod_(p), r_(std::move(monic)) {
    if (r_.size() < 2 || r_.back() != 1) throw UsageError("coefficient ring modulus must be monic of degree >= 1");
    for (u32& c : r_) c %= p.value();
  }

  const PrimeModulus& prime() const noexcept { return mod_; }
  u32 p() const noexcept { return mod_.value(); }
  std::size_t ell() const noexcept { return r_.size() - 1; }
  const std::vector<u32>& modulus() const noexcept { return r_; }

  /// p^ell, saturating at 2^63.
  u64 size() const noexcept {
    u64 acc = 1;
    for (std::size_t i = 0; i < ell(); ++i) {
      if (acc > (1ULL << 63) / p()) return 1ULL << 63;
      acc *= p();
    }
    return acc;
  }

  Elem zero() const { return Elem(ell(), 0); }
  Elem one() const { return scalar(1); }
  Elem scalar(u32 c) const {
    Elem e(ell(), 0);
    e[0] = c % p();
    return e;
  }
  /// The class of y itself (equals -r_0 when ell = 1).
  Elem generator() const {
    Elem e(ell(), 0);
    if (ell() == 1) {
      e[0] = mod_.neg(r_[0]);
    } else {
      e[1] = 1;
    }
    return e;
  }

  static bool is_zero(const Elem& a) noexcept {
    return std::all_of(a.begin(), a.end(), [](u32 c) { return c == 0; });
  }

  Elem add(const Elem& a, const Elem& b) const {
    Elem out(ell());
    for (std::size_t i = 0; i < ell(); ++i) out[i] = mod_.add(a[i], b[i]);
    return out;
  }
  Elem sub(const Elem& a, const Elem& b) const {
    Elem out(ell());
    for (std::size_t i = 0; i < ell(); ++i) out[i] = mod_.sub(a[i], b[i]);
    return out;
  }
  Elem neg(const Elem& a) const {
    Elem out(ell());
    for (std::size_t i = 0; i < ell(); ++i) out[i] = mod_.neg(a[i]);
    return out;
  }
  Elem scale(u32 c, const Elem& a) const {
    Elem out(ell());
    for (std::size_t i = 0; i < ell(); ++i) out[i] = mod_.mul(c % p(), a[i]);
    return out;
  }

  Elem mul(const Elem& a, const Elem& b) const {
    std::vector<u64> prod(2 * ell() - 1, 0);
    for (std::size_t i = 0; i < ell(); ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < ell(); ++j) prod[i + j] += static_cast<u64>(a[i]) * b[j] % p();
    }
    Elem out(ell());
    reduce(prod, out.data());
    return out;
  }

  /// Reduce an unreduced product (2*ell-1 coefficients, any u64 values) into out.
  void reduce(std::vector<u64>& prod, u32* out) const {
    const std::size_t n = ell();
    for (u64& c : prod) c %= p();
    for (std::size_t t = prod.size(); t-- > n;) {
      const u64 f = prod[t];
      if (f == 0) continue;
      // y^t = y^(t-n) * y^n and y^n = -(r_0 + ... + r_{n-1} y^{n-1}).
      for (std::size_t i = 0; i < n; ++i) {
        prod[t - n + i] = (prod[t - n + i] + (p() - r_[i]) % p() * f) % p();
      }
      prod[t] = 0;
    }
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<u32>(prod[i] % p());
  }

  Elem pow(Elem base, u64 e) const {
    Elem acc = one();
    while (e > 0) {
      if (e & 1) acc = mul(acc, base);
      base = mul(base, base);
      e >>= 1;
    }
    return acc;
  }

  Elem random(CounterRng& rng) const {
    Elem e(ell());
    for (u32& c : e) c = static_cast<u32>(rng.uniform(p()));
    return e;
  }

  std::string str(const Elem& a) const {
    std::string out;
    for (std::size_t i = ell(); i-- > 0;) {
      if (a[i] == 0) continue;
      if (!out.empty()) out += " + ";
      if (i == 0 || a[i] != 1) out += std::to_string(a[i]);
      if (i >= 1) out += (a[i] != 1 ? "*y" : "y");
      if (i >= 2) out += "^" + std::to_string(i);
    }
    return out.empty() ? "0" : out;
  }

  /// Modulus rendered as a polynomial in y, e.g. "y^2 + y + 1".
  std::string modulus_str() const {
    std::string out;
    for (std::size_t i = r_.size(); i-- > 0;) {
      if (r_[i] == 0) continue;
      if (!out.empty()) out += " + ";
      if (i == 0 || r_[i] != 1) out += std::to_string(r_[i]);
      if (i >= 1) out += "y";
      if (i >= 2) out += "^" + std::to_string(i);
    }
    return out;
  }

  friend bool operator==(const CoeffRing& a, const CoeffRing& b) { return a.mod_ == b.mod_ && a.r_ == b.r_; }

 protected:
  PrimeModulus mod_;
  std::vector<u32> r_;
};

/// GF(p^ell) = Z_p[y]/(r) with r monic irreducible.
class ExtField : public CoeffRing {
 public:
  ExtField(PrimeModulus p, std::vector<u32> monic) : CoeffRing(p, std::move(monic)) {
    if (!zpoly::is_irreducible(mod_, r_)) throw PreconditionError("extension modulus is reducible: " + modulus_str());
  }

  Elem inv(const Elem& a) const {
    if (is_zero(a)) throw PreconditionError("zero has no inverse in GF(" + std::to_string(p()) + "^" + std::to_string(ell()) + ")");
    u64 order = size();
    return pow(a, order - 2);
  }
};

/// Deterministic choice: the monic irreducible of degree ell whose lower coefficients,
/// read as base-p digits with y^0 least significant, form the smallest integer.
inline ExtField ext_field_make(PrimeModulus p, std::size_t ell) {
  if (ell == 0) throw UsageError("extension degree must be >= 1");
  std::vector<u32> r(ell + 1, 0);
  r[ell] = 1;
  for (;;) {
    if (zpoly::is_irreducible(p, r)) return ExtField(p, r);
    std::size_t i = 0;
    while (i < ell && ++r[i] == p.value()) r[i++] = 0;
    if (i == ell) throw PreconditionError("no irreducible polynomial found");  // unreachable
  }
}

/// Monic r of degree delta with uniform lower coefficients.
inline CoeffRing random_monic_ring(PrimeModulus p, std::size_t delta, CounterRng& rng) {
  std::vector<u32> r(delta + 1, 0);
  r[delta] = 1;
  for (std::size_t i = 0; i < delta; ++i) r[i] = static_cast<u32>(rng.uniform(p.value()));
  return CoeffRing(p, std::move(r));
}

}  // namespace montest
