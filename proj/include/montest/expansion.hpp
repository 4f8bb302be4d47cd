#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "montest/circuit.hpp"
#include "montest/errors.hpp"
#include "montest/eval.hpp"
#include "montest/zp.hpp"

namespace montest {

/// Sparse exponent vector: (variable id, exponent >= 1) pairs sorted by variable.
struct Monomial {
  std::vector<std::pair<u32, u32>> exps;

  static Monomial var(u32 v, u32 e = 1) {
    Monomial m;
    if (e > 0) m.exps.emplace_back(v, e);
    return m;
  }

  u64 degree() const noexcept {
    u64 d = 0;
    for (const auto& [v, e] : exps) d += e;
    return d;
  }
  bool is_multilinear() const noexcept {
    return std::all_of(exps.begin(), exps.end(), [](const auto& ve) { return ve.second == 1; });
  }
  /// Every exponent lies in [1, c).
  bool is_c_monomial(u64 c) const noexcept {
    return std::all_of(exps.begin(), exps.end(), [c](const auto& ve) { return ve.second < c; });
  }
  u32 exponent(u32 v) const noexcept {
    for (const auto& [w, e] : exps)
      if (w == v) return e;
    return 0;
  }

  Monomial times(const Monomial& o) const {
    Monomial r;
    r.exps.reserve(exps.size() + o.exps.size());
    std::size_t i = 0, j = 0;
    while (i < exps.size() || j < o.exps.size()) {
      if (j == o.exps.size() || (i < exps.size() && exps[i].first < o.exps[j].first)) {
        r.exps.push_back(exps[i++]);
      } else if (i == exps.size() || o.exps[j].first < exps[i].first) {
        r.exps.push_back(o.exps[j++]);
      } else {
        r.exps.emplace_back(exps[i].first, exps[i].second + o.exps[j].second);
        ++i;
        ++j;
      }
    }
    return r;
  }

  /// Restriction to the variables selected by mask.
  Monomial project(const std::vector<bool>& mask) const {
    Monomial r;
    for (const auto& ve : exps)
      if (ve.first < mask.size() && mask[ve.first]) r.exps.push_back(ve);
    return r;
  }

  std::string str(const std::vector<std::string>& names = {}) const {
    if (exps.empty()) return "1";
    std::string out;
    for (const auto& [v, e] : exps) {
      if (!out.empty()) out += "*";
      out += v < names.size() ? names[v] : "x" + std::to_string(v + 1);
      if (e > 1) out += "^" + std::to_string(e);
    }
    return out;
  }

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

/// Sum-product expansion with coefficients in Z_p; zero coefficients are never stored.
struct ExpansionTable {
  u32 p = 2;
  std::map<Monomial, u32> entries;

  std::size_t size() const noexcept { return entries.size(); }
  u32 coefficient(const Monomial& m) const {
    auto it = entries.find(m);
    return it == entries.end() ? 0 : it->second;
  }
  /// Value at a point, mod p.
  u32 evaluate(const std::vector<u32>& point) const {
    const PrimeModulus mod(p);
    u32 acc = 0;
    for (const auto& [m, c] : entries) {
      u32 t = c;
      for (const auto& [v, e] : m.exps) t = mod.mul(t, mod.pow(point.at(v) % p, e));
      acc = mod.add(acc, t);
    }
    return acc;
  }
};

inline constexpr std::size_t kDefaultExpansionCap = 1'000'000;

/// Polynomial ring over Z_p on sparse tables, optionally truncated above a total degree.
struct ExpansionRing {
  using Value = ExpansionTable;
  PrimeModulus mod;
  std::size_t cap = kDefaultExpansionCap;
  u64 max_degree = std::numeric_limits<u64>::max();

  Value zero() const { return Value{mod.value(), {}}; }
  Value one() const { return constant(1); }
  Value constant(i64 c) const {
    Value v = zero();
    if (u32 r = mod.reduce(c)) v.entries.emplace(Monomial{}, r);
    return v;
  }
  Value variable(u32 var) const {
    Value v = zero();
    if (max_degree >= 1) v.entries.emplace(Monomial::var(var), 1 % mod.value());
    return v;
  }
  Value add(const Value& a, const Value& b) const {
    Value out = a.size() >= b.size() ? a : b;
    const Value& small = a.size() >= b.size() ? b : a;
    for (const auto& [m, c] : small.entries) {
      auto [it, inserted] = out.entries.emplace(m, c);
      if (inserted) continue;
      it->second = mod.add(it->second, c);
      if (it->second == 0) out.entries.erase(it);
    }
    check(out);
    return out;
  }
  Value mul(const Value& a, const Value& b) const {
    Value out = zero();
    for (const auto& [ma, ca] : a.entries) {
      const u64 da = ma.degree();
      for (const auto& [mb, cb] : b.entries) {
        if (da + mb.degree() > max_degree) continue;
        const u32 c = mod.mul(ca, cb);
        auto [it, inserted] = out.entries.emplace(ma.times(mb), c);
        if (!inserted) {
          it->second = mod.add(it->second, c);
          if (it->second == 0) out.entries.erase(it);
        }
      }
      check(out);
    }
    return out;
  }

 private:
  void check(const Value& v) const {
    if (v.size() > cap) {
      throw ResourceError("expansion exceeds the oracle cap of " + std::to_string(cap) + " monomials");
    }
  }
};

/// Exact expansion mod p. Pass max_degree to drop monomials above that degree.
inline ExpansionTable expand_oracle(const Circuit& c, PrimeModulus p, std::size_t cap = kDefaultExpansionCap,
                                    u64 max_degree = std::numeric_limits<u64>::max()) {
  ExpansionRing ring{p, cap, max_degree};
  std::vector<ExpansionTable> vars;
  vars.reserve(c.num_vars());
  for (u32 v = 0; v < c.num_vars(); ++v) vars.push_back(ring.variable(v));
  return eval_circuit(c, ring, vars);
}

/// A degree-k monomial with every exponent in [1, p), if the table has one.
/// The smallest such monomial (in Monomial order) is returned as witness.
inline std::optional<Monomial> has_p_monomial_oracle(const ExpansionTable& tbl, PrimeModulus p, u64 k) {
  for (const auto& [m, c] : tbl.entries)
    if (c != 0 && m.degree() == k && m.is_c_monomial(p.value())) return m;
  return std::nullopt;
}

/// Same test on the part of each monomial in the variables selected by mask.
/// Used for marked circuits, where the remaining variables only tag the monomial.
inline std::optional<Monomial> has_projected_p_monomial_oracle(const ExpansionTable& tbl, PrimeModulus p, u64 k,
                                                               const std::vector<bool>& mask) {
  for (const auto& [m, c] : tbl.entries) {
    if (c == 0) continue;
    Monomial x = m.project(mask);
    if (x.degree() == k && x.is_c_monomial(p.value())) return x;
  }
  return std::nullopt;
}

}  // namespace montest
