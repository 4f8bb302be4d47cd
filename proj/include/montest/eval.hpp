#pragma once

#include <concepts>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "montest/circuit.hpp"
#include "montest/coeff_ring.hpp"
#include "montest/errors.hpp"
#include "montest/group_algebra.hpp"

namespace montest {

template <class R>
concept EvalRing = requires(const R& r, const typename R::Value& a, i64 c) {
  { r.zero() } -> std::convertible_to<typename R::Value>;
  { r.one() } -> std::convertible_to<typename R::Value>;
  { r.constant(c) } -> std::convertible_to<typename R::Value>;
  { r.add(a, a) } -> std::convertible_to<typename R::Value>;
  { r.mul(a, a) } -> std::convertible_to<typename R::Value>;
};

/// One pass over the gates reachable from the output, in stored (topological) order.
/// Intermediate values are released after their last use.
template <EvalRing R>
typename R::Value eval_circuit(const Circuit& c, const R& ring, const std::vector<typename R::Value>& assignment) {
  using V = typename R::Value;
  if (assignment.size() < c.num_vars()) {
    throw UsageError("assignment covers " + std::to_string(assignment.size()) + " of " + std::to_string(c.num_vars()) +
                     " variables");
  }
  const u32 out = c.output();
  const std::vector<bool> live = c.live();
  std::vector<std::size_t> last_use(c.size(), 0);
  for (std::size_t i = 0; i < c.size(); ++i)
    if (live[i])
      for (u32 ch : c.gates()[i].children) last_use[ch] = i;
  std::vector<std::optional<V>> val(c.size());
  for (std::size_t i = 0; i <= out; ++i) {
    if (!live[i]) continue;
    const Gate& g = c.gates()[i];
    switch (g.kind) {
      case GateKind::Input: val[i] = assignment[g.var]; break;
      case GateKind::Const: val[i] = ring.constant(g.value); break;
      case GateKind::Add: {
        V acc = *val[g.children[0]];
        for (std::size_t j = 1; j < g.children.size(); ++j) acc = ring.add(acc, *val[g.children[j]]);
        val[i] = std::move(acc);
        break;
      }
      case GateKind::Mul: val[i] = ring.mul(*val[g.children[0]], *val[g.children[1]]); break;
    }
    for (u32 ch : g.children)
      if (last_use[ch] == i && ch != out) val[ch].reset();
  }
  return std::move(*val[out]);
}

/// Assignment by variable name; every variable of the circuit must be present.
template <EvalRing R>
typename R::Value eval_circuit(const Circuit& c, const R& ring, const std::map<std::string, typename R::Value>& assignment) {
  std::vector<typename R::Value> vec;
  vec.reserve(c.num_vars());
  for (const std::string& name : c.var_names()) {
    auto it = assignment.find(name);
    if (it == assignment.end()) throw UsageError("no value assigned to variable '" + name + "'");
    vec.push_back(it->second);
  }
  return eval_circuit(c, ring, vec);
}

/// Z_p itself.
struct ZpRing {
  using Value = u32;
  PrimeModulus mod;

  Value zero() const { return 0; }
  Value one() const { return 1 % mod.value(); }
  Value constant(i64 c) const { return mod.reduce(c); }
  Value add(Value a, Value b) const { return mod.add(a, b); }
  Value mul(Value a, Value b) const { return mod.mul(a, b); }
};

/// Scalars of a coefficient ring, e.g. GF(p^ell).
struct ScalarRing {
  using Value = CoeffRing::Elem;
  std::shared_ptr<const CoeffRing> ring;

  Value zero() const { return ring->zero(); }
  Value one() const { return ring->one(); }
  Value constant(i64 c) const { return ring->scalar(ring->prime().reduce(c)); }
  Value add(const Value& a, const Value& b) const { return ring->add(a, b); }
  Value mul(const Value& a, const Value& b) const { return ring->mul(a, b); }
};

/// The group algebra R[Z_p^d].
struct GaRing {
  using Value = GaElem;
  GaSpacePtr space;
  ConvEngine engine = ConvEngine::Auto;

  Value zero() const { return GaElem::zero(space); }
  Value one() const { return GaElem::one(space); }
  Value constant(i64 c) const { return ga_scale(space->p.reduce(c), one()); }
  Value add(const Value& a, const Value& b) const { return ga_add(a, b); }
  Value mul(const Value& a, const Value& b) const { return ga_mul(a, b, engine); }
};

/// R[Z_p^d][z]/(z^(k+1)): group-algebra values split by degree in the x-variables.
/// Grade k of the output is the degree-k part of the polynomial, evaluated.
struct GradedGaRing {
  using Value = GradedGa;
  GaSpacePtr space;
  std::size_t k = 0;
  ConvEngine engine = ConvEngine::Auto;

  Value zero() const { return Value(k + 1); }
  Value one() const { return constant(1); }
  Value constant(i64 c) const {
    Value v(k + 1);
    const u32 r = space->p.reduce(c);
    if (r != 0) v[0] = ga_scale(r, GaElem::one(space));
    return v;
  }
  /// The element e placed at a single grade.
  Value at_grade(GaElem e, std::size_t grade) const {
    Value v(k + 1);
    if (grade <= k && !e.is_zero()) v[grade] = std::move(e);
    return v;
  }
  Value add(const Value& a, const Value& b) const {
    Value out(k + 1);
    for (std::size_t g = 0; g <= k; ++g) {
      if (a[g] && b[g]) {
        GaElem s = ga_add(*a[g], *b[g]);
        if (!s.is_zero()) out[g] = std::move(s);
      } else if (a[g]) {
        out[g] = a[g];
      } else if (b[g]) {
        out[g] = b[g];
      }
    }
    return out;
  }
  Value mul(const Value& a, const Value& b) const { return graded_mul(a, b, k, engine); }
};

}  // namespace montest
