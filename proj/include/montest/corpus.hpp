#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "montest/circuit.hpp"
#include "montest/rng.hpp"
#include "montest/structured.hpp"
#include "montest/structured_tester.hpp"

// Seeded random instance generators shared by tests, the acceptance gate and the CLI.

namespace montest {

struct CircuitShape {
  std::size_t n = 4;          // variables
  u32 max_degree = 4;         // bound enforced while building
  std::size_t gates = 10;     // operation gates to attempt
  bool formula = false;       // tree with one leaf per occurrence
  u32 const_percent = 10;     // chance of a constant leaf (formulas) or gate (circuits)
  u32 p = 2;                  // constants are drawn from [1, p)
};

namespace detail {

inline u32 random_formula_node(Circuit& c, CounterRng& rng, const CircuitShape& s, u32 degree, std::size_t& budget) {
  auto leaf = [&]() -> u32 {
    if (degree == 0 || (s.p > 2 && rng.uniform(100) < s.const_percent)) return c.constant(1 + static_cast<i64>(rng.uniform(s.p - 1)));
    return c.input("x" + std::to_string(1 + rng.uniform(s.n)));
  };
  if (budget == 0 || rng.uniform(100) < 25) return leaf();
  --budget;
  if (degree >= 2 && rng.uniform(100) < 55) {
    const u32 left = 1 + static_cast<u32>(rng.uniform(degree - 1));
    const u32 l = random_formula_node(c, rng, s, left, budget);
    const u32 r = random_formula_node(c, rng, s, static_cast<u32>(1 + rng.uniform(degree - left)), budget);
    return c.mul(l, r);
  }
  const std::size_t fan = 2 + rng.uniform(2);
  std::vector<u32> kids;
  for (std::size_t i = 0; i < fan; ++i) kids.push_back(random_formula_node(c, rng, s, degree, budget));
  return c.add(std::move(kids));
}

}  // namespace detail

/// Random formula: a tree whose degree never exceeds max_degree.
inline Circuit random_formula(CounterRng& rng, const CircuitShape& s) {
  Circuit c;
  for (std::size_t i = 1; i <= s.n; ++i) c.variable("x" + std::to_string(i));
  std::size_t budget = s.gates;
  c.set_output(detail::random_formula_node(c, rng, s, s.max_degree, budget));
  return c;
}

/// Random DAG circuit: shared input leaves, gates pick earlier gates as children.
inline Circuit random_circuit(CounterRng& rng, const CircuitShape& s) {
  if (s.formula) return random_formula(rng, s);
  Circuit c;
  std::vector<u32> deg;
  for (std::size_t i = 1; i <= s.n; ++i) {
    c.input("x" + std::to_string(i));
    deg.push_back(1);
  }
  for (std::size_t g = 0; g < s.gates; ++g) {
    const auto pick = [&] { return static_cast<u32>(rng.uniform(c.size())); };
    if (s.p > 2 && rng.uniform(100) < s.const_percent) {
      c.constant(1 + static_cast<i64>(rng.uniform(s.p - 1)));
      deg.push_back(0);
      continue;
    }
    if (rng.uniform(100) < 50) {
      u32 a = pick(), b = pick();
      for (int tries = 0; tries < 8 && deg[a] + deg[b] > s.max_degree; ++tries) {
        a = pick();
        b = pick();
      }
      if (deg[a] + deg[b] <= s.max_degree) {
        c.mul(a, b);
        deg.push_back(deg[a] + deg[b]);
        continue;
      }
    }
    const std::size_t fan = 2 + rng.uniform(2);
    std::vector<u32> kids;
    u32 d = 0;
    for (std::size_t i = 0; i < fan; ++i) {
      kids.push_back(pick());
      d = std::max(d, deg[kids.back()]);
    }
    c.add(std::move(kids));
    deg.push_back(d);
  }
  c.set_output(static_cast<u32>(c.size() - 1));
  return c;
}

inline Monomial random_term(CounterRng& rng, std::size_t nvars, u64 t, u32 square_percent) {
  const u64 deg = 1 + rng.uniform(t);
  Monomial m;
  for (u64 i = 0; i < deg; ++i) m = m.times(Monomial::var(static_cast<u32>(rng.uniform(nvars))));
  if (rng.uniform(100) < square_percent) m = m.times(Monomial::var(m.exps.front().first));
  return m;
}

inline void name_vars(StructuredPoly& sp, std::size_t nvars) {
  sp.var_names.clear();
  for (std::size_t i = 1; i <= nvars; ++i) sp.var_names.push_back("x" + std::to_string(i));
}

/// Product of m clauses of one or two terms of degree <= t.
inline StructuredPoly random_sigma2(CounterRng& rng, std::size_t m, std::size_t nvars, u64 t, u32 square_percent = 5) {
  StructuredPoly sp;
  sp.shape = Shape::PiSigmaPi;
  name_vars(sp, nvars);
  for (std::size_t i = 0; i < m; ++i) {
    Clause c;
    const std::size_t terms = rng.uniform(100) < 15 ? 1 : 2;
    for (std::size_t j = 0; j < terms; ++j) c.terms.push_back(random_term(rng, nvars, t, square_percent));
    sp.first.push_back(std::move(c));
  }
  return sp;
}

/// F1 (m two-term clauses) times k clauses of three variables.
inline ProductInstance random_product(CounterRng& rng, std::size_t m, std::size_t k, std::size_t nvars, u64 t) {
  StructuredPoly sp = random_sigma2(rng, m, nvars, t, 3);
  sp.shape = Shape::Product;
  for (std::size_t j = 0; j < k; ++j) {
    Clause c;
    for (int i = 0; i < 3; ++i) c.terms.push_back(Monomial::var(static_cast<u32>(rng.uniform(nvars))));
    sp.second.push_back(std::move(c));
  }
  return ProductInstance::from(sp);
}

}  // namespace montest
