#pragma once

// Brute-force reference implementations used only by tests. They trade speed for
// being obviously correct and share as little code with the library as possible.

#include <cstddef>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "montest/montest.hpp"

namespace oracle {

using namespace montest;

inline u32 powmod(u32 a, u32 e, u32 p) {
  u64 r = 1, b = a % p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<u32>(r);
}

// ---------------------------------------------------------------- polynomials

/// Remainder of a modulo b over Z_p by schoolbook long division; b monic.
inline std::vector<u32> poly_rem(std::vector<u32> a, const std::vector<u32>& b, u32 p) {
  const std::size_t db = b.size() - 1;
  for (std::size_t i = a.size(); i-- > db;) {
    const u32 f = a[i];
    if (!f) continue;
    for (std::size_t j = 0; j <= db; ++j) a[i - db + j] = static_cast<u32>((a[i - db + j] + static_cast<u64>(p - f) * b[j]) % p);
  }
  a.resize(std::min(a.size(), db));
  return a;
}

/// Irreducible iff no monic polynomial of degree 1..deg/2 divides it.
inline bool irreducible_by_trial_division(const std::vector<u32>& r, u32 p) {
  const std::size_t deg = r.size() - 1;
  for (std::size_t e = 1; 2 * e <= deg; ++e) {
    u64 count = 1;
    for (std::size_t i = 0; i < e; ++i) count *= p;
    for (u64 code = 0; code < count; ++code) {
      std::vector<u32> d(e + 1, 0);
      u64 c = code;
      for (std::size_t i = 0; i < e; ++i) {
        d[i] = static_cast<u32>(c % p);
        c /= p;
      }
      d[e] = 1;
      const auto rem = poly_rem(r, d, p);
      bool zero = true;
      for (u32 x : rem) zero = zero && x == 0;
      if (zero) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- group algebra

/// Dense product in R[Z_p^d] straight from the definition: sum over all index pairs.
inline GaElem brute_convolution(const GaElem& a, const GaElem& b) {
  const auto& sp = a.space();
  const u32 p = sp->p.value();
  GaElem out = GaElem::zero(sp);
  for (u64 i = 0; i < sp->size; ++i) {
    const auto ai = a.at(i);
    if (CoeffRing::is_zero(ai)) continue;
    const GroupVector gi = GroupVector::from_index(p, sp->d, i);
    for (u64 j = 0; j < sp->size; ++j) {
      const auto bj = b.at(j);
      if (CoeffRing::is_zero(bj)) continue;
      const GroupVector g = group_vec_mul(gi, GroupVector::from_index(p, sp->d, j));
      out.set(g, sp->ring->add(out.coefficient(g), sp->ring->mul(ai, bj)));
    }
  }
  return out;
}

inline GaElem random_element(const GaSpacePtr& sp, CounterRng& rng, u32 density_percent = 100) {
  GaElem e = GaElem::zero(sp);
  for (u64 i = 0; i < sp->size; ++i)
    if (rng.uniform(100) < density_percent) e.set_at(i, sp->ring->random(rng));
  return e;
}

// ---------------------------------------------------------------- expansions

/// Rank over Z_p by plain Gaussian elimination on integer rows.
inline std::size_t rank_rows(std::vector<std::vector<u32>> rows, u32 p) {
  std::size_t rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    const u32 inv = powmod(rows[rank][c], p - 2, p);
    for (auto& x : rows[rank]) x = static_cast<u32>(static_cast<u64>(x) * inv % p);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c] == 0) continue;
      const u32 f = rows[r][c];
      for (std::size_t x = 0; x < cols; ++x) rows[r][x] = static_cast<u32>((rows[r][x] + static_cast<u64>(p - f) * rows[rank][x]) % p);
    }
    ++rank;
  }
  return rank;
}

// ---------------------------------------------------------------- noncommutative words

using Word = std::vector<u32>;
using WordPoly = std::map<Word, u32>;

inline void word_add(WordPoly& a, const Word& w, u64 c, u32 p) {
  const u32 v = static_cast<u32>((a[w] + c) % p);
  if (v) a[w] = v; else a.erase(w);
}

/// Expansion of a formula over noncommuting variables: products keep left-to-right order.
inline WordPoly words_of_formula(const Circuit& f, u32 p) {
  std::function<WordPoly(u32)> rec = [&](u32 g) -> WordPoly {
    const Gate& gate = f.gate(g);
    WordPoly out;
    switch (gate.kind) {
      case GateKind::Input: out[{gate.var}] = 1; break;
      case GateKind::Const: {
        const i64 v = ((gate.value % static_cast<i64>(p)) + p) % p;
        if (v) out[{}] = static_cast<u32>(v);
        break;
      }
      case GateKind::Add:
        for (u32 c : gate.children)
          for (const auto& [w, x] : rec(c)) word_add(out, w, x, p);
        break;
      case GateKind::Mul: {
        const WordPoly l = rec(gate.children[0]), r = rec(gate.children[1]);
        for (const auto& [wl, a] : l)
          for (const auto& [wr, b] : r) {
            Word w = wl;
            w.insert(w.end(), wr.begin(), wr.end());
            word_add(out, w, static_cast<u64>(a) * b, p);
          }
        break;
      }
    }
    return out;
  };
  return rec(f.output());
}

/// Sum over source-to-sink paths of the ordered product of edge labels.
inline WordPoly words_of_abp(const Abp& a, u32 sink) {
  std::vector<std::vector<const AbpEdge*>> out(a.vertices);
  for (const AbpEdge& e : a.edges) out[e.from].push_back(&e);
  std::map<u32, WordPoly> memo;
  std::function<const WordPoly&(u32)> from = [&](u32 v) -> const WordPoly& {
    if (auto it = memo.find(v); it != memo.end()) return it->second;
    WordPoly res;
    if (v == sink) res[{}] = 1;
    for (const AbpEdge* e : out[v]) {
      const WordPoly& tail = from(e->to);
      for (const auto& [w, c] : tail) {
        if (e->constant % a.p) word_add(res, w, static_cast<u64>(e->constant % a.p) * c, a.p);
        for (const auto& [l, lc] : e->terms) {
          Word nw{l};
          nw.insert(nw.end(), w.begin(), w.end());
          word_add(res, nw, static_cast<u64>(lc % a.p) * c, a.p);
        }
      }
    }
    return memo[v] = std::move(res);
  };
  return from(a.source);
}

/// Polynomials in the y-letters of a gate-marked formula after x_i -> ((p-1) e_tau(i) + 0)
/// in Z_p[Z_p^k], keeping x-degree exactly k. Keyed by (y-word, group index).
inline std::map<std::pair<Word, u64>, u32> substituted_words(const AugmentedCircuit& ac, const std::vector<u32>& tau, u32 p, u32 k) {
  std::map<std::pair<Word, u64>, u32> out;
  u64 size = 1;
  for (u32 i = 0; i < k; ++i) size *= p;
  for (const auto& [w, c] : words_of_formula(ac.circuit, p)) {
    Word ys;
    std::vector<u32> xs;
    for (u32 v : w) {
      if (ac.is_y(v)) ys.push_back(v - static_cast<u32>(ac.n)); else xs.push_back(v);
    }
    if (xs.size() != k) continue;
    // prod over x of ((p-1) e_tau + 1*0): expand as a sum over subsets.
    std::map<u64, u64> acc{{0, 1}};
    for (u32 x : xs) {
      std::map<u64, u64> next;
      for (const auto& [g, a] : acc) {
        next[g] = (next[g] + a) % p;
        std::vector<u32> digits(k);
        u64 gg = g;
        for (u32 i = 0; i < k; ++i) {
          digits[i] = static_cast<u32>(gg % p);
          gg /= p;
        }
        digits[tau[x]] = (digits[tau[x]] + 1) % p;
        u64 h = 0;
        for (u32 i = k; i-- > 0;) h = h * p + digits[i];
        next[h] = (next[h] + a * (p - 1)) % p;
      }
      acc = std::move(next);
    }
    for (const auto& [g, a] : acc) {
      if (a == 0) continue;
      auto& slot = out[{ys, g}];
      slot = static_cast<u32>((slot + static_cast<u64>(a) * c) % p);
      if (slot == 0) out.erase({ys, g});
    }
  }
  return out;
}

// ---------------------------------------------------------------- selections

inline bool product_multilinear(const std::vector<Clause>& clauses, const std::vector<std::size_t>& pick) {
  std::set<u32> seen;
  for (std::size_t i = 0; i < clauses.size(); ++i)
    for (const auto& [v, e] : clauses[i].terms[pick[i]].exps) {
      if (e > 1 || !seen.insert(v).second) return false;
    }
  return true;
}

/// Tries every one-term-per-clause choice (mixed radix counter).
inline bool enumerate_selections(const std::vector<Clause>& clauses) {
  for (const Clause& c : clauses)
    if (c.terms.empty()) return false;
  std::vector<std::size_t> pick(clauses.size(), 0);
  while (true) {
    if (product_multilinear(clauses, pick)) return true;
    std::size_t i = 0;
    while (i < clauses.size() && ++pick[i] == clauses[i].terms.size()) pick[i++] = 0;
    if (i == clauses.size()) return false;
  }
}

// ---------------------------------------------------------------- graphs

/// Simple-path search by trying every ordered vertex sequence.
inline bool has_k_path_by_permutation(const Graph& g, u32 k) {
  if (k == 0) return true;
  if (k > g.m) return false;
  std::vector<u32> seq;
  std::vector<bool> used(g.m + 1, false);
  std::function<bool()> rec = [&]() -> bool {
    if (seq.size() == k) return true;
    for (u32 v = 1; v <= g.m; ++v) {
      if (used[v] || (!seq.empty() && !g.has_edge(seq.back(), v))) continue;
      used[v] = true;
      seq.push_back(v);
      if (rec()) return true;
      seq.pop_back();
      used[v] = false;
    }
    return false;
  };
  return rec();
}

/// Every labeled simple graph on n vertices (2^(n choose 2) of them).
inline std::vector<Graph> all_labeled_graphs(std::size_t n) {
  std::vector<std::pair<u32, u32>> slots;
  for (u32 i = 1; i <= n; ++i)
    for (u32 j = i + 1; j <= n; ++j) slots.emplace_back(i, j);
  std::vector<Graph> out;
  for (u64 mask = 0; mask < (u64{1} << slots.size()); ++mask) {
    Graph g{n, {}};
    for (std::size_t s = 0; s < slots.size(); ++s)
      if (mask >> s & 1) g.add_edge(slots[s].first, slots[s].second);
    out.push_back(std::move(g));
  }
  return out;
}

/// Graphs stored one after another, separated by lines holding only '%'.
inline std::vector<Graph> load_graph_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<Graph> out;
  std::string line, block;
  while (std::getline(in, line)) {
    if (line == "%") {
      out.push_back(parse_graph(block));
      block.clear();
    } else {
      block += line + "\n";
    }
  }
  if (!block.empty()) out.push_back(parse_graph(block));
  return out;
}

}  // namespace oracle
