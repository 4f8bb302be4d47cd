#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "montest/circuit.hpp"
#include "montest/errors.hpp"
#include "montest/zp.hpp"

namespace montest {

/// Edge label: constant + sum of coeff * letter.
struct AbpEdge {
  u32 from = 0;
  u32 to = 0;
  u32 constant = 0;
  std::vector<std::pair<u32, u32>> terms;  // (letter, coefficient)
};

/// Algebraic branching program over noncommuting letters, as a DAG whose vertex
/// numbering is topological (every edge goes from a smaller to a larger id). The
/// polynomial is the sum over source-to-sink paths of the ordered product of labels.
/// With several sinks it represents one polynomial per sink.
struct Abp {
  u32 p = 2;
  std::size_t vertices = 0;
  std::size_t letters = 0;
  u32 source = 0;
  std::vector<u32> sinks;
  std::vector<AbpEdge> edges;

  /// The same program restricted to one sink.
  Abp with_sink(u32 sink) const {
    Abp a = *this;
    a.sinks = {sink};
    return a;
  }
};

namespace detail {

enum class BaseKind { Const, Letter, X };

struct BaseEdge {
  u32 from, to;
  BaseKind kind;
  u32 value;  // constant, letter id, or x variable id
};

struct BaseAbp {
  std::size_t vertices = 0;
  u32 source = 0, sink = 0;
  std::vector<BaseEdge> edges;
};

/// Series-parallel program of a formula. letter_of[v] gives the letter of variable v,
/// or nullopt when v is an x-variable to be substituted later.
inline BaseAbp build_base(const Circuit& f, const std::vector<std::optional<u32>>& letter_of, u32 p) {
  if (!f.is_formula()) throw UsageError("noncommutative branching programs are built from formulas only (fan-out <= 1)");
  BaseAbp b;
  const std::vector<bool> live = f.live();
  std::vector<std::pair<u32, u32>> ends(f.size());
  auto vertex = [&] { return static_cast<u32>(b.vertices++); };
  const u32 out = f.output();
  for (std::size_t i = 0; i <= out; ++i) {
    if (!live[i]) continue;
    const Gate& g = f.gates()[i];
    switch (g.kind) {
      case GateKind::Input: {
        const u32 s = vertex(), t = vertex();
        if (letter_of.at(g.var)) {
          b.edges.push_back({s, t, BaseKind::Letter, *letter_of[g.var]});
        } else {
          b.edges.push_back({s, t, BaseKind::X, g.var});
        }
        ends[i] = {s, t};
        break;
      }
      case GateKind::Const: {
        const u32 s = vertex(), t = vertex();
        b.edges.push_back({s, t, BaseKind::Const, PrimeModulus(p).reduce(g.value)});
        ends[i] = {s, t};
        break;
      }
      case GateKind::Add: {
        const u32 s = vertex(), t = vertex();
        for (u32 c : g.children) {
          b.edges.push_back({s, ends[c].first, BaseKind::Const, 1});
          b.edges.push_back({ends[c].second, t, BaseKind::Const, 1});
        }
        ends[i] = {s, t};
        break;
      }
      case GateKind::Mul: {
        const auto l = ends[g.children[0]], r = ends[g.children[1]];
        b.edges.push_back({l.second, r.first, BaseKind::Const, 1});
        ends[i] = {l.first, r.second};
        break;
      }
    }
  }
  b.source = ends[out].first;
  b.sink = ends[out].second;

  // Renumber topologically (Kahn, smallest id first).
  std::vector<std::vector<u32>> adj(b.vertices);
  std::vector<std::size_t> indeg(b.vertices, 0);
  for (const BaseEdge& e : b.edges) {
    adj[e.from].push_back(e.to);
    ++indeg[e.to];
  }
  std::priority_queue<u32, std::vector<u32>, std::greater<>> ready;
  for (u32 v = 0; v < b.vertices; ++v)
    if (indeg[v] == 0) ready.push(v);
  std::vector<u32> rank(b.vertices);
  u32 next = 0;
  while (!ready.empty()) {
    const u32 v = ready.top();
    ready.pop();
    rank[v] = next++;
    for (u32 w : adj[v])
      if (--indeg[w] == 0) ready.push(w);
  }
  for (BaseEdge& e : b.edges) {
    e.from = rank[e.from];
    e.to = rank[e.to];
  }
  b.source = rank[b.source];
  b.sink = rank[b.sink];
  return b;
}

}  // namespace detail

/// Program for a formula in which every variable is a letter (letter id = variable id).
/// Mul reads its left factor before its right one.
inline Abp formula_to_abp(const Circuit& f, PrimeModulus p) {
  std::vector<std::optional<u32>> letters(f.num_vars());
  for (u32 v = 0; v < f.num_vars(); ++v) letters[v] = v;
  const detail::BaseAbp b = detail::build_base(f, letters, p.value());
  Abp a;
  a.p = p.value();
  a.vertices = b.vertices;
  a.letters = f.num_vars();
  a.source = b.source;
  a.sinks = {b.sink};
  for (const auto& e : b.edges) {
    AbpEdge out{e.from, e.to, 0, {}};
    if (e.kind == detail::BaseKind::Letter) {
      out.terms.emplace_back(e.value, 1);
    } else {
      out.constant = e.value;
    }
    if (out.constant != 0 || !out.terms.empty()) a.edges.push_back(std::move(out));
  }
  return a;
}

/// Expanded-vertex layout for the substituted program: (base vertex, group index, grade).
struct ExpandedLayout {
  u64 group_size = 1;  // p^k
  u32 k = 0;
  u32 id(u32 base, u64 g, u32 e) const { return static_cast<u32>((base * group_size + g) * (k + 1) + e); }
};

/// Program over the y-letters of a marked formula after substituting
/// x_i -> ((p-1) e_{tau(i)} + 0), e_c the c-th standard basis vector of Z_p^k.
/// Vertices track the accumulated group element and x-degree; sink z is the degree-k
/// part of the coefficient of group element z (sinks listed in index order).
inline Abp expanded_abp(const AugmentedCircuit& ac, const std::vector<u32>& tau, PrimeModulus p, u32 k) {
  const u32 pv = p.value();
  std::vector<std::optional<u32>> letters(ac.circuit.num_vars());
  for (u32 v = 0; v < letters.size(); ++v)
    if (ac.is_y(v)) letters[v] = v - static_cast<u32>(ac.n);
  const detail::BaseAbp b = detail::build_base(ac.circuit, letters, pv);
  ExpandedLayout L{checked_pow(pv, k), k};
  const long double total = static_cast<long double>(b.vertices) * L.group_size * (k + 1);
  if (total > 5e7L) throw ResourceError("expanded branching program too large");
  std::vector<u64> unit(k);
  for (u32 c = 0; c < k; ++c) unit[c] = checked_pow(pv, c);
  auto shift = [&](u64 g, u32 c) {  // g + e_c
    const u64 digit = (g / unit[c]) % pv;
    return digit + 1 == pv ? g - digit * unit[c] : g + unit[c];
  };
  Abp a;
  a.p = pv;
  a.vertices = static_cast<std::size_t>(total);
  a.letters = ac.h;
  a.source = L.id(b.source, 0, 0);
  for (u64 z = 0; z < L.group_size; ++z) a.sinks.push_back(L.id(b.sink, z, k));
  for (const auto& e : b.edges) {
    for (u64 g = 0; g < L.group_size; ++g) {
      for (u32 gr = 0; gr <= k; ++gr) {
        switch (e.kind) {
          case detail::BaseKind::Const:
            if (e.value != 0) a.edges.push_back({L.id(e.from, g, gr), L.id(e.to, g, gr), e.value, {}});
            break;
          case detail::BaseKind::Letter:
            a.edges.push_back({L.id(e.from, g, gr), L.id(e.to, g, gr), 0, {{e.value, 1}}});
            break;
          case detail::BaseKind::X:
            if (gr == k) break;
            a.edges.push_back({L.id(e.from, g, gr), L.id(e.to, g, gr + 1), 1, {}});
            if (pv > 1) a.edges.push_back({L.id(e.from, g, gr), L.id(e.to, shift(g, tau.at(e.value)), gr + 1), pv - 1, {}});
            break;
        }
      }
    }
  }
  return a;
}

namespace detail {

struct AbpIndex {
  std::vector<std::vector<std::pair<u32, u32>>> constant_out;  // from -> (to, c)
  std::vector<std::vector<std::array<u32, 3>>> letter_edges;   // letter -> (from, to, c)
};

inline AbpIndex index_abp(const Abp& a) {
  AbpIndex ix;
  ix.constant_out.resize(a.vertices);
  ix.letter_edges.resize(a.letters);
  for (const AbpEdge& e : a.edges) {
    if (e.from >= e.to) throw ValidationError("branching program vertices are not topologically numbered");
    if (e.constant % a.p) ix.constant_out[e.from].emplace_back(e.to, e.constant % a.p);
    for (const auto& [l, c] : e.terms) {
      if (l >= a.letters) throw ValidationError("edge uses letter " + std::to_string(l) + " beyond the letter count");
      if (c % a.p) ix.letter_edges[l].push_back({e.from, e.to, c % a.p});
    }
  }
  return ix;
}

inline void closure(std::vector<u32>& u, const AbpIndex& ix, const PrimeModulus& m) {
  for (std::size_t v = 0; v < u.size(); ++v) {
    if (u[v] == 0) continue;
    for (const auto& [w, c] : ix.constant_out[v]) u[w] = m.add(u[w], m.mul(c, u[v]));
  }
}

}  // namespace detail

struct RsStats {
  std::size_t levels = 0;
  std::size_t max_rank = 0;
};

/// Deterministic identity test for the noncommutative polynomial(s) of an ABP.
///
/// For each word w let u_w be the vector of path sums from the source reading w. The
/// span V_l of {u_w : |w| = l} is maintained as an echelon basis mod p and
/// V_{l+1} = span{ closure(A_j b) : b in V_l, letters j }. The polynomial is nonzero
/// iff some V_l has a vector with a nonzero sink entry. Since letters move strictly
/// forward in the DAG, V_l is empty once l exceeds the vertex count.
inline bool rs_identity_test(const Abp& a, RsStats* stats = nullptr) {
  const PrimeModulus m(a.p);
  const detail::AbpIndex ix = detail::index_abp(a);
  struct Basis {
    std::vector<std::vector<u32>> vecs;
    std::vector<std::size_t> pivots;
    bool insert(std::vector<u32> w, const PrimeModulus& m) {
      for (std::size_t i = 0; i < vecs.size(); ++i) {
        const u32 f = w[pivots[i]];
        if (f == 0) continue;
        const auto& b = vecs[i];
        for (std::size_t x = pivots[i]; x < w.size(); ++x)
          if (b[x]) w[x] = m.sub(w[x], m.mul(f, b[x]));
      }
      std::size_t piv = 0;
      while (piv < w.size() && w[piv] == 0) ++piv;
      if (piv == w.size()) return false;
      const u32 inv = m.inv(w[piv]);
      for (std::size_t x = piv; x < w.size(); ++x) w[x] = m.mul(w[x], inv);
      vecs.push_back(std::move(w));
      pivots.push_back(piv);
      return true;
    }
  };
  Basis level;
  std::vector<u32> start(a.vertices, 0);
  start.at(a.source) = 1;
  detail::closure(start, ix, m);
  level.insert(std::move(start), m);
  std::size_t depth = 0;
  while (!level.vecs.empty()) {
    if (stats) {
      stats->levels = depth + 1;
      stats->max_rank = std::max(stats->max_rank, level.vecs.size());
    }
    for (const auto& b : level.vecs)
      for (u32 s : a.sinks)
        if (b[s] != 0) return true;
    if (++depth > a.vertices) break;
    Basis next;
    for (const auto& b : level.vecs) {
      for (std::size_t j = 0; j < a.letters; ++j) {
        if (ix.letter_edges[j].empty()) continue;
        std::vector<u32> w(a.vertices, 0);
        bool any = false;
        for (const auto& [from, to, c] : ix.letter_edges[j]) {
          if (b[from] == 0) continue;
          w[to] = m.add(w[to], m.mul(c, b[from]));
          any = true;
        }
        if (!any) continue;
        detail::closure(w, ix, m);
        next.insert(std::move(w), m);
      }
    }
    level = std::move(next);
  }
  return false;
}

}  // namespace montest
