#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "montest/circuit.hpp"
#include "montest/errors.hpp"
#include "montest/expansion.hpp"

// Graph file: first line is the vertex count m, then one "i j" edge per line with
// 1 <= i, j <= m. Blank lines and '#' comments are ignored; edge order is kept.

namespace montest {

struct Graph {
  std::size_t m = 0;
  std::vector<std::pair<u32, u32>> edges;  // 1-based, as given

  bool has_edge(u32 a, u32 b) const {
    for (const auto& [i, j] : edges)
      if ((i == a && j == b) || (i == b && j == a)) return true;
    return false;
  }

  std::vector<std::vector<u32>> adjacency() const {
    std::vector<std::vector<u32>> adj(m + 1);
    for (const auto& [i, j] : edges) {
      adj[i].push_back(j);
      adj[j].push_back(i);
    }
    return adj;
  }

  void add_edge(u32 i, u32 j) {
    if (i == j) throw ValidationError("self-loop at vertex " + std::to_string(i));
    if (i < 1 || j < 1 || i > m || j > m) throw ValidationError("edge (" + std::to_string(i) + "," + std::to_string(j) + ") outside 1.." + std::to_string(m));
    if (has_edge(i, j)) throw ValidationError("duplicate edge (" + std::to_string(i) + "," + std::to_string(j) + ")");
    edges.emplace_back(i, j);
  }
};

inline Graph parse_graph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::optional<Graph> g;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::vector<long long> nums;
    std::string tok;
    while (ls >> tok) {
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(tok, &used);
      } catch (const std::exception&) {
        throw ParseError("expected an integer, got '" + tok + "'", line_no);
      }
      if (used != tok.size()) throw ParseError("expected an integer, got '" + tok + "'", line_no);
      nums.push_back(v);
    }
    if (nums.empty()) continue;
    if (!g) {
      if (nums.size() != 1 || nums[0] < 0 || nums[0] > 1'000'000) throw ParseError("first line must hold the vertex count", line_no);
      g = Graph{static_cast<std::size_t>(nums[0]), {}};
      continue;
    }
    if (nums.size() != 2) throw ParseError("edge line must hold two vertex numbers", line_no);
    if (nums[0] < 1 || nums[1] < 1 || nums[0] > static_cast<long long>(g->m) || nums[1] > static_cast<long long>(g->m)) {
      throw ParseError("vertex out of range 1.." + std::to_string(g->m), line_no);
    }
    try {
      g->add_edge(static_cast<u32>(nums[0]), static_cast<u32>(nums[1]));
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (!g) throw ParseError("empty graph file", line_no);
  return *g;
}

inline std::string serialize_graph(const Graph& g) {
  std::ostringstream out;
  out << g.m << '\n';
  for (const auto& [i, j] : g.edges) out << i << ' ' << j << '\n';
  return out.str();
}

/// p(G,k) = sum_i p_{k,i} with p_{1,i} = x_i^c and p_{t+1,i} = x_i^c * sum_{j ~ i} p_{t,j}.
/// Subcircuits are shared, so the result is a DAG with O(k (m + |E|)) gates.
inline Circuit encode_kpath(const Graph& g, u32 k, u32 c = 1) {
  if (k < 1 || c < 1) throw UsageError("encode_kpath needs k >= 1 and c >= 1");
  Circuit circ;
  std::vector<u32> power(g.m + 1);
  for (u32 i = 1; i <= g.m; ++i) {
    const u32 leaf = circ.input("x" + std::to_string(i));
    u32 t = leaf;
    for (u32 r = 1; r < c; ++r) t = circ.mul(t, leaf);
    power[i] = t;
  }
  const auto adj = g.adjacency();
  std::optional<u32> zero;
  auto zero_gate = [&] {
    if (!zero) zero = circ.constant(0);
    return *zero;
  };
  std::vector<u32> level(power);
  for (u32 t = 1; t < k; ++t) {
    std::vector<u32> next(g.m + 1);
    for (u32 i = 1; i <= g.m; ++i) {
      if (adj[i].empty()) {
        next[i] = zero_gate();
        continue;
      }
      std::vector<u32> terms;
      for (u32 j : adj[i]) terms.push_back(level[j]);
      next[i] = circ.mul(power[i], circ.add(std::move(terms)));
    }
    level = std::move(next);
  }
  if (g.m == 0) {
    circ.set_output(zero_gate());
    return circ;
  }
  std::vector<u32> all(level.begin() + 1, level.end());
  circ.set_output(circ.add(std::move(all)));
  return circ;
}

inline std::string edge_var_name(u32 i, u32 j) {
  if (i > j) std::swap(i, j);
  return "x" + std::to_string(i) + "_" + std::to_string(j);
}

/// f(G,1) = 1, f(G,2) = sum of edge variables, f(G,t+1) = sum_i S_i^t * f(G,t) with
/// S_i the sum of the edge variables at vertex i. Degree k(k-1)/2.
inline Circuit encode_kclique(const Graph& g, u32 k) {
  if (k < 1) throw UsageError("encode_kclique needs k >= 1");
  Circuit circ;
  std::vector<u32> leaf;
  for (const auto& [i, j] : g.edges) leaf.push_back(circ.input(edge_var_name(i, j)));
  if (k == 1) {
    circ.set_output(circ.constant(1));
    return circ;
  }
  if (g.edges.empty()) {
    circ.set_output(circ.constant(0));
    return circ;
  }
  u32 f = circ.add(leaf);
  std::vector<std::optional<u32>> s(g.m + 1);
  for (u32 v = 1; v <= g.m; ++v) {
    std::vector<u32> inc;
    for (std::size_t e = 0; e < g.edges.size(); ++e)
      if (g.edges[e].first == v || g.edges[e].second == v) inc.push_back(leaf[e]);
    if (!inc.empty()) s[v] = circ.add(std::move(inc));
  }
  for (u32 t = 2; t < k; ++t) {
    std::vector<u32> terms;
    for (u32 v = 1; v <= g.m; ++v) {
      if (!s[v]) continue;
      u32 pw = *s[v];
      for (u32 r = 1; r < t; ++r) pw = circ.mul(pw, *s[v]);
      terms.push_back(circ.mul(pw, f));
    }
    f = circ.add(std::move(terms));
  }
  circ.set_output(f);
  return circ;
}

/// True iff the multilinear monomial prod_{a<b} x_{v_a v_b} has a nonzero coefficient.
inline bool clique_monomial_check(const ExpansionTable& tbl, const Circuit& encoded, std::vector<u32> vertices) {
  std::sort(vertices.begin(), vertices.end());
  Monomial mono;
  for (std::size_t a = 0; a < vertices.size(); ++a) {
    for (std::size_t b = a + 1; b < vertices.size(); ++b) {
      auto v = encoded.find_variable(edge_var_name(vertices[a], vertices[b]));
      if (!v) return false;
      mono = mono.times(Monomial::var(*v));
    }
  }
  const u64 expected = vertices.size() * (vertices.size() - 1) / 2;
  return mono.degree() == expected && tbl.coefficient(mono) != 0;
}

inline constexpr std::size_t kGraphOracleLimit = 12;

/// Exhaustive search for a simple path on k vertices.
inline bool path_oracle(const Graph& g, u32 k) {
  if (g.m > kGraphOracleLimit) throw ResourceError("path oracle is limited to 12 vertices");
  if (k == 0) return true;
  if (k > g.m) return false;
  const auto adj = g.adjacency();
  std::vector<bool> used(g.m + 1, false);
  std::function<bool(u32, u32)> dfs = [&](u32 v, u32 len) {
    if (len == k) return true;
    for (u32 w : adj[v]) {
      if (used[w]) continue;
      used[w] = true;
      if (dfs(w, len + 1)) return true;
      used[w] = false;
    }
    return false;
  };
  for (u32 v = 1; v <= g.m; ++v) {
    std::fill(used.begin(), used.end(), false);
    used[v] = true;
    if (dfs(v, 1)) return true;
  }
  return false;
}

/// Every k-vertex clique, as sorted vertex lists.
inline std::vector<std::vector<u32>> all_cliques(const Graph& g, u32 k) {
  if (g.m > kGraphOracleLimit) throw ResourceError("clique oracle is limited to 12 vertices");
  std::vector<std::vector<u32>> out;
  std::vector<u32> cur;
  std::function<void(u32)> rec = [&](u32 next) {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (u32 v = next; v <= g.m; ++v) {
      bool ok = true;
      for (u32 u : cur) ok = ok && g.has_edge(u, v);
      if (!ok) continue;
      cur.push_back(v);
      rec(v + 1);
      cur.pop_back();
    }
  };
  rec(1);
  return out;
}

inline bool clique_oracle(const Graph& g, u32 k) { return !all_cliques(g, k).empty(); }

}  // namespace montest
