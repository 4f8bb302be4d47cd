#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace montest {

/// 2-SAT by strongly connected components of the implication graph (iterative Tarjan).
/// Literal encoding: 2*v is v, 2*v+1 is not-v.
class TwoSat {
 public:
  explicit TwoSat(std::size_t vars) : n_(vars), adj_(2 * vars) {}

  static std::size_t pos(std::size_t v) { return 2 * v; }
  static std::size_t neg(std::size_t v) { return 2 * v + 1; }

  /// Clause (a or b).
  void add_clause(std::size_t a, std::size_t b) {
    adj_[a ^ 1].push_back(b);
    adj_[b ^ 1].push_back(a);
  }
  /// Clause (a).
  void add_unit(std::size_t a) { add_clause(a, a); }

  std::size_t vars() const noexcept { return n_; }
  std::size_t implications() const noexcept {
    std::size_t e = 0;
    for (const auto& a : adj_) e += a.size();
    return e;
  }

  std::optional<std::vector<bool>> solve() const {
    const std::size_t N = adj_.size();
    std::vector<std::size_t> comp(N, kNone), index(N, kNone), low(N, 0);
    std::vector<std::size_t> stack;
    std::vector<bool> on_stack(N, false);
    std::size_t counter = 0, comps = 0;
    std::vector<std::pair<std::size_t, std::size_t>> call;  // (vertex, next edge)
    for (std::size_t root = 0; root < N; ++root) {
      if (index[root] != kNone) continue;
      call.emplace_back(root, 0);
      while (!call.empty()) {
        auto& [v, ei] = call.back();
        if (ei == 0 && index[v] == kNone) {
          index[v] = low[v] = counter++;
          stack.push_back(v);
          on_stack[v] = true;
        }
        if (ei < adj_[v].size()) {
          const std::size_t w = adj_[v][ei++];
          if (index[w] == kNone) {
            call.emplace_back(w, 0);
          } else if (on_stack[w]) {
            low[v] = std::min(low[v], index[w]);
          }
          continue;
        }
        if (low[v] == index[v]) {
          for (;;) {
            const std::size_t w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp[w] = comps;
            if (w == v) break;
          }
          ++comps;
        }
        const std::size_t done = v;
        call.pop_back();
        if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      }
    }
    // Tarjan numbers components in reverse topological order.
    std::vector<bool> value(n_);
    for (std::size_t v = 0; v < n_; ++v) {
      if (comp[pos(v)] == comp[neg(v)]) return std::nullopt;
      value[v] = comp[pos(v)] < comp[neg(v)];
    }
    return value;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::size_t n_;
  std::vector<std::vector<std::size_t>> adj_;
};

}  // namespace montest
