#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "montest/errors.hpp"
#include "montest/parallel.hpp"
#include "montest/report.hpp"
#include "montest/rng.hpp"
#include "montest/structured.hpp"
#include "montest/two_sat.hpp"

namespace montest {

/// Chosen term index per clause.
using Selection = std::vector<std::size_t>;

struct BaseCaseResult {
  bool yes = false;
  std::optional<Selection> witness;
  std::size_t implications = 0;
};

/// Can one term per clause be chosen so that the product is multilinear?
/// Every clause must have one or two terms. Solved as 2-SAT on term selectors.
inline BaseCaseResult base_case_sigma2(const std::vector<Clause>& clauses) {
  BaseCaseResult res;
  for (const Clause& c : clauses) {
    if (c.terms.size() > 2) throw ValidationError("base case needs clauses with at most two terms, got " + std::to_string(c.terms.size()));
    if (c.terms.empty()) return res;
  }
  // Selector b_i true means clause i picks term 0.
  TwoSat sat(clauses.size());
  auto lit = [](std::size_t i, std::size_t a) { return a == 0 ? TwoSat::pos(i) : TwoSat::neg(i); };
  std::map<u32, std::vector<std::pair<std::size_t, std::size_t>>> occurrences;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    const auto& terms = clauses[i].terms;
    if (terms.size() == 1) sat.add_unit(lit(i, 0));
    for (std::size_t a = 0; a < terms.size(); ++a) {
      if (!terms[a].is_multilinear()) {
        sat.add_unit(lit(i, a) ^ 1);
        continue;
      }
      for (const auto& [v, e] : terms[a].exps) occurrences[v].emplace_back(i, a);
    }
  }
  for (const auto& [v, occ] : occurrences)
    for (std::size_t x = 0; x < occ.size(); ++x)
      for (std::size_t y = x + 1; y < occ.size(); ++y)
        if (occ[x].first != occ[y].first) sat.add_clause(lit(occ[x].first, occ[x].second) ^ 1, lit(occ[y].first, occ[y].second) ^ 1);
  res.implications = sat.implications();
  auto assignment = sat.solve();
  if (!assignment) return res;
  res.yes = true;
  Selection sel(clauses.size());
  for (std::size_t i = 0; i < clauses.size(); ++i) sel[i] = (*assignment)[i] ? 0 : 1;
  res.witness = std::move(sel);
  return res;
}

inline std::string selection_str(const std::vector<Clause>& clauses, const Selection& sel, const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (i) out += " * ";
    out += term_str(clauses[i].terms[sel[i]], names);
  }
  return out.empty() ? "1" : out;
}

/// F1 * F2 with F1 a product of clauses of at most two terms and F2 a product of
/// clauses of at most three distinct single variables.
struct ProductInstance {
  std::vector<std::string> var_names;
  std::vector<Clause> f1;
  std::vector<std::vector<u32>> f2;

  std::size_t m() const noexcept { return f1.size(); }
  std::size_t k() const noexcept { return f2.size(); }
  u64 t() const {
    u64 r = 0;
    for (const Clause& c : f1)
      for (const Monomial& mo : c.terms) r = std::max(r, mo.degree());
    return r;
  }

  /// Validates the shape; duplicate variables inside a second-part clause are collapsed.
  static ProductInstance from(const StructuredPoly& sp) {
    ProductInstance inst;
    inst.var_names = sp.var_names;
    for (std::size_t i = 0; i < sp.first.size(); ++i) {
      if (sp.first[i].terms.size() > 2) {
        throw ValidationError("clause " + std::to_string(i + 1) + " of the first part has " + std::to_string(sp.first[i].terms.size()) +
                              " terms, at most 2 allowed");
      }
      inst.f1.push_back(sp.first[i]);
    }
    for (std::size_t j = 0; j < sp.second.size(); ++j) {
      std::vector<u32> vars;
      for (const Monomial& mo : sp.second[j].terms) {
        if (mo.degree() != 1) throw ValidationError("clause " + std::to_string(j + 1) + " of the second part must contain single variables");
        const u32 v = mo.exps.front().first;
        if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
      }
      if (sp.second[j].terms.size() > 3) {
        throw ValidationError("clause " + std::to_string(j + 1) + " of the second part has " + std::to_string(sp.second[j].terms.size()) +
                              " terms, at most 3 allowed");
      }
      inst.f2.push_back(std::move(vars));
    }
    return inst;
  }

  StructuredPoly to_structured() const {
    StructuredPoly sp;
    sp.shape = Shape::Product;
    sp.var_names = var_names;
    sp.first = f1;
    for (const auto& g : f2) {
      Clause c;
      for (u32 v : g) c.terms.push_back(Monomial::var(v));
      sp.second.push_back(std::move(c));
    }
    return sp;
  }
};

inline Clause single_var_clause(const std::vector<u32>& vars) {
  Clause c;
  for (u32 v : vars) c.terms.push_back(Monomial::var(v));
  return c;
}

namespace detail {

struct BbState {
  std::size_t leaves = 0;
  std::size_t pruned = 0;
  std::size_t base_calls = 0;
  std::optional<std::string> witness;
  const std::vector<std::string>* names = nullptr;
};

inline bool bb_rec(std::vector<Clause>& f1, std::vector<std::vector<u32>> gs, BbState& st) {
  if (gs.empty()) {
    ++st.leaves;
    ++st.base_calls;
    BaseCaseResult r = base_case_sigma2(f1);
    if (r.yes) st.witness = selection_str(f1, *r.witness, *st.names);
    return r.yes;
  }
  const std::vector<u32> g1 = gs.front();
  const u32 x = g1.front();
  gs.erase(gs.begin());
  // Branch 1: g1 does not select x. Its remaining variables form a two-term clause.
  {
    std::vector<u32> rest(g1.begin() + 1, g1.end());
    if (rest.empty()) {
      ++st.leaves;
      ++st.pruned;
    } else {
      f1.push_back(single_var_clause(rest));
      const bool yes = bb_rec(f1, gs, st);
      f1.pop_back();
      if (yes) return true;
    }
  }
  // Branch 2: g1 selects x, so no other clause of the second part may select it.
  std::vector<std::vector<u32>> reduced;
  for (const auto& g : gs) {
    std::vector<u32> h;
    for (u32 v : g)
      if (v != x) h.push_back(v);
    if (h.empty()) {
      ++st.leaves;
      ++st.pruned;
      return false;
    }
    reduced.push_back(std::move(h));
  }
  f1.push_back(single_var_clause({x}));
  const bool yes = bb_rec(f1, std::move(reduced), st);
  f1.pop_back();
  return yes;
}

}  // namespace detail

/// Exact branch and bound over the single-variable clauses: at most 2^k leaves, each
/// decided by base_case_sigma2.
inline TestReport bb_test(const ProductInstance& inst, bool timing = false) {
  const auto start = std::chrono::steady_clock::now();
  TestReport report;
  report.algorithm = "structured-bb";
  report.config = {{"m", inst.m()}, {"k", inst.k()}, {"t", inst.t()}};
  detail::BbState st;
  st.names = &inst.var_names;
  std::vector<Clause> f1 = inst.f1;
  report.answer = detail::bb_rec(f1, inst.f2, st);
  report.witness = st.witness;
  report.trials_run = 1;
  report.counters["explored"] = st.leaves;
  report.counters["pruned"] = st.pruned;
  report.counters["base_calls"] = st.base_calls;
  if (timing) report.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

/// F1 times the second-part clauses with variable drop[j] removed from clause j
/// (clauses with fewer than three variables are kept whole).
inline std::vector<Clause> narrowed_instance(const ProductInstance& inst, const std::vector<std::size_t>& drop) {
  std::vector<Clause> out = inst.f1;
  for (std::size_t j = 0; j < inst.f2.size(); ++j) {
    const auto& g = inst.f2[j];
    if (g.size() < 3) {
      out.push_back(single_var_clause(g));
      continue;
    }
    std::vector<u32> keep;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (i != drop.at(j)) keep.push_back(g[i]);
    out.push_back(single_var_clause(keep));
  }
  return out;
}

/// ceil(1.5^k).
inline u64 default_narrow_reps(std::size_t k) {
  return static_cast<u64>(std::ceil(std::pow(1.5, static_cast<double>(k)) - 1e-9));
}

struct NarrowConfig {
  u64 reps = 0;  // 0 selects default_narrow_reps(k)
  u64 seed = 0;
  unsigned threads = 1;
  bool timing = false;
};

/// Randomized one-sided tester: each repetition keeps two of the three variables of
/// every second-part clause, uniformly, and runs the two-term base case.
inline TestReport narrow_test(const ProductInstance& inst, const NarrowConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const u64 reps = cfg.reps ? cfg.reps : default_narrow_reps(inst.k());
  TestReport report;
  report.algorithm = "structured-rand";
  report.config = {{"m", inst.m()}, {"k", inst.k()}, {"t", inst.t()}, {"reps", reps}, {"seed", cfg.seed}};
  struct Outcome {
    bool yes = false;
    u64 seed = 0;
    u64 micros = 0;
    std::optional<std::string> witness;
  };
  auto run = [&](u64 r) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    o.seed = CounterRng::derive(cfg.seed, r);
    CounterRng rng(o.seed);
    std::vector<std::size_t> drop(inst.f2.size(), 0);
    for (std::size_t j = 0; j < inst.f2.size(); ++j)
      if (inst.f2[j].size() == 3) drop[j] = static_cast<std::size_t>(rng.uniform(3));
    const std::vector<Clause> clauses = narrowed_instance(inst, drop);
    BaseCaseResult b = base_case_sigma2(clauses);
    o.yes = b.yes;
    if (b.yes) o.witness = selection_str(clauses, *b.witness, inst.var_names);
    o.micros = static_cast<u64>(std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - t0).count());
    return o;
  };
  auto outcomes = run_trials(reps, cfg.threads, true, run);
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    TrialOutcome to{outcomes[r].seed, outcomes[r].yes, std::nullopt};
    if (cfg.timing) to.micros = outcomes[r].micros;
    report.per_trial.push_back(to);
    if (outcomes[r].yes && !report.answer) {
      report.answer = true;
      report.witness = outcomes[r].witness;
    }
  }
  report.trials_run = outcomes.size();
  if (cfg.timing) report.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

/// base_case_sigma2 packaged as a report.
inline TestReport base_case_report(const StructuredPoly& sp) {
  TestReport report;
  report.algorithm = "sigma2-base";
  validate_shape(sp, 2, ~0ULL);
  std::vector<Clause> clauses;
  for (const Clause* c : sp.clauses()) clauses.push_back(*c);
  report.config = {{"m", clauses.size()}, {"t", sp.t()}};
  BaseCaseResult r = base_case_sigma2(clauses);
  report.answer = r.yes;
  report.trials_run = 1;
  report.counters["implications"] = r.implications;
  if (r.witness) report.witness = selection_str(clauses, *r.witness, sp.var_names);
  return report;
}

}  // namespace montest

namespace montest {

/// Exhaustive search over one term per clause for a multilinear product.
/// Used as the reference for the structured testers.
inline std::optional<Selection> selection_oracle(const std::vector<Clause>& clauses) {
  Selection sel(clauses.size());
  std::map<u32, std::size_t> used;
  std::function<bool(std::size_t)> rec = [&](std::size_t i) {
    if (i == clauses.size()) return true;
    for (std::size_t a = 0; a < clauses[i].terms.size(); ++a) {
      const Monomial& t = clauses[i].terms[a];
      if (!t.is_multilinear()) continue;
      bool clash = false;
      for (const auto& [v, e] : t.exps) clash = clash || used.count(v);
      if (clash) continue;
      for (const auto& [v, e] : t.exps) used[v] = i;
      sel[i] = a;
      if (rec(i + 1)) return true;
      for (const auto& [v, e] : t.exps) used.erase(v);
    }
    return false;
  };
  if (rec(0)) return sel;
  return std::nullopt;
}

inline std::vector<Clause> product_clauses(const ProductInstance& inst) {
  std::vector<Clause> out = inst.f1;
  for (const auto& g : inst.f2) out.push_back(single_var_clause(g));
  return out;
}

}  // namespace montest
