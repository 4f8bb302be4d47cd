// Acceptance gate: one PASS/FAIL line per criterion.
// Usage: acceptance [--criterion N]... (all criteria when none is given)

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "oracles.hpp"

using namespace montest;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- formula enumeration

struct Tree {
  bool leaf = true;
  bool mul = false;
  std::shared_ptr<Tree> left, right;
};

std::vector<std::shared_ptr<Tree>> shapes(std::size_t leaves) {
  if (leaves == 1) return {std::make_shared<Tree>()};
  std::vector<std::shared_ptr<Tree>> out;
  for (std::size_t l = 1; l < leaves; ++l)
    for (const auto& a : shapes(l))
      for (const auto& b : shapes(leaves - l)) {
        auto t = std::make_shared<Tree>();
        t->leaf = false;
        t->left = a;
        t->right = b;
        out.push_back(t);
      }
  return out;
}

// A leaf label is -1 for the constant p-1, otherwise a variable index. Variable labels
// form a restricted growth string so renamings are not repeated.
void leaf_labelings(std::size_t leaves, std::vector<int>& cur, int next_var, const std::function<void(const std::vector<int>&)>& visit) {
  if (cur.size() == leaves) {
    visit(cur);
    return;
  }
  for (int v = -1; v <= next_var && v < 4; ++v) {
    cur.push_back(v);
    leaf_labelings(leaves, cur, v == next_var ? next_var + 1 : next_var, visit);
    cur.pop_back();
  }
}

Circuit build_formula(const Tree& shape, std::size_t ops_mask, const std::vector<int>& labels, u32 p) {
  Circuit c;
  int vars = 0;
  for (int l : labels) vars = std::max(vars, l + 1);
  for (int v = 0; v < vars; ++v) c.variable("x" + std::to_string(v + 1));
  std::size_t next_leaf = 0, next_op = 0;
  std::function<u32(const Tree&)> rec = [&](const Tree& t) -> u32 {
    if (t.leaf) {
      const int l = labels[next_leaf++];
      return l < 0 ? c.constant(p - 1) : c.input_var(static_cast<u32>(l));
    }
    const bool mul = ops_mask >> next_op++ & 1;
    const u32 a = rec(*t.left), b = rec(*t.right);
    return mul ? c.mul(a, b) : c.add({a, b});
  };
  c.set_output(rec(shape));
  return c;
}

/// Every binary formula with at most max_leaves leaves (2 max_leaves - 1 gates).
void for_each_small_formula(std::size_t max_leaves, u32 p, const std::function<void(const Circuit&)>& visit) {
  for (std::size_t leaves = 1; leaves <= max_leaves; ++leaves) {
    const auto all = shapes(leaves);
    std::vector<int> cur;
    leaf_labelings(leaves, cur, 0, [&](const std::vector<int>& labels) {
      for (const auto& s : all)
        for (std::size_t mask = 0; mask < (std::size_t{1} << (leaves - 1)); ++mask) visit(build_formula(*s, mask, labels, p));
    });
  }
}

// ---------------------------------------------------------------- criteria

Outcome identity_suite() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  u64 checks = 0, failures = 0;
  for (u32 p : {2u, 3u, 5u, 7u}) {
    PrimeModulus m(p);
    for (u32 x = 0; x < p; ++x)
      for (u32 y = 0; y < p; ++y) {
        failures += m.pow(m.add(x, y), p) != m.add(m.pow(x, p), m.pow(y, p));
        failures += m.pow(m.add(m.mul(p - 1, x), y), p) != m.add(m.mul(p - 1, m.pow(x, p)), m.pow(y, p));
        checks += 2;
      }
  }
  for (u32 p : {2u, 3u, 5u})
    for (u32 d = 1; d <= 3; ++d) {
      auto sp = GaSpace::make(PrimeModulus(p), d);
      for (u64 i = 0; i < sp->size; ++i) {
        const GaElem e = substitution_element(sp, GroupVector::from_index(p, d, i));
        failures += !ga_pow(e, p, ConvEngine::Naive).is_zero();
        failures += !ga_pow(e, p, ConvEngine::Transform).is_zero();
        checks += 2;
      }
    }
  const double secs = seconds_since(t0);
  o.detail << checks << " identities, " << failures << " failures, " << secs << " s";
  o.require(failures == 0, "zero failures");
  o.require(secs < 5, "runtime < 5 s");
  return o;
}

Outcome survival_structure() {
  Outcome o;
  CounterRng rng(0x5eed04);
  u64 failures = 0, configs = 0;
  for (u32 p : {2u, 3u, 5u}) {
    int done = 0;
    while (done < 150) {
      const u32 d = 1 + static_cast<u32>(rng.uniform(4));
      const std::size_t t = 1 + rng.uniform(d);
      std::vector<GroupVector> vs;
      std::vector<u32> ms;
      for (std::size_t i = 0; i < t; ++i) {
        vs.push_back(GroupVector::from_index(p, d, 1 + rng.uniform(checked_pow(p, d) - 1)));
        ms.push_back(1 + static_cast<u32>(rng.uniform(p - 1)));
      }
      if (rank_mod_p(vs) != t) continue;
      ++done;
      ++configs;
      const SurvivalExpansion s = survival_expand(vs, ms);
      std::size_t want = 1;
      for (u32 m : ms) want *= m + 1;
      std::set<GroupVector> distinct;
      bool coefficients_nonzero = true;
      for (const auto& [c, v] : s.entries) {
        distinct.insert(v);
        coefficients_nonzero = coefficients_nonzero && c != 0;
      }
      // Cross-check against the algebra itself: multiply the factors out.
      auto sp = GaSpace::make(PrimeModulus(p), d);
      GaElem prod = GaElem::one(sp);
      for (std::size_t i = 0; i < t; ++i) prod = ga_mul(prod, ga_pow(substitution_element(sp, vs[i]), ms[i]));
      const bool ok = s.entries.size() == want && s.identity_coefficient() == 1u && distinct.size() == want && coefficients_nonzero &&
                      prod.support().size() == want && prod.at(0)[0] == 1;
      failures += !ok;
    }
  }
  o.detail << configs << " independent configurations, " << failures << " failures";
  o.require(failures == 0, "zero failures");
  return o;
}

Outcome independence_rate() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 1;
  for (u32 p : {2u, 3u})
    for (u32 k = 2; k <= 6; ++k) {
      CounterRng rng(CounterRng::derive(0x1d, p * 100 + k));
      const u32 d = default_dimension(p, k);
      int independent = 0;
      for (int t = 0; t < 10000; ++t) independent += rank_mod_p(sample_vectors(k, p, d, rng)) == k;
      const double rate = independent / 10000.0;
      worst = std::min(worst, rate);
      o.detail << "p" << p << "k" << k << "=" << rate << ' ';
      o.require(rate >= 0.75, "rate >= 0.75 at p=" + std::to_string(p) + " k=" + std::to_string(k));
    }
  const double secs = seconds_since(t0);
  o.detail << "| worst " << worst << ", " << secs << " s";
  o.require(secs < 10, "runtime < 10 s");
  return o;
}

Outcome rt_corpus() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  CounterRng rng(0xc0de4);
  int false_yes = 0, positives = 0, detected = 0, negatives = 0;
  u64 single_trials = 0, single_yes = 0;
  for (int t = 0; t < 200; ++t) {
    const u32 p = t % 2 ? 3 : 2;
    CircuitShape s;
    s.n = 1 + rng.uniform(6);
    s.gates = 2 + rng.uniform(14);
    s.max_degree = 1 + static_cast<u32>(rng.uniform(4));
    s.formula = rng.uniform(2);
    s.p = p;
    const Circuit c = random_circuit(rng, s);
    const ExpansionTable tbl = expand_oracle(c, PrimeModulus(p));
    // Aim k at a degree present in the expansion half the time so positives are common.
    u32 k = 1 + static_cast<u32>(rng.uniform(4));
    if (rng.uniform(2) && tbl.size()) {
      auto it = tbl.entries.begin();
      std::advance(it, static_cast<long>(rng.uniform(tbl.size())));
      k = std::clamp<u32>(static_cast<u32>(it->first.degree()), 1, 4);
    }
    const bool truth = has_p_monomial_oracle(tbl, PrimeModulus(p), k).has_value();
    RtConfig cfg;
    cfg.p = p;
    cfg.k = k;
    cfg.seed = CounterRng::derive(0xacce, t);
    cfg.stop_on_yes = false;
    const TestReport r = rt_mlm(c, cfg);
    if (truth) {
      ++positives;
      detected += r.answer;
      for (const TrialOutcome& tr : r.per_trial) single_yes += tr.verdict;
      single_trials += r.per_trial.size();
    } else {
      ++negatives;
      false_yes += r.answer;
    }
  }
  const double single_rate = single_trials ? static_cast<double>(single_yes) / single_trials : 0;
  const double detection = positives ? static_cast<double>(detected) / positives : 0;

  // The largest configuration the corpus reaches: p = 3, k = 4, so d = 7.
  const auto t1 = std::chrono::steady_clock::now();
  RtConfig big;
  big.p = 3;
  big.k = 4;
  big.trials = 20;
  big.stop_on_yes = false;
  big.seed = 1;
  rt_mlm(parse_circuit("input x1\ninput x2\nadd a = g1 g2\ninput x3\ninput x4\nadd b = g4 g5\nmul m = a b\n"
                       "input x5\ninput x6\nadd c = g8 g9\nmul n = m c\ninput x1\ninput x6\nadd e = g12 g13\nmul q = n e\noutput q\n"),
         big);
  const double big_secs = seconds_since(t1);

  const double secs = seconds_since(t0);
  o.detail << positives << " positives, " << negatives << " negatives, false yes " << false_yes << ", single-trial rate " << single_rate
           << ", 20-trial detection " << detection << ", p=3 k=4 d=7 20 trials " << big_secs << " s, total " << secs << " s";
  o.require(false_yes == 0, "zero false yes");
  o.require(positives >= 40 && negatives >= 40, "both classes represented");
  o.require(single_rate >= 0.5, "single-trial rate >= 0.5");
  o.require(detection >= 0.99, "20-trial detection >= 0.99");
  o.require(secs < 60, "runtime < 60 s");
  return o;
}

Outcome dt_exactness() {
  Outcome o;
  u64 formulas = 0, runs = 0, false_yes = 0, false_no = 0;
  std::string first_yes, first_no;
  for (u32 p : {2u, 3u}) {
    for_each_small_formula(5, p, [&](const Circuit& f) {
      ++formulas;
      const ExpansionTable tbl = expand_oracle(f, PrimeModulus(p));
      for (u32 k = 1; k <= 3; ++k) {
        const bool truth = has_p_monomial_oracle(tbl, PrimeModulus(p), k).has_value();
        DtConfig cfg;
        cfg.p = p;
        cfg.k = k;
        const bool got = dt_mlm(f, cfg).answer;
        ++runs;
        if (got && !truth) {
          ++false_yes;
          if (first_yes.empty()) first_yes = "p=" + std::to_string(p) + " k=" + std::to_string(k) + " " + circuit_to_infix(f);
        }
        if (!got && truth) {
          ++false_no;
          if (first_no.empty()) first_no = "p=" + std::to_string(p) + " k=" + std::to_string(k) + " " + circuit_to_infix(f);
        }
      }
    });
  }
  o.detail << formulas << " formulas, " << runs << " runs, " << false_yes << " false yes, " << false_no << " false no";
  if (!first_yes.empty()) o.detail << "; e.g. false yes " << first_yes;
  if (!first_no.empty()) o.detail << "; e.g. false no " << first_no;
  o.detail << ' ';
  o.require(false_yes + false_no == 0, "zero mismatches");
  return o;
}

Outcome phf_separation() {
  Outcome o;
  u64 families = 0, uncovered = 0, independent_uncovered = 0;
  for (std::size_t n = 1; n <= 10; ++n)
    for (std::size_t k = 1; k <= 4; ++k) {
      const PerfectHashFamily fam = build_phf(n, k);
      ++families;
      uncovered += count_uncovered(fam);
      if (k > n) continue;
      // Independent check by bitmask over every k-subset.
      for (u64 mask = 0; mask < (u64{1} << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcountll(mask)) != k) continue;
        bool hit = false;
        for (const Coloring& f : fam.functions) {
          u64 colors = 0;
          for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) colors |= u64{1} << f[i];
          hit = hit || static_cast<std::size_t>(__builtin_popcountll(colors)) == k;
        }
        independent_uncovered += !hit;
      }
    }
  o.detail << families << " families, uncovered " << uncovered << " (library count), " << independent_uncovered << " (bitmask count)";
  o.require(uncovered == 0 && independent_uncovered == 0, "zero uncovered subsets");
  return o;
}

Outcome noncommutative_pit() {
  Outcome o;
  u64 checked = 0, mismatches = 0, abp_mismatches = 0;
  auto check = [&](const Circuit& f, u32 p) {
    const auto words = oracle::words_of_formula(f, p);
    const Abp a = formula_to_abp(f, PrimeModulus(p));
    mismatches += rs_identity_test(a) != !words.empty();
    abp_mismatches += oracle::words_of_abp(a, a.sinks[0]) != words;
    ++checked;
  };
  for (u32 p : {2u, 3u}) {
    for_each_small_formula(5, p, [&](const Circuit& f) { check(f, p); });
    CounterRng rng(CounterRng::derive(0x7, p));
    int random = 0;
    while (random < 3000) {
      CircuitShape s;
      s.n = 1 + rng.uniform(4);
      s.gates = 1 + rng.uniform(12);
      s.max_degree = 1 + static_cast<u32>(rng.uniform(5));
      s.formula = true;
      s.p = p;
      const Circuit f = random_formula(rng, s);
      if (f.size() > 12) continue;
      check(f, p);
      ++random;
    }
  }
  o.detail << checked << " formulas, " << mismatches << " verdict mismatches, " << abp_mismatches << " ABP word mismatches";
  o.require(mismatches == 0 && abp_mismatches == 0, "zero mismatches");
  return o;
}

Outcome structured_testers() {
  Outcome o;
  CounterRng rng(0x57c);
  u64 base_n = 0, base_bad = 0;
  for (int t = 0; t < 600; ++t) {
    const std::size_t m = 1 + rng.uniform(15);
    const StructuredPoly sp = random_sigma2(rng, m, m + 1 + rng.uniform(2 * m + 2), 1 + rng.uniform(3));
    std::vector<Clause> cl(sp.first.begin(), sp.first.end());
    base_bad += base_case_sigma2(cl).yes != oracle::enumerate_selections(cl);
    ++base_n;
  }
  u64 bb_n = 0, bb_bad = 0, bb_over = 0;
  for (std::size_t m = 0; m <= 12; ++m)
    for (std::size_t k = 0; m + k <= 12; ++k)
      for (int rep = 0; rep < 10; ++rep) {
        const ProductInstance inst = random_product(rng, m, k, std::max<std::size_t>(3, m + k + rng.uniform(m + k + 2)), 1 + rng.uniform(2));
        const TestReport r = bb_test(inst);
        bb_bad += r.answer != oracle::enumerate_selections(product_clauses(inst));
        bb_over += r.counters.at("explored") > (u64{1} << k);
        ++bb_n;
      }
  // Narrowing: random positives plus instances where one repetition succeeds with
  // probability exactly (2/3)^k.
  int random_pos = 0, random_hit = 0, false_pos = 0, negatives = 0;
  u64 seed = 0;
  while (random_pos < 200) {
    const std::size_t k = 1 + rng.uniform(8);
    const ProductInstance inst = random_product(rng, 1 + rng.uniform(6), k, k + 3 + rng.uniform(2 * k), 2);
    const bool truth = oracle::enumerate_selections(product_clauses(inst));
    NarrowConfig cfg;
    cfg.seed = ++seed;
    const bool got = narrow_test(inst, cfg).answer;
    if (truth) {
      ++random_pos;
      random_hit += got;
    } else {
      ++negatives;
      false_pos += got;
    }
  }
  int tight_hit = 0;
  for (std::size_t k = 1; k <= 8; ++k) {
    std::string f1, f2;
    for (std::size_t j = 0; j < k; ++j) {
      const std::string id = std::to_string(j);
      f1 += "(b" + id + "*c" + id + ")\n";
      f2 += "(a" + id + " + b" + id + " + c" + id + ")\n";
    }
    const ProductInstance inst = ProductInstance::from(parse_structured(f1 + "---\n" + f2));
    for (int s = 0; s < 25; ++s) {
      NarrowConfig cfg;
      cfg.seed = CounterRng::derive(k, static_cast<u64>(s));
      tight_hit += narrow_test(inst, cfg).answer;
    }
  }
  const double random_rate = random_hit / 200.0, tight_rate = tight_hit / 200.0;
  o.detail << "base " << base_n << " instances " << base_bad << " mismatches; bb " << bb_n << " instances " << bb_bad << " mismatches "
           << bb_over << " over 2^k; narrow random positives " << random_rate << ", (2/3)^k positives " << tight_rate << ", false yes "
           << false_pos << "/" << negatives;
  o.require(base_n >= 500 && base_bad == 0, "base case equals enumeration");
  o.require(bb_bad == 0 && bb_over == 0, "bb equals enumeration within 2^k");
  o.require(random_rate >= 0.63 && tight_rate >= 0.63, "narrow success >= 0.63");
  o.require(false_pos == 0, "zero false positives");
  return o;
}

bool path_in_expansion(const Graph& g, u32 k) {
  for (const auto& [m, coef] : expand_oracle(encode_kpath(g, k), PrimeModulus(101)).entries)
    if (m.degree() == k && m.is_multilinear()) return true;
  return false;
}

bool clique_in_expansion(const Graph& g, u32 k) {
  const Circuit c = encode_kclique(g, k);
  const ExpansionTable tbl = expand_oracle(c, PrimeModulus(101));
  std::vector<u32> set;
  std::function<bool(u32)> rec = [&](u32 from) -> bool {
    if (set.size() == k) return clique_monomial_check(tbl, c, set);
    for (u32 v = from; v <= g.m; ++v) {
      set.push_back(v);
      if (rec(v + 1)) return true;
      set.pop_back();
    }
    return false;
  };
  return rec(1);
}

Outcome reductions() {
  Outcome o;
  const auto atlas = oracle::load_graph_list(MONTEST_DATA_DIR "/atlas7.txt");
  u64 labeled = 0, path_bad = 0, rt_bad = 0, rt_runs = 0, clique_bad = 0, clique_checked = 0;
  for (std::size_t n = 1; n <= 6; ++n)
    for (const Graph& g : oracle::all_labeled_graphs(n)) {
      ++labeled;
      for (u32 k = 1; k <= 4; ++k) {
        const bool dfs = path_oracle(g, k);
        path_bad += dfs != oracle::has_k_path_by_permutation(g, k) || dfs != path_in_expansion(g, k);
      }
      clique_bad += clique_in_expansion(g, 3) != clique_oracle(g, 3);
      ++clique_checked;
    }
  std::size_t atlas_used = 0;
  for (std::size_t i = 0; i < atlas.size(); ++i) {
    const Graph& g = atlas[i];
    clique_bad += clique_in_expansion(g, 3) != clique_oracle(g, 3);
    ++clique_checked;
    if (g.m > 6) continue;
    ++atlas_used;
    for (u32 k = 1; k <= 4; ++k) {
      RtConfig cfg;
      cfg.p = 2;
      cfg.k = k;
      cfg.marking = Marking::MulGates;
      cfg.seed = CounterRng::derive(i, k);
      rt_bad += rt_mlm(encode_kpath(g, k), cfg).answer != path_oracle(g, k);
      ++rt_runs;
    }
  }
  o.detail << labeled << " labeled graphs (n<=6) path mismatches " << path_bad << "; rt on " << atlas_used << " unlabeled graphs (" << rt_runs
           << " runs) mismatches " << rt_bad << "; clique checks " << clique_checked << " (labeled n<=6 plus all " << atlas.size()
           << " unlabeled n<=7) mismatches " << clique_bad;
  o.require(path_bad == 0 && rt_bad == 0 && clique_bad == 0, "zero mismatches");
  o.require(atlas.size() == 1252, "atlas complete");
  return o;
}

Outcome engine_cross_checks() {
  Outcome o;
  CounterRng rng(0xe9);
  u64 pairs = 0, conv_bad = 0;
  for (u32 p : {2u, 3u, 5u})
    for (u32 d = 1; d <= 3; ++d) {
      auto sp = GaSpace::make(PrimeModulus(p), d);
      for (int t = 0; t < 100; ++t) {
        const GaElem a = oracle::random_element(sp, rng, 1 + static_cast<u32>(rng.uniform(100)));
        const GaElem b = oracle::random_element(sp, rng, 1 + static_cast<u32>(rng.uniform(100)));
        const GaElem n = ga_mul(a, b, ConvEngine::Naive);
        conv_bad += n != ga_mul(a, b, ConvEngine::Transform) || n != oracle::brute_convolution(a, b);
        ++pairs;
      }
    }
  u64 formulas = 0, pit_bad = 0, nonzero = 0;
  while (formulas < 100) {
    const u32 p = 2 + static_cast<u32>(rng.uniform(2));
    CircuitShape s;
    s.n = 1 + rng.uniform(4);
    s.gates = 1 + rng.uniform(9);
    s.max_degree = 3;
    s.formula = true;
    s.p = p;
    const Circuit f = random_formula(rng, s);
    const u32 k = std::max<u32>(1, static_cast<u32>(std::min<u64>(degree_bound(f), 2)));
    const AugmentedCircuit ac = augment_circuit(f, Marking::MulGates);
    auto field = std::make_shared<const ExtField>(ext_field_make(PrimeModulus(p), eval_field_degree(p, y_degree_bound(ac, k))));
    Substitution subs;
    subs.vectors = sample_vectors(ac.n, p, default_dimension(p, k), rng);
    int a = 0, b = 0;
    for (int r = 0; r < 9; ++r) {
      a += identity_test_eval(ac, subs, k, field, rng);
      b += identity_test_modpoly(ac, subs, k, PrimeModulus(p), rng);
    }
    pit_bad += (a >= 5) != (b >= 5);
    nonzero += a >= 5;
    ++formulas;
  }
  o.detail << pairs << " convolution pairs, " << conv_bad << " mismatches; " << formulas << " augmented formulas (" << nonzero
           << " nonzero), " << pit_bad << " PIT disagreements";
  o.require(conv_bad == 0, "convolution engines agree");
  o.require(pit_bad == 0, "eval and modpoly agree");
  return o;
}

Outcome reproducibility() {
  Outcome o;
  CounterRng rng(0x11);
  u64 replays = 0, differ = 0;
  for (int t = 0; t < 100; ++t) {
    CircuitShape s;
    s.n = 1 + rng.uniform(5);
    s.gates = 1 + rng.uniform(12);
    s.max_degree = 1 + static_cast<u32>(rng.uniform(4));
    s.p = t % 2 ? 3 : 2;
    s.formula = t % 3 == 0;
    const Circuit c = random_circuit(rng, s);
    RtConfig cfg;
    cfg.p = s.p;
    cfg.k = 1 + static_cast<u32>(rng.uniform(3));
    cfg.seed = rng.next();
    cfg.pit = t % 4 ? PitMethod::Eval : PitMethod::ModPoly;
    cfg.marking = t % 5 ? Marking::Inputs : Marking::MulGates;
    cfg.threads = 1 + t % 3;
    const std::string first = to_json(rt_mlm(c, cfg)).dump();
    RtConfig replay = rt_config_from_json(nlohmann::json::parse(first)["config"]);
    replay.threads = 4;
    differ += to_json(rt_mlm(c, replay)).dump() != first;
    ++replays;
    if (s.formula) {
      DtConfig dc;
      dc.p = cfg.p;
      dc.k = cfg.k;
      const std::string d1 = to_json(dt_mlm(c, dc)).dump();
      dc.threads = 3;
      differ += to_json(dt_mlm(c, dc)).dump() != d1;
      ++replays;
    }
  }
  for (int t = 0; t < 50; ++t) {
    const ProductInstance inst = random_product(rng, 3, 5, 10, 2);
    NarrowConfig nc;
    nc.seed = rng.next();
    const nlohmann::json first = to_json(narrow_test(inst, nc));
    NarrowConfig again;
    again.seed = first["config"]["seed"].get<u64>();
    again.reps = first["config"]["reps"].get<u64>();
    again.threads = 2;
    differ += to_json(narrow_test(inst, again)).dump() != first.dump();
    differ += to_json(bb_test(inst)).dump() != to_json(bb_test(inst)).dump();
    replays += 2;
  }
  o.detail << replays << " replays from embedded config, " << differ << " differ";
  o.require(differ == 0, "byte-identical");
  return o;
}

struct Criterion {
  const char* title;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {"exact group-algebra identities", identity_suite},
    {"survival structure", survival_structure},
    {"independence probability", independence_rate},
    {"randomized tester vs oracle", rt_corpus},
    {"derandomized tester exactness", dt_exactness},
    {"perfect hash separation", phf_separation},
    {"noncommutative identity test", noncommutative_pit},
    {"structured testers", structured_testers},
    {"graph reductions", reductions},
    {"engine cross-checks", engine_cross_checks},
    {"reproducibility", reproducibility},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app("acceptance gate");
  std::vector<int> which;
  app.add_option("--criterion", which, "criterion number (repeatable)")->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);
  if (which.empty())
    for (int i = 1; i <= 11; ++i) which.push_back(i);
  bool all = true;
  for (int n : which) {
    const Criterion& c = kCriteria[n - 1];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    std::printf("%s criterion %d (%s): %s[%.2f s]\n", o.pass ? "PASS" : "FAIL", n, c.title, o.detail.str().c_str(), seconds_since(t0));
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
