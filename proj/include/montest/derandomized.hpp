#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <vector>

#include "montest/abp.hpp"
#include "montest/circuit.hpp"
#include "montest/errors.hpp"
#include "montest/parallel.hpp"
#include "montest/phf.hpp"
#include "montest/report.hpp"

namespace montest {

struct DtConfig {
  u32 p = 2;
  u32 k = 1;
  unsigned threads = 1;
  bool timing = false;
  std::string phf_cache;  // directory; empty disables caching
};

/// Deterministic test on formulas: for each coloring tau of a perfect hash family,
/// substitute x_i -> ((p-1) e_{tau(i)} + 0) in Z_p[Z_p^k], keep the mul-gate markers
/// y as noncommuting letters, and identity-test every degree-k coordinate polynomial.
inline TestReport dt_mlm(const Circuit& f, const DtConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const PrimeModulus p(cfg.p);
  if (cfg.k == 0) throw UsageError("k must be at least 1");
  if (!f.is_formula()) {
    throw UsageError("the deterministic tester needs a formula (every gate fan-out <= 1); use the randomized tester (--mode rand) for circuits");
  }
  TestReport report;
  report.algorithm = "dt-mlm";
  report.config = {{"p", cfg.p}, {"k", cfg.k}, {"marking", "gates"}};
  auto finish = [&] {
    if (cfg.timing) report.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return report;
  };
  if (degree_bound(f) < cfg.k) {
    report.notes.push_back("degree bound " + std::to_string(degree_bound(f)) + " is below k");
    return finish();
  }
  const AugmentedCircuit ac = augment_circuit(f, Marking::MulGates);
  const PerfectHashFamily fam = cached_phf(ac.n, cfg.k, cfg.phf_cache);
  report.counters["phf_size"] = fam.size();
  report.counters["h"] = ac.h;

  struct Outcome {
    bool yes = false;
    u64 micros = 0;
    u64 vertices = 0;
    u64 max_rank = 0;
  };
  auto run = [&](u64 t) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    const Abp abp = expanded_abp(ac, fam.functions[t], p, cfg.k);
    RsStats st;
    o.yes = rs_identity_test(abp, &st);
    o.vertices = abp.vertices;
    o.max_rank = st.max_rank;
    o.micros = static_cast<u64>(std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - t0).count());
    return o;
  };
  auto outcomes = run_trials(fam.size(), cfg.threads, true, run);
  u64 max_rank = 0;
  for (std::size_t t = 0; t < outcomes.size(); ++t) {
    TrialOutcome to{t, outcomes[t].yes, std::nullopt};
    if (cfg.timing) to.micros = outcomes[t].micros;
    report.per_trial.push_back(to);
    max_rank = std::max(max_rank, outcomes[t].max_rank);
    report.counters["abp_vertices"] = outcomes[t].vertices;
    if (outcomes[t].yes && !report.answer) {
      report.answer = true;
      report.witness = "coloring " + std::to_string(t) + " gives a nonzero coordinate polynomial";
    }
  }
  report.trials_run = outcomes.size();
  report.counters["max_rank"] = max_rank;
  return finish();
}

}  // namespace montest
