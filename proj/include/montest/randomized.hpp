#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "montest/circuit.hpp"
#include "montest/coeff_ring.hpp"
#include "montest/errors.hpp"
#include "montest/eval.hpp"
#include "montest/group_algebra.hpp"
#include "montest/parallel.hpp"
#include "montest/report.hpp"
#include "montest/rng.hpp"

namespace montest {

enum class PitMethod { Eval, ModPoly };

inline const char* pit_name(PitMethod m) { return m == PitMethod::Eval ? "eval" : "modpoly"; }

/// Algebra dimension k + ceil(log_p k) + 1.
inline u32 default_dimension(u32 p, u32 k) { return k + ceil_log(p, k) + 1; }

struct RtConfig {
  u32 p = 2;
  u32 k = 1;
  std::optional<u32> d;  // defaults to default_dimension(p, k)
  u32 trials = 20;
  PitMethod pit = PitMethod::Eval;
  Marking marking = Marking::Inputs;
  u64 seed = 0;
  ConvEngine engine = ConvEngine::Auto;
  unsigned threads = 1;
  u64 mem_bytes = 1ULL << 30;
  bool stop_on_yes = true;
  bool timing = false;

  u32 dim() const { return d ? *d : default_dimension(p, k); }
};

/// Per-variable substitution: the random vectors and their algebra elements ((p-1) v + 0).
struct Substitution {
  std::vector<GroupVector> vectors;
  std::vector<GaElem> elements;
};

/// Uniform nonzero vectors of Z_p^d, one per variable.
inline std::vector<GroupVector> sample_vectors(std::size_t n, u32 p, u32 d, CounterRng& rng) {
  const u64 nonzero = checked_pow(p, d) - 1;
  std::vector<GroupVector> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(GroupVector::from_index(p, d, 1 + rng.uniform(nonzero)));
  return out;
}

inline Substitution substitution_from_vectors(const std::vector<GroupVector>& vectors, const GaSpacePtr& space) {
  Substitution s;
  s.vectors = vectors;
  for (const GroupVector& v : vectors) s.elements.push_back(substitution_element(space, v));
  return s;
}

inline Substitution sample_substitution(std::size_t n, const GaSpacePtr& space, CounterRng& rng) {
  return substitution_from_vectors(sample_vectors(n, space->p.value(), space->d, rng), space);
}

/// Evaluate a marked circuit with x_i -> its substitution element at grade 1 and
/// y_j -> the scalar y_values[j] at grade 0. Returns the graded value.
inline GradedGa evaluate_marked(const AugmentedCircuit& ac, const Substitution& subs,
                                const std::vector<CoeffRing::Elem>& y_values, const GaSpacePtr& space, u32 k,
                                ConvEngine engine = ConvEngine::Auto) {
  if (subs.elements.size() < ac.n) throw UsageError("substitution covers fewer variables than the circuit has");
  if (y_values.size() < ac.h) throw UsageError("fewer y values than marker variables");
  GradedGaRing ring{space, k, engine};
  std::vector<GradedGa> assignment;
  assignment.reserve(ac.circuit.num_vars());
  for (std::size_t i = 0; i < ac.n; ++i) {
    check_same_space(subs.elements[i], GaElem::zero(space));
    assignment.push_back(ring.at_grade(subs.elements[i], 1));
  }
  for (std::size_t j = 0; j < ac.h; ++j) assignment.push_back(ring.at_grade(GaElem::term(space, y_values[j], GroupVector::zero(space->p.value(), space->d)), 0));
  return eval_circuit(ac.circuit, ring, assignment);
}

inline bool graded_nonzero_at(const GradedGa& g, std::size_t k) { return k < g.size() && g[k] && !g[k]->is_zero(); }

/// Bound on the y-degree of the degree-k part, used to size the evaluation field.
inline u64 y_degree_bound(const AugmentedCircuit& ac, u32 k) {
  if (ac.marking == Marking::Inputs) return k;
  return degree_bound(ac.circuit, ac.y_mask());
}

/// Smallest ell with p^ell >= 4 (D + 1).
inline std::size_t eval_field_degree(u32 p, u64 D) {
  const long double target = 4.0L * (static_cast<long double>(D) + 1.0L);
  std::size_t ell = 1;
  long double size = p;
  while (size < target) {
    size *= p;
    ++ell;
  }
  return ell;
}

/// One-sided identity test by evaluation at uniform y's in a field of size >= 4 (D + 1).
inline bool identity_test_eval(const AugmentedCircuit& ac, const Substitution& subs, u32 k,
                               const std::shared_ptr<const ExtField>& field, CounterRng& rng, u64 mem_bytes = 1ULL << 30,
                               ConvEngine engine = ConvEngine::Auto) {
  const u32 p = field->p();
  const u64 D = y_degree_bound(ac, k);
  if (field->size() < 4 * (static_cast<long double>(D) + 1)) {
    throw UsageError("field GF(" + std::to_string(p) + "^" + std::to_string(field->ell()) +
                     ") is smaller than 4(D+1) for y-degree bound D = " + std::to_string(D));
  }
  const u32 d = subs.vectors.empty() ? 1 : static_cast<u32>(subs.vectors.front().dim());
  auto space = std::make_shared<const GaSpace>(field->prime(), d, field, mem_bytes);
  std::vector<CoeffRing::Elem> ys;
  for (std::size_t j = 0; j < ac.h; ++j) ys.push_back(field->random(rng));
  Substitution wide = substitution_from_vectors(subs.vectors, space);
  return graded_nonzero_at(evaluate_marked(ac, wide, ys, space, k, engine), k);
}

/// Degree of the random modulus for the polynomial-ring identity test.
inline std::size_t modpoly_degree(std::size_t s, std::size_t h) {
  return static_cast<std::size_t>(std::ceil(std::log2(6.0 * static_cast<double>(s) * static_cast<double>(h + 1)))) + 1;
}

/// Per-variable y-degree bound used as the Kronecker base minus one.
inline u64 kronecker_degree(const AugmentedCircuit& ac, u32 p) {
  if (ac.marking == Marking::Inputs) return p - 1;
  if (ac.circuit.is_formula()) return 1;
  return std::max<u64>(1, degree_bound(ac.circuit, ac.y_mask()));
}

/// One-sided identity test in (Z_p[y]/(r))[Z_p^d] for a random monic r, after the
/// Kronecker substitution y_j -> y^((D+1)^j).
inline bool identity_test_modpoly(const AugmentedCircuit& ac, const Substitution& subs, u32 k, PrimeModulus p,
                                  CounterRng& rng, u64 mem_bytes = 1ULL << 30, ConvEngine engine = ConvEngine::Auto) {
  const std::size_t delta = modpoly_degree(ac.circuit.size(), ac.h);
  auto ring = std::make_shared<const CoeffRing>(random_monic_ring(p, delta, rng));
  const u32 d = subs.vectors.empty() ? 1 : static_cast<u32>(subs.vectors.front().dim());
  auto space = std::make_shared<const GaSpace>(p, d, ring, mem_bytes);
  const u64 base = kronecker_degree(ac, p.value()) + 1;
  std::vector<CoeffRing::Elem> ys;
  CoeffRing::Elem y = ring->generator();
  for (std::size_t j = 0; j < ac.h; ++j) {
    ys.push_back(y);
    y = ring->pow(y, base);
  }
  Substitution wide = substitution_from_vectors(subs.vectors, space);
  return graded_nonzero_at(evaluate_marked(ac, wide, ys, space, k, engine), k);
}

inline nlohmann::json rt_config_json(const RtConfig& cfg) {
  return nlohmann::json{{"p", cfg.p},
                        {"k", cfg.k},
                        {"d", cfg.dim()},
                        {"trials", cfg.trials},
                        {"pit", pit_name(cfg.pit)},
                        {"marking", marking_name(cfg.marking)},
                        {"engine", engine_name(cfg.engine)},
                        {"seed", cfg.seed},
                        {"stop_on_yes", cfg.stop_on_yes}};
}

/// Inverse of rt_config_json, for replaying a run from its report.
inline RtConfig rt_config_from_json(const nlohmann::json& j) {
  RtConfig cfg;
  try {
    cfg.p = j.at("p").get<u32>();
    cfg.k = j.at("k").get<u32>();
    cfg.d = j.at("d").get<u32>();
    cfg.trials = j.at("trials").get<u32>();
    cfg.seed = j.at("seed").get<u64>();
    cfg.stop_on_yes = j.at("stop_on_yes").get<bool>();
    const std::string pit = j.at("pit"), marking = j.at("marking"), engine = j.at("engine");
    cfg.pit = pit == "modpoly" ? PitMethod::ModPoly : PitMethod::Eval;
    cfg.marking = marking == "gates" ? Marking::MulGates : Marking::Inputs;
    cfg.engine = engine == "naive" ? ConvEngine::Naive : engine == "transform" ? ConvEngine::Transform : ConvEngine::Auto;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("report config is incomplete: ") + e.what());
  }
  return cfg;
}

/// Randomized test for a degree-k p-monomial. A yes is always correct.
///
/// Degrees are tracked exactly by grading the evaluation, so only degree-k monomials
/// count. With Marking::Inputs the question is about the expansion of c mod p; with
/// Marking::MulGates it is about the expansion of the marked circuit, x-part projected.
inline TestReport rt_mlm(const Circuit& c, const RtConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const PrimeModulus p(cfg.p);
  if (cfg.k == 0) throw UsageError("k must be at least 1");
  if (cfg.trials == 0) throw UsageError("trials must be at least 1");
  TestReport report;
  report.algorithm = "rt-mlm";
  report.config = rt_config_json(cfg);
  auto finish = [&] {
    if (cfg.timing) {
      report.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    return report;
  };
  if (degree_bound(c) < cfg.k) {
    report.notes.push_back("degree bound " + std::to_string(degree_bound(c)) + " is below k");
    return finish();
  }
  const AugmentedCircuit ac = augment_circuit(c, cfg.marking);
  const u32 d = cfg.dim();
  const u64 table_budget = std::max<u64>(1, cfg.mem_bytes / (8ULL * (cfg.k + 1)));
  std::shared_ptr<const ExtField> field;
  if (cfg.pit == PitMethod::Eval) {
    field = std::make_shared<const ExtField>(ext_field_make(p, eval_field_degree(cfg.p, y_degree_bound(ac, cfg.k))));
    report.config["field_modulus"] = field->modulus_str();
  }
  // Fail on an oversized instance before any thread starts.
  try {
    GaSpace::check_budget(cfg.p, d, field ? field->ell() : modpoly_degree(ac.circuit.size(), ac.h), table_budget);
  } catch (const ResourceError& e) {
    throw ResourceError(std::string(e.what()) + " (memory budget " + std::to_string(cfg.mem_bytes) + " bytes shared by 8(k+1) live tables)");
  }

  struct Outcome {
    bool yes = false;
    u64 seed = 0;
    u64 micros = 0;
    u64 work = 0;
  };
  auto trial = [&](u64 t) {
    Outcome o;
    o.seed = CounterRng::derive(cfg.seed, t);
    CounterRng rng(o.seed);
    const auto t0 = std::chrono::steady_clock::now();
    const u64 w0 = detail::work_counter();
    Substitution subs;
    subs.vectors = sample_vectors(ac.n, cfg.p, d, rng);
    o.yes = cfg.pit == PitMethod::Eval ? identity_test_eval(ac, subs, cfg.k, field, rng, table_budget, cfg.engine)
                                       : identity_test_modpoly(ac, subs, cfg.k, p, rng, table_budget, cfg.engine);
    o.work = detail::work_counter() - w0;
    o.micros = static_cast<u64>(std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - t0).count());
    return o;
  };
  auto outcomes = run_trials(cfg.trials, cfg.threads, cfg.stop_on_yes, trial);
  u64 work = 0;
  for (std::size_t t = 0; t < outcomes.size(); ++t) {
    const Outcome& o = outcomes[t];
    TrialOutcome to{o.seed, o.yes, std::nullopt};
    if (cfg.timing) to.micros = o.micros;
    report.per_trial.push_back(to);
    work += o.work;
    if (o.yes && !report.answer) {
      report.answer = true;
      report.witness = "trial " + std::to_string(t) + " found a nonzero degree-" + std::to_string(cfg.k) + " coefficient";
    }
  }
  report.trials_run = outcomes.size();
  report.counters["coeff_ops"] = work;
  report.counters["h"] = ac.h;
  report.counters["gates"] = c.size();
  return finish();
}

}  // namespace montest
