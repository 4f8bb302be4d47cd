#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "montest/zp.hpp"

namespace montest {

struct TrialOutcome {
  u64 seed = 0;
  bool verdict = false;
  std::optional<u64> micros;
};

/// Result of every tester: the verdict plus enough context to rerun it.
struct TestReport {
  std::string algorithm;
  bool answer = false;
  u64 trials_run = 0;
  std::vector<TrialOutcome> per_trial;
  std::optional<double> elapsed_ms;
  nlohmann::json config = nlohmann::json::object();
  std::optional<std::string> witness;
  std::map<std::string, u64> counters;
  std::vector<std::string> notes;
};

/// Keys come out sorted, so equal reports serialize to equal bytes.
inline nlohmann::json to_json(const TestReport& r) {
  nlohmann::json j;
  j["algorithm"] = r.algorithm;
  j["answer"] = r.answer ? "yes" : "no";
  j["trials"] = r.trials_run;
  nlohmann::json trials = nlohmann::json::array();
  for (const TrialOutcome& t : r.per_trial) {
    nlohmann::json e{{"seed", t.seed}, {"verdict", t.verdict ? "nonzero" : "zero"}};
    if (t.micros) e["micros"] = *t.micros;
    trials.push_back(std::move(e));
  }
  j["per_trial"] = std::move(trials);
  j["config"] = r.config;
  j["counters"] = r.counters;
  if (r.witness) j["witness"] = *r.witness;
  if (r.elapsed_ms) j["elapsed_ms"] = *r.elapsed_ms;
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

inline std::string render_text(const TestReport& r) {
  std::ostringstream out;
  out << "answer: " << (r.answer ? "yes" : "no") << '\n';
  out << "algorithm: " << r.algorithm << '\n';
  out << "trials: " << r.trials_run << '\n';
  for (auto it = r.config.begin(); it != r.config.end(); ++it) out << "config." << it.key() << ": " << it.value().dump() << '\n';
  for (const auto& [k, v] : r.counters) out << "counter." << k << ": " << v << '\n';
  if (r.witness) out << "witness: " << *r.witness << '\n';
  for (const std::string& n : r.notes) out << "note: " << n << '\n';
  if (r.elapsed_ms) out << "elapsed_ms: " << *r.elapsed_ms << '\n';
  return out.str();
}

}  // namespace montest
