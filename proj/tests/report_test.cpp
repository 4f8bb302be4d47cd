#include <gtest/gtest.h>

#include <fstream>

#include "oracles.hpp"

using namespace montest;

namespace {

Circuit mixed() {
  std::ifstream in(MONTEST_DEMO_DIR "/mixed.circ");
  return parse_circuit(std::string(std::istreambuf_iterator<char>(in), {}));
}

nlohmann::json schema() {
  std::ifstream in(MONTEST_SCHEMA_PATH);
  return nlohmann::json::parse(in);
}

std::vector<TestReport> sample_reports() {
  const Circuit c = mixed();
  std::vector<TestReport> out;
  RtConfig rc;
  rc.p = 3;
  rc.k = 3;
  rc.seed = 17;
  out.push_back(rt_mlm(c, rc));
  rc.timing = true;
  rc.pit = PitMethod::ModPoly;
  out.push_back(rt_mlm(c, rc));
  DtConfig dc;
  dc.k = 2;
  out.push_back(dt_mlm(parse_circuit("input x1\ninput x2\nmul g3 = g1 g2\noutput g3\n"), dc));
  const ProductInstance inst = ProductInstance::from(parse_structured("(x4 + x5)\n---\n(x1 + x2 + x3)\n"));
  out.push_back(bb_test(inst, true));
  NarrowConfig nc;
  nc.seed = 3;
  out.push_back(narrow_test(inst, nc));
  return out;
}

}  // namespace

TEST(Report, JsonKeysFollowSchema) {
  const nlohmann::json s = schema();
  std::set<std::string> allowed, required;
  for (auto it = s["properties"].begin(); it != s["properties"].end(); ++it) allowed.insert(it.key());
  for (const auto& r : s["required"]) required.insert(r.get<std::string>());
  for (const TestReport& r : sample_reports()) {
    const nlohmann::json j = to_json(r);
    for (auto it = j.begin(); it != j.end(); ++it) EXPECT_TRUE(allowed.count(it.key())) << it.key();
    for (const std::string& key : required) EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_TRUE(j["answer"] == "yes" || j["answer"] == "no");
    for (const auto& t : j["per_trial"]) {
      EXPECT_TRUE(t.contains("seed"));
      EXPECT_TRUE(t["verdict"] == "zero" || t["verdict"] == "nonzero");
    }
  }
}

TEST(Report, AnswerIsYesIffSomeTrialNonzero) {
  for (const TestReport& r : sample_reports()) {
    if (r.per_trial.empty()) continue;
    bool any = false;
    for (const TrialOutcome& t : r.per_trial) any = any || t.verdict;
    EXPECT_EQ(r.answer, any) << r.algorithm;
    EXPECT_EQ(r.trials_run, r.per_trial.size());
  }
}

TEST(Report, TimingOmittedUnlessRequested) {
  const auto reports = sample_reports();
  const nlohmann::json plain = to_json(reports[0]);
  EXPECT_FALSE(plain.contains("elapsed_ms"));
  for (const auto& t : plain["per_trial"]) EXPECT_FALSE(t.contains("micros"));
  const nlohmann::json timed = to_json(reports[1]);
  EXPECT_TRUE(timed.contains("elapsed_ms"));
  for (const auto& t : timed["per_trial"]) EXPECT_TRUE(t.contains("micros"));
  EXPECT_TRUE(to_json(reports[3]).contains("elapsed_ms"));
}

TEST(Report, TextRendering) {
  TestReport r;
  r.algorithm = "rt-mlm";
  r.answer = true;
  r.trials_run = 2;
  r.config = {{"p", 2}, {"k", 2}};
  r.counters["work"] = 12;
  r.witness = "trial 1";
  r.notes.push_back("padded");
  EXPECT_EQ(render_text(r),
            "answer: yes\nalgorithm: rt-mlm\ntrials: 2\nconfig.k: 2\nconfig.p: 2\ncounter.work: 12\n"
            "witness: trial 1\nnote: padded\n");
}

TEST(Report, JsonIsSortedAndStable) {
  const std::string a = to_json(sample_reports()[0]).dump();
  EXPECT_EQ(a, to_json(sample_reports()[0]).dump());
  EXPECT_LT(a.find("\"algorithm\""), a.find("\"answer\""));
  EXPECT_LT(a.find("\"answer\""), a.find("\"config\""));
}

TEST(Report, ReplayFromEmbeddedConfigIsByteIdentical) {
  CounterRng rng(2718);
  for (int t = 0; t < 60; ++t) {
    CircuitShape s;
    s.n = 1 + rng.uniform(5);
    s.gates = 1 + rng.uniform(12);
    s.max_degree = 1 + static_cast<u32>(rng.uniform(4));
    s.p = t % 2 ? 3 : 2;
    const Circuit c = random_circuit(rng, s);
    RtConfig cfg;
    cfg.p = s.p;
    cfg.k = 1 + static_cast<u32>(rng.uniform(3));
    cfg.seed = rng.next();
    cfg.pit = t % 3 ? PitMethod::Eval : PitMethod::ModPoly;
    cfg.marking = t % 4 ? Marking::Inputs : Marking::MulGates;
    const std::string first = to_json(rt_mlm(c, cfg)).dump();
    const RtConfig replay = rt_config_from_json(nlohmann::json::parse(first)["config"]);
    EXPECT_EQ(to_json(rt_mlm(c, replay)).dump(), first);
  }
}

TEST(Report, IncompleteConfigIsUsageError) {
  EXPECT_THROW(rt_config_from_json(nlohmann::json{{"p", 2}}), UsageError);
}
