// montest: command-line front end for the monomial testers.
//
// Exit codes: 0 = yes, 1 = no, 2 = error. Generators (kclique-gen, gen-corpus) and
// bench exit 0 on success.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "montest/montest.hpp"

namespace fs = std::filesystem;
using namespace montest;

namespace {

struct Options {
  std::string input;
  u32 p = 0;  // 0: subcommand default
  u32 k = 0;
  u32 c = 1;
  std::string mode;
  std::string pit = "eval";
  std::string marking;
  std::string engine = "auto";
  u32 trials = 20;
  std::string reps = "auto";
  std::optional<u64> seed;
  std::string format = "text";
  unsigned threads = 1;
  u64 mem_mb = 1024;
  std::string output;
  bool timing = false;
  std::string phf_cache;
  std::string clique;
  bool structured = false;
  std::size_t cap = kDefaultExpansionCap;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const Options& o, const std::string& text) {
  if (o.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(o.output, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + o.output + "'");
  out << text;
}

/// Flag wins over MONOMIAL_SEED, which wins over entropy.
u64 resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("MONOMIAL_SEED")) {
    try {
      std::size_t used = 0;
      const u64 v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("MONOMIAL_SEED is not an unsigned integer: '") + env + "'");
  }
  std::random_device rd;
  return (static_cast<u64>(rd()) << 32) ^ rd();
}

Marking parse_marking(const std::string& s) {
  if (s == "inputs") return Marking::Inputs;
  if (s == "gates") return Marking::MulGates;
  throw UsageError("--marking must be inputs or gates");
}

ConvEngine parse_engine(const std::string& s) {
  if (s == "auto") return ConvEngine::Auto;
  if (s == "naive") return ConvEngine::Naive;
  if (s == "transform") return ConvEngine::Transform;
  throw UsageError("--engine must be auto, naive or transform");
}

RtConfig rt_config(const Options& o, u32 p, u64 seed, Marking marking) {
  RtConfig cfg;
  cfg.p = p;
  cfg.k = o.k;
  cfg.trials = o.trials;
  cfg.pit = o.pit == "modpoly" ? PitMethod::ModPoly : PitMethod::Eval;
  if (o.pit != "eval" && o.pit != "modpoly") throw UsageError("--pit must be eval or modpoly");
  cfg.marking = marking;
  cfg.engine = parse_engine(o.engine);
  cfg.seed = seed;
  cfg.threads = o.threads;
  cfg.mem_bytes = o.mem_mb * (1ULL << 20);
  cfg.timing = o.timing;
  return cfg;
}

int emit(const Options& o, const TestReport& r) {
  if (o.format == "json") {
    write_output(o, to_json(r).dump(2) + "\n");
  } else {
    write_output(o, render_text(r));
  }
  return r.answer ? 0 : 1;
}

void require_k(const Options& o) {
  if (o.k == 0) throw UsageError("--k is required and must be >= 1");
}

/// Oracle verdict for a circuit under the semantics of the chosen marking.
TestReport circuit_oracle_report(const Circuit& c, u32 p, u32 k, Marking marking, std::size_t cap) {
  TestReport r;
  r.algorithm = "expansion-oracle";
  r.config = {{"p", p}, {"k", k}, {"marking", marking_name(marking)}};
  r.trials_run = 1;
  std::optional<Monomial> w;
  if (marking == Marking::Inputs) {
    const ExpansionTable tbl = expand_oracle(c, PrimeModulus(p), cap, k);
    r.counters["monomials"] = tbl.size();
    w = has_p_monomial_oracle(tbl, PrimeModulus(p), k);
  } else {
    const AugmentedCircuit ac = augment_circuit(c, Marking::MulGates);
    const ExpansionTable tbl = expand_oracle(ac.circuit, PrimeModulus(p), cap);
    r.counters["monomials"] = tbl.size();
    w = has_projected_p_monomial_oracle(tbl, PrimeModulus(p), k, ac.x_mask());
  }
  r.answer = w.has_value();
  if (w) r.witness = w->str(c.var_names());
  return r;
}

int cmd_test_circuit(const Options& o) {
  require_k(o);
  const Circuit c = parse_circuit(read_file(o.input));
  const u32 p = o.p ? o.p : 2;
  const std::string mode = o.mode.empty() ? "rand" : o.mode;
  const Marking marking = parse_marking(o.marking.empty() ? "inputs" : o.marking);
  if (mode == "rand") {
    const u64 seed = resolve_seed(o);
    return emit(o, rt_mlm(c, rt_config(o, p, seed, marking)));
  }
  if (mode == "det") {
    if (!c.is_formula()) {
      throw UsageError("--mode det needs a formula (every gate used at most once); this circuit shares gates, use --mode rand");
    }
    DtConfig cfg{p, o.k, o.threads, o.timing, o.phf_cache};
    return emit(o, dt_mlm(c, cfg));
  }
  if (mode == "oracle") {
    const u64 seed = resolve_seed(o);
    TestReport oracle = circuit_oracle_report(c, p, o.k, marking, o.cap);
    TestReport tester = rt_mlm(c, rt_config(o, p, seed, marking));
    TestReport both = oracle;
    both.algorithm = "oracle+rt-mlm";
    both.config["tester"] = to_json(tester);
    both.notes.push_back(std::string("oracle: ") + (oracle.answer ? "yes" : "no") + "  tester: " + (tester.answer ? "yes" : "no") +
                         (oracle.answer == tester.answer ? "  (agree)" : "  (DISAGREE)"));
    return emit(o, both);
  }
  throw UsageError("test-circuit supports --mode rand, det or oracle");
}

int cmd_test_structured(const Options& o) {
  const StructuredPoly sp = parse_structured(read_file(o.input));
  const std::string mode = o.mode.empty() ? "structured-bb" : o.mode;
  if (mode == "oracle") {
    std::vector<Clause> clauses;
    for (const Clause* c : sp.clauses()) clauses.push_back(*c);
    TestReport r;
    r.algorithm = "selection-oracle";
    r.trials_run = 1;
    r.config = {{"m", clauses.size()}, {"shape", shape_name(sp.shape)}};
    auto sel = selection_oracle(clauses);
    r.answer = sel.has_value();
    if (sel) r.witness = selection_str(clauses, *sel, sp.var_names);
    return emit(o, r);
  }
  if (mode != "structured-bb" && mode != "structured-rand") {
    throw UsageError("test-structured supports --mode structured-bb, structured-rand or oracle");
  }
  if (sp.shape != Shape::Product) return emit(o, base_case_report(sp));
  const ProductInstance inst = ProductInstance::from(sp);
  if (mode == "structured-bb") return emit(o, bb_test(inst, o.timing));
  NarrowConfig cfg;
  if (o.reps != "auto") {
    try {
      std::size_t used = 0;
      cfg.reps = std::stoull(o.reps, &used);
      if (used != o.reps.size() || cfg.reps == 0) throw std::invalid_argument("reps");
    } catch (const std::exception&) {
      throw UsageError("--reps must be a positive integer or 'auto'");
    }
  }
  cfg.seed = resolve_seed(o);
  cfg.threads = o.threads;
  cfg.timing = o.timing;
  return emit(o, narrow_test(inst, cfg));
}

int cmd_kpath(const Options& o) {
  require_k(o);
  const Graph g = parse_graph(read_file(o.input));
  const Circuit c = encode_kpath(g, o.k, o.c);
  const std::string mode = o.mode.empty() ? "rand" : o.mode;
  if (mode == "oracle") {
    TestReport r;
    r.algorithm = "path-oracle";
    r.trials_run = 1;
    r.config = {{"k", o.k}, {"c", o.c}, {"oracle_p", o.p ? o.p : 101}};
    r.answer = path_oracle(g, o.k);
    if (o.c == 1) {
      const ExpansionTable tbl = expand_oracle(c, PrimeModulus(o.p ? o.p : 101), o.cap, o.k);
      const bool expansion = has_p_monomial_oracle(tbl, PrimeModulus(2), o.k).has_value();
      r.notes.push_back(std::string("expansion has a multilinear degree-k monomial: ") + (expansion ? "yes" : "no"));
    }
    return emit(o, r);
  }
  if (mode != "rand") throw UsageError("kpath supports --mode rand or oracle (the path circuit shares gates, so det does not apply)");
  const u64 seed = resolve_seed(o);
  RtConfig cfg = rt_config(o, o.p ? o.p : 2, seed, parse_marking(o.marking.empty() ? "gates" : o.marking));
  cfg.k = o.k * o.c;
  TestReport r = rt_mlm(c, cfg);
  r.algorithm = "kpath/rt-mlm";
  r.config["graph_k"] = o.k;
  r.config["c"] = o.c;
  return emit(o, r);
}

int cmd_kclique_gen(const Options& o) {
  require_k(o);
  const Graph g = parse_graph(read_file(o.input));
  const std::string text = serialize_circuit(encode_kclique(g, o.k));
  write_output(o, text);
  return 0;
}

std::vector<u32> parse_vertex_list(const std::string& s) {
  std::vector<u32> out;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      out.push_back(static_cast<u32>(std::stoul(tok)));
    } catch (const std::exception&) {
      throw UsageError("--clique expects comma-separated vertex numbers");
    }
  }
  return out;
}

int cmd_oracle(const Options& o) {
  const bool structured = o.structured || fs::path(o.input).extension() == ".poly";
  if (structured) {
    Options so = o;
    so.mode = "oracle";
    return cmd_test_structured(so);
  }
  const Circuit c = parse_circuit(read_file(o.input));
  // Clique monomials carry multiplicities (6 for a triangle) that vanish mod small p.
  const u32 p = o.p ? o.p : (o.clique.empty() ? 2 : 101);
  const ExpansionTable tbl = expand_oracle(c, PrimeModulus(p), o.cap);
  TestReport r;
  r.algorithm = "expansion-oracle";
  r.trials_run = 1;
  r.config = {{"p", p}, {"k", o.k}};
  r.counters["monomials"] = tbl.size();
  if (!o.clique.empty()) {
    const std::vector<u32> vs = parse_vertex_list(o.clique);
    r.answer = clique_monomial_check(tbl, c, vs);
    r.config["clique"] = vs;
    r.witness = std::string("clique monomial ") + (r.answer ? "present" : "absent");
  } else {
    require_k(o);
    auto w = has_p_monomial_oracle(tbl, PrimeModulus(p), o.k);
    r.answer = w.has_value();
    if (w) r.witness = w->str(c.var_names());
  }
  std::size_t listed = 0;
  for (const auto& [m, coef] : tbl.entries) {
    if (++listed > 50) {
      r.notes.push_back("... " + std::to_string(tbl.size() - 50) + " more monomials");
      break;
    }
    r.notes.push_back(std::to_string(coef) + " * " + m.str(c.var_names()));
  }
  return emit(o, r);
}

// ---------------------------------------------------------------- bench

struct Directive {
  u32 k = 0;
  u32 p = 2;
};

Directive read_directive(const std::string& text) {
  static const std::regex re(R"(#\s*montest:\s*k=(\d+)\s+p=(\d+))");
  std::smatch m;
  if (!std::regex_search(text, m, re)) throw ParseError("missing '# montest: k=<k> p=<p>' directive", 1);
  return {static_cast<u32>(std::stoul(m[1])), static_cast<u32>(std::stoul(m[2]))};
}

/// Least-squares slope of log(y) against x, as a growth base exp(slope).
std::optional<double> fit_base(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 2) return std::nullopt;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    const double ly = std::log(std::max(y, 1e-9));
    sx += x;
    sy += ly;
    sxx += x * x;
    sxy += x * ly;
  }
  const double n = static_cast<double>(pts.size());
  const double den = n * sxx - sx * sx;
  if (den == 0) return std::nullopt;
  return std::exp((n * sxy - sx * sy) / den);
}

int cmd_bench(const Options& o) {
  if (!fs::is_directory(o.input)) throw UsageError("bench needs a corpus directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(o.input))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  const u64 seed = o.seed ? *o.seed : 1;
  nlohmann::json rows = nlohmann::json::array();
  std::map<u32, std::vector<std::pair<double, double>>> rt_time, rt_norm, rt_work;
  std::vector<std::pair<double, double>> bb_nodes, bb_time, nr_time;
  bool bb_within = true;
  for (const fs::path& f : files) {
    nlohmann::json row{{"file", f.filename().string()}};
    try {
      const std::string text = read_file(f.string());
      if (f.extension() == ".circ") {
        const Directive d = read_directive(text);
        const Circuit c = parse_circuit(text);
        Options oo = o;
        oo.k = d.k;
        RtConfig cfg = rt_config(oo, d.p, seed, Marking::Inputs);
        cfg.stop_on_yes = false;
        cfg.trials = std::min<u32>(o.trials, 3);
        cfg.threads = 1;
        cfg.timing = true;
        const TestReport r = rt_mlm(c, cfg);
        const double per_trial = *r.elapsed_ms / static_cast<double>(std::max<u64>(1, r.trials_run));
        const u32 dim = default_dimension(d.p, d.k);
        const double norm = per_trial / (std::pow(static_cast<double>(d.p), dim - d.k) * static_cast<double>(c.size()));
        row.update({{"kind", "rt-mlm"}, {"k", d.k}, {"p", d.p}, {"d", dim}, {"gates", c.size()}, {"answer", r.answer ? "yes" : "no"},
                    {"ms_per_trial", per_trial}, {"coeff_ops", r.counters.at("coeff_ops")}});
        rt_time[d.p].emplace_back(d.k, per_trial);
        rt_norm[d.p].emplace_back(d.k, norm);
        rt_work[d.p].emplace_back(d.k, static_cast<double>(r.counters.at("coeff_ops")) / std::max<u64>(1, r.trials_run) /
                                           (std::pow(static_cast<double>(d.p), dim - d.k) * static_cast<double>(c.size())));
      } else if (f.extension() == ".poly") {
        const ProductInstance inst = ProductInstance::from(parse_structured(text));
        const TestReport bb = bb_test(inst, true);
        NarrowConfig nc;
        nc.seed = seed;
        nc.timing = true;
        const TestReport nr = narrow_test(inst, nc);
        const u64 explored = bb.counters.at("explored");
        bb_within = bb_within && explored <= (1ULL << inst.k());
        row.update({{"kind", "structured"}, {"k", inst.k()}, {"m", inst.m()}, {"answer", bb.answer ? "yes" : "no"},
                    {"explored", explored}, {"bound", 1ULL << inst.k()}, {"bb_ms", *bb.elapsed_ms},
                    {"narrow_ms", *nr.elapsed_ms}, {"narrow_reps", nr.trials_run}});
        bb_nodes.emplace_back(inst.k(), static_cast<double>(explored));
        bb_time.emplace_back(inst.k(), *bb.elapsed_ms);
        nr_time.emplace_back(inst.k(), *nr.elapsed_ms);
      } else {
        continue;
      }
    } catch (const std::exception& e) {
      row["error"] = e.what();
    }
    rows.push_back(std::move(row));
  }
  nlohmann::json fits = nlohmann::json::object();
  auto put = [&](const std::string& key, const std::optional<double>& v) {
    if (v) fits[key] = *v;
  };
  for (const auto& [p, pts] : rt_time) {
    put("rt_time_base_p" + std::to_string(p), fit_base(pts));
    put("rt_time_base_normalized_p" + std::to_string(p), fit_base(rt_norm[p]));
    put("rt_work_base_normalized_p" + std::to_string(p), fit_base(rt_work[p]));
  }
  put("bb_explored_base", fit_base(bb_nodes));
  put("bb_time_base", fit_base(bb_time));
  put("narrow_time_base", fit_base(nr_time));
  const nlohmann::json out{{"instances", rows}, {"fits", fits}, {"bb_explored_within_2k", bb_within}, {"seed", seed}};
  write_output(o, out.dump(2) + "\n");
  return 0;
}

int cmd_gen_corpus(const Options& o) {
  fs::create_directories(o.input);
  const u64 seed = o.seed ? *o.seed : 7;
  CounterRng rng(seed);
  // Circuits of degree exactly k: a product of k sums of two or three variables.
  for (u32 p : {2u, 3u}) {
    for (u32 k = 2; k <= (p == 2 ? 6u : 4u); ++k) {
      Circuit c;
      const std::size_t n = k + 2;
      for (std::size_t i = 1; i <= n; ++i) c.variable("x" + std::to_string(i));
      std::optional<u32> acc;
      for (u32 j = 0; j < k; ++j) {
        std::vector<u32> terms;
        const std::size_t width = 2 + rng.uniform(2);
        for (std::size_t t = 0; t < width; ++t) terms.push_back(c.input_var(static_cast<u32>(rng.uniform(n))));
        const u32 sum = c.add(std::move(terms));
        acc = acc ? c.mul(*acc, sum) : sum;
      }
      c.set_output(*acc);
      std::ofstream out(fs::path(o.input) / ("rt-p" + std::to_string(p) + "-k" + std::to_string(k) + ".circ"));
      out << "# montest: k=" << k << " p=" << p << "\n" << serialize_circuit(c);
    }
  }
  for (std::size_t k = 2; k <= 12; k += 2) {
    ProductInstance inst = random_product(rng, 4, k, 3 * k + 4, 2);
    std::ofstream out(fs::path(o.input) / ("bb-k" + std::string(k < 10 ? "0" : "") + std::to_string(k) + ".poly"));
    out << serialize_structured(inst.to_structured());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"montest: decide whether a polynomial has a degree-k p-monomial"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub, bool needs_input = true) {
    if (needs_input) sub->add_option("input", o.input, "input file or directory")->required();
    sub->add_option("--p", o.p, "prime modulus");
    sub->add_option("--k", o.k, "target degree");
    sub->add_option("--mode", o.mode, "rand | det | structured-bb | structured-rand | oracle");
    sub->add_option("--pit", o.pit, "identity test for rand mode: eval | modpoly");
    sub->add_option("--marking", o.marking, "y-markers: inputs | gates");
    sub->add_option("--engine", o.engine, "group-algebra convolution: auto | naive | transform");
    sub->add_option("--trials", o.trials, "repetitions for rand mode")->check(CLI::PositiveNumber);
    sub->add_option("--reps", o.reps, "repetitions for structured-rand: N or auto");
    sub->add_option("--seed", o.seed, "random seed (default: MONOMIAL_SEED or entropy)");
    sub->add_option("--format", o.format, "text | json")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--mem-mb", o.mem_mb, "memory budget in MiB")->check(CLI::PositiveNumber);
    sub->add_option("-o,--output", o.output, "write to this file instead of stdout");
    sub->add_flag("--timing", o.timing, "include wall-clock times in reports");
    sub->add_option("--phf-cache", o.phf_cache, "directory caching perfect hash families");
    sub->add_option("--cap", o.cap, "expansion oracle monomial cap");
  };
  auto* tc = app.add_subcommand("test-circuit", "test a circuit file");
  common(tc);
  auto* ts = app.add_subcommand("test-structured", "test a structured clause-product file");
  common(ts);
  auto* kp = app.add_subcommand("kpath", "k-path test on a graph file");
  common(kp);
  kp->add_option("--c", o.c, "exponent c of the vertex variables")->check(CLI::PositiveNumber);
  auto* kc = app.add_subcommand("kclique-gen", "write the k-clique reduction circuit of a graph");
  common(kc);
  auto* orc = app.add_subcommand("oracle", "brute-force expansion of a circuit or structured file");
  common(orc);
  orc->add_option("--clique", o.clique, "check the clique monomial of these vertices, e.g. 1,2,3");
  orc->add_flag("--structured", o.structured, "treat the input as a structured clause file");
  auto* bench = app.add_subcommand("bench", "time the testers over a corpus directory");
  common(bench);
  auto* gen = app.add_subcommand("gen-corpus", "write a benchmark corpus into a directory");
  common(gen);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (tc->parsed()) return cmd_test_circuit(o);
    if (ts->parsed()) return cmd_test_structured(o);
    if (kp->parsed()) return cmd_kpath(o);
    if (kc->parsed()) return cmd_kclique_gen(o);
    if (orc->parsed()) return cmd_oracle(o);
    if (bench->parsed()) return cmd_bench(o);
    if (gen->parsed()) return cmd_gen_corpus(o);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << o.input << ": " << e.what() << '\n';
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
