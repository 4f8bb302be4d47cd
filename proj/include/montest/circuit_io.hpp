#pragma once

#include <cctype>
#include <charconv>
#include <cstddef>
#include <functional>
#include <map>
#include <queue>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "montest/circuit.hpp"
#include "montest/errors.hpp"

// Circuit text format, one statement per line, '#' starts a comment:
//
//   input <name>              variable leaf; repeating a name adds another leaf
//   const <name> = <int>      integer literal, reduced mod p when evaluated
//   add <name> = <ref> ...    one or more inputs
//   mul <name> = <ref> <ref>  exactly two inputs, left then right
//   output <ref>
//
// A reference is an explicit gate name or g<i>, the i-th gate statement (1-based).
// Explicit names take precedence. Forward references are allowed; cycles are not.

namespace montest {

namespace detail {

struct Token {
  std::string_view text;
  std::size_t column;
};

inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    if (line[i] == '=') {
      ++j;
    } else {
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '=') ++j;
    }
    out.push_back({line.substr(i, j - i), i + 1});
    i = j;
  }
  return out;
}

inline bool valid_name(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) return false;
  return true;
}

/// g<digits>, the reserved positional form; returns the 1-based index.
inline std::optional<std::size_t> positional(std::string_view s) {
  if (s.size() < 2 || s[0] != 'g') return std::nullopt;
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data() + 1, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v == 0) return std::nullopt;
  return v;
}

struct Statement {
  GateKind kind;
  std::string name;
  i64 value = 0;
  std::vector<Token> refs;
  std::vector<std::string> ref_text;
  std::size_t line;
};

}  // namespace detail

inline Circuit parse_circuit(std::string_view text) {
  using detail::Token;
  std::vector<detail::Statement> stmts;
  std::optional<std::pair<std::string, Token>> output;
  std::size_t output_line = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto toks = detail::tokenize(line);
    if (toks.empty()) continue;
    const std::string_view kw = toks[0].text;
    if (kw == "output") {
      if (toks.size() != 2) throw ParseError("output takes exactly one reference", line_no, toks[0].column);
      if (output) throw ParseError("second output statement (first on line " + std::to_string(output_line) + ")", line_no, toks[0].column);
      output.emplace(std::string(toks[1].text), toks[1]);
      output_line = line_no;
      continue;
    }
    detail::Statement st;
    st.line = line_no;
    if (kw == "input") {
      st.kind = GateKind::Input;
      if (toks.size() != 2) throw ParseError("input takes exactly one name", line_no, toks[0].column);
      if (!detail::valid_name(toks[1].text)) throw ParseError("invalid variable name '" + std::string(toks[1].text) + "'", line_no, toks[1].column);
      if (detail::positional(toks[1].text)) throw ParseError("variable name '" + std::string(toks[1].text) + "' clashes with positional gate references", line_no, toks[1].column);
      st.name = std::string(toks[1].text);
      stmts.push_back(std::move(st));
      continue;
    }
    if (kw == "const") st.kind = GateKind::Const;
    else if (kw == "add") st.kind = GateKind::Add;
    else if (kw == "mul") st.kind = GateKind::Mul;
    else throw ParseError("unknown statement '" + std::string(kw) + "'", line_no, toks[0].column);
    if (toks.size() < 3 || toks[2].text != "=") {
      const std::size_t col = toks.size() >= 3 ? toks[2].column : toks.back().column + toks.back().text.size();
      throw ParseError("expected '<name> =' after " + std::string(kw), line_no, col);
    }
    if (!detail::valid_name(toks[1].text)) throw ParseError("invalid gate name '" + std::string(toks[1].text) + "'", line_no, toks[1].column);
    st.name = std::string(toks[1].text);
    if (st.kind == GateKind::Const) {
      if (toks.size() != 4) throw ParseError("const takes exactly one integer", line_no, toks.size() > 4 ? toks[4].column : toks[2].column);
      std::string_view lit = toks[3].text;
      const char* b = lit.data();
      if (!lit.empty() && lit[0] == '+') ++b;
      auto [ptr, ec] = std::from_chars(b, lit.data() + lit.size(), st.value);
      if (ec != std::errc() || ptr != lit.data() + lit.size() || b == lit.data() + lit.size()) {
        throw ParseError("invalid integer literal '" + std::string(lit) + "'", line_no, toks[3].column);
      }
    } else {
      for (std::size_t i = 3; i < toks.size(); ++i) {
        if (toks[i].text == "=") throw ParseError("unexpected '='", line_no, toks[i].column);
        st.refs.push_back(toks[i]);
        st.ref_text.emplace_back(toks[i].text);
      }
      if (st.kind == GateKind::Add && st.refs.empty()) throw ParseError("add needs at least one input", line_no, toks[2].column);
      if (st.kind == GateKind::Mul && st.refs.size() != 2) {
        throw ParseError("mul needs exactly two inputs, got " + std::to_string(st.refs.size()), line_no, toks[2].column);
      }
    }
    stmts.push_back(std::move(st));
  }

  // Name resolution.
  std::map<std::string, std::size_t> explicit_names;
  std::map<std::string, std::size_t> input_names;
  std::map<std::string, std::size_t> input_counts;
  for (std::size_t i = 0; i < stmts.size(); ++i) {
    const auto& st = stmts[i];
    if (st.kind == GateKind::Input) {
      input_names.emplace(st.name, i);
      ++input_counts[st.name];
      continue;
    }
    if (input_names.count(st.name) || !explicit_names.emplace(st.name, i).second) {
      throw ParseError("duplicate gate name '" + st.name + "'", st.line, 0);
    }
  }
  for (std::size_t i = 0; i < stmts.size(); ++i) {
    if (stmts[i].kind != GateKind::Input) continue;
    if (explicit_names.count(stmts[i].name)) throw ParseError("gate name '" + stmts[i].name + "' is also a variable", stmts[i].line, 0);
  }
  auto resolve = [&](const std::string& ref, std::size_t line, std::size_t col) -> std::size_t {
    if (auto it = explicit_names.find(ref); it != explicit_names.end()) return it->second;
    if (auto it = input_names.find(ref); it != input_names.end()) {
      if (input_counts[ref] > 1) {
        throw ParseError("reference '" + ref + "' is ambiguous: variable has several input leaves; use g<i>", line, col);
      }
      return it->second;
    }
    if (auto idx = detail::positional(ref); idx && *idx <= stmts.size()) return *idx - 1;
    throw ParseError("reference to undefined gate '" + ref + "'", line, col);
  };

  std::vector<std::vector<std::size_t>> kids(stmts.size());
  std::vector<std::vector<std::size_t>> parents(stmts.size());
  std::vector<std::size_t> indeg(stmts.size(), 0);
  for (std::size_t i = 0; i < stmts.size(); ++i) {
    for (std::size_t r = 0; r < stmts[i].refs.size(); ++r) {
      const std::size_t c = resolve(stmts[i].ref_text[r], stmts[i].line, stmts[i].refs[r].column);
      kids[i].push_back(c);
      parents[c].push_back(i);
      ++indeg[i];
    }
  }

  // Kahn's algorithm, smallest statement index first for a stable order.
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < stmts.size(); ++i)
    if (indeg[i] == 0) ready.push(i);
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    const std::size_t i = ready.top();
    ready.pop();
    order.push_back(i);
    for (std::size_t par : parents[i])
      if (--indeg[par] == 0) ready.push(par);
  }
  if (order.size() != stmts.size()) {
    for (std::size_t i = 0; i < stmts.size(); ++i)
      if (indeg[i] != 0) throw ParseError("cycle through gate '" + stmts[i].name + "'", stmts[i].line, 0);
  }

  Circuit c;
  // Variable ids follow first appearance in the file, independent of gate order.
  for (const auto& st : stmts)
    if (st.kind == GateKind::Input) c.variable(st.name);
  std::vector<u32> id(stmts.size());
  for (std::size_t i : order) {
    const auto& st = stmts[i];
    switch (st.kind) {
      case GateKind::Input: id[i] = c.input(st.name); break;
      case GateKind::Const: id[i] = c.constant(st.value); break;
      case GateKind::Add: {
        std::vector<u32> ch;
        for (std::size_t k : kids[i]) ch.push_back(id[k]);
        id[i] = c.add(std::move(ch));
        break;
      }
      case GateKind::Mul: id[i] = c.mul(id[kids[i][0]], id[kids[i][1]]); break;
    }
  }
  if (!output) throw ParseError("missing output statement", line_no, 0);
  c.set_output(id[resolve(output->first, output_line, output->second.column)]);
  return c;
}

/// Canonical text: gates in stored order, every reference positional.
inline std::string serialize_circuit(const Circuit& c) {
  if (!c.has_output()) throw ValidationError("cannot serialize a circuit without an output gate");
  std::ostringstream out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Gate& g = c.gates()[i];
    const std::string self = "g" + std::to_string(i + 1);
    switch (g.kind) {
      case GateKind::Input: out << "input " << c.var_names()[g.var] << '\n'; break;
      case GateKind::Const: out << "const " << self << " = " << g.value << '\n'; break;
      case GateKind::Add:
        out << "add " << self << " =";
        for (u32 ch : g.children) out << " g" << ch + 1;
        out << '\n';
        break;
      case GateKind::Mul: out << "mul " << self << " = g" << g.children[0] + 1 << " g" << g.children[1] + 1 << '\n'; break;
    }
  }
  out << "output g" << c.output() + 1 << '\n';
  return out.str();
}

/// Readable expression such as "(x1 + x2) * x3". Shared subcircuits are printed once
/// per use, so this is meant for formulas and small circuits.
inline std::string circuit_to_infix(const Circuit& c) {
  std::function<std::string(u32, bool)> rec = [&](u32 id, bool in_product) -> std::string {
    const Gate& g = c.gate(id);
    switch (g.kind) {
      case GateKind::Input: return c.var_names()[g.var];
      case GateKind::Const: return g.value < 0 ? "(" + std::to_string(g.value) + ")" : std::to_string(g.value);
      case GateKind::Mul: return rec(g.children[0], true) + " * " + rec(g.children[1], true);
      case GateKind::Add: {
        std::string out;
        for (std::size_t i = 0; i < g.children.size(); ++i) out += (i ? " + " : "") + rec(g.children[i], false);
        return in_product && g.children.size() > 1 ? "(" + out + ")" : out;
      }
    }
    return {};
  };
  return rec(c.output(), false);
}

}  // namespace montest
