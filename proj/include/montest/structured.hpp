#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "montest/circuit.hpp"
#include "montest/errors.hpp"
#include "montest/expansion.hpp"

// Structured-polynomial text format. Each non-empty line holds one clause, or several
// parenthesized clauses "(x1 + x2)(x1*x3 + x4^2)". Terms are joined by '+', variables
// inside a term by '*' (or '·'), and "^e" raises a variable to the power e >= 1.
// A line "---" ends the first factor list; the clauses after it form the second,
// single-variable list of a product instance. '#' starts a comment.

namespace montest {

enum class Shape { PiSigma, PiSigmaPi, Product };

inline const char* shape_name(Shape s) {
  switch (s) {
    case Shape::PiSigma: return "PiSigma";
    case Shape::PiSigmaPi: return "PiSigmaPi";
    default: return "Product";
  }
}

struct Clause {
  std::vector<Monomial> terms;
};

/// A product of clauses. For Shape::Product, `first` is the product-of-sums-of-products
/// part and `second` the sums-of-single-variables part; otherwise `second` is empty.
struct StructuredPoly {
  Shape shape = Shape::PiSigma;
  std::vector<std::string> var_names;
  std::vector<Clause> first;
  std::vector<Clause> second;

  u32 variable(const std::string& name) {
    for (std::size_t i = 0; i < var_names.size(); ++i)
      if (var_names[i] == name) return static_cast<u32>(i);
    var_names.push_back(name);
    return static_cast<u32>(var_names.size() - 1);
  }

  std::vector<const Clause*> clauses() const {
    std::vector<const Clause*> out;
    for (const Clause& c : first) out.push_back(&c);
    for (const Clause& c : second) out.push_back(&c);
    return out;
  }
  /// Clause count.
  std::size_t m() const noexcept { return first.size() + second.size(); }
  /// Largest number of terms in a clause.
  std::size_t s() const {
    std::size_t r = 0;
    for (const Clause* c : clauses()) r = std::max(r, c->terms.size());
    return r;
  }
  /// Largest term degree.
  u64 t() const {
    u64 r = 0;
    for (const Clause* c : clauses())
      for (const Monomial& m : c->terms) r = std::max(r, m.degree());
    return r;
  }
};

namespace detail {

inline Monomial parse_term(std::string_view term, StructuredPoly& sp, std::size_t line, std::size_t col0) {
  Monomial m;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < term.size() && std::isspace(static_cast<unsigned char>(term[i]))) ++i;
  };
  bool expect_var = true;
  for (;;) {
    skip_ws();
    if (i >= term.size()) {
      if (expect_var) throw ParseError("empty term", line, col0 + i);
      break;
    }
    if (!expect_var) {
      if (term[i] == '*') {
        ++i;
      } else if (term.substr(i, 2) == "\xC2\xB7") {
        i += 2;
      } else {
        throw ParseError(std::string("unexpected character '") + term[i] + "'", line, col0 + i);
      }
      expect_var = true;
      continue;
    }
    const std::size_t start = i;
    if (!(std::isalpha(static_cast<unsigned char>(term[i])) || term[i] == '_')) {
      throw ParseError(std::string("expected a variable name at '") + term[i] + "'", line, col0 + i);
    }
    while (i < term.size() && (std::isalnum(static_cast<unsigned char>(term[i])) || term[i] == '_' || term[i] == '.')) ++i;
    const std::string name(term.substr(start, i - start));
    u32 e = 1;
    skip_ws();
    if (i < term.size() && term[i] == '^') {
      ++i;
      skip_ws();
      const std::size_t es = i;
      while (i < term.size() && std::isdigit(static_cast<unsigned char>(term[i]))) ++i;
      auto [ptr, ec] = std::from_chars(term.data() + es, term.data() + i, e);
      if (es == i || ec != std::errc() || e == 0) throw ParseError("exponent must be a positive integer", line, col0 + es);
    }
    m = m.times(Monomial::var(sp.variable(name), e));
    expect_var = false;
  }
  return m;
}

inline Clause parse_clause(std::string_view body, StructuredPoly& sp, std::size_t line, std::size_t col0) {
  Clause c;
  std::size_t start = 0;
  for (;;) {
    std::size_t plus = body.find('+', start);
    std::string_view term = body.substr(start, plus == std::string_view::npos ? std::string_view::npos : plus - start);
    c.terms.push_back(parse_term(term, sp, line, col0 + start));
    if (plus == std::string_view::npos) break;
    start = plus + 1;
  }
  return c;
}

}  // namespace detail

inline StructuredPoly parse_structured(std::string_view text) {
  StructuredPoly sp;
  bool product = false;
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::size_t b = 0, e = line.size();
    while (b < e && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(line[e - 1]))) --e;
    if (b == e) continue;
    std::string_view content = line.substr(b, e - b);
    if (content == "---") {
      if (product) throw ParseError("second '---' separator", line_no, b + 1);
      product = true;
      continue;
    }
    auto& target = product ? sp.second : sp.first;
    if (content[0] != '(') {
      target.push_back(detail::parse_clause(content, sp, line_no, b + 1));
      continue;
    }
    std::size_t i = 0;
    while (i < content.size()) {
      if (std::isspace(static_cast<unsigned char>(content[i]))) {
        ++i;
        continue;
      }
      if (content[i] != '(') throw ParseError("expected '(' to start a clause", line_no, b + i + 1);
      const std::size_t close = content.find(')', i);
      if (close == std::string_view::npos) throw ParseError("unclosed '('", line_no, b + i + 1);
      const std::string_view inner = content.substr(i + 1, close - i - 1);
      if (inner.find('(') != std::string_view::npos) throw ParseError("nested parentheses", line_no, b + i + 2);
      target.push_back(detail::parse_clause(inner, sp, line_no, b + i + 2));
      i = close + 1;
    }
  }
  if (product) {
    sp.shape = Shape::Product;
    for (std::size_t j = 0; j < sp.second.size(); ++j)
      for (const Monomial& m : sp.second[j].terms)
        if (m.degree() != 1) throw ValidationError("clause " + std::to_string(j + 1) + " after '---' must contain single variables only");
  } else {
    bool linear = true;
    for (const Clause& c : sp.first)
      for (const Monomial& m : c.terms) linear = linear && m.degree() == 1;
    sp.shape = linear ? Shape::PiSigma : Shape::PiSigmaPi;
  }
  return sp;
}

/// Throws ValidationError unless every clause has at most s terms of degree at most t.
inline void validate_shape(const StructuredPoly& sp, std::size_t s, u64 t) {
  for (const Clause* c : sp.clauses()) {
    if (c->terms.size() > s) {
      throw ValidationError("clause has " + std::to_string(c->terms.size()) + " terms, the shape allows " + std::to_string(s));
    }
    for (const Monomial& m : c->terms)
      if (m.degree() > t) throw ValidationError("term of degree " + std::to_string(m.degree()) + " exceeds the bound " + std::to_string(t));
  }
}

namespace detail {

/// Orders x2 before x10: compare the non-digit stem, then the trailing number.
inline bool natural_less(const std::string& a, const std::string& b) {
  auto split = [](const std::string& s) {
    std::size_t i = s.size();
    while (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1]))) --i;
    const std::string digits = s.substr(i);
    return std::tuple(s.substr(0, i), digits.size(), digits);
  };
  return split(a) < split(b);
}

}  // namespace detail

/// Factors are printed in natural name order, so the text does not depend on variable ids.
inline std::string term_str(const Monomial& m, const std::vector<std::string>& names) {
  std::vector<std::pair<u32, u32>> exps = m.exps;
  std::sort(exps.begin(), exps.end(), [&](const auto& a, const auto& b) { return detail::natural_less(names.at(a.first), names.at(b.first)); });
  std::string out;
  for (const auto& [v, e] : exps) {
    if (!out.empty()) out += "*";
    out += names.at(v);
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out;
}

/// Canonical text: one clause per line, terms joined by " + ".
inline std::string serialize_structured(const StructuredPoly& sp) {
  std::ostringstream out;
  auto emit = [&](const std::vector<Clause>& list) {
    for (const Clause& c : list) {
      for (std::size_t i = 0; i < c.terms.size(); ++i) out << (i ? " + " : "") << term_str(c.terms[i], sp.var_names);
      out << '\n';
    }
  };
  emit(sp.first);
  if (sp.shape == Shape::Product) {
    out << "---\n";
    emit(sp.second);
  }
  return out.str();
}

/// Formula for the clause product. Every variable occurrence gets its own leaf.
inline Circuit structured_to_circuit(const StructuredPoly& sp) {
  Circuit c;
  for (const std::string& name : sp.var_names) c.variable(name);
  std::optional<u32> acc;
  for (const Clause* cl : sp.clauses()) {
    std::vector<u32> terms;
    for (const Monomial& m : cl->terms) {
      std::optional<u32> t;
      for (const auto& [v, e] : m.exps)
        for (u32 r = 0; r < e; ++r) {
          const u32 leaf = c.input_var(v);
          t = t ? c.mul(*t, leaf) : leaf;
        }
      terms.push_back(t ? *t : c.constant(1));
    }
    const u32 sum = terms.empty() ? c.constant(0) : c.add(std::move(terms));
    acc = acc ? c.mul(*acc, sum) : sum;
  }
  c.set_output(acc ? *acc : c.constant(1));
  return c;
}

}  // namespace montest
