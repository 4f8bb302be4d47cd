#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "montest/errors.hpp"
#include "montest/rng.hpp"
#include "montest/zp.hpp"

namespace montest {

using Coloring = std::vector<u32>;

/// Colorings [n] -> [k] such that every k-subset is colored injectively by one of them.
struct PerfectHashFamily {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<Coloring> functions;

  std::size_t size() const noexcept { return functions.size(); }
};

namespace detail {

inline bool injective_on(const Coloring& f, const std::vector<u32>& subset) {
  u64 seen = 0;
  for (u32 x : subset) {
    const u64 bit = 1ULL << f[x];
    if (seen & bit) return false;
    seen |= bit;
  }
  return true;
}

/// Calls visit(subset) for every k-subset of [n] in lexicographic order; stops early if visit returns false.
template <class F>
void for_each_subset(std::size_t n, std::size_t k, F&& visit) {
  if (k > n) return;
  std::vector<u32> s(k);
  for (std::size_t i = 0; i < k; ++i) s[i] = static_cast<u32>(i);
  for (;;) {
    if (!visit(s)) return;
    std::size_t i = k;
    while (i > 0 && s[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++s[i - 1];
    for (std::size_t j = i; j < k; ++j) s[j] = s[j - 1] + 1;
  }
}

inline u64 binomial(u64 n, u64 k) {
  if (k > n) return 0;
  long double r = 1;
  for (u64 i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  return r > 1.8e19L ? ~0ULL : static_cast<u64>(std::llround(r));
}

/// A random coloring that is injective on `subset`.
inline Coloring coloring_for(std::size_t n, std::size_t k, const std::vector<u32>& subset, CounterRng& rng) {
  Coloring f(n);
  for (u32& c : f) c = static_cast<u32>(rng.uniform(k));
  std::vector<u32> perm(k);
  for (std::size_t i = 0; i < k; ++i) perm[i] = static_cast<u32>(i);
  for (std::size_t i = k; i > 1; --i) std::swap(perm[i - 1], perm[rng.uniform(i)]);
  for (std::size_t i = 0; i < subset.size(); ++i) f[subset[i]] = perm[i];
  return f;
}

/// Greedy cover: each round keeps the candidate covering the most uncovered subsets.
/// Candidates are random colorings injective on the first uncovered subset.
inline std::vector<Coloring> greedy_cover(std::size_t n, std::size_t k, std::size_t candidates) {
  std::vector<std::vector<u32>> uncovered;
  for_each_subset(n, k, [&](const std::vector<u32>& s) {
    uncovered.push_back(s);
    return true;
  });
  CounterRng rng(CounterRng::derive(0x9af3 + n, k));
  std::vector<Coloring> family;
  while (!uncovered.empty()) {
    Coloring best;
    std::size_t best_count = 0;
    for (std::size_t c = 0; c < candidates; ++c) {
      Coloring f = coloring_for(n, k, uncovered.front(), rng);
      std::size_t count = 0;
      for (const auto& s : uncovered) count += injective_on(f, s);
      if (count > best_count) {
        best_count = count;
        best = std::move(f);
      }
    }
    std::erase_if(uncovered, [&](const std::vector<u32>& s) { return injective_on(best, s); });
    family.push_back(std::move(best));
  }
  return family;
}

/// First-fit: walk subsets in order and add a coloring whenever one is not yet covered.
inline std::vector<Coloring> first_fit_cover(std::size_t n, std::size_t k) {
  CounterRng rng(CounterRng::derive(0x51f7 + n, k));
  std::vector<Coloring> family;
  for_each_subset(n, k, [&](const std::vector<u32>& s) {
    for (auto it = family.rbegin(); it != family.rend(); ++it)
      if (injective_on(*it, s)) return true;
    family.push_back(coloring_for(n, k, s, rng));
    return true;
  });
  return family;
}

inline u64 next_prime_above(u64 x) {
  u64 q = x + 1;
  while (!is_prime_u64(q)) ++q;
  return q;
}

inline std::vector<u64> first_primes(std::size_t count) {
  std::vector<u64> out;
  for (u64 q = 2; out.size() < count; ++q)
    if (is_prime_u64(q)) out.push_back(q);
  return out;
}

inline constexpr u64 kDirectSubsetLimit = 2'000'000;
inline constexpr u64 kGreedySubsetLimit = 1'000;

}  // namespace detail

/// Separating family for k-subsets of [n].
///
/// n <= k: the identity coloring. Small instances: a direct greedy cover. Otherwise a
/// composition [n] -> [Q] (x mod a small prime, used when it shrinks the range) ->
/// [k^2] (x -> (a x mod q) mod k^2) -> [k] (greedy family on k^2 points). Each stage
/// is injective on every k-subset for some member, so the composed family is too.
inline PerfectHashFamily build_phf(std::size_t n, std::size_t k) {
  if (k == 0) throw UsageError("build_phf needs k >= 1");
  if (k > 64) throw ResourceError("perfect hash families are limited to k <= 64");
  PerfectHashFamily fam{n, k, {}};
  if (n <= k) {
    Coloring id(n);
    for (std::size_t i = 0; i < n; ++i) id[i] = static_cast<u32>(i);
    fam.functions.push_back(std::move(id));
    return fam;
  }
  if (k == 1) {
    fam.functions.push_back(Coloring(n, 0));
    return fam;
  }
  const u64 subsets = detail::binomial(n, k);
  if (subsets <= detail::kGreedySubsetLimit) {
    fam.functions = detail::greedy_cover(n, k, 64);
    return fam;
  }
  if (subsets <= detail::kDirectSubsetLimit) {
    fam.functions = detail::first_fit_cover(n, k);
    return fam;
  }
  const std::size_t m = k * k;
  if (detail::binomial(m, k) > detail::kDirectSubsetLimit) {
    throw ResourceError("no perfect hash family construction for n=" + std::to_string(n) + ", k=" + std::to_string(k));
  }
  const std::vector<Coloring> last = detail::binomial(m, k) <= detail::kGreedySubsetLimit ? detail::greedy_cover(m, k, 64)
                                                                                           : detail::first_fit_cover(m, k);
  // Stage 1: x -> x mod r over enough primes r that some prime divides no pairwise difference.
  std::vector<std::vector<u64>> stage1;
  const std::size_t log2n = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n))));
  const auto primes = detail::first_primes(k * (k - 1) / 2 * log2n + 1);
  const u64 reduced = primes.back();
  if (reduced < n) {
    for (u64 r : primes) {
      std::vector<u64> f(n);
      for (std::size_t x = 0; x < n; ++x) f[x] = x % r;
      stage1.push_back(std::move(f));
    }
  } else {
    std::vector<u64> id(n);
    for (std::size_t x = 0; x < n; ++x) id[x] = x;
    stage1.push_back(std::move(id));
  }
  const u64 range = reduced < n ? reduced : n;
  const u64 q = detail::next_prime_above(range);
  const long double total = static_cast<long double>(stage1.size()) * (q - 1) * last.size() * n;
  if (total > 4e8L) {
    throw ResourceError("perfect hash family for n=" + std::to_string(n) + ", k=" + std::to_string(k) + " is too large to materialize");
  }
  std::set<Coloring> seen;
  for (const auto& f1 : stage1) {
    for (u64 a = 1; a < q; ++a) {
      for (const Coloring& g : last) {
        Coloring f(n);
        for (std::size_t x = 0; x < n; ++x) f[x] = g[(a * f1[x] % q) % m];
        if (seen.insert(f).second) fam.functions.push_back(std::move(f));
      }
    }
  }
  return fam;
}

/// Number of k-subsets of [n] that no member colors injectively (0 for a valid family).
inline u64 count_uncovered(const PerfectHashFamily& fam) {
  u64 bad = 0;
  detail::for_each_subset(fam.n, fam.k, [&](const std::vector<u32>& s) {
    bool ok = false;
    for (const Coloring& f : fam.functions)
      if (detail::injective_on(f, s)) {
        ok = true;
        break;
      }
    bad += !ok;
    return true;
  });
  return bad;
}

/// One coloring per line, colors separated by single spaces.
inline std::string serialize_phf(const PerfectHashFamily& fam) {
  std::ostringstream out;
  for (const Coloring& f : fam.functions) {
    for (std::size_t i = 0; i < f.size(); ++i) out << (i ? " " : "") << f[i];
    out << '\n';
  }
  return out.str();
}

inline PerfectHashFamily parse_phf(const std::string& text, std::size_t n, std::size_t k) {
  PerfectHashFamily fam{n, k, {}};
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    Coloring f;
    long long c;
    while (ls >> c) {
      if (c < 0 || static_cast<std::size_t>(c) >= k) {
        throw ParseError("color " + std::to_string(c) + " out of range", line_no);
      }
      f.push_back(static_cast<u32>(c));
    }
    if (!ls.eof()) throw ParseError("non-numeric color", line_no);
    if (f.size() != n) throw ParseError("coloring has " + std::to_string(f.size()) + " entries, expected " + std::to_string(n), line_no);
    fam.functions.push_back(std::move(f));
  }
  return fam;
}

inline std::string phf_cache_name(std::size_t n, std::size_t k) {
  return "phf-n" + std::to_string(n) + "-k" + std::to_string(k) + ".txt";
}

/// build_phf through a cache directory; an empty dir disables caching.
/// A cached family is re-verified when C(n,k) is small enough to enumerate.
inline PerfectHashFamily cached_phf(std::size_t n, std::size_t k, const std::string& dir) {
  if (dir.empty()) return build_phf(n, k);
  const std::string path = dir + "/" + phf_cache_name(n, k);
  if (std::ifstream in(path); in) {
    std::stringstream buf;
    buf << in.rdbuf();
    PerfectHashFamily fam = parse_phf(buf.str(), n, k);
    if (detail::binomial(n, k) > detail::kDirectSubsetLimit || count_uncovered(fam) == 0) return fam;
  }
  PerfectHashFamily fam = build_phf(n, k);
  if (std::ofstream out(path); out) out << serialize_phf(fam);
  return fam;
}

}  // namespace montest
