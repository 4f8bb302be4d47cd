#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "montest/coeff_ring.hpp"
#include "montest/errors.hpp"
#include "montest/group_vector.hpp"
#include "montest/zp.hpp"

namespace montest {

enum class ConvEngine { Auto, Naive, Transform };

inline const char* engine_name(ConvEngine e) {
  switch (e) {
    case ConvEngine::Naive: return "naive";
    case ConvEngine::Transform: return "transform";
    default: return "auto";
  }
}

namespace detail {

/// Elementary coefficient operations performed by convolutions on this thread.
inline u64& work_counter() {
  thread_local u64 counter = 0;
  return counter;
}

/// Auxiliary NTT prime q = 1 + m*p above `bound`, with a primitive p-th root of unity.
struct TransformPrime {
  u64 q = 0;
  u64 omega = 0;
  u64 omega_inv = 0;
};

inline TransformPrime find_transform_prime(u32 p, u64 bound) {
  if (bound >= (1ULL << 61)) throw ResourceError("group algebra too large for the transform engine");
  TransformPrime tp;
  for (u64 m = bound / p + 1;; ++m) {
    u64 q = 1 + m * p;
    if (q <= bound || !is_prime_u64(q)) continue;
    tp.q = q;
    break;
  }
  for (u64 g = 2;; ++g) {
    u64 w = powmod64(g, (tp.q - 1) / p, tp.q);
    if (w != 1) {
      tp.omega = w;
      tp.omega_inv = powmod64(w, p - 1, tp.q);
      return tp;
    }
  }
}

}  // namespace detail

/// The group algebra R[Z_p^d] over a coefficient ring R = Z_p[y]/(r).
struct GaSpace {
  PrimeModulus p;
  u32 d;
  u64 size;  // p^d
  std::shared_ptr<const CoeffRing> ring;
  detail::TransformPrime transform;

  GaSpace(PrimeModulus p_, u32 d_, std::shared_ptr<const CoeffRing> ring_, u64 max_bytes = 1ULL << 30)
      : p(p_), d(d_), size(checked_pow(p_.value(), d_)), ring(std::move(ring_)) {
    if (d == 0) throw UsageError("group algebra dimension must be >= 1");
    if (!ring || ring->p() != p.value()) throw UsageError("coefficient ring characteristic differs from p");
    check_budget(p.value(), d, ell(), max_bytes);
    const u64 pm1 = p.value() - 1;
    transform = detail::find_transform_prime(p.value(), static_cast<u64>(ell()) * size * pm1 * pm1 + 1);
  }

  /// Throws ResourceError if one table of p^d coefficients of ell limbs exceeds max_bytes.
  static void check_budget(u32 p, u32 d, std::size_t ell, u64 max_bytes) {
    long double bytes = static_cast<long double>(ell) * sizeof(u32);
    for (u32 i = 0; i < d; ++i) bytes *= p;
    if (bytes > static_cast<long double>(max_bytes)) {
      throw ResourceError("one group-algebra table for p=" + std::to_string(p) + ", d=" + std::to_string(d) + " needs " +
                          std::to_string(static_cast<unsigned long long>(bytes)) + " bytes, over the budget of " +
                          std::to_string(max_bytes) + " bytes");
    }
  }

  static std::shared_ptr<const GaSpace> make(PrimeModulus p, u32 d, std::shared_ptr<const CoeffRing> ring = nullptr,
                                             u64 max_bytes = 1ULL << 30) {
    if (!ring) ring = std::make_shared<ExtField>(ext_field_make(p, 1));
    return std::make_shared<const GaSpace>(p, d, std::move(ring), max_bytes);
  }

  std::size_t ell() const noexcept { return ring->ell(); }

  /// Index of x*y given indices of x and y.
  u64 add_index(u64 x, u64 y) const noexcept {
    if (p.value() == 2) return x ^ y;
    u64 out = 0, w = 1;
    for (u32 i = 0; i < d; ++i) {
      u32 a = static_cast<u32>(x % p.value()), b = static_cast<u32>(y % p.value());
      u32 s = a + b;
      if (s >= p.value()) s -= p.value();
      out += s * w;
      w *= p.value();
      x /= p.value();
      y /= p.value();
    }
    return out;
  }

  bool same_as(const GaSpace& o) const noexcept {
    return this == &o || (p == o.p && d == o.d && *ring == *o.ring);
  }
};

using GaSpacePtr = std::shared_ptr<const GaSpace>;

/// Dense element of R[Z_p^d]; plane j (of ell) holds the y^j part of every coefficient.
class GroupAlgebraElement {
 public:
  using Elem = CoeffRing::Elem;

  GroupAlgebraElement() = default;
  explicit GroupAlgebraElement(GaSpacePtr space) : space_(std::move(space)), data_(space_->size * space_->ell(), 0) {}

  static GroupAlgebraElement zero(GaSpacePtr space) { return GroupAlgebraElement(std::move(space)); }
  static GroupAlgebraElement one(GaSpacePtr space) {
    GroupAlgebraElement e(std::move(space));
    e.data_[0] = 1;
    return e;
  }
  /// c * v for a single group vector v.
  static GroupAlgebraElement term(GaSpacePtr space, const Elem& c, const GroupVector& v) {
    GroupAlgebraElement e(std::move(space));
    e.set(v, c);
    return e;
  }
  static GroupAlgebraElement term(GaSpacePtr space, u32 c, const GroupVector& v) {
    Elem ce = space->ring->scalar(c);
    return term(std::move(space), ce, v);
  }

  const GaSpacePtr& space() const noexcept { return space_; }
  u64 size() const noexcept { return space_->size; }
  std::size_t ell() const noexcept { return space_->ell(); }
  const std::vector<u32>& raw() const noexcept { return data_; }
  std::vector<u32>& raw() noexcept { return data_; }

  Elem at(u64 idx) const {
    Elem c(ell());
    for (std::size_t j = 0; j < ell(); ++j) c[j] = data_[j * size() + idx];
    return c;
  }
  Elem coefficient(const GroupVector& v) const {
    check_vector(v);
    return at(v.index());
  }
  void set_at(u64 idx, const Elem& c) {
    for (std::size_t j = 0; j < ell(); ++j) data_[j * size() + idx] = c[j] % space_->p.value();
  }
  void set(const GroupVector& v, const Elem& c) {
    check_vector(v);
    set_at(v.index(), c);
  }

  bool nonzero_at(u64 idx) const noexcept {
    for (std::size_t j = 0; j < ell(); ++j)
      if (data_[j * size() + idx] != 0) return true;
    return false;
  }
  bool is_zero() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](u32 c) { return c == 0; });
  }
  std::vector<u64> support() const {
    std::vector<u64> out;
    for (u64 i = 0; i < size(); ++i)
      if (nonzero_at(i)) out.push_back(i);
    return out;
  }

  std::string str() const {
    std::string out;
    for (u64 i = 0; i < size(); ++i) {
      if (!nonzero_at(i)) continue;
      if (!out.empty()) out += " + ";
      std::string c = space_->ring->str(at(i));
      if (ell() > 1 && c.find(' ') != std::string::npos) c = "(" + c + ")";
      out += c + "*" + GroupVector::from_index(space_->p.value(), space_->d, i).str();
    }
    return out.empty() ? "0" : out;
  }

  friend bool operator==(const GroupAlgebraElement& a, const GroupAlgebraElement& b) {
    return a.space_->same_as(*b.space_) && a.data_ == b.data_;
  }

 private:
  void check_vector(const GroupVector& v) const {
    if (v.p != space_->p.value() || v.dim() != space_->d) {
      throw UsageError("group vector " + v.str() + " does not belong to Z_" + std::to_string(space_->p.value()) +
                       "^" + std::to_string(space_->d));
    }
  }

  GaSpacePtr space_;
  std::vector<u32> data_;
};

using GaElem = GroupAlgebraElement;

inline void check_same_space(const GaElem& u, const GaElem& v) {
  if (!u.space() || !v.space() || !u.space()->same_as(*v.space())) {
    throw UsageError("group algebra elements differ in p, d or coefficient ring");
  }
}

inline GaElem ga_add(const GaElem& u, const GaElem& v) {
  check_same_space(u, v);
  GaElem out = u;
  const PrimeModulus& m = u.space()->p;
  auto& o = out.raw();
  const auto& b = v.raw();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = m.add(o[i], b[i]);
  return out;
}

inline GaElem ga_sub(const GaElem& u, const GaElem& v) {
  check_same_space(u, v);
  GaElem out = u;
  const PrimeModulus& m = u.space()->p;
  auto& o = out.raw();
  const auto& b = v.raw();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = m.sub(o[i], b[i]);
  return out;
}

inline GaElem ga_scale(const CoeffRing::Elem& w, const GaElem& u) {
  const CoeffRing& ring = *u.space()->ring;
  if (w.size() != ring.ell()) throw UsageError("scalar does not belong to the coefficient ring");
  GaElem out = GaElem::zero(u.space());
  for (u64 i = 0; i < u.size(); ++i) {
    if (u.nonzero_at(i)) out.set_at(i, ring.mul(w, u.at(i)));
  }
  return out;
}

inline GaElem ga_scale(u32 w, const GaElem& u) { return ga_scale(u.space()->ring->scalar(w), u); }

namespace detail {

inline std::size_t plane_count_of_product(std::size_t ell) { return 2 * ell - 1; }

/// Naive convolution over the nonzero supports; accumulates unreduced planes.
inline void naive_accumulate(const GaElem& a, const std::vector<u64>& sa, const GaElem& b,
                             const std::vector<u64>& sb, std::vector<u64>& acc) {
  const GaSpace& sp = *a.space();
  const u64 n = sp.size;
  const std::size_t ell = sp.ell();
  const u64 p = sp.p.value();
  const bool small = p < (1u << 16);
  const auto& ad = a.raw();
  const auto& bd = b.raw();
  for (u64 x : sa) {
    for (u64 y : sb) {
      const u64 z = sp.add_index(x, y);
      for (std::size_t i = 0; i < ell; ++i) {
        const u64 ai = ad[i * n + x];
        if (ai == 0) continue;
        for (std::size_t j = 0; j < ell; ++j) {
          u64& slot = acc[(i + j) * n + z];
          slot += ai * bd[j * n + y];
          if (!small) slot %= p;
        }
      }
    }
  }
  work_counter() += static_cast<u64>(sa.size()) * sb.size() * ell * ell;
}

/// In-place d-dimensional length-p DFT mod q.
inline void dft(std::vector<u64>& v, const GaSpace& sp, bool inverse) {
  const u64 q = sp.transform.q;
  const u32 p = sp.p.value();
  const u64 w = inverse ? sp.transform.omega_inv : sp.transform.omega;
  std::vector<u64> wp(p);
  wp[0] = 1;
  for (u32 i = 1; i < p; ++i) wp[i] = mulmod64(wp[i - 1], w, q);
  std::vector<u64> in(p), out(p);
  u64 stride = 1;
  for (u32 axis = 0; axis < sp.d; ++axis) {
    const u64 block = stride * p;
    for (u64 base = 0; base < sp.size; base += block) {
      for (u64 off = 0; off < stride; ++off) {
        const u64 start = base + off;
        if (p == 2) {
          const u64 x0 = v[start], x1 = v[start + stride];
          v[start] = x0 + x1 >= q ? x0 + x1 - q : x0 + x1;
          v[start + stride] = x0 >= x1 ? x0 - x1 : x0 + q - x1;
          continue;
        }
        for (u32 j = 0; j < p; ++j) in[j] = v[start + j * stride];
        for (u32 k = 0; k < p; ++k) {
          unsigned __int128 s = 0;
          for (u32 j = 0; j < p; ++j) {
            s += static_cast<unsigned __int128>(in[j]) * wp[(static_cast<u64>(j) * k) % p];
            if ((j & 15) == 15) s %= q;
          }
          out[k] = static_cast<u64>(s % q);
        }
        for (u32 k = 0; k < p; ++k) v[start + k * stride] = out[k];
      }
    }
    stride = block;
  }
  work_counter() += sp.size * sp.d * p;
  if (inverse) {
    const u64 inv_n = powmod64(sp.size % q, q - 2, q);
    for (u64& x : v) x = mulmod64(x, inv_n, q);
  }
}

/// Forward transforms of every plane of an element.
inline std::vector<std::vector<u64>> forward_planes(const GaElem& a) {
  const GaSpace& sp = *a.space();
  std::vector<std::vector<u64>> planes(sp.ell(), std::vector<u64>(sp.size));
  for (std::size_t j = 0; j < sp.ell(); ++j) {
    for (u64 i = 0; i < sp.size; ++i) planes[j][i] = a.raw()[j * sp.size + i];
    dft(planes[j], sp, false);
  }
  return planes;
}

/// acc_t += sum_{i+j=t} A_i * B_j pointwise mod q.
inline void pointwise_accumulate(const GaSpace& sp, const std::vector<std::vector<u64>>& A,
                                 const std::vector<std::vector<u64>>& B, std::vector<std::vector<u64>>& acc) {
  const u64 q = sp.transform.q;
  for (std::size_t i = 0; i < A.size(); ++i) {
    for (std::size_t j = 0; j < B.size(); ++j) {
      auto& c = acc[i + j];
      for (u64 x = 0; x < sp.size; ++x) {
        u64 s = c[x] + mulmod64(A[i][x], B[j][x], q);
        c[x] = s >= q ? s - q : s;
      }
    }
  }
  work_counter() += sp.size * A.size() * B.size();
}

/// Reduce unreduced naive planes into an element.
inline GaElem finish_naive(const GaSpacePtr& space, std::vector<u64>& acc) {
  const GaSpace& sp = *space;
  GaElem out = GaElem::zero(space);
  const std::size_t ell = sp.ell();
  std::vector<u64> prod(2 * ell - 1);
  std::vector<u32> red(ell);
  for (u64 x = 0; x < sp.size; ++x) {
    bool any = false;
    for (std::size_t t = 0; t < prod.size(); ++t) {
      prod[t] = acc[t * sp.size + x];
      any = any || prod[t] != 0;
    }
    if (!any) continue;
    if (ell == 1) {
      out.raw()[x] = static_cast<u32>(prod[0] % sp.p.value());
      continue;
    }
    sp.ring->reduce(prod, red.data());
    for (std::size_t j = 0; j < ell; ++j) out.raw()[j * sp.size + x] = red[j];
  }
  return out;
}

/// Inverse transform of accumulated planes, then reduction into the coefficient ring.
inline GaElem finish_transform(const GaSpacePtr& space, std::vector<std::vector<u64>>& acc) {
  const GaSpace& sp = *space;
  std::vector<u64> flat(acc.size() * sp.size);
  for (std::size_t t = 0; t < acc.size(); ++t) {
    dft(acc[t], sp, true);
    for (u64 x = 0; x < sp.size; ++x) flat[t * sp.size + x] = acc[t][x];
  }
  // Entries are now the exact integer convolution values.
  for (u64& x : flat) x %= sp.p.value();
  return finish_naive(space, flat);
}

inline double transform_cost(const GaSpace& sp, std::size_t forward_planes, std::size_t products) {
  const double n = static_cast<double>(sp.size);
  const double ell = static_cast<double>(sp.ell());
  const double planes = static_cast<double>(forward_planes) + static_cast<double>(2 * sp.ell() - 1);
  return planes * n * sp.d * sp.p.value() + static_cast<double>(products) * n * ell * ell;
}

inline bool prefer_naive(const GaSpace& sp, double naive_pairs, std::size_t forward_planes, std::size_t products) {
  if (sp.size < (1u << 10)) return true;
  const double ell = static_cast<double>(sp.ell());
  return naive_pairs * ell * ell <= transform_cost(sp, forward_planes, products);
}

}  // namespace detail

/// Group convolution: (u*v)_z = sum over x+y=z of u_x v_y in the coefficient ring.
inline GaElem ga_mul(const GaElem& u, const GaElem& v, ConvEngine engine = ConvEngine::Auto) {
  check_same_space(u, v);
  const GaSpacePtr& space = u.space();
  const GaSpace& sp = *space;
  std::vector<u64> su = u.support();
  std::vector<u64> sv = v.support();
  if (su.empty() || sv.empty()) return GaElem::zero(space);
  if (engine == ConvEngine::Auto) {
    engine = detail::prefer_naive(sp, static_cast<double>(su.size()) * sv.size(), 2 * sp.ell(), 1)
                 ? ConvEngine::Naive
                 : ConvEngine::Transform;
  }
  if (engine == ConvEngine::Naive) {
    std::vector<u64> acc((2 * sp.ell() - 1) * sp.size, 0);
    detail::naive_accumulate(u, su, v, sv, acc);
    return detail::finish_naive(space, acc);
  }
  auto A = detail::forward_planes(u);
  auto B = detail::forward_planes(v);
  std::vector<std::vector<u64>> acc(2 * sp.ell() - 1, std::vector<u64>(sp.size, 0));
  detail::pointwise_accumulate(sp, A, B, acc);
  return detail::finish_transform(space, acc);
}

/// Square-and-multiply; e = 0 gives the identity element.
inline GaElem ga_pow(GaElem base, u64 e, ConvEngine engine = ConvEngine::Auto) {
  GaElem acc = GaElem::one(base.space());
  while (e > 0) {
    if (e & 1) acc = ga_mul(acc, base, engine);
    e >>= 1;
    if (e > 0) base = ga_mul(base, base, engine);
  }
  return acc;
}

/// Elements indexed by grade 0..k; a missing grade is zero.
using GradedGa = std::vector<std::optional<GaElem>>;

/// Product of graded elements truncated above grade k, with per-grade transforms shared.
inline GradedGa graded_mul(const GradedGa& a, const GradedGa& b, std::size_t k, ConvEngine engine = ConvEngine::Auto) {
  GradedGa out(k + 1);
  GaSpacePtr space;
  std::vector<std::vector<u64>> sa(a.size()), sb(b.size());
  std::size_t products = 0;
  double pairs = 0;
  std::size_t fwd = 0;
  std::vector<bool> used_a(a.size()), used_b(b.size());
  for (std::size_t i = 0; i < a.size() && i <= k; ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size() && i + j <= k; ++j) {
      if (!b[j]) continue;
      space = a[i]->space();
      check_same_space(*a[i], *b[j]);
      if (sa[i].empty()) sa[i] = a[i]->support();
      if (sb[j].empty()) sb[j] = b[j]->support();
      used_a[i] = used_b[j] = true;
      ++products;
      pairs += static_cast<double>(sa[i].size()) * sb[j].size();
    }
  }
  if (products == 0) return out;
  const GaSpace& sp = *space;
  for (bool u : used_a) fwd += u;
  for (bool u : used_b) fwd += u;
  if (engine == ConvEngine::Auto) {
    engine = detail::prefer_naive(sp, pairs, fwd * sp.ell(), products) ? ConvEngine::Naive : ConvEngine::Transform;
  }
  if (engine == ConvEngine::Naive) {
    for (std::size_t g = 0; g <= k; ++g) {
      std::vector<u64> acc;
      for (std::size_t i = 0; i <= g && i < a.size(); ++i) {
        const std::size_t j = g - i;
        if (!a[i] || j >= b.size() || !b[j] || sa[i].empty() || sb[j].empty()) continue;
        if (acc.empty()) acc.assign((2 * sp.ell() - 1) * sp.size, 0);
        detail::naive_accumulate(*a[i], sa[i], *b[j], sb[j], acc);
        if (sp.p.value() >= (1u << 16)) continue;
        for (u64& x : acc) x %= sp.p.value();
      }
      if (acc.empty()) continue;
      GaElem r = detail::finish_naive(space, acc);
      if (!r.is_zero()) out[g] = std::move(r);
    }
    return out;
  }
  std::vector<std::vector<std::vector<u64>>> A(a.size()), B(b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (used_a[i] && !sa[i].empty()) A[i] = detail::forward_planes(*a[i]);
  for (std::size_t j = 0; j < b.size(); ++j)
    if (used_b[j] && !sb[j].empty()) B[j] = detail::forward_planes(*b[j]);
  for (std::size_t g = 0; g <= k; ++g) {
    std::vector<std::vector<u64>> acc;
    for (std::size_t i = 0; i <= g && i < a.size(); ++i) {
      const std::size_t j = g - i;
      if (A[i].empty() || j >= b.size() || B[j].empty()) continue;
      if (acc.empty()) acc.assign(2 * sp.ell() - 1, std::vector<u64>(sp.size, 0));
      detail::pointwise_accumulate(sp, A[i], B[j], acc);
    }
    if (acc.empty()) continue;
    GaElem r = detail::finish_transform(space, acc);
    if (!r.is_zero()) out[g] = std::move(r);
  }
  return out;
}

/// The substitution element ((p-1) v + 0) for a group vector v.
inline GaElem substitution_element(const GaSpacePtr& space, const GroupVector& v) {
  GaElem e = GaElem::one(space);
  const u64 idx = v.index();
  if (v.p != space->p.value() || v.dim() != space->d) throw UsageError("substitution vector has the wrong shape");
  const u32 pm1 = space->p.value() - 1;
  if (idx == 0) {
    e.raw()[0] = space->p.add(1, pm1);
  } else {
    e.raw()[idx] = pm1;
  }
  return e;
}

/// Nonzero support of prod_i ((p-1) v_i + 0)^(m_i) over Z_p.
struct SurvivalExpansion {
  std::vector<std::pair<u32, GroupVector>> entries;

  std::optional<u32> identity_coefficient() const {
    for (const auto& [c, v] : entries)
      if (v.is_zero()) return c;
    return std::nullopt;
  }
};

inline SurvivalExpansion survival_expand(const std::vector<GroupVector>& vectors, const std::vector<u32>& exponents) {
  if (vectors.empty()) throw UsageError("survival_expand needs at least one vector");
  if (vectors.size() != exponents.size()) throw UsageError("one exponent per vector is required");
  const u32 p = vectors.front().p;
  for (u32 m : exponents)
    if (m < 1 || m >= p) throw UsageError("exponents must lie in [1, p)");
  if (rank_mod_p(vectors) != vectors.size()) throw PreconditionError("substitution vectors are linearly dependent");
  auto space = GaSpace::make(PrimeModulus(p), static_cast<u32>(vectors.front().dim()));
  GaElem acc = GaElem::one(space);
  for (std::size_t i = 0; i < vectors.size(); ++i)
    acc = ga_mul(acc, ga_pow(substitution_element(space, vectors[i]), exponents[i]));
  SurvivalExpansion out;
  for (u64 idx : acc.support())
    out.entries.emplace_back(acc.raw()[idx], GroupVector::from_index(p, space->d, idx));
  return out;
}

}  // namespace montest
