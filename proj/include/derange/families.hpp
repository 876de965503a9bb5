#pragma once

// Named groups with known statistics: the sharp examples for the affine bounds,
// small classical groups on their natural modules, extraspecial 2-groups and the
// fully deleted permutation modules of alternating groups.
//
// Every constructor enumerates its group and checks the order against the
// closed formula, so a wrong generator set fails loudly at construction.

#include <array>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "derange/check_result.hpp"
#include "derange/ffield.hpp"
#include "derange/gammal1.hpp"
#include "derange/matgroup.hpp"
#include "derange/numtheory.hpp"
#include "derange/perm.hpp"
#include "derange/ratio.hpp"

namespace derange {

struct FamilyMember {
  std::string family;
  std::vector<std::int64_t> params;
  std::string name;
  std::shared_ptr<MatGroup> group;  // enumerated
  std::optional<ExactRatio> delta;  // predicted delta(V x| G)
  std::optional<ExactRatio> alpha;  // predicted alpha(G)
  std::uint64_t q_effective = 0;    // least size of a nontrivial fixed space
};

enum class ClassicalKind { linear, symplectic, unitary };

namespace detail {

inline std::pair<std::uint64_t, unsigned> require_prime_power(std::uint64_t n, const std::string& what) {
  auto pp = as_prime_power(n);
  if (!pp) throw std::invalid_argument(what + ": " + std::to_string(n) + " is not a prime power");
  return *pp;
}

inline std::shared_ptr<MatGroup> enumerate_checked(FieldPtr k, std::size_t d, std::vector<SemilinearMap> gens,
                                                   std::uint64_t expected, const std::string& what,
                                                   std::size_t cap = kDefaultOrderCap) {
  if (expected > cap) throw CapExceeded(expected, cap);
  auto g = std::make_shared<MatGroup>(std::move(k), d, std::move(gens));
  g->enumerate(cap);
  if (g->order() != expected)
    throw std::logic_error(what + ": order " + std::to_string(g->order()) + ", expected " + std::to_string(expected));
  return g;
}

inline SemilinearMap elementary(const FieldCtx& k, std::size_t d, std::size_t i, std::size_t j, FieldElem a) {
  SemilinearMap m = SemilinearMap::identity(k, d);
  m.at(i, j) = k.add(m.at(i, j), a);
  return m;
}

/// x -> x + a * (x . c) * v, i.e. I + a c^T v.
inline SemilinearMap rank_one_update(const FieldCtx& k, const std::vector<FieldElem>& c, const std::vector<FieldElem>& v,
                                     FieldElem a) {
  const std::size_t d = v.size();
  SemilinearMap m = SemilinearMap::identity(k, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m.at(i, j) = k.add(m.at(i, j), k.mul(a, k.mul(c[i], v[j])));
  return m;
}

inline SemilinearMap kron(const FieldCtx& k, const SemilinearMap& a, const SemilinearMap& b) {
  const std::size_t d = a.d * b.d;
  SemilinearMap m{d, std::vector<FieldElem>(d * d, k.zero()), 0};
  for (std::size_t i1 = 0; i1 < a.d; ++i1)
    for (std::size_t j1 = 0; j1 < a.d; ++j1)
      for (std::size_t i2 = 0; i2 < b.d; ++i2)
        for (std::size_t j2 = 0; j2 < b.d; ++j2)
          m.at(i1 * b.d + i2, j1 * b.d + j2) = k.mul(a.at(i1, j1), b.at(i2, j2));
  return m;
}

inline SemilinearMap from_ints(const FieldCtx& k, std::size_t d, std::initializer_list<long long> entries) {
  SemilinearMap m{d, {}, 0};
  for (auto e : entries) m.a.push_back(k.from_int(e));
  if (m.a.size() != d * d) throw std::logic_error("from_ints: wrong entry count");
  return m;
}

/// F_p-basis 1, w, ..., w^{f-1} of F_q.
inline std::vector<FieldElem> additive_basis(const FieldCtx& k) {
  std::vector<FieldElem> b;
  for (unsigned i = 0; i < k.f(); ++i) b.push_back(k.exp(i));
  return b;
}

inline std::size_t element_order(const MatOps& ops, const MatWord* g) {
  const auto id = ops.identity().words();
  std::vector<MatWord> x(g, g + ops.stride()), y(ops.stride());
  std::size_t n = 1;
  while (x != id) {
    ops.compose(x.data(), g, y.data());
    x.swap(y);
    ++n;
  }
  return n;
}

}  // namespace detail

/// F_n x| <w^a>: Frobenius of order n(n-1)/a for a < n-1, regular for a = n-1.
inline FamilyMember frobenius_affine(std::uint64_t n, std::uint64_t a) {
  auto [p, f] = detail::require_prime_power(n, "frobenius_affine");
  if (a == 0 || (n - 1) % a != 0) throw std::invalid_argument("frobenius_affine: a must divide n - 1");
  if (n > kMatrixFieldCeiling) throw std::invalid_argument("frobenius_affine: n above 2^16");
  auto k = make_field(p, f);
  FamilyMember m;
  m.family = "frobenius_affine";
  m.params = {static_cast<std::int64_t>(n), static_cast<std::int64_t>(a)};
  m.name = "F_" + std::to_string(n) + " x| C_" + std::to_string((n - 1) / a);
  m.group = detail::enumerate_checked(k, 1, {SemilinearMap{1, {k->exp(static_cast<long long>(a))}, 0}}, (n - 1) / a,
                                      "frobenius_affine");
  m.delta = ExactRatio::from_u64(a, n);
  m.alpha = ExactRatio::from_u64(a, n - 1);
  m.q_effective = n;
  return m;
}

/// GL_1(q) x| <sigma>, sigma the q^{1/2}-th power map.
inline GammaL1Group sharp_gammal1_group(std::uint64_t q) {
  auto [p, f] = detail::require_prime_power(q, "sharp_gammal1");
  if (f % 2 != 0) throw std::invalid_argument("sharp_gammal1: q must be an even power of a prime");
  auto k = make_field(p, f);
  return gammal1_from_generators(k, {{1, 0}, {0, f / 2}});
}

inline FamilyMember sharp_gammal1(std::uint64_t q) {
  GammaL1Group g = sharp_gammal1_group(q);
  if (g.order() != 2 * (q - 1)) throw std::logic_error("sharp_gammal1: wrong order");
  FamilyMember m;
  m.family = "sharp_gammal1";
  m.params = {static_cast<std::int64_t>(q)};
  m.name = "GL_1(" + std::to_string(q) + ") x| <sigma>";
  m.group = std::make_shared<MatGroup>(g.to_matgroup());
  m.group->enumerate();
  m.alpha = bound_h(q).lo;
  m.delta = bound_g(q).lo;
  m.q_effective = g.field().p();
  return m;
}

/// Generators (a, b) of a copy of SL_2(5) in SL_2(q), a of order 4 and b of order 10,
/// found by a deterministic scan. The closure is certified to have order 120 and the
/// element-order census of SL_2(5).
inline std::vector<SemilinearMap> sl2_5_generators(const FieldPtr& kp) {
  const FieldCtx& k = *kp;
  const std::uint64_t q = k.q();
  if (q % 10 != 1 && q % 10 != 9) throw std::invalid_argument("sl2_5_z: need q = +-1 mod 10");
  MatOps ops(kp, 2);
  const SemilinearMap a = detail::from_ints(k, 2, {0, 1, -1, 0});
  const auto aw = a.words();
  const auto minus = SemilinearMap::scalar(k, 2, k.neg(k.one())).words();
  const auto id = ops.identity().words();
  auto compose = [&ops](const MatWord* x, const MatWord* y, MatWord* out) { ops.compose(x, y, out); };
  std::vector<MatWord> b2(5), b4(5), b5(5);
  for (std::uint64_t x = 1; x < q; ++x) {
    for (std::uint64_t y = 0; y < q; ++y) {
      for (std::uint64_t z = 0; z < q; ++z) {
        const FieldElem fx = k.from_code(x), fy = k.from_code(y), fz = k.from_code(z);
        const FieldElem w = k.div(k.add(k.one(), k.mul(fy, fz)), fx);
        const SemilinearMap b{2, {fx, fy, fz, w}, 0};
        const auto bw = b.words();
        if (bw == minus) continue;
        compose(bw.data(), bw.data(), b2.data());
        compose(b2.data(), b2.data(), b4.data());
        compose(b4.data(), bw.data(), b5.data());
        if (b5 != minus) continue;
        try {
          auto t = bfs_closure<MatWord>(5, id, {aw, bw}, compose, 120);
          if (t.size() != 120) continue;
          std::map<std::size_t, std::size_t> census;
          for (std::size_t i = 0; i < t.size(); ++i) ++census[detail::element_order(ops, t[i])];
          const std::map<std::size_t, std::size_t> expected{{1, 1}, {2, 1}, {3, 20}, {4, 30}, {5, 24}, {6, 20}, {10, 24}};
          if (census == expected) return {a, b};
        } catch (const CapExceeded&) {
        }
      }
    }
  }
  throw std::runtime_error("sl2_5_z: no SL_2(5) found in SL_2(" + std::to_string(q) + ")");
}

/// L = SL_2(5) in SL_2(q), or ZL with Z the scalars. For q = -1 mod 60 the group ZL is
/// semiregular on nonzero vectors, with alpha = 1/(60(q-1)) and delta = f(q^2).
inline FamilyMember sl2_5_z(std::uint64_t q, bool with_scalars) {
  auto [p, f] = detail::require_prime_power(q, "sl2_5_z");
  auto k = make_field(p, f);
  auto gens = sl2_5_generators(k);
  std::uint64_t order = 120;
  if (with_scalars) {
    gens.push_back(SemilinearMap::scalar(*k, 2, k->omega()));
    order = 60 * (q - 1);
  }
  FamilyMember m;
  m.family = "sl2_5_z";
  m.params = {static_cast<std::int64_t>(q), with_scalars ? 1 : 0};
  m.name = std::string(with_scalars ? "Z.SL_2(5)" : "SL_2(5)") + " < GL_2(" + std::to_string(q) + ")";
  m.group = detail::enumerate_checked(k, 2, std::move(gens), order, "sl2_5_z");
  if (with_scalars && q % 60 == 59) {
    m.alpha = ExactRatio::from_u64(1, 60 * (q - 1));
    m.delta = ExactRatio::from_u64(q + 1, 60 * q * q);
  }
  m.q_effective = q;
  return m;
}

/// i = [[0,1],[-1,0]] and j = [[a,b],[b,-a]] with a^2 + b^2 = -1.
inline std::vector<SemilinearMap> q8_generators(const FieldCtx& k) {
  if (k.p() == 2) throw std::invalid_argument("q8_in_gl2: q must be odd");
  const FieldElem minus_one = k.neg(k.one());
  for (std::uint64_t x = 0; x < k.q(); ++x) {
    for (std::uint64_t y = 0; y < k.q(); ++y) {
      const FieldElem a = k.from_code(x), b = k.from_code(y);
      if (k.add(k.mul(a, a), k.mul(b, b)) != minus_one) continue;
      return {detail::from_ints(k, 2, {0, 1, -1, 0}), SemilinearMap{2, {a, b, b, k.neg(a)}, 0}};
    }
  }
  throw std::logic_error("q8_in_gl2: -1 is not a sum of two squares");
}

inline FamilyMember q8_in_gl2(std::uint64_t q) {
  auto [p, f] = detail::require_prime_power(q, "q8_in_gl2");
  auto k = make_field(p, f);
  FamilyMember m;
  m.family = "q8_normalizer_member";
  m.params = {static_cast<std::int64_t>(q), 0};
  m.name = "Q_8 < GL_2(" + std::to_string(q) + ")";
  m.group = detail::enumerate_checked(k, 2, q8_generators(*k), 8, "q8_in_gl2");
  m.alpha = ExactRatio(1, 8);
  m.q_effective = q;
  return m;
}

/// Subgroups of N_{GL_2(q)}(Q_8) containing Q_8. level 0: Q_8, 1: Q_8 Z, 2: SL_2(3) Z,
/// 3: the full normalizer (2.S_4) Z of order 24(q-1).
inline FamilyMember q8_normalizer_member(std::uint64_t q, unsigned level) {
  if (level == 0) return q8_in_gl2(q);
  if (level > 3) throw std::invalid_argument("q8_normalizer_member: level must be 0..3");
  auto [p, f] = detail::require_prime_power(q, "q8_normalizer_member");
  auto kp = make_field(p, f);
  const FieldCtx& k = *kp;
  MatOps ops(kp, 2);
  auto gens = q8_generators(k);
  gens.push_back(SemilinearMap::scalar(k, 2, k.omega()));
  std::uint64_t order = 4 * (q - 1);
  if (level >= 2) {
    // (-1 + i + j + ij) / 2 has order 3 and normalizes Q_8.
    const SemilinearMap ij = ops.compose(gens[0], gens[1]);
    const FieldElem half = k.inv(k.from_int(2));
    SemilinearMap w{2, std::vector<FieldElem>(4), 0};
    for (std::size_t t = 0; t < 4; ++t) {
      FieldElem s = k.add(k.add(gens[0].a[t], gens[1].a[t]), ij.a[t]);
      if (t == 0 || t == 3) s = k.sub(s, k.one());
      w.a[t] = k.mul(s, half);
    }
    gens.push_back(w);
    order *= 3;
  }
  if (level >= 3) {
    gens.push_back(detail::from_ints(k, 2, {1, 1, -1, 1}));  // 1 + i
    order *= 2;
  }
  static const char* names[] = {"Q_8", "Q_8 Z", "SL_2(3) Z", "N(Q_8)"};
  FamilyMember m;
  m.family = "q8_normalizer_member";
  m.params = {static_cast<std::int64_t>(q), static_cast<std::int64_t>(level)};
  m.name = std::string(names[level]) + " < GL_2(" + std::to_string(q) + ")";
  m.group = detail::enumerate_checked(kp, 2, std::move(gens), order, "q8_normalizer_member");
  m.q_effective = q;
  return m;
}

inline std::uint64_t classical_order(ClassicalKind kind, std::uint64_t n, std::uint64_t s) {
  std::uint64_t o = 1;
  switch (kind) {
    case ClassicalKind::linear:
      o = checked_pow(s, static_cast<unsigned>(n * (n - 1) / 2));
      for (unsigned i = 2; i <= n; ++i) o *= checked_pow(s, i) - 1;
      return o;
    case ClassicalKind::symplectic:  // n is the full dimension 2m
      o = checked_pow(s, static_cast<unsigned>((n / 2) * (n / 2)));
      for (unsigned i = 1; i <= n / 2; ++i) o *= checked_pow(s, 2 * i) - 1;
      return o;
    case ClassicalKind::unitary:
      o = checked_pow(s, static_cast<unsigned>(n * (n - 1) / 2));
      for (unsigned i = 2; i <= n; ++i) o *= (i % 2 == 0) ? checked_pow(s, i) - 1 : checked_pow(s, i) + 1;
      return o;
  }
  return o;
}

inline std::string classical_name(ClassicalKind kind, std::uint64_t n, std::uint64_t s) {
  const char* prefix = kind == ClassicalKind::linear ? "SL_" : kind == ClassicalKind::symplectic ? "Sp_" : "SU_";
  return prefix + std::to_string(n) + "(" + std::to_string(s) + ")";
}

/// SL_n(s), Sp_n(s) (n even) or SU_n(s) on the natural module, generated by transvections.
/// Symplectic form: sum_{i < n/2} x_i y_{n-1-i} - x_{n-1-i} y_i. Hermitian form:
/// sum_i x_i y_{n-1-i}^s over F_{s^2}.
inline FamilyMember classical_natural(ClassicalKind kind, std::uint64_t n, std::uint64_t s,
                                      std::size_t cap = kDefaultOrderCap) {
  auto [p, fs] = detail::require_prime_power(s, "classical_natural");
  if (n < 2) throw std::invalid_argument("classical_natural: dimension must be at least 2");
  if (kind == ClassicalKind::symplectic && n % 2 != 0) throw std::invalid_argument("classical_natural: Sp needs even n");
  const unsigned f = kind == ClassicalKind::unitary ? 2 * fs : fs;
  auto kp = make_field(p, f);
  const FieldCtx& k = *kp;
  std::vector<SemilinearMap> gens;
  const std::size_t d = n;
  if (kind == ClassicalKind::linear) {
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        if (i != j)
          for (auto b : detail::additive_basis(k)) gens.push_back(detail::elementary(k, d, i, j, b));
  } else if (kind == ClassicalKind::symplectic) {
    // Transvections x -> x + a B(x, v) v along basis vectors and sums of two basis vectors.
    std::vector<std::vector<FieldElem>> vs;
    for (std::size_t i = 0; i < d; ++i) {
      std::vector<FieldElem> v(d, k.zero());
      v[i] = k.one();
      vs.push_back(v);
      for (std::size_t j = i + 1; j < d; ++j) {
        auto w = v;
        w[j] = k.one();
        vs.push_back(w);
      }
    }
    for (const auto& v : vs) {
      std::vector<FieldElem> c(d);
      for (std::size_t i = 0; i < d; ++i) c[i] = i < d / 2 ? v[d - 1 - i] : k.neg(v[d - 1 - i]);
      for (auto b : detail::additive_basis(k)) gens.push_back(detail::rank_one_update(k, c, v, b));
    }
  } else {
    // Unitary transvections x -> x + a (x, v) v, v isotropic, a + a^s = 0.
    const unsigned half = fs;
    auto conj = [&](FieldElem x) { return k.frobenius(x, half); };
    FieldElem a0 = k.zero();
    for (std::uint64_t c = 1; c < k.q() && a0.code == 0; ++c) {
      const FieldElem x = k.from_code(c);
      if (k.add(x, conj(x)).code == 0) a0 = x;
    }
    std::vector<FieldElem> scales;  // F_p-basis of F_s, times a0
    const FieldElem base = k.exp(static_cast<long long>(s + 1));
    for (unsigned i = 0; i < fs; ++i) scales.push_back(k.mul(a0, k.pow(base, i)));
    const std::uint64_t nv = checked_pow(k.q(), static_cast<unsigned>(d));
    for (std::uint64_t x = 1; x < nv; ++x) {
      auto v = decode_vector(k, d, x);
      std::size_t first = 0;
      while (v[first].code == 0) ++first;
      if (v[first] != k.one()) continue;
      FieldElem norm = k.zero();
      for (std::size_t i = 0; i < d; ++i) norm = k.add(norm, k.mul(v[i], conj(v[d - 1 - i])));
      if (norm.code != 0) continue;
      std::vector<FieldElem> c(d);
      for (std::size_t i = 0; i < d; ++i) c[i] = conj(v[d - 1 - i]);
      for (auto a : scales) gens.push_back(detail::rank_one_update(k, c, v, a));
    }
  }
  FamilyMember m;
  m.family = n == 2 && kind == ClassicalKind::linear ? "sl2q" : "classical_natural";
  m.params = {static_cast<std::int64_t>(kind), static_cast<std::int64_t>(n), static_cast<std::int64_t>(s)};
  m.name = classical_name(kind, n, s);
  m.group = detail::enumerate_checked(kp, d, std::move(gens), classical_order(kind, n, s), m.name, cap);
  m.q_effective = k.q();
  return m;
}

inline FamilyMember sl2(std::uint64_t q) { return classical_natural(ClassicalKind::linear, 2, q); }

/// Bounds on alpha for classical groups on the natural module. For s = 2 (linear and
/// symplectic) the two-sided bound is empty and alpha > 1/2 is checked instead.
inline CheckResult natural_module_bounds(ClassicalKind kind, std::uint64_t n, std::uint64_t s, const ExactRatio& alpha) {
  const std::string id = "natural-modules/" + classical_name(kind, n, s);
  const ExactRatio one(1);
  if (s == 2 && kind != ClassicalKind::unitary) {
    const ExactRatio half(1, 2);
    return make_check(id, "alpha(G, V) > 1/2 for SL_n(2) and Sp_2n(2)", pass_if(alpha > half),
                      {{"alpha", alpha.str()}, {"bound", "1/2"}}, alpha, half);
  }
  const ExactRatio S = ExactRatio::from_u64(s);
  ExactRatio lo, hi;
  std::string anchor;
  switch (kind) {
    case ClassicalKind::linear:
      hi = one / (S - one);
      lo = (one - hi) / (S - one);
      anchor = "(1 - 1/(s-1))/(s-1) <= alpha(G, V) <= 1/(s-1) for SL_n(s) <= G <= GL_n(s)";
      break;
    case ClassicalKind::symplectic:
      hi = one / (S - one);
      lo = (one - hi) / S;
      anchor = "(1 - 1/(s-1))/s <= alpha(G, V) <= 1/(s-1) for Sp_2n(s), n >= 2";
      break;
    case ClassicalKind::unitary:
      hi = S / (S * S - one);
      lo = (one - hi) / (S + one);
      anchor = "(1 - s/(s^2-1))/(s+1) <= alpha(G, V) <= s/(s^2-1) for SU_n(s) <= G <= GU_n(s), n >= 3";
      break;
  }
  const bool ok = lo <= alpha && alpha <= hi;
  return make_check(id, anchor, pass_if(ok), {{"alpha", alpha.str()}, {"lower", lo.str()}, {"upper", hi.str()}}, alpha,
                    ok ? hi : (alpha < lo ? lo : hi));
}

/// 4^s + 2^s - 2 or 4^s - 2^s - 2.
inline std::uint64_t extraspecial_involution_prediction(unsigned s, int sign) {
  const std::uint64_t a = checked_pow(4, s), b = checked_pow(2, s);
  return sign > 0 ? a + b - 2 : a - b - 2;
}

/// 2^{1+2s}_{sign} in GL_{2^s}(3) as a central product of s blocks D_8 or Q_8;
/// sign - uses exactly one Q_8 block.
inline FamilyMember extraspecial2(unsigned s, int sign) {
  if (s == 0 || s > 4) throw std::invalid_argument("extraspecial2: need 1 <= s <= 4 (dimension <= 16)");
  if (sign != 1 && sign != -1) throw std::invalid_argument("extraspecial2: sign must be +1 or -1");
  auto kp = make_field(3, 1);
  const FieldCtx& k = *kp;
  const std::vector<SemilinearMap> d8{detail::from_ints(k, 2, {1, 0, 0, -1}), detail::from_ints(k, 2, {0, 1, 1, 0})};
  const std::vector<SemilinearMap> q8{detail::from_ints(k, 2, {0, 1, -1, 0}), detail::from_ints(k, 2, {1, 1, 1, -1})};
  const SemilinearMap i2 = SemilinearMap::identity(k, 2);
  std::vector<SemilinearMap> gens;
  for (unsigned b = 0; b < s; ++b) {
    const auto& block = (sign < 0 && b == 0) ? q8 : d8;
    for (const auto& x : block) {
      SemilinearMap g = b == 0 ? x : i2;
      for (unsigned c = 1; c < s; ++c) g = detail::kron(k, g, c == b ? x : i2);
      gens.push_back(std::move(g));
    }
  }
  const std::uint64_t order = checked_pow(2, 2 * s + 1);
  const std::uint64_t involutions = extraspecial_involution_prediction(s, sign);
  FamilyMember m;
  m.family = "extraspecial2";
  m.params = {static_cast<std::int64_t>(s), sign};
  m.name = std::string("2^(1+") + std::to_string(2 * s) + ")_" + (sign > 0 ? "+" : "-") + " < GL_" +
           std::to_string(1u << s) + "(3)";
  m.group = detail::enumerate_checked(kp, std::size_t{1} << s, std::move(gens), order, "extraspecial2");
  m.alpha = ExactRatio::from_u64(involutions + 1, order);
  m.q_effective = 3;
  return m;
}

struct ExtraspecialCensus {
  std::uint64_t eigen1_nontrivial = 0;
  std::uint64_t noncentral_involutions = 0;
  bool eigen1_are_noncentral_involutions = true;
};

inline ExtraspecialCensus extraspecial_census(const MatGroup& g) {
  const MatOps& ops = g.ops();
  const FieldCtx& k = g.field();
  const auto id = ops.identity().words();
  const auto minus = SemilinearMap::scalar(k, g.dim(), k.neg(k.one())).words();
  ExtraspecialCensus c;
  std::vector<MatWord> sq(ops.stride());
  const auto& el = g.elements();
  for (std::size_t i = 0; i < el.size(); ++i) {
    const std::vector<MatWord> x(el[i], el[i] + ops.stride());
    ops.compose(el[i], el[i], sq.data());
    const bool noncentral_involution = sq == id && x != id && x != minus;
    const bool eigen1 = x != id && ops.fixed_vector_count(el[i]) > 1;
    c.noncentral_involutions += noncentral_involution;
    c.eigen1_nontrivial += eigen1;
    if (eigen1 != noncentral_involution) c.eigen1_are_noncentral_involutions = false;
  }
  return c;
}

/// A_m on m points: (0 1 2) and an m-cycle (m odd) or (1 ... m-1) (m even).
inline PermGroup alternating_group(std::size_t m) {
  if (m < 3) throw std::invalid_argument("alternating_group: m >= 3");
  Perm c3 = Perm::identity(m);
  c3.images[0] = 1;
  c3.images[1] = 2;
  c3.images[2] = 0;
  Perm big = Perm::identity(m);
  const std::size_t start = m % 2 == 1 ? 0 : 1;
  for (std::size_t i = start; i < m; ++i) big.images[i] = static_cast<Point>(i + 1 < m ? i + 1 : start);
  PermGroup g(m, {c3, big});
  return g;
}

inline std::size_t cycle_count(const Point* g, std::size_t n) {
  std::vector<bool> seen(n, false);
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i]) continue;
    ++c;
    for (Point j = static_cast<Point>(i); !seen[j]; j = g[j]) seen[j] = true;
  }
  return c;
}

/// Proportion of A_m with at most two cycles: 2/m for m odd, and
/// 2 (sum_{1 <= i < m/2} 1/(i(m-i)) + 2/m^2) for m even.
inline ExactRatio two_cycle_formula(std::uint64_t m) {
  if (m % 2 == 1) return ExactRatio::from_u64(2, m);
  ExactRatio s(0);
  for (std::uint64_t i = 1; 2 * i < m; ++i) s += ExactRatio::from_u64(1, i * (m - i));
  return ExactRatio(2) * (s + ExactRatio::from_u64(2, m * m));
}

inline ExactRatio two_cycle_census(const PermGroup& g) {
  const auto& el = g.elements();
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < el.size(); ++i) c += cycle_count(el[i], g.degree()) <= 2;
  return ExactRatio::from_u64(c, el.size());
}

/// Dimension of the fully deleted module of A_m over F_p.
inline std::size_t deleted_module_dim(std::size_t m, std::uint64_t p) { return m % p == 0 ? m - 2 : m - 1; }

/// Matrix of a permutation on the fully deleted module. Basis b_i = e_i - e_{m-1} of the
/// sum-zero space; when p | m, the quotient by the all-ones vector sum_i b_i with basis
/// the images of b_0 .. b_{m-3}, where a vector with b-coordinates c maps to c_i - c_{m-2}.
inline SemilinearMap deleted_module_matrix(const FieldCtx& k, const Point* perm, std::size_t m) {
  const std::uint64_t p = k.p();
  const std::size_t d = deleted_module_dim(m, p);
  const std::size_t last = m - 1;
  SemilinearMap out{d, std::vector<FieldElem>(d * d, k.zero()), 0};
  std::vector<long long> row(m - 1);
  for (std::size_t i = 0; i < d; ++i) {
    std::fill(row.begin(), row.end(), 0);
    if (perm[i] != last) row[perm[i]] += 1;
    if (perm[last] != last) row[perm[last]] -= 1;
    for (std::size_t j = 0; j < d; ++j) out.at(i, j) = k.from_int(d == m - 1 ? row[j] : row[j] - row[m - 2]);
  }
  return out;
}

inline FamilyMember alt_deleted(std::size_t m, std::uint64_t p) {
  if (m < 5 || m > 10) throw std::invalid_argument("alt_deleted: need 5 <= m <= 10");
  if (!is_prime(p)) throw std::invalid_argument("alt_deleted: p must be prime");
  auto kp = make_field(p, 1);
  PermGroup a = alternating_group(m);
  std::vector<SemilinearMap> gens;
  for (const auto& g : a.generators()) gens.push_back(deleted_module_matrix(*kp, g.images.data(), m));
  std::uint64_t order = 1;
  for (std::uint64_t i = 3; i <= m; ++i) order *= i;
  FamilyMember out;
  out.family = "alt_deleted";
  out.params = {static_cast<std::int64_t>(m), static_cast<std::int64_t>(p)};
  out.name = "A_" + std::to_string(m) + " on the deleted module mod " + std::to_string(p);
  out.group = detail::enumerate_checked(kp, deleted_module_dim(m, p), std::move(gens), order, "alt_deleted");
  out.q_effective = p;
  return out;
}

/// Inequalities for groups normalizing SL_2(5) (core 60, strong constant 31, strict delta)
/// or Q_8 (core 24, strong constant 13). These hold for q large, so a shortfall is a
/// small-n violation, not a failure.
inline std::vector<CheckResult> normalizer_bound_checks(const std::string& id, const AffineStats& s, std::uint64_t q,
                                                        std::uint64_t core, std::uint64_t strong, bool strict_delta) {
  std::vector<CheckResult> out;
  auto status = [](bool ok) { return ok ? Status::pass : Status::violation_at_small_n; };
  const std::string lemma = core == 60 ? "G normalizing SL_2(5)" : "G normalizing Q_8";
  const ExactRatio floor = ExactRatio::from_u64(1, core * (q - 1));
  out.push_back(make_check(id + "/alpha-floor", "alpha(G) >= 1/(" + std::to_string(core) + "(q-1)), " + lemma,
                           status(s.alpha >= floor), {{"alpha", s.alpha.str()}, {"bound", floor.str()}}, s.alpha,
                           floor));
  if (s.semiregular_nonzero) return out;
  const ExactRatio strong_alpha = ExactRatio::from_u64(strong, core * (q - 1));
  const ExactRatio strong_delta = strong_alpha * (ExactRatio(1) - ExactRatio::from_u64(1, q));
  const ExactRatio a_ratio = ExactRatio::from_u64(s.a_order, s.order);
  const ExactRatio a_floor = ExactRatio::from_u64(1, q - 1);
  const std::string c = std::to_string(strong) + "/(" + std::to_string(core) + "(q-1))";
  out.push_back(make_check(id + "/alpha-nonsemiregular", "alpha(G) >= " + c + " when not semiregular, " + lemma,
                           status(s.alpha >= strong_alpha), {{"alpha", s.alpha.str()}, {"bound", strong_alpha.str()}},
                           s.alpha, strong_alpha));
  const bool delta_ok = strict_delta ? s.delta_affine > strong_delta : s.delta_affine >= strong_delta;
  out.push_back(make_check(id + "/delta-nonsemiregular",
                           std::string("delta(V x| G) ") + (strict_delta ? ">" : ">=") + " " + c + " (1 - 1/q), " + lemma,
                           status(delta_ok), {{"delta", s.delta_affine.str()}, {"bound", strong_delta.str()}},
                           s.delta_affine, strong_delta));
  out.push_back(make_check(id + "/A-index", "|A(G)|/|G| >= 1/(q-1), " + lemma, status(a_ratio >= a_floor),
                           {{"A_over_G", a_ratio.str()}, {"bound", a_floor.str()}}, a_ratio, a_floor));
  return out;
}

/// Eigenvalue-lambda proportions in the cosets SL_2(q) diag(mu, 1): exactly 1/(q-1) when
/// lambda^2 != mu and q/(q^2-1) when lambda^2 = mu; both are at least 1/q.
inline std::vector<CheckResult> simple_estimate_checks(std::uint64_t q) {
  FamilyMember s = sl2(q);
  const FieldCtx& k = s.group->field();
  std::vector<CheckResult> out;
  const ExactRatio floor = ExactRatio::from_u64(1, q);
  for (std::uint64_t mu = 1; mu < q; ++mu) {
    SemilinearMap rep = SemilinearMap::identity(k, 2);
    rep.at(0, 0) = k.from_code(mu);
    for (std::uint64_t l = 1; l < q; ++l) {
      const FieldElem lambda = k.from_code(l);
      const bool potent = k.mul(lambda, lambda) == k.from_code(mu);
      const ExactRatio expected = potent ? ExactRatio::from_u64(q, q * q - 1) : ExactRatio::from_u64(1, q - 1);
      const ExactRatio got = coset_eigenvalue_proportion(*s.group, rep, lambda);
      const bool ok = got == expected && got >= floor;
      out.push_back(make_check("simple-estimate/q=" + std::to_string(q) + "/det=" + std::to_string(mu) +
                                   "/lambda=" + std::to_string(l),
                               "eigenvalue-lambda proportion in a coset of SL_2(q) in GL_2(q) is at least 1/q",
                               pass_if(ok),
                               {{"proportion", got.str()}, {"expected", expected.str()}, {"lambda_squared_is_det", potent}},
                               got, expected));
    }
  }
  return out;
}

/// Omega^{+-}_8(s), s odd prime, by a random walk on products of two reflections with
/// equal spinor norm. Quadratic form x0 x1 + x2 x3 + x4 x5 + x6 x7 (plus type) or
/// x0 x1 + x2 x3 + x4 x5 + x6^2 - n x7^2 with n a non-square (minus type).
struct OrthogonalSample {
  std::uint64_t samples = 0;
  std::uint64_t with_eigenvalue_one = 0;
  bool form_preserved = true;
};

inline OrthogonalSample sample_orthogonal_alpha(int sign, std::uint64_t s, std::uint64_t samples, std::uint64_t seed,
                                                unsigned thinning = 16, unsigned burn_in = 512) {
  if (s % 2 == 0 || !is_prime(s) || s > 251) throw std::invalid_argument("sample_orthogonal_alpha: s must be an odd prime < 256");
  // Plain residues mod s; the field here is always prime.
  constexpr std::size_t d = 8;
  using Row = std::array<std::uint32_t, d>;
  const std::uint32_t p = static_cast<std::uint32_t>(s);
  auto mul = [p](std::uint32_t a, std::uint32_t b) { return a * b % p; };
  auto add = [p](std::uint32_t a, std::uint32_t b) { return (a + b) % p; };
  auto inv = [&](std::uint32_t a) { return static_cast<std::uint32_t>(powmod(a, p - 2, p)); };
  std::uint32_t nonsquare = 2;
  while (powmod(nonsquare, (p - 1) / 2, p) == 1) ++nonsquare;
  // Gram matrix of B(x, y) = Q(x + y) - Q(x) - Q(y).
  std::array<Row, d> gram{};
  for (std::size_t i = 0; i + 1 < d; i += 2) {
    if (sign < 0 && i == 6) {
      gram[6][6] = 2 % p;
      gram[7][7] = (p - mul(2, nonsquare)) % p;
    } else {
      gram[i][i + 1] = 1;
      gram[i + 1][i] = 1;
    }
  }
  auto gram_times = [&](const Row& v) {
    Row gv{};
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) gv[i] += gram[i][j] * v[j];
    for (auto& c : gv) c %= p;
    return gv;
  };
  auto dot = [&](const Row& x, const Row& y) {
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < d; ++i) r += x[i] * y[i];
    return static_cast<std::uint32_t>(r % p);
  };
  const std::uint32_t half = inv(2);
  std::vector<bool> is_square(p, false);
  for (std::uint32_t c = 1; c < p; ++c) is_square[mul(c, c)] = true;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> coord(0, p - 1);
  struct Mirror {
    Row v, gv;
    std::uint32_t scale;  // -1/Q(v)
  };
  auto random_mirror = [&](bool want_square) {
    for (;;) {
      Mirror m;
      for (auto& c : m.v) c = coord(rng);
      m.gv = gram_times(m.v);
      const std::uint32_t qv = mul(half, dot(m.v, m.gv));
      if (qv == 0 || is_square[qv] != want_square) continue;
      m.scale = (p - inv(qv)) % p;
      return m;
    }
  };
  // x r_v = x - B(x, v)/Q(v) v, applied to the rows of X.
  std::array<Row, d> x{};
  for (std::size_t i = 0; i < d; ++i) x[i][i] = 1;
  auto reflect = [&](const Mirror& m) {
    for (auto& row : x) {
      const std::uint32_t c = mul(m.scale, dot(row, m.gv));
      if (c == 0) continue;
      for (std::size_t j = 0; j < d; ++j) row[j] = add(row[j], mul(c, m.v[j]));
    }
  };
  std::bernoulli_distribution coin(0.5);
  auto step = [&] {
    const bool sq = coin(rng);
    reflect(random_mirror(sq));
    reflect(random_mirror(sq));
  };
  // Rank of X - I below d means eigenvalue 1.
  auto has_eigenvalue_one = [&] {
    std::array<Row, d> m = x;
    for (std::size_t i = 0; i < d; ++i) m[i][i] = (m[i][i] + p - 1) % p;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < d && rank < d; ++c) {
      std::size_t piv = rank;
      while (piv < d && m[piv][c] == 0) ++piv;
      if (piv == d) continue;
      std::swap(m[piv], m[rank]);
      const std::uint32_t pinv = inv(m[rank][c]);
      for (std::size_t i = rank + 1; i < d; ++i) {
        if (m[i][c] == 0) continue;
        const std::uint32_t factor = mul(m[i][c], pinv);
        for (std::size_t j = c; j < d; ++j) m[i][j] = add(m[i][j], p - mul(factor, m[rank][j]));
      }
      ++rank;
    }
    return rank < d;
  };
  for (unsigned i = 0; i < burn_in; ++i) step();
  OrthogonalSample out;
  out.samples = samples;
  for (std::uint64_t n = 0; n < samples; ++n) {
    for (unsigned t = 0; t < thinning; ++t) step();
    out.with_eigenvalue_one += has_eigenvalue_one();
  }
  // X must preserve the form: X G X^T = G.
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (dot(x[i], gram_times(x[j])) != gram[i][j]) out.form_preserved = false;
  return out;
}

/// s(1 - 2s/(s^2-1))/(s^2-1) <= alpha <= 2s/(s^2-1) for Omega^{+-}_{2n}(s), by sampling.
inline CheckResult orthogonal_sampling_check(int sign, std::uint64_t s, std::uint64_t samples = 100'000,
                                             std::uint64_t seed = 20240611) {
  const OrthogonalSample r = sample_orthogonal_alpha(sign, s, samples, seed);
  const ExactRatio S = ExactRatio::from_u64(s), one(1);
  const ExactRatio hi = ExactRatio(2) * S / (S * S - one);
  const ExactRatio lo = S * (one - hi) / (S * S - one);
  const ExactRatio est = ExactRatio::from_u64(r.with_eigenvalue_one, r.samples);
  const double ph = est.approx();
  const double sigma = std::sqrt(ph * (1 - ph) / static_cast<double>(r.samples));
  const double band_lo = ph - 4 * sigma, band_hi = ph + 4 * sigma;
  const bool overlaps = band_hi >= lo.approx() && band_lo <= hi.approx();
  auto fixed = [](double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << v;
    return os.str();
  };
  const std::string name = std::string("Omega_8^") + (sign > 0 ? "+" : "-") + "(" + std::to_string(s) + ")";
  nlohmann::json w{{"group", name},          {"samples", r.samples},         {"hits", r.with_eigenvalue_one},
                   {"estimate", est.str()},  {"sigma", fixed(sigma)},        {"band", {fixed(band_lo), fixed(band_hi)}},
                   {"lower", lo.str()},      {"upper", hi.str()},            {"form_preserved", r.form_preserved},
                   {"seed", seed}};
  const Status st = (overlaps && r.form_preserved) ? Status::statistical : Status::fail;
  return make_check("natural-modules/" + name + "/sampled",
                    "s(1 - 2s/(s^2-1))/(s^2-1) <= alpha(G, V) <= 2s/(s^2-1) for Omega^+-_2n(s), n >= 4, s odd", st,
                    std::move(w), est, hi);
}

/// Family by id and integer parameters, as used on the command line.
inline FamilyMember make_family(const std::string& id, const std::vector<std::int64_t>& p) {
  auto need = [&](std::size_t n) {
    if (p.size() != n)
      throw std::invalid_argument("family " + id + " takes " + std::to_string(n) + " parameter(s)");
  };
  auto u = [&](std::size_t i) {
    if (p[i] < 0) throw std::invalid_argument("family " + id + ": parameters must be nonnegative");
    return static_cast<std::uint64_t>(p[i]);
  };
  if (id == "frobenius_affine") {
    need(2);
    return frobenius_affine(u(0), u(1));
  }
  if (id == "sharp_gammal1") {
    need(1);
    return sharp_gammal1(u(0));
  }
  if (id == "sl2_5_z") {
    need(2);
    return sl2_5_z(u(0), p[1] != 0);
  }
  if (id == "q8_normalizer_member") {
    need(2);
    return q8_normalizer_member(u(0), static_cast<unsigned>(u(1)));
  }
  if (id == "sl2q") {
    need(1);
    return sl2(u(0));
  }
  if (id == "extraspecial2") {
    need(2);
    return extraspecial2(static_cast<unsigned>(u(0)), p[1] < 0 ? -1 : 1);
  }
  if (id == "alt_deleted") {
    need(2);
    return alt_deleted(u(0), u(1));
  }
  if (id == "classical_natural") {
    need(3);
    if (u(0) > 2) throw std::invalid_argument("classical_natural: kind is 0 (SL), 1 (Sp) or 2 (SU)");
    return classical_natural(static_cast<ClassicalKind>(u(0)), u(1), u(2));
  }
  throw std::invalid_argument("unknown family " + id);
}

}  // namespace derange
