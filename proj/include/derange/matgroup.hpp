#pragma once

// Semilinear groups G <= GammaL_d(q) acting on row vectors V = F_q^d.
//
// An element is (A, e): v -> phi_e(v) * A, with phi_e the entrywise p^e-th power.
// "a then b" composition: (A, e) then (B, e') = (phi_{e'}(A) * B, e + e').
// Elements are stored as d*d + 1 words of 16 bits (entry codes, then e), which
// limits matrix groups to q <= 2^16.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "derange/check_result.hpp"
#include "derange/element_table.hpp"
#include "derange/ffield.hpp"
#include "derange/parallel.hpp"
#include "derange/perm.hpp"
#include "derange/split_group.hpp"

namespace derange {

using MatWord = std::uint16_t;

inline constexpr std::uint64_t kMatrixFieldCeiling = std::uint64_t{1} << 16;

struct SemilinearMap {
  std::size_t d = 0;
  std::vector<FieldElem> a;  // row-major d*d
  unsigned frob = 0;

  FieldElem at(std::size_t i, std::size_t j) const { return a[i * d + j]; }
  FieldElem& at(std::size_t i, std::size_t j) { return a[i * d + j]; }
  bool is_linear() const { return frob == 0; }

  static SemilinearMap identity(const FieldCtx& k, std::size_t d) {
    SemilinearMap m{d, std::vector<FieldElem>(d * d, k.zero()), 0};
    for (std::size_t i = 0; i < d; ++i) m.at(i, i) = k.one();
    return m;
  }

  static SemilinearMap scalar(const FieldCtx& k, std::size_t d, FieldElem s) {
    SemilinearMap m = identity(k, d);
    for (std::size_t i = 0; i < d; ++i) m.at(i, i) = s;
    return m;
  }

  std::vector<MatWord> words() const {
    std::vector<MatWord> w(d * d + 1);
    for (std::size_t i = 0; i < d * d; ++i) w[i] = static_cast<MatWord>(a[i].code);
    w[d * d] = static_cast<MatWord>(frob);
    return w;
  }

  static SemilinearMap from_words(const MatWord* w, std::size_t d) {
    SemilinearMap m{d, std::vector<FieldElem>(d * d), w[d * d]};
    for (std::size_t i = 0; i < d * d; ++i) m.a[i] = FieldElem{w[i]};
    return m;
  }

  friend bool operator==(const SemilinearMap&, const SemilinearMap&) = default;
};

/// Word-level arithmetic for one (field, dimension) pair.
class MatOps {
 public:
  MatOps(FieldPtr k, std::size_t d) : k_(std::move(k)), d_(d) {
    if (k_->q() > kMatrixFieldCeiling) throw std::invalid_argument("matrix groups need q <= 2^16");
    if (d == 0) throw std::invalid_argument("dimension must be positive");
  }

  const FieldCtx& field() const { return *k_; }
  const FieldPtr& field_ptr() const { return k_; }
  std::size_t dim() const { return d_; }
  std::size_t stride() const { return d_ * d_ + 1; }

  /// out = a then b.
  void compose(const MatWord* a, const MatWord* b, MatWord* out) const {
    const FieldCtx& k = *k_;
    const std::size_t d = d_;
    const unsigned eb = b[d * d];
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        FieldElem s = k.zero();
        for (std::size_t l = 0; l < d; ++l) {
          FieldElem x{a[i * d + l]};
          if (x.code == 0) continue;
          if (eb) x = k.frobenius(x, eb);
          s = k.add(s, k.mul(x, FieldElem{b[l * d + j]}));
        }
        out[i * d + j] = static_cast<MatWord>(s.code);
      }
    }
    out[d * d] = static_cast<MatWord>((a[d * d] + eb) % k.f());
  }

  SemilinearMap compose(const SemilinearMap& a, const SemilinearMap& b) const {
    check(a);
    check(b);
    auto wa = a.words(), wb = b.words();
    std::vector<MatWord> out(stride());
    compose(wa.data(), wb.data(), out.data());
    return SemilinearMap::from_words(out.data(), d_);
  }

  SemilinearMap identity() const { return SemilinearMap::identity(*k_, d_); }

  /// Inverse of (A, e) is (phi_{-e}(A^{-1}), -e).
  SemilinearMap invert(const SemilinearMap& g) const {
    check(g);
    auto inv = matrix_inverse(g.a);
    if (!inv) throw std::domain_error("matrix is singular");
    const unsigned f = k_->f();
    const unsigned back = (f - g.frob % f) % f;
    SemilinearMap r{d_, std::move(*inv), back};
    for (auto& x : r.a) x = k_->frobenius(x, back);
    return r;
  }

  /// v -> phi_e(v) * A.
  std::vector<FieldElem> apply(const MatWord* g, const std::vector<FieldElem>& v) const {
    const FieldCtx& k = *k_;
    const unsigned e = g[d_ * d_];
    std::vector<FieldElem> out(d_, k.zero());
    for (std::size_t i = 0; i < d_; ++i) {
      FieldElem x = e ? k.frobenius(v[i], e) : v[i];
      if (x.code == 0) continue;
      for (std::size_t j = 0; j < d_; ++j) out[j] = k.add(out[j], k.mul(x, FieldElem{g[i * d_ + j]}));
    }
    return out;
  }

  FieldElem determinant(const std::vector<FieldElem>& m) const {
    const FieldCtx& k = *k_;
    std::vector<FieldElem> a = m;
    FieldElem det = k.one();
    for (std::size_t c = 0; c < d_; ++c) {
      std::size_t piv = c;
      while (piv < d_ && a[piv * d_ + c].code == 0) ++piv;
      if (piv == d_) return k.zero();
      if (piv != c) {
        for (std::size_t j = 0; j < d_; ++j) std::swap(a[piv * d_ + j], a[c * d_ + j]);
        det = k.neg(det);
      }
      const FieldElem pv = a[c * d_ + c];
      det = k.mul(det, pv);
      const FieldElem pinv = k.inv(pv);
      for (std::size_t r = c + 1; r < d_; ++r) {
        FieldElem factor = k.mul(a[r * d_ + c], pinv);
        if (factor.code == 0) continue;
        for (std::size_t j = c; j < d_; ++j) a[r * d_ + j] = k.sub(a[r * d_ + j], k.mul(factor, a[c * d_ + j]));
      }
    }
    return det;
  }

  /// Rank over F_q of a rows x cols matrix.
  std::size_t rank(std::vector<FieldElem> a, std::size_t rows, std::size_t cols) const {
    const FieldCtx& k = *k_;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
      std::size_t piv = r;
      while (piv < rows && a[piv * cols + c].code == 0) ++piv;
      if (piv == rows) continue;
      for (std::size_t j = 0; j < cols; ++j) std::swap(a[piv * cols + j], a[r * cols + j]);
      const FieldElem pinv = k.inv(a[r * cols + c]);
      for (std::size_t i = r + 1; i < rows; ++i) {
        FieldElem factor = k.mul(a[i * cols + c], pinv);
        if (factor.code == 0) continue;
        for (std::size_t j = c; j < cols; ++j) a[i * cols + j] = k.sub(a[i * cols + j], k.mul(factor, a[r * cols + j]));
      }
      ++r;
    }
    return r;
  }

  std::optional<std::vector<FieldElem>> matrix_inverse(const std::vector<FieldElem>& m) const {
    const FieldCtx& k = *k_;
    const std::size_t n = d_, w = 2 * d_;
    std::vector<FieldElem> a(n * w, k.zero());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) a[i * w + j] = m[i * n + j];
      a[i * w + n + i] = k.one();
    }
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = c;
      while (piv < n && a[piv * w + c].code == 0) ++piv;
      if (piv == n) return std::nullopt;
      for (std::size_t j = 0; j < w; ++j) std::swap(a[piv * w + j], a[c * w + j]);
      const FieldElem pinv = k.inv(a[c * w + c]);
      for (std::size_t j = 0; j < w; ++j) a[c * w + j] = k.mul(a[c * w + j], pinv);
      for (std::size_t i = 0; i < n; ++i) {
        if (i == c || a[i * w + c].code == 0) continue;
        const FieldElem factor = a[i * w + c];
        for (std::size_t j = 0; j < w; ++j) a[i * w + j] = k.sub(a[i * w + j], k.mul(factor, a[c * w + j]));
      }
    }
    std::vector<FieldElem> out(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] = a[i * w + n + j];
    return out;
  }

  /// Dimension over F_q of the fixed space of a linear element (test oracle for the prime-field path).
  std::size_t fixed_space_dim_linear(const MatWord* g) const {
    if (g[d_ * d_] != 0) throw std::invalid_argument("fixed_space_dim_linear: element is semilinear");
    const FieldCtx& k = *k_;
    std::vector<FieldElem> m(d_ * d_);
    for (std::size_t i = 0; i < d_ * d_; ++i) m[i] = FieldElem{g[i]};
    for (std::size_t i = 0; i < d_; ++i) m[i * d_ + i] = k.sub(m[i * d_ + i], k.one());
    return d_ - rank(std::move(m), d_, d_);
  }

  /// Number of v in V with phi_e(v) * A = v; always a power of p.
  std::uint64_t fixed_vector_count(const MatWord* g) const {
    const FieldCtx& k = *k_;
    const std::uint64_t p = k.p(), q = k.q();
    const unsigned f = k.f(), e = g[d_ * d_];
    if (d_ == 1) {
      // v = w^j is fixed iff j (p^e - 1) = -log(a) mod (q - 1); a gcd-sized solution set or none.
      if (q == 2) return 2;
      const std::uint64_t n = q - 1;
      const std::uint64_t la = k.dlog(FieldElem{g[0]});
      const std::uint64_t pe1 = checked_pow(p, e) - 1;
      const std::uint64_t gg = std::gcd(pe1 % n, n);
      const std::uint64_t rhs = (n - la) % n;
      return 1 + (rhs % gg == 0 ? gg : 0);
    }
    // Z_p-linear model on d*f coordinates: coordinate (i, j) is the x^j coefficient of v_i.
    const std::size_t n = d_ * f;
    std::vector<std::uint64_t> m(n * n, 0);
    std::vector<FieldElem> basis(d_, k.zero());
    std::uint64_t scale = 1;
    for (unsigned j = 0; j < f; ++j, scale *= p) {
      for (std::size_t i = 0; i < d_; ++i) {
        std::fill(basis.begin(), basis.end(), k.zero());
        basis[i] = FieldElem{static_cast<std::uint32_t>(scale)};
        auto img = apply(g, basis);
        const std::size_t row = i * f + j;
        for (std::size_t c = 0; c < d_; ++c) {
          std::uint64_t x = img[c].code;
          for (unsigned t = 0; t < f; ++t, x /= p) m[row * n + c * f + t] = x % p;
        }
        m[row * n + row] = (m[row * n + row] + p - 1) % p;
      }
    }
    return checked_pow(p, static_cast<unsigned>(n - rank_mod_p(std::move(m), n, p)));
  }

  std::uint64_t fixed_vector_count(const SemilinearMap& g) const {
    check(g);
    auto w = g.words();
    return fixed_vector_count(w.data());
  }

  void check(const SemilinearMap& g) const {
    if (g.d != d_ || g.a.size() != d_ * d_) throw std::invalid_argument("dimension mismatch");
    if (g.frob >= k_->f()) throw std::invalid_argument("frobenius exponent out of range");
    for (auto x : g.a)
      if (x.code >= k_->q()) throw std::invalid_argument("entry outside field");
  }

 private:
  static std::size_t rank_mod_p(std::vector<std::uint64_t> a, std::size_t n, std::uint64_t p) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < n; ++c) {
      std::size_t piv = r;
      while (piv < n && a[piv * n + c] == 0) ++piv;
      if (piv == n) continue;
      for (std::size_t j = 0; j < n; ++j) std::swap(a[piv * n + j], a[r * n + j]);
      const std::uint64_t pinv = powmod(a[r * n + c], p - 2, p);
      for (std::size_t i = r + 1; i < n; ++i) {
        if (a[i * n + c] == 0) continue;
        const std::uint64_t factor = mulmod(a[i * n + c], pinv, p);
        for (std::size_t j = c; j < n; ++j) a[i * n + j] = (a[i * n + j] + p - mulmod(factor, a[r * n + j], p)) % p;
      }
      ++r;
    }
    return r;
  }

  FieldPtr k_;
  std::size_t d_;
};

class MatGroup {
 public:
  MatGroup(FieldPtr k, std::size_t d, std::vector<SemilinearMap> gens) : ops_(std::move(k), d), gens_(std::move(gens)) {
    for (const auto& g : gens_) {
      ops_.check(g);
      if (!ops_.matrix_inverse(g.a)) throw std::invalid_argument("generator is singular");
    }
    if (gens_.empty()) gens_.push_back(ops_.identity());
  }

  const MatOps& ops() const { return ops_; }
  const FieldCtx& field() const { return ops_.field(); }
  const FieldPtr& field_ptr() const { return ops_.field_ptr(); }
  std::size_t dim() const { return ops_.dim(); }
  const std::vector<SemilinearMap>& generators() const { return gens_; }

  bool is_linear() const {
    return std::all_of(gens_.begin(), gens_.end(), [](const SemilinearMap& g) { return g.is_linear(); });
  }

  bool enumerated() const { return elements_.has_value(); }

  MatGroup& enumerate(std::size_t cap = kDefaultOrderCap) {
    if (enumerated()) return *this;
    std::vector<std::vector<MatWord>> words;
    for (const auto& g : gens_) words.push_back(g.words());
    const MatOps& ops = ops_;
    elements_ = dimino_closure<MatWord>(ops_.stride(), ops_.identity().words(), std::move(words),
                                     [&ops](const MatWord* a, const MatWord* b, MatWord* out) { ops.compose(a, b, out); },
                                     cap);
    return *this;
  }

  const ElementTable<MatWord>& elements() const {
    if (!elements_) throw std::logic_error("matrix group not enumerated");
    return *elements_;
  }

  std::size_t order() const { return elements().size(); }
  SemilinearMap element(std::size_t i) const { return SemilinearMap::from_words(elements()[i], dim()); }

  /// |V| = q^d.
  std::uint64_t vector_count() const { return checked_pow(field().q(), static_cast<unsigned>(dim())); }

 private:
  MatOps ops_;
  std::vector<SemilinearMap> gens_;
  std::optional<ElementTable<MatWord>> elements_;
};

struct AffineStats {
  ExactRatio alpha;
  ExactRatio eta;
  ExactRatio delta_affine;
  std::uint64_t order = 0;
  std::uint64_t a_order = 0;
  std::uint64_t a_index = 0;
  bool semiregular_nonzero = false;
  std::map<std::uint64_t, std::uint64_t> fixed_count_histogram;  // pi value -> number of elements
};

/// pi(g) for every element, in element order.
inline std::vector<std::uint64_t> fixed_vector_counts(const MatGroup& g) {
  const auto& el = g.elements();
  std::vector<std::uint64_t> pi(el.size());
  constexpr std::size_t kChunk = 1024;
  parallel_for((el.size() + kChunk - 1) / kChunk, [&](std::size_t c) {
    for (std::size_t i = c * kChunk; i < std::min(el.size(), (c + 1) * kChunk); ++i)
      pi[i] = g.ops().fixed_vector_count(el[i]);
  });
  return pi;
}

/// Subgroup generated by the elements whose index satisfies pred, grown in element order.
template <class Pred>
ElementTable<MatWord> mat_subgroup_generated_by(const MatGroup& g, Pred pred, std::size_t cap = kDefaultOrderCap) {
  const MatOps& ops = g.ops();
  auto compose = [&ops](const MatWord* a, const MatWord* b, MatWord* out) { ops.compose(a, b, out); };
  IncrementalClosure<MatWord, decltype(compose)> closure(ops.stride(), ops.identity().words(), compose, cap);
  const auto& el = g.elements();
  for (std::size_t i = 0; i < el.size(); ++i)
    if (pred(i) && !closure.contains(el[i])) closure.add_generator(el[i]);
  return closure.release();
}

/// alpha, eta, delta(V x| G) = 1 - eta, |G : A(G)|.
inline AffineStats affine_stats(const MatGroup& g, bool with_a_subgroup = true) {
  const auto pi = fixed_vector_counts(g);
  AffineStats s;
  s.order = g.order();
  for (auto v : pi) ++s.fixed_count_histogram[v];
  std::uint64_t with_fixed = 0;
  ExactRatio sum(0);
  for (auto [value, count] : s.fixed_count_histogram) {
    if (value > 1) with_fixed += count;
    sum += ExactRatio::from_u64(count, value);
  }
  s.alpha = ExactRatio::from_u64(with_fixed, s.order);
  s.eta = sum / ExactRatio::from_u64(s.order);
  s.delta_affine = ExactRatio(1) - s.eta;
  s.semiregular_nonzero = (with_fixed == 1);
  if (with_a_subgroup) {
    auto a = mat_subgroup_generated_by(g, [&pi](std::size_t i) { return pi[i] > 1; });
    s.a_order = a.size();
    s.a_index = s.order / s.a_order;
  }
  return s;
}

/// (1 - 1/q_eff) alpha <= delta <= alpha.
inline CheckResult sandwich_check(const std::string& id, const AffineStats& s, std::uint64_t q_effective) {
  const ExactRatio lower = (ExactRatio(1) - ExactRatio::from_u64(1, q_effective)) * s.alpha;
  const bool ok = lower <= s.delta_affine && s.delta_affine <= s.alpha;
  nlohmann::json w{{"alpha", s.alpha.str()},
                   {"delta", s.delta_affine.str()},
                   {"lower", lower.str()},
                   {"q_effective", q_effective}};
  return make_check(id, "(1 - 1/q) alpha(G) <= delta(V x| G) <= alpha(G)", pass_if(ok), std::move(w), s.delta_affine,
                    s.alpha);
}

/// Points of V are integers sum_i code(v_i) q^i.
inline std::vector<FieldElem> decode_vector(const FieldCtx& k, std::size_t d, std::uint64_t index) {
  std::vector<FieldElem> v(d);
  for (std::size_t i = 0; i < d; ++i, index /= k.q()) v[i] = FieldElem{static_cast<std::uint32_t>(index % k.q())};
  return v;
}

inline std::uint64_t encode_vector(const FieldCtx& k, const std::vector<FieldElem>& v) {
  std::uint64_t x = 0;
  for (std::size_t i = v.size(); i-- > 0;) x = x * k.q() + v[i].code;
  return x;
}

inline constexpr std::uint64_t kAffineDegreeCeiling = std::uint64_t{1} << 16;

/// Generators of V x| G acting on the q^d vectors: the generators of G, then
/// translations by an F_p-basis of V.
inline std::vector<Perm> affine_generators(const MatGroup& g) {
  const FieldCtx& k = g.field();
  const std::size_t d = g.dim();
  const std::uint64_t n = g.vector_count();
  if (n > kAffineDegreeCeiling) throw std::invalid_argument("affine_to_perm: |V| above 2^16");
  std::vector<std::vector<FieldElem>> points(n);
  for (std::uint64_t x = 0; x < n; ++x) points[x] = decode_vector(k, d, x);
  std::vector<Perm> gens;
  for (const auto& s : g.generators()) {
    auto w = s.words();
    Perm p;
    p.images.resize(n);
    for (std::uint64_t x = 0; x < n; ++x) p.images[x] = static_cast<Point>(encode_vector(k, g.ops().apply(w.data(), points[x])));
    gens.push_back(std::move(p));
  }
  std::uint64_t scale = 1;
  for (unsigned j = 0; j < k.f(); ++j, scale *= k.p()) {
    for (std::size_t i = 0; i < d; ++i) {
      std::vector<FieldElem> b(d, k.zero());
      b[i] = FieldElem{static_cast<std::uint32_t>(scale)};
      Perm p;
      p.images.resize(n);
      for (std::uint64_t x = 0; x < n; ++x) {
        auto v = points[x];
        v[i] = k.add(v[i], b[i]);
        p.images[x] = static_cast<Point>(encode_vector(k, v));
      }
      gens.push_back(std::move(p));
    }
  }
  return gens;
}

inline PermGroup affine_to_perm(const MatGroup& g) {
  return PermGroup(static_cast<std::size_t>(g.vector_count()), affine_generators(g));
}

/// The affine group in point-stabilizer form (stabilizer of the zero vector).
inline SplitPermGroup affine_to_split(const MatGroup& g, std::size_t cap = kDefaultOrderCap) {
  return SplitPermGroup(static_cast<std::size_t>(g.vector_count()), affine_generators(g), cap);
}

/// |V x| G : D(V x| G)| from the permutation image against |G : A(G)|.
inline CheckResult a_subgroup_index_identity(const std::string& id, const MatGroup& g, const AffineStats& s,
                                             std::size_t cap = kDefaultOrderCap) {
  const SplitPermGroup affine = affine_to_split(g, cap);
  const std::uint64_t d_index = derangement_subgroup_index(affine, cap);
  nlohmann::json w{{"affine_order", affine.order()}, {"affine_D_index", d_index}, {"G_A_index", s.a_index}};
  return make_check(id, "|V x| G : D(V x| G)| = |G : A(G)|", pass_if(d_index == s.a_index), std::move(w),
                    ExactRatio::from_u64(d_index), ExactRatio::from_u64(s.a_index));
}

inline constexpr std::uint64_t kSubspaceScanCeiling = 1'000'000;

/// No proper nonzero invariant subspace. A subspace W is invariant iff it contains
/// the submodule spanned by each of its vectors, so it suffices to spin one vector
/// per one-dimensional subspace and check that each spans V.
inline bool is_irreducible(const MatGroup& g) {
  if (!g.is_linear()) throw std::invalid_argument("is_irreducible: linear groups only");
  const FieldCtx& k = g.field();
  const std::size_t d = g.dim();
  if (d == 1) return true;
  const std::uint64_t q = k.q();
  const std::uint64_t lines = (checked_pow(q, static_cast<unsigned>(d)) - 1) / (q - 1);
  if (lines > kSubspaceScanCeiling) throw std::invalid_argument("is_irreducible: subspace count above ceiling");
  std::vector<std::vector<MatWord>> gens;
  for (const auto& s : g.generators()) gens.push_back(s.words());
  const std::uint64_t n = checked_pow(q, static_cast<unsigned>(d));
  for (std::uint64_t x = 1; x < n; ++x) {
    auto v = decode_vector(k, d, x);
    // Normalized representatives: last nonzero coordinate equal to one.
    std::size_t last = d;
    while (last > 0 && v[last - 1].code == 0) --last;
    if (v[last - 1] != k.one()) continue;
    // Spin: echelon basis of the submodule generated by v.
    std::vector<std::vector<FieldElem>> basis;
    std::vector<std::size_t> pivots;
    auto reduce = [&](std::vector<FieldElem> w) {
      for (std::size_t b = 0; b < basis.size(); ++b) {
        FieldElem c = w[pivots[b]];
        if (c.code == 0) continue;
        for (std::size_t j = 0; j < d; ++j) w[j] = k.sub(w[j], k.mul(c, basis[b][j]));
      }
      return w;
    };
    std::vector<std::vector<FieldElem>> queue{v};
    for (std::size_t qi = 0; qi < queue.size() && basis.size() < d; ++qi) {
      auto w = reduce(queue[qi]);
      std::size_t piv = 0;
      while (piv < d && w[piv].code == 0) ++piv;
      if (piv == d) continue;
      const FieldElem inv = k.inv(w[piv]);
      for (auto& c : w) c = k.mul(c, inv);
      for (std::size_t b = 0; b < basis.size(); ++b) {
        FieldElem c = basis[b][piv];
        if (c.code == 0) continue;
        for (std::size_t j = 0; j < d; ++j) basis[b][j] = k.sub(basis[b][j], k.mul(c, w[j]));
      }
      basis.push_back(w);
      pivots.push_back(piv);
      for (const auto& gw : gens) queue.push_back(g.ops().apply(gw.data(), queue[qi]));
    }
    if (basis.size() < d) return false;
  }
  return true;
}

/// Proportion of x in base * rep with lambda as an eigenvalue (d = 2, linear).
inline ExactRatio coset_eigenvalue_proportion(const MatGroup& base, const SemilinearMap& rep, FieldElem lambda) {
  if (base.dim() != 2 || !base.is_linear() || !rep.is_linear())
    throw std::invalid_argument("coset_eigenvalue_proportion: linear d = 2 only");
  const MatOps& ops = base.ops();
  const FieldCtx& k = base.field();
  const auto r = rep.words();
  const auto& el = base.elements();
  std::vector<MatWord> x(ops.stride());
  std::uint64_t hits = 0;
  for (std::size_t i = 0; i < el.size(); ++i) {
    ops.compose(el[i], r.data(), x.data());
    std::vector<FieldElem> m{FieldElem{x[0]}, FieldElem{x[1]}, FieldElem{x[2]}, FieldElem{x[3]}};
    m[0] = k.sub(m[0], lambda);
    m[3] = k.sub(m[3], lambda);
    hits += (ops.determinant(m).code == 0);
  }
  return ExactRatio::from_u64(hits, el.size());
}

}  // namespace derange
