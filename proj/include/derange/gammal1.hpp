#pragma once

// Subgroups of GammaL_1(q) acting on F_q, handled directly on field elements.
//
// An element (k, e) acts as v -> v^{p^e} * w^k, w the field generator; its code
// is k * f + e. Composition "a then b": (k_a, e_a)(k_b, e_b) = (k_a p^{e_b} + k_b, e_a + e_b).
//
// A subgroup G projects onto <tau^{e0}> for a divisor e0 of f; writing P = p^{e0}
// and F = f / e0, G = <H, z> with H = G n GL_1(q) of order t and z = (c, e0).
// x-bar is the class of w^c in GL_1(q)/H (cyclic of order M = (q-1)/t), m is its
// order and C = M / m.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "derange/check_result.hpp"
#include "derange/ffield.hpp"
#include "derange/matgroup.hpp"
#include "derange/numtheory.hpp"

namespace derange {

inline constexpr std::uint64_t kGammaL1FieldCeiling = std::uint64_t{1} << 16;
inline constexpr std::uint64_t kGammaL1OrderCeiling = 10'000'000;

class GammaL1Group {
 public:
  GammaL1Group(FieldPtr k, std::vector<std::uint32_t> codes) : k_(std::move(k)), codes_(std::move(codes)) {
    std::sort(codes_.begin(), codes_.end());
    derive_parameters();
  }

  const FieldCtx& field() const { return *k_; }
  const FieldPtr& field_ptr() const { return k_; }
  const std::vector<std::uint32_t>& codes() const { return codes_; }
  std::uint64_t order() const { return codes_.size(); }

  std::uint64_t t() const { return t_; }
  unsigned e0() const { return e0_; }
  std::uint64_t P() const { return P_; }
  unsigned F() const { return F_; }
  std::uint64_t c() const { return c_; }
  std::uint64_t M() const { return M_; }
  std::uint64_t m() const { return m_; }
  std::uint64_t C() const { return C_; }

  std::uint64_t k_of(std::uint32_t code) const { return code / k_->f(); }
  unsigned e_of(std::uint32_t code) const { return code % k_->f(); }

  std::uint32_t compose(std::uint32_t a, std::uint32_t b) const { return compose_codes(*k_, a, b); }

  static std::uint32_t compose_codes(const FieldCtx& k, std::uint32_t a, std::uint32_t b) {
    const unsigned f = k.f();
    const std::uint64_t n = k.q() - 1;
    const std::uint64_t ka = a / f, kb = b / f;
    const unsigned ea = a % f, eb = b % f;
    std::uint64_t scaled = ka;
    for (unsigned i = 0; i < eb; ++i) scaled = scaled * k.p() % n;
    return static_cast<std::uint32_t>(((scaled + kb) % n) * f + (ea + eb) % f);
  }

  static std::uint32_t code_of(const FieldCtx& k, std::uint64_t log, unsigned e) {
    return static_cast<std::uint32_t>((log % (k.q() - 1)) * k.f() + e);
  }

  /// Brute-force count of v in F_q (including 0) with v^{p^e} w^k = v.
  std::uint64_t fixed_count(std::uint32_t code) const {
    const FieldCtx& k = *k_;
    const FieldElem a = k.exp(static_cast<long long>(k_of(code)));
    const unsigned e = e_of(code);
    std::uint64_t c = 0;
    for (std::uint64_t v = 0; v < k.q(); ++v) {
      const FieldElem x{static_cast<std::uint32_t>(v)};
      c += (k.mul(k.frobenius(x, e), a) == x);
    }
    return c;
  }

  /// Same group as a one-dimensional semilinear matrix group.
  MatGroup to_matgroup() const {
    const FieldCtx& k = *k_;
    std::vector<SemilinearMap> gens;
    if (t_ > 1) gens.push_back(SemilinearMap{1, {k.exp(static_cast<long long>(M_))}, 0});
    if (e0_ < k.f()) gens.push_back(SemilinearMap{1, {k.exp(static_cast<long long>(c_))}, e0_});
    return MatGroup(k_, 1, std::move(gens));
  }

  std::string label() const {
    return "GammaL1(" + std::to_string(k_->q()) + ")[t=" + std::to_string(t_) + ",e0=" + std::to_string(e0_) +
           ",c=" + std::to_string(c_) + "]";
  }

  /// Proper divisors of F; these index the cosets z^l H examined below.
  std::vector<unsigned> proper_levels() const {
    std::vector<unsigned> out;
    for (auto d : divisors(F_))
      if (d < F_) out.push_back(static_cast<unsigned>(d));
    return out;
  }

  /// Codes of the coset z^l H.
  std::vector<std::uint32_t> coset(unsigned ell) const {
    std::uint32_t zl = code_of(*k_, 0, 0);
    const std::uint32_t z = code_of(*k_, c_, e0_ % k_->f());
    for (unsigned i = 0; i < ell; ++i) zl = compose(zl, z);
    std::vector<std::uint32_t> out;
    for (std::uint64_t j = 0; j < t_; ++j) out.push_back(compose(zl, code_of(*k_, j * M_, 0)));
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  void derive_parameters() {
    const FieldCtx& k = *k_;
    const unsigned f = k.f();
    t_ = 0;
    e0_ = f;
    std::uint64_t best_k = 0;
    for (auto code : codes_) {
      const unsigned e = e_of(code);
      if (e == 0) {
        ++t_;
      } else if (e < e0_ || (e == e0_ && k_of(code) < best_k)) {
        e0_ = e;
        best_k = k_of(code);
      }
    }
    M_ = (k.q() - 1) / t_;
    P_ = checked_pow(k.p(), e0_);
    F_ = f / e0_;
    c_ = e0_ < f ? best_k % M_ : 0;
    C_ = std::gcd(c_, M_);
    m_ = M_ / C_;
  }

  FieldPtr k_;
  std::vector<std::uint32_t> codes_;
  std::uint64_t t_ = 0;
  unsigned e0_ = 0;
  std::uint64_t P_ = 0;
  unsigned F_ = 0;
  std::uint64_t c_ = 0;
  std::uint64_t M_ = 0;
  std::uint64_t m_ = 0;
  std::uint64_t C_ = 0;
};

namespace detail {

inline std::vector<std::uint32_t> gammal1_closure(const FieldCtx& k, const std::vector<std::uint32_t>& gens) {
  const std::uint64_t total = (k.q() - 1) * k.f();
  std::vector<bool> seen(total, false);
  std::vector<std::uint32_t> out{0};
  seen[0] = true;
  for (std::size_t i = 0; i < out.size(); ++i)
    for (auto g : gens) {
      const std::uint32_t x = GammaL1Group::compose_codes(k, out[i], g);
      if (!seen[x]) {
        seen[x] = true;
        out.push_back(x);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Every subgroup of GammaL_1(q), each exactly once. Candidates are <w^{(q-1)/t}, (c, e0)>
/// for t | q-1, e0 | f and 0 <= c < (q-1)/t; every subgroup is generated by its linear
/// part and one element over the generator of its Galois image, so the grid is complete.
inline std::vector<GammaL1Group> enumerate_gammal1_subgroups(const FieldPtr& k) {
  if (k->q() > kGammaL1FieldCeiling) throw std::invalid_argument("enumerate_gammal1_subgroups: q above 2^16");
  if ((k->q() - 1) * k->f() > kGammaL1OrderCeiling)
    throw std::invalid_argument("enumerate_gammal1_subgroups: |GammaL_1(q)| above ceiling");
  const std::uint64_t n = k->q() - 1;
  const unsigned f = k->f();
  std::map<std::vector<std::uint32_t>, bool> seen;
  std::vector<GammaL1Group> out;
  for (auto e0 : divisors(f)) {
    for (auto t : divisors(n)) {
      const std::uint64_t M = n / t;
      const std::uint64_t c_count = e0 < f ? M : 1;
      for (std::uint64_t c = 0; c < c_count; ++c) {
        std::vector<std::uint32_t> gens{GammaL1Group::code_of(*k, M, 0)};
        if (e0 < f) gens.push_back(GammaL1Group::code_of(*k, c, static_cast<unsigned>(e0)));
        auto codes = detail::gammal1_closure(*k, gens);
        if (seen.emplace(codes, true).second) out.emplace_back(k, std::move(codes));
      }
    }
  }
  return out;
}

/// Closure of the given (log, frobenius exponent) generators.
inline GammaL1Group gammal1_from_generators(const FieldPtr& k, const std::vector<std::pair<std::uint64_t, unsigned>>& gens) {
  std::vector<std::uint32_t> codes;
  for (auto [log, e] : gens) codes.push_back(GammaL1Group::code_of(*k, log, e % k->f()));
  return GammaL1Group(k, detail::gammal1_closure(*k, codes));
}

struct CosetFixerReport {
  unsigned ell = 0;
  bool nonempty_predicted = false;   // power criterion
  bool criterion_predicted = false;  // valuation criterion
  bool nonempty_actual = false;
  std::uint64_t count_formula = 0;
  std::uint64_t count_actual = 0;
  bool fixers_fix_P_ell = true;  // every fixer fixes exactly P^l vectors
};

/// x-bar^{(P^l - 1)/(P - 1)} is a (P^l - 1)-th power in the cyclic group GL_1(q)/H of order M.
inline bool power_criterion(const GammaL1Group& g, unsigned ell) {
  const std::uint64_t M = g.M();
  const std::uint64_t Pl = checked_pow(g.P(), ell);
  const std::uint64_t rep = static_cast<std::uint64_t>(repunit(g.P(), ell).get_ui()) % M;
  const std::uint64_t target = mulmod(g.c() % M, rep, M);
  return target % std::gcd((Pl - 1) % M, M) == 0;
}

/// For each prime r | (F, P - 1): v_r(m) <= v_r((P^l - 1)/(P - 1)) or v_r(P - 1) <= v_r(C).
inline bool valuation_criterion(const GammaL1Group& g, unsigned ell) {
  const std::uint64_t P = g.P();
  const std::uint64_t b = std::gcd<std::uint64_t>(g.F(), P - 1);
  if (b == 1) return true;
  for (auto r : distinct_prime_factors(b)) {
    const bool i = padic_val(r, g.m()) <= gamma_bar(r, P, ell);
    const bool ii = padic_val(r, P - 1) <= padic_val(r, g.C());
    if (!i && !ii) return false;
  }
  return true;
}

inline CosetFixerReport coset_fixers(const GammaL1Group& g, unsigned ell) {
  if (ell == 0 || g.F() % ell != 0 || ell >= g.F())
    throw std::invalid_argument("coset_fixers: level must be a proper divisor of F");
  CosetFixerReport r;
  r.ell = ell;
  const std::uint64_t q = g.field().q();
  const std::uint64_t Pl = checked_pow(g.P(), ell);
  r.count_formula = std::gcd((q - 1) / (Pl - 1), g.t());
  r.nonempty_predicted = power_criterion(g, ell);
  r.criterion_predicted = valuation_criterion(g, ell);
  for (auto code : g.coset(ell)) {
    const std::uint64_t fixed = g.fixed_count(code);
    if (fixed > 1) {
      ++r.count_actual;
      if (fixed != Pl) r.fixers_fix_P_ell = false;
    }
  }
  r.nonempty_actual = r.count_actual > 0;
  return r;
}

struct GammaL1Stats {
  ExactRatio alpha;
  ExactRatio eta;
  ExactRatio delta;
  std::uint64_t delta_count = 0;  // |Delta|: nontrivial elements fixing a nonzero vector
  std::uint64_t a_order = 0;
  std::vector<std::uint64_t> fixed;  // per element, in code order
};

/// Statistics from brute-force fixed-point counts and a closure for A(G).
inline GammaL1Stats gammal1_stats(const GammaL1Group& g) {
  GammaL1Stats s;
  const auto& codes = g.codes();
  s.fixed.resize(codes.size());
  ExactRatio eta_sum(0);
  std::uint64_t with_fixed = 0;
  std::map<std::uint64_t, std::uint64_t> hist;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    s.fixed[i] = g.fixed_count(codes[i]);
    ++hist[s.fixed[i]];
    if (s.fixed[i] > 1) ++with_fixed;
  }
  for (auto [v, c] : hist) eta_sum += ExactRatio::from_u64(c, v);
  s.alpha = ExactRatio::from_u64(with_fixed, codes.size());
  s.eta = eta_sum / ExactRatio::from_u64(codes.size());
  s.delta = ExactRatio(1) - s.eta;
  s.delta_count = with_fixed - 1;
  std::vector<std::uint32_t> gens;
  std::vector<std::uint32_t> a{0};
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (s.fixed[i] <= 1 || std::binary_search(a.begin(), a.end(), codes[i])) continue;
    gens.push_back(codes[i]);
    a = detail::gammal1_closure(g.field(), gens);
  }
  s.a_order = a.size();
  return s;
}

/// Checks of the coset count, both nonemptiness criteria and the fixed-space size
/// for every proper level of g.
inline std::vector<CheckResult> check_coset_levels(const GammaL1Group& g) {
  std::vector<CheckResult> out;
  for (unsigned ell : g.proper_levels()) {
    const auto r = coset_fixers(g, ell);
    const std::string base = g.label() + "/l=" + std::to_string(ell);
    nlohmann::json w{{"t", g.t()},
                     {"m", g.m()},
                     {"C", g.C()},
                     {"e0", g.e0()},
                     {"P", g.P()},
                     {"F", g.F()},
                     {"predicted", r.nonempty_predicted},
                     {"criterion", r.criterion_predicted},
                     {"actual", r.nonempty_actual},
                     {"count_formula", r.count_formula},
                     {"count_actual", r.count_actual}};
    out.push_back(make_check("coset-formula.power/" + base,
                             "Delta meets z^l H iff x-bar^{(p^l-1)/(p-1)} is a (p^l-1)-th power",
                             pass_if(r.nonempty_predicted == r.nonempty_actual), w));
    out.push_back(make_check("coset-formula.count/" + base, "|Delta n z^l H| = ((q-1)/(p^l-1), t)",
                             r.nonempty_actual ? pass_if(r.count_actual == r.count_formula) : Status::skipped, w,
                             ExactRatio::from_u64(r.count_actual), ExactRatio::from_u64(r.count_formula)));
    out.push_back(make_check("coset-formula.fixed-space/" + base, "every element of Delta n z^l H fixes p^l vectors",
                             pass_if(r.fixers_fix_P_ell), w));
    out.push_back(make_check("valuation-criterion/" + base,
                             "Delta meets z^l H iff for each r | (f, p-1): v_r(m) <= vbar_r(l) or v_r(p-1) <= v_r(C)",
                             pass_if(r.criterion_predicted == r.nonempty_actual), w));
  }
  out.push_back(make_check("coset-formula.parameters/" + g.label(), "t m C = q - 1, m | (q-1)/(p-1), m | (q-1)/t",
                           pass_if(g.t() * g.m() * g.C() == g.field().q() - 1 &&
                                   ((g.field().q() - 1) / (g.P() - 1 == 0 ? 1 : g.P() - 1)) % g.m() == 0 &&
                                   ((g.field().q() - 1) / g.t()) % g.m() == 0),
                           nlohmann::json{{"t", g.t()}, {"m", g.m()}, {"C", g.C()}}));
  return out;
}

/// For square q: on each subgroup not semiregular on F_q \ {0}, alpha >= h(q),
/// delta >= g(q) and |A|/|G| >= 1/(q^{1/2} - 1). Shortfalls are reported as
/// violation-at-small-n. Also checks the closed forms for |A(G)| and delta when
/// Delta lies in the middle coset.
inline std::vector<CheckResult> verify_prop_gammal1(const std::vector<GammaL1Group>& subgroups) {
  std::vector<CheckResult> out;
  if (subgroups.empty()) return out;
  const FieldCtx& k = subgroups.front().field();
  const std::uint64_t q = k.q();
  const bool square = is_perfect_square(mpz_from_u64(q));
  if (!square) {
    out.push_back(make_check("prop-gammal1/q=" + std::to_string(q), "bounds are stated for square q",
                             Status::skipped, nlohmann::json{{"q", q}, {"reason", "q is not a square"}}));
    return out;
  }
  const std::uint64_t root = isqrt(mpz_from_u64(q)).get_ui();
  const ExactRatio hq = bound_h(q).lo, gq = bound_g(q).lo;
  const ExactRatio a_floor = ExactRatio::from_u64(1, root - 1);
  for (const auto& g : subgroups) {
    const auto s = gammal1_stats(g);
    if (s.delta_count == 0) continue;  // semiregular on nonzero vectors
    const std::string id = g.label();
    const ExactRatio a_ratio = ExactRatio::from_u64(s.a_order, g.order());
    nlohmann::json w{{"alpha", s.alpha.str()}, {"delta", s.delta.str()}, {"A_over_G", a_ratio.str()},
                     {"h", hq.str()},          {"g", gq.str()},         {"order", g.order()}};
    auto soft = [](bool ok) { return ok ? Status::pass : Status::violation_at_small_n; };
    out.push_back(make_check("prop-gammal1.alpha-h/" + id, "alpha(G) >= h(q)", soft(s.alpha >= hq), w, s.alpha, hq));
    out.push_back(make_check("prop-gammal1.delta-g/" + id, "delta(V x| G) >= g(q)", soft(s.delta >= gq), w, s.delta, gq));
    out.push_back(make_check("prop-gammal1.A-index/" + id, "|A(G)|/|G| >= 1/(q^{1/2} - 1)", soft(a_ratio >= a_floor), w,
                             a_ratio, a_floor));

    // Is Delta contained in the middle coset z^{F/2} H?
    bool middle_only = g.F() % 2 == 0;
    if (middle_only) {
      const unsigned half_e = (g.F() / 2) * g.e0();
      for (std::size_t i = 0; i < g.codes().size(); ++i)
        if (s.fixed[i] > 1 && g.codes()[i] != 0 && g.e_of(g.codes()[i]) != half_e) middle_only = false;
    }
    if (!middle_only) continue;
    const std::uint64_t a_pred = 2 * std::gcd(g.t(), checked_pow(g.P(), g.F() / 2) + 1);
    out.push_back(make_check("prop-gammal1.A-order/" + id, "|A(G)| = 2 (t, p^{f/2} + 1) when Delta lies in z^{f/2} H",
                             pass_if(s.a_order == a_pred), w, ExactRatio::from_u64(s.a_order),
                             ExactRatio::from_u64(a_pred)));
    // delta = (1 - 1/q^{1/2}) (alpha + 1/(|G| q^{1/2})) and the printed variant with leading factor (q^{1/2} - 1)/q.
    const ExactRatio inner = s.alpha + ExactRatio::from_u64(1, g.order() * root);
    const ExactRatio sqrt_variant = (ExactRatio(1) - ExactRatio::from_u64(1, root)) * inner;
    const ExactRatio q_variant = ExactRatio::from_u64(root - 1, q) * inner;
    nlohmann::json wf{{"delta", s.delta.str()}, {"sqrt_variant", sqrt_variant.str()}, {"q_variant", q_variant.str()}};
    out.push_back(make_check("prop-gammal1.delta-formula-sqrt/" + id,
                             "delta = (1 - q^{-1/2}) (alpha + 1/(|G| q^{1/2})) when Delta lies in z^{f/2} H",
                             pass_if(sqrt_variant == s.delta), wf, s.delta, sqrt_variant));
    wf["note"] = q_variant == s.delta ? "matches brute force" : "leading factor (q^{1/2}-1)/q does not match brute force";
    out.push_back(make_check("prop-gammal1.delta-formula-q/" + id,
                             "printed form: delta = ((q^{1/2} - 1)/q) (alpha + 1/(|G| q^{1/2}))", Status::skipped,
                             wf, s.delta, q_variant));
  }
  return out;
}

inline std::vector<CheckResult> verify_prop_gammal1(const FieldPtr& k) {
  return verify_prop_gammal1(enumerate_gammal1_subgroups(k));
}

}  // namespace derange
