#pragma once

// The finite field F_{p^f} as Z_p[x] modulo the least monic irreducible of
// degree f. Elements are packed radix-p integers in [0, q): the coefficient of
// x^i is the i-th base-p digit.

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "derange/numtheory.hpp"

namespace derange {

struct FieldElem {
  std::uint32_t code = 0;

  friend bool operator==(FieldElem, FieldElem) = default;
  friend auto operator<=>(FieldElem, FieldElem) = default;
};

inline constexpr std::uint64_t kFieldCeiling = std::uint64_t{1} << 32;
inline constexpr std::uint64_t kLogTableCeiling = std::uint64_t{1} << 20;

namespace poly {

// Dense polynomials over Z_p, lowest degree first, no trailing zeros.
using Poly = std::vector<std::uint64_t>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly sub(Poly a, const Poly& b, std::uint64_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

/// a mod m for monic-or-not m with invertible leading coefficient.
inline Poly mod(Poly a, const Poly& m, std::uint64_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint64_t lead_inv = powmod(m.back(), p - 2, p);
  while (a.size() > dm) {
    const std::uint64_t c = mulmod(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) a[shift + i] = (a[shift + i] + p - mulmod(c, m[i], p)) % p;
    trim(a);
  }
  return a;
}

inline Poly mulmod_poly(const Poly& a, const Poly& b, const Poly& m, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
  return mod(std::move(r), m, p);
}

inline Poly powmod_poly(Poly base, std::uint64_t e, const Poly& m, std::uint64_t p) {
  Poly r{1};
  base = mod(std::move(base), m, p);
  while (e) {
    if (e & 1) r = mulmod_poly(r, base, m, p);
    base = mulmod_poly(base, base, m, p);
    e >>= 1;
  }
  return r;
}

inline Poly gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

/// Ben-Or: monic m of degree f is irreducible iff gcd(x^{p^k} - x, m) = 1 for k <= f/2.
inline bool is_irreducible(const Poly& m, std::uint64_t p) {
  const std::size_t f = m.size() - 1;
  if (f == 1) return true;
  if (m[0] == 0) return false;
  const Poly x{0, 1};
  Poly xpk = x;
  for (std::size_t k = 1; k <= f / 2; ++k) {
    xpk = powmod_poly(xpk, p, m, p);
    Poly g = gcd(m, sub(xpk, x, p), p);
    if (g.size() != 1) return false;
  }
  return true;
}

}  // namespace poly

/// Immutable field context. Build with FieldCtx::make and share the pointer.
class FieldCtx {
 public:
  static std::shared_ptr<const FieldCtx> make(std::uint64_t p, unsigned f) {
    return std::shared_ptr<const FieldCtx>(new FieldCtx(p, f));
  }

  std::uint64_t p() const { return p_; }
  unsigned f() const { return f_; }
  std::uint64_t q() const { return q_; }
  std::uint64_t order_mult() const { return q_ - 1; }
  bool has_tables() const { return !exp_.empty(); }

  /// Monic modulus, lowest degree first (length f + 1).
  const std::vector<std::uint64_t>& modulus() const { return modulus_; }

  FieldElem zero() const { return {0}; }
  FieldElem one() const { return {1}; }
  FieldElem omega() const { return omega_; }

  FieldElem from_code(std::uint64_t code) const {
    if (code >= q_) throw std::out_of_range("field code " + std::to_string(code) + " outside [0, q)");
    return {static_cast<std::uint32_t>(code)};
  }

  /// Image of an integer under Z -> Z_p -> F_q.
  FieldElem from_int(long long v) const {
    long long r = v % static_cast<long long>(p_);
    if (r < 0) r += static_cast<long long>(p_);
    return {static_cast<std::uint32_t>(r)};
  }

  std::vector<std::uint64_t> coefficients(FieldElem a) const {
    std::vector<std::uint64_t> c(f_);
    std::uint64_t x = a.code;
    for (unsigned i = 0; i < f_; ++i, x /= p_) c[i] = x % p_;
    return c;
  }

  FieldElem from_coefficients(const std::vector<std::uint64_t>& c) const {
    std::uint64_t code = 0;
    for (unsigned i = f_; i-- > 0;) code = code * p_ + (i < c.size() ? c[i] % p_ : 0);
    return {static_cast<std::uint32_t>(code)};
  }

  FieldElem add(FieldElem a, FieldElem b) const {
    if (p_ == 2) return {a.code ^ b.code};
    if (f_ == 1) return {static_cast<std::uint32_t>((std::uint64_t{a.code} + b.code) % p_)};
    if (a.code == 0) return b;
    if (b.code == 0) return a;
    if (has_tables()) {
      // Zech logarithm: a + b = a (1 + b/a).
      std::uint64_t n = (log_[b.code] + q_ - 1 - log_[a.code]) % (q_ - 1);
      std::uint32_t z = zech_[n];
      if (z == kNoLog) return {0};
      return {exp_[log_[a.code] + z]};
    }
    return digit_add(a, b);
  }

  FieldElem neg(FieldElem a) const {
    if (p_ == 2 || a.code == 0) return a;
    std::uint64_t code = 0, x = a.code, scale = 1;
    for (unsigned i = 0; i < f_; ++i, x /= p_, scale *= p_) code += ((p_ - x % p_) % p_) * scale;
    return {static_cast<std::uint32_t>(code)};
  }

  FieldElem sub(FieldElem a, FieldElem b) const { return add(a, neg(b)); }

  FieldElem mul(FieldElem a, FieldElem b) const {
    if (a.code == 0 || b.code == 0) return {0};
    if (has_tables()) return {exp_[log_[a.code] + log_[b.code]]};
    return from_poly(poly::mulmod_poly(to_poly(a), to_poly(b), modulus_, p_));
  }

  FieldElem inv(FieldElem a) const {
    if (a.code == 0) throw std::domain_error("inverse of zero in F_" + std::to_string(q_));
    if (has_tables()) return {exp_[(q_ - 1 - log_[a.code]) % (q_ - 1)]};
    return pow(a, static_cast<long long>(q_ - 2));
  }

  FieldElem div(FieldElem a, FieldElem b) const { return mul(a, inv(b)); }

  /// a^e; negative exponents go through the inverse. 0^0 = 1.
  FieldElem pow(FieldElem a, long long e) const {
    if (e == 0) return one();
    if (a.code == 0) {
      if (e < 0) throw std::domain_error("negative power of zero");
      return zero();
    }
    const long long n = static_cast<long long>(q_ - 1);
    const std::uint64_t ee = static_cast<std::uint64_t>(((e % n) + n) % n);
    if (has_tables()) return {exp_[static_cast<std::uint64_t>(log_[a.code]) * ee % (q_ - 1)]};
    return from_poly(poly::powmod_poly(to_poly(a), ee, modulus_, p_));
  }

  /// omega^k for any integer k.
  FieldElem exp(long long k) const {
    long long m = static_cast<long long>(q_ - 1);
    long long r = k % m;
    if (r < 0) r += m;
    if (has_tables()) return {exp_[static_cast<std::size_t>(r)]};
    return pow(omega_, r);
  }

  /// x^{p^e}
  FieldElem frobenius(FieldElem x, unsigned e) const {
    e %= f_;
    if (e == 0 || x.code == 0) return x;
    if (has_tables()) {
      std::uint64_t k = log_[x.code];
      for (unsigned i = 0; i < e; ++i) k = k * p_ % (q_ - 1);
      return {exp_[k]};
    }
    return pow(x, static_cast<long long>(checked_pow(p_, e)));
  }

  /// Discrete log base omega, in [0, q - 1).
  std::uint64_t dlog(FieldElem x) const {
    if (x.code == 0) throw std::domain_error("dlog of zero");
    if (!has_tables()) throw std::logic_error("dlog needs log tables (q <= 2^20)");
    return log_[x.code];
  }

  /// Multiplicative order of a nonzero element.
  std::uint64_t mult_order(FieldElem x) const {
    if (x.code == 0) throw std::domain_error("order of zero");
    std::uint64_t n = q_ - 1;
    for (auto r : distinct_prime_factors(q_ - 1))
      while (n % r == 0 && pow(x, static_cast<long long>(n / r)) == one()) n /= r;
    return n;
  }

 private:
  static constexpr std::uint32_t kNoLog = UINT32_MAX;

  FieldCtx(std::uint64_t p, unsigned f) : p_(p), f_(f) {
    if (!is_prime(p)) throw std::invalid_argument("field characteristic " + std::to_string(p) + " is not prime");
    if (f == 0) throw std::invalid_argument("field degree must be positive");
    std::uint64_t q = 1;
    for (unsigned i = 0; i < f; ++i) {
      q *= p;
      if (q > kFieldCeiling) throw std::invalid_argument("field size exceeds 2^32");
    }
    q_ = q;
    choose_modulus();
    choose_generator_slow();
    if (q_ <= kLogTableCeiling) build_tables();
  }

  poly::Poly to_poly(FieldElem a) const {
    auto c = coefficients(a);
    poly::trim(c);
    return c;
  }

  FieldElem from_poly(const poly::Poly& c) const { return from_coefficients(c); }

  FieldElem digit_add(FieldElem a, FieldElem b) const {
    std::uint64_t code = 0, x = a.code, y = b.code, scale = 1;
    for (unsigned i = 0; i < f_; ++i, x /= p_, y /= p_, scale *= p_) code += ((x % p_ + y % p_) % p_) * scale;
    return {static_cast<std::uint32_t>(code)};
  }

  void choose_modulus() {
    const std::uint64_t tail_count = q_;  // p^f choices of the non-leading coefficients
    for (std::uint64_t code = 0; code < tail_count; ++code) {
      poly::Poly m(f_ + 1, 0);
      std::uint64_t x = code;
      for (unsigned i = 0; i < f_; ++i, x /= p_) m[i] = x % p_;
      m[f_] = 1;
      if (poly::is_irreducible(m, p_)) {
        modulus_ = std::move(m);
        return;
      }
    }
    throw std::logic_error("no irreducible polynomial found");
  }

  // Least element of full multiplicative order, by polynomial exponentiation.
  void choose_generator_slow() {
    if (q_ == 2) {
      omega_ = {1};
      return;
    }
    const auto primes = distinct_prime_factors(q_ - 1);
    for (std::uint64_t code = 1; code < q_; ++code) {
      poly::Poly a = to_poly({static_cast<std::uint32_t>(code)});
      bool full = true;
      for (auto r : primes) {
        if (poly::powmod_poly(a, (q_ - 1) / r, modulus_, p_) == poly::Poly{1}) {
          full = false;
          break;
        }
      }
      if (full) {
        omega_ = {static_cast<std::uint32_t>(code)};
        return;
      }
    }
    throw std::logic_error("no multiplicative generator found");
  }

  // Multiplication by omega on packed codes, used to walk the powers.
  FieldElem mul_by_omega_slow(FieldElem a) const {
    return from_poly(poly::mulmod_poly(to_poly(a), to_poly(omega_), modulus_, p_));
  }

  void build_tables() {
    const std::uint64_t n = q_ - 1;
    exp_.assign(2 * n, 0);
    log_.assign(q_, kNoLog);
    // Multiplication by omega is Z_p-linear: precompute its action on the basis.
    std::vector<FieldElem> basis_image(f_);
    std::uint64_t scale = 1;
    for (unsigned i = 0; i < f_; ++i, scale *= p_)
      basis_image[i] = mul_by_omega_slow({static_cast<std::uint32_t>(scale)});
    FieldElem cur = one();
    for (std::uint64_t k = 0; k < n; ++k) {
      if (log_[cur.code] != kNoLog) throw std::logic_error("generator order below q - 1");
      exp_[k] = exp_[k + n] = cur.code;
      log_[cur.code] = static_cast<std::uint32_t>(k);
      std::vector<std::uint64_t> acc(f_, 0);
      std::uint64_t x = cur.code;
      for (unsigned i = 0; i < f_; ++i, x /= p_) {
        const std::uint64_t digit = x % p_;
        if (digit == 0) continue;
        std::uint64_t y = basis_image[i].code;
        for (unsigned j = 0; j < f_; ++j, y /= p_) acc[j] = (acc[j] + mulmod(digit, y % p_, p_)) % p_;
      }
      cur = from_coefficients(acc);
    }
    if (cur != one()) throw std::logic_error("generator order mismatch");
    zech_.assign(n, kNoLog);
    for (std::uint64_t k = 0; k < n; ++k) {
      FieldElem s = digit_add(one(), {exp_[k]});
      zech_[k] = s.code == 0 ? kNoLog : log_[s.code];
    }
  }

  std::uint64_t p_;
  unsigned f_;
  std::uint64_t q_ = 0;
  std::vector<std::uint64_t> modulus_;
  FieldElem omega_{1};
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> zech_;
};

using FieldPtr = std::shared_ptr<const FieldCtx>;

inline FieldPtr make_field(std::uint64_t p, unsigned f) { return FieldCtx::make(p, f); }

}  // namespace derange
