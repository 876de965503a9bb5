#pragma once

// Exact integer and rational utilities: p-adic valuations, the derived
// valuation of repunits (p^a - 1)/(p - 1), certified enclosures of square
// roots and logarithms, and the three degree thresholds g, f, h.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "derange/check_result.hpp"
#include "derange/ratio.hpp"

namespace derange {

inline constexpr std::uint32_t kPrimeTableLimit = 1'000'000;

/// Primes below kPrimeTableLimit, built once.
inline const std::vector<std::uint32_t>& prime_table() {
  static const std::vector<std::uint32_t> table = [] {
    std::vector<bool> composite(kPrimeTableLimit, false);
    std::vector<std::uint32_t> primes;
    for (std::uint32_t i = 2; i < kPrimeTableLimit; ++i) {
      if (composite[i]) continue;
      primes.push_back(i);
      for (std::uint64_t j = std::uint64_t{i} * i; j < kPrimeTableLimit; j += i) composite[j] = true;
    }
    return primes;
  }();
  return table;
}

/// Trial division against the prime table; exact for n < 10^12.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint32_t p : prime_table()) {
    if (std::uint64_t{p} * p > n) return true;
    if (n % p == 0) return n == p;
  }
  throw std::invalid_argument("is_prime: " + std::to_string(n) + " beyond trial-division range");
}

inline std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  if (n == 0) throw std::invalid_argument("distinct_prime_factors: zero");
  for (std::uint32_t p : prime_table()) {
    if (std::uint64_t{p} * p > n) break;
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) {
    if (n >= std::uint64_t{kPrimeTableLimit} * kPrimeTableLimit)
      throw std::invalid_argument("distinct_prime_factors: cofactor beyond trial-division range");
    out.push_back(n);
  }
  return out;
}

/// All positive divisors in increasing order.
inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("divisors: zero");
  std::vector<std::uint64_t> small, large;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    small.push_back(d);
    if (d != n / d) large.push_back(n / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

/// b^e, throwing on 64-bit overflow.
/// (p, f) with n = p^f, or nullopt when n is not a prime power.
inline std::optional<std::pair<std::uint64_t, unsigned>> as_prime_power(std::uint64_t n) {
  if (n < 2) return std::nullopt;
  auto ps = distinct_prime_factors(n);
  if (ps.size() != 1) return std::nullopt;
  unsigned f = 0;
  for (std::uint64_t m = n; m > 1; m /= ps[0]) ++f;
  return std::pair{ps[0], f};
}

inline std::uint64_t checked_pow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (b != 0 && r > UINT64_MAX / b) throw std::overflow_error("checked_pow overflow");
    r *= b;
  }
  return r;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

inline mpz_class mpz_from_u64(std::uint64_t v) { return ExactRatio::to_mpz(v); }

inline mpz_class mpz_pow(std::uint64_t base, unsigned long exp) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), mpz_from_u64(base).get_mpz_t(), exp);
  return r;
}

/// Largest i with r^i | a.
inline unsigned padic_val(std::uint64_t r, const mpz_class& a) {
  if (!is_prime(r)) throw std::invalid_argument("padic_val: base " + std::to_string(r) + " is not prime");
  if (a <= 0) throw std::invalid_argument("padic_val: argument must be positive");
  if (r == 2) return static_cast<unsigned>(mpz_scan1(a.get_mpz_t(), 0));
  mpz_class rest = a;
  mpz_class rz = mpz_from_u64(r);
  // mpz_remove divides out every factor of r and returns how many.
  return static_cast<unsigned>(mpz_remove(rest.get_mpz_t(), a.get_mpz_t(), rz.get_mpz_t()));
}

inline unsigned padic_val(std::uint64_t r, std::uint64_t a) { return padic_val(r, mpz_from_u64(a)); }

/// (p^a - 1)/(p - 1) as an exact integer.
inline mpz_class repunit(std::uint64_t p, unsigned long a) {
  if (p < 2) throw std::invalid_argument("repunit: base must be >= 2");
  mpz_class num = mpz_pow(p, a) - 1;
  mpz_class den = mpz_from_u64(p - 1);
  mpz_class out;
  mpz_divexact(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return out;
}

/// Valuation of the repunit (p^a - 1)/(p - 1) at the prime r; p need not be prime.
inline unsigned gamma_bar(std::uint64_t r, std::uint64_t p, unsigned long a) {
  if (a == 0) throw std::invalid_argument("gamma_bar: exponent must be positive");
  return padic_val(r, repunit(p, a));
}

inline mpz_class isqrt(const mpz_class& n) {
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

inline bool is_perfect_square(const mpz_class& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0; }

/// sqrt(n) enclosed in an interval of width 10^-digits (exact when n is a square).
inline RationalEnclosure sqrt_enclosure(const mpz_class& n, unsigned digits = 13) {
  if (n < 0) throw std::domain_error("sqrt_enclosure: negative argument");
  if (is_perfect_square(n)) {
    ExactRatio s(isqrt(n), 1);
    return {s, s};
  }
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  mpz_class s = isqrt(n * scale * scale);
  return {ExactRatio(s, scale), ExactRatio(s + 1, scale)};
}

/// Natural log of an integer m >= 1, enclosed in an interval of width below tol.
///
/// Uses ln m = 2 artanh(z) with z = (m-1)/(m+1). Partial sums of the series are
/// lower bounds; the geometric tail bound z^(2K+3) / ((2K+3)(1 - z^2)) closes it.
inline RationalEnclosure log_enclosure(std::uint64_t m, const ExactRatio& tol = ExactRatio(1, 1'000'000'000'000)) {
  if (m == 0) throw std::domain_error("log_enclosure: log of zero");
  if (m == 1) return {ExactRatio(0), ExactRatio(0)};
  const ExactRatio z(static_cast<long>(m - 1), static_cast<long>(m + 1));
  const ExactRatio z2 = z * z;
  const ExactRatio one(1);
  ExactRatio power = z;  // z^(2k+1)
  ExactRatio sum(0);
  for (long k = 0;; ++k) {
    sum += power / ExactRatio(2 * k + 1);
    power *= z2;
    ExactRatio tail = ExactRatio(2) * power / (ExactRatio(2 * k + 3) * (one - z2));
    if (tail < tol) return {ExactRatio(2) * sum, ExactRatio(2) * sum + tail};
  }
}

namespace detail {

template <class F>
RationalEnclosure threshold(std::uint64_t n, F formula) {
  if (n < 2) throw std::invalid_argument("threshold functions need n >= 2");
  RationalEnclosure root = sqrt_enclosure(mpz_from_u64(n));
  // All three thresholds increase with sqrt(n) for fixed n.
  return {formula(root.lo), formula(root.hi)};
}

}  // namespace detail

/// g(n) = (sqrt(n) + 1) / (2n)
inline RationalEnclosure bound_g(std::uint64_t n) {
  return detail::threshold(n, [n](const ExactRatio& s) {
    return (s + ExactRatio(1)) / ExactRatio::from_u64(2 * n);
  });
}

/// f(n) = (sqrt(n) + 1) / (60n)
inline RationalEnclosure bound_f(std::uint64_t n) {
  return detail::threshold(n, [n](const ExactRatio& s) {
    return (s + ExactRatio(1)) / ExactRatio::from_u64(60 * n);
  });
}

/// h(n) = (sqrt(n) + 2) / (2(n - 1))
inline RationalEnclosure bound_h(std::uint64_t n) {
  return detail::threshold(n, [n](const ExactRatio& s) {
    return (s + ExactRatio(2)) / ExactRatio::from_u64(2 * (n - 1));
  });
}

inline std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  for (std::uint32_t p : prime_table()) {
    if (p > limit) break;
    out.push_back(p);
  }
  return out;
}

/// Exhaustive checks of the four repunit-valuation lemmas over
/// 2 <= p <= p_max, primes r <= r_max and 1 <= i <= i_max.
inline std::vector<CheckResult> check_valuation_lemmas(std::uint64_t p_max = 50, std::uint64_t r_max = 13,
                                                       unsigned i_max = 4) {
  using nlohmann::json;
  std::vector<CheckResult> out;
  const auto primes = primes_up_to(r_max);
  const std::uint64_t j_max = 2 * r_max;

  auto tag = [](std::string family, std::uint64_t p, std::uint64_t r, std::uint64_t k, const char* kname) {
    return "valuation." + family + "/p=" + std::to_string(p) + ",r=" + std::to_string(r) + "," + kname + "=" +
           std::to_string(k);
  };

  // v_r(p^j - 1) = v_r(p - 1) whenever r | p - 1 and r does not divide j.
  for (std::uint64_t p = 2; p <= p_max; ++p) {
    for (auto r : primes) {
      const unsigned base = padic_val(r, p - 1 == 0 ? 1 : p - 1);
      if (p - 1 == 0 || base == 0) continue;
      for (std::uint64_t j = 1; j <= j_max; ++j) {
        if (j % r == 0) continue;
        const unsigned lhs = padic_val(r, mpz_class(mpz_pow(p, j) - 1));
        out.push_back(make_check(tag("coprime-no-growth", p, r, j, "j"),
                                 "v_r(p^j-1) = v_r(p-1) for r | p-1, r not dividing j", pass_if(lhs == base),
                                 json{{"lhs", lhs}, {"rhs", base}}, ExactRatio(lhs), ExactRatio(base)));
      }
    }
  }

  // v_r(p - 1) = i >= 1 implies v_r(p^r - 1) = i + 1, except (r, i) = (2, 1).
  for (std::uint64_t p = 2; p <= p_max; ++p) {
    for (auto r : primes) {
      const unsigned i = padic_val(r, p - 1);
      if (i == 0 || i > i_max) continue;
      const unsigned lhs = padic_val(r, mpz_class(mpz_pow(p, r) - 1));
      if (r == 2 && i == 1) {
        out.push_back(make_check(tag("lifting-step", p, r, i, "i"), "excluded case (r, i) = (2, 1)",
                                 Status::skipped, json{{"v2(p^2-1)", lhs}, {"reason", "excluded case"}}));
        out.push_back(make_check(tag("lifting-step-r2i1", p, r, i, "i"),
                                 "v_2(p-1) = 1 implies v_2(p^2-1) >= 3", pass_if(lhs >= 3),
                                 json{{"v2(p^2-1)", lhs}}, ExactRatio(lhs), ExactRatio(3)));
        continue;
      }
      out.push_back(make_check(tag("lifting-step", p, r, i, "i"), "v_r(p-1) = i implies v_r(p^r-1) = i+1",
                               pass_if(lhs == i + 1), json{{"lhs", lhs}, {"rhs", i + 1}}, ExactRatio(lhs),
                               ExactRatio(i + 1)));
    }
  }

  // Odd r with r | p - 1: v_r((p^(r^i) - 1)/(p - 1)) = i, hence v_r((p^f-1)/(p-1)) = v_r(f).
  for (std::uint64_t p = 2; p <= p_max; ++p) {
    for (auto r : primes) {
      if (r == 2 || padic_val(r, p - 1) == 0) continue;
      for (unsigned i = 1; i <= i_max; ++i) {
        const unsigned lhs = padic_val(r, repunit(p, checked_pow(r, i)));
        out.push_back(make_check(tag("odd-growth", p, r, i, "i"), "v_r((p^(r^i)-1)/(p-1)) = i for odd r | p-1",
                                 pass_if(lhs == i), json{{"lhs", lhs}, {"rhs", i}}, ExactRatio(lhs),
                                 ExactRatio(i)));
      }
      for (std::uint64_t f = 1; f <= j_max; ++f) {
        const unsigned lhs = gamma_bar(r, p, f);
        const unsigned rhs = padic_val(r, f);
        out.push_back(make_check(tag("odd-growth-degree", p, r, f, "f"),
                                 "v_r((p^f-1)/(p-1)) = v_r(f) for odd r | p-1", pass_if(lhs == rhs),
                                 json{{"lhs", lhs}, {"rhs", rhs}}, ExactRatio(lhs), ExactRatio(rhs)));
      }
    }
  }

  // p odd, j = v_2(p + 1): v_2((p^(2^i) - 1)/(p - 1)) = i + j - 1.
  for (std::uint64_t p = 3; p <= p_max; p += 2) {
    const unsigned j = padic_val(2, p + 1);
    for (unsigned i = 1; i <= i_max; ++i) {
      const unsigned lhs = padic_val(2, repunit(p, checked_pow(2, i)));
      out.push_back(make_check(tag("even-growth", p, 2, i, "i"), "v_2((p^(2^i)-1)/(p-1)) = i + v_2(p+1) - 1",
                               pass_if(lhs == i + j - 1), json{{"lhs", lhs}, {"rhs", i + j - 1}, {"j", j}},
                               ExactRatio(lhs), ExactRatio(i + j - 1)));
    }
    for (std::uint64_t f = 2; f <= j_max; f += 2) {
      const unsigned lhs = gamma_bar(2, p, f);
      const unsigned rhs = padic_val(2, f) + j - 1;
      out.push_back(make_check(tag("even-growth-degree", p, 2, f, "f"),
                               "v_2((p^f-1)/(p-1)) = v_2(f) + v_2(p+1) - 1 for even f", pass_if(lhs == rhs),
                               json{{"lhs", lhs}, {"rhs", rhs}, {"j", j}}, ExactRatio(lhs), ExactRatio(rhs)));
    }
  }
  return out;
}

}  // namespace derange
