#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace derange {

/// Exact rational number kept in lowest terms with a positive denominator.
///
/// Every proportion the library reports (derangement proportions, eigenvalue-1
/// proportions, thresholds) is an ExactRatio; nothing is ever rounded.
class ExactRatio {
 public:
  ExactRatio() = default;
  ExactRatio(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  ExactRatio(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw std::domain_error("ExactRatio: zero denominator");
    value_ = mpq_class(num, den);
    value_.canonicalize();
  }
  ExactRatio(long num, long den) : ExactRatio(mpz_class(num), mpz_class(den)) {}
  explicit ExactRatio(const mpq_class& q) : value_(q) { value_.canonicalize(); }

  static ExactRatio from_u64(std::uint64_t num, std::uint64_t den = 1) {
    return ExactRatio(to_mpz(num), to_mpz(den));
  }

  static mpz_class to_mpz(std::uint64_t v) {
    mpz_class z;
    mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    return z;
  }

  const mpq_class& value() const { return value_; }
  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }

  bool is_zero() const { return sgn(value_) == 0; }

  ExactRatio& operator+=(const ExactRatio& o) { value_ += o.value_; return *this; }
  ExactRatio& operator-=(const ExactRatio& o) { value_ -= o.value_; return *this; }
  ExactRatio& operator*=(const ExactRatio& o) { value_ *= o.value_; return *this; }
  ExactRatio& operator/=(const ExactRatio& o) {
    if (o.is_zero()) throw std::domain_error("ExactRatio: division by zero");
    value_ /= o.value_;
    return *this;
  }

  friend ExactRatio operator+(ExactRatio a, const ExactRatio& b) { return a += b; }
  friend ExactRatio operator-(ExactRatio a, const ExactRatio& b) { return a -= b; }
  friend ExactRatio operator*(ExactRatio a, const ExactRatio& b) { return a *= b; }
  friend ExactRatio operator/(ExactRatio a, const ExactRatio& b) { return a /= b; }
  friend ExactRatio operator-(const ExactRatio& a) { return ExactRatio(mpq_class(-a.value_)); }

  friend bool operator==(const ExactRatio& a, const ExactRatio& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const ExactRatio& a, const ExactRatio& b) {
    int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// "n" for integers, "n/d" otherwise.
  std::string str() const {
    if (value_.get_den() == 1) return value_.get_num().get_str();
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
  }

  /// For display only; never used in pass/fail decisions.
  double approx() const { return value_.get_d(); }

  friend std::ostream& operator<<(std::ostream& os, const ExactRatio& r) { return os << r.str(); }

 private:
  mpq_class value_{0};
};

/// Closed interval [lo, hi] of rationals certified to contain a real value.
/// lo == hi when the value itself is rational.
struct RationalEnclosure {
  ExactRatio lo;
  ExactRatio hi;

  bool is_exact() const { return lo == hi; }
  ExactRatio width() const { return hi - lo; }

  // Sound comparisons: an undecided comparison returns false.
  bool certainly_below_or_equal(const ExactRatio& x) const { return hi <= x; }
  bool certainly_above(const ExactRatio& x) const { return lo > x; }
  bool certainly_below(const ExactRatio& x) const { return hi < x; }
  bool contains(const ExactRatio& x) const { return lo <= x && x <= hi; }

  std::string str() const { return is_exact() ? lo.str() : "[" + lo.str() + ", " + hi.str() + "]"; }
};

}  // namespace derange
