#include <gtest/gtest.h>

#include <random>

#include "derange/ffield.hpp"

using namespace derange;

namespace {

using Coeffs = std::vector<std::uint64_t>;

// Schoolbook product reduced by the field modulus; independent of the log tables.
FieldElem naive_mul(const FieldCtx& k, FieldElem a, FieldElem b) {
  const unsigned f = k.f();
  const std::uint64_t p = k.p();
  auto x = k.coefficients(a), y = k.coefficients(b);
  Coeffs prod(2 * f, 0);
  for (unsigned i = 0; i < f; ++i)
    for (unsigned j = 0; j < f; ++j) prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
  const auto& m = k.modulus();
  for (unsigned d = 2 * f - 1; d >= f; --d) {
    const std::uint64_t c = prod[d];
    if (c == 0) continue;
    for (unsigned i = 0; i <= f; ++i) prod[d - f + i] = (prod[d - f + i] + (p - c) * m[i]) % p;
  }
  prod.resize(f);
  return k.from_coefficients(prod);
}

// True when monic `m` has a monic factor of degree 1..deg/2, by trial division.
bool reducible(const Coeffs& m, std::uint64_t p) {
  const unsigned deg = static_cast<unsigned>(m.size() - 1);
  for (unsigned d = 1; d <= deg / 2; ++d) {
    std::uint64_t count = 1;
    for (unsigned i = 0; i < d; ++i) count *= p;
    for (std::uint64_t code = 0; code < count; ++code) {
      Coeffs div(d + 1, 0);
      std::uint64_t x = code;
      for (unsigned i = 0; i < d; ++i, x /= p) div[i] = x % p;
      div[d] = 1;
      Coeffs r = m;
      for (unsigned top = deg; top >= d; --top) {
        const std::uint64_t c = r[top];
        for (unsigned i = 0; i <= d; ++i) r[top - d + i] = (r[top - d + i] + (p - c) * div[i]) % p;
        if (top == d) break;
      }
      bool zero = true;
      for (unsigned i = 0; i < d; ++i) zero = zero && r[i] == 0;
      if (zero) return true;
    }
  }
  return false;
}

const std::vector<std::pair<std::uint64_t, unsigned>> kSmallFields = {
    {2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3}, {3, 2}, {2, 4}, {5, 2}, {3, 3}, {2, 6}, {7, 2}, {3, 4}};

}  // namespace

TEST(Field, ModulusIsLeastMonicIrreducible) {
  for (auto [p, f] : kSmallFields) {
    auto k = make_field(p, f);
    const auto& m = k->modulus();
    ASSERT_EQ(m.size(), f + 1u);
    ASSERT_EQ(m[f], 1u);
    ASSERT_FALSE(reducible(m, p)) << p << "^" << f;
    std::uint64_t chosen = 0;
    for (unsigned i = f; i-- > 0;) chosen = chosen * p + m[i];
    for (std::uint64_t code = 0; code < chosen; ++code) {
      Coeffs c(f + 1, 0);
      std::uint64_t x = code;
      for (unsigned i = 0; i < f; ++i, x /= p) c[i] = x % p;
      c[f] = 1;
      ASSERT_TRUE(f == 1 || reducible(c, p)) << "earlier irreducible exists for " << p << "^" << f;
    }
  }
}

TEST(Field, MultiplicationMatchesSchoolbook) {
  for (auto [p, f] : kSmallFields) {
    auto k = make_field(p, f);
    for (std::uint64_t a = 0; a < k->q(); ++a)
      for (std::uint64_t b = 0; b < k->q(); ++b)
        ASSERT_EQ(k->mul({static_cast<std::uint32_t>(a)}, {static_cast<std::uint32_t>(b)}),
                  naive_mul(*k, {static_cast<std::uint32_t>(a)}, {static_cast<std::uint32_t>(b)}));
  }
}

TEST(Field, AxiomsHoldExhaustivelyOnSmallFields) {
  for (auto [p, f] : kSmallFields) {
    auto k = make_field(p, f);
    const std::uint64_t q = k->q();
    if (q > 27) continue;
    for (std::uint32_t a = 0; a < q; ++a) {
      FieldElem x{a};
      ASSERT_EQ(k->add(x, k->neg(x)), k->zero());
      ASSERT_EQ(k->add(x, k->zero()), x);
      ASSERT_EQ(k->mul(x, k->one()), x);
      if (a != 0) {
        ASSERT_EQ(k->mul(x, k->inv(x)), k->one());
      }
      for (std::uint32_t b = 0; b < q; ++b) {
        FieldElem y{b};
        ASSERT_EQ(k->add(x, y), k->add(y, x));
        ASSERT_EQ(k->mul(x, y), k->mul(y, x));
        for (std::uint32_t c = 0; c < q; ++c) {
          FieldElem z{c};
          ASSERT_EQ(k->add(k->add(x, y), z), k->add(x, k->add(y, z)));
          ASSERT_EQ(k->mul(k->mul(x, y), z), k->mul(x, k->mul(y, z)));
          ASSERT_EQ(k->mul(x, k->add(y, z)), k->add(k->mul(x, y), k->mul(x, z)));
        }
      }
    }
  }
}

TEST(Field, GeneratorLogsAndOrders) {
  for (auto [p, f] : kSmallFields) {
    auto k = make_field(p, f);
    const std::uint64_t q = k->q();
    ASSERT_EQ(k->mult_order(k->omega()), q - 1);
    // omega is the least code of full order.
    for (std::uint32_t c = 1; c < k->omega().code; ++c) ASSERT_LT(k->mult_order({c}), q - 1);
    for (std::uint32_t c = 1; c < q; ++c) {
      FieldElem x{c};
      ASSERT_EQ(k->exp(static_cast<long long>(k->dlog(x))), x);
      ASSERT_EQ(k->pow(x, static_cast<long long>(q - 1)), k->one());
      ASSERT_EQ(k->pow(x, -1), k->inv(x));
      std::uint64_t brute = 1;
      for (FieldElem y = x; y != k->one(); y = k->mul(y, x)) ++brute;
      ASSERT_EQ(k->mult_order(x), brute);
    }
    ASSERT_EQ(k->exp(-1), k->inv(k->omega()));
  }
}

TEST(Field, FrobeniusIsAnAutomorphismOfOrderF) {
  for (auto [p, f] : kSmallFields) {
    auto k = make_field(p, f);
    for (std::uint32_t a = 0; a < k->q(); ++a) {
      FieldElem x{a};
      ASSERT_EQ(k->frobenius(x, f), x);
      ASSERT_EQ(k->frobenius(x, 1), k->pow(x, static_cast<long long>(p)));
      for (std::uint32_t b = 0; b < k->q(); b += 3) {
        FieldElem y{b};
        ASSERT_EQ(k->frobenius(k->add(x, y), 1), k->add(k->frobenius(x, 1), k->frobenius(y, 1)));
        ASSERT_EQ(k->frobenius(k->mul(x, y), 1), k->mul(k->frobenius(x, 1), k->frobenius(y, 1)));
      }
    }
    // Fixed field of x -> x^p is the prime field.
    std::uint64_t fixed = 0;
    for (std::uint32_t a = 0; a < k->q(); ++a) fixed += k->frobenius({a}, 1) == FieldElem{a};
    ASSERT_EQ(fixed, p);
  }
}

TEST(Field, FromIntReducesModP) {
  auto k = make_field(3, 2);
  EXPECT_EQ(k->from_int(-1), FieldElem{2});
  EXPECT_EQ(k->from_int(7), FieldElem{1});
  EXPECT_THROW(k->from_code(9), std::out_of_range);
  EXPECT_THROW(k->inv(k->zero()), std::domain_error);
}

TEST(Field, LargeFieldWithoutTablesIsConsistent) {
  auto k = make_field(2, 21);
  ASSERT_FALSE(k->has_tables());
  std::mt19937 rng(3);
  for (int i = 0; i < 200; ++i) {
    FieldElem x{static_cast<std::uint32_t>(rng() % k->q())}, y{static_cast<std::uint32_t>(rng() % k->q())};
    ASSERT_EQ(k->mul(x, y), naive_mul(*k, x, y));
    if (x.code) {
      ASSERT_EQ(k->mul(x, k->inv(x)), k->one());
    }
    ASSERT_EQ(k->frobenius(k->mul(x, y), 5), k->mul(k->frobenius(x, 5), k->frobenius(y, 5)));
  }
  EXPECT_THROW(k->dlog(k->one()), std::logic_error);
}

TEST(Field, RejectsBadParameters) {
  EXPECT_ANY_THROW(make_field(4, 1));
  EXPECT_ANY_THROW(make_field(2, 0));
  EXPECT_ANY_THROW(make_field(2, 40));
}
