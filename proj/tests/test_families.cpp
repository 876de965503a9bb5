#include <gtest/gtest.h>

#include <random>

#include "derange/families.hpp"

using namespace derange;

namespace {

// Order of SL_n(s), Sp_n(s) or SU_n(s) from the usual product formulas, computed
// with plain integers as a check on classical_order.
std::uint64_t textbook_order(ClassicalKind kind, unsigned n, std::uint64_t s) {
  std::uint64_t o = 1;
  auto pw = [](std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
  };
  if (kind == ClassicalKind::linear) {
    for (unsigned i = 0; i < n; ++i) o *= pw(s, n) - pw(s, i);
    return o / (s - 1);
  }
  if (kind == ClassicalKind::symplectic) {
    const unsigned m = n / 2;
    o = pw(s, m * m);
    for (unsigned i = 1; i <= m; ++i) o *= pw(s, 2 * i) - 1;
    return o;
  }
  // |GU_n(s)| = s^{n(n-1)/2} prod (s^i - (-1)^i), and SU has index s + 1.
  o = pw(s, n * (n - 1) / 2);
  for (unsigned i = 1; i <= n; ++i) o *= i % 2 ? pw(s, i) + 1 : pw(s, i) - 1;
  return o / (s + 1);
}

// A J (A^sigma)^T = J for each generator A, J the Gram matrix and sigma = x -> x^{p^conj}.
bool preserves_form(const MatGroup& g, const std::vector<FieldElem>& gram, unsigned conj) {
  const FieldCtx& k = g.field();
  const std::size_t d = g.dim();
  for (const auto& a : g.generators()) {
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        FieldElem s = k.zero();
        for (std::size_t u = 0; u < d; ++u)
          for (std::size_t v = 0; v < d; ++v)
            s = k.add(s, k.mul(k.mul(a.at(i, u), gram[u * d + v]), k.frobenius(a.at(j, v), conj)));
        if (s != gram[i * d + j]) return false;
      }
  }
  return true;
}

std::vector<FieldElem> antidiagonal(const FieldCtx& k, std::size_t d, bool alternate) {
  std::vector<FieldElem> j(d * d, k.zero());
  for (std::size_t i = 0; i < d; ++i) j[i * d + d - 1 - i] = (alternate && i >= d / 2) ? k.neg(k.one()) : k.one();
  return j;
}

}  // namespace

TEST(Classical, OrdersMatchTextbookFormulas) {
  const std::vector<std::tuple<ClassicalKind, unsigned, std::uint64_t>> cases = {
      {ClassicalKind::linear, 2, 2},     {ClassicalKind::linear, 2, 7},     {ClassicalKind::linear, 3, 2},
      {ClassicalKind::linear, 3, 3},     {ClassicalKind::linear, 4, 2},     {ClassicalKind::symplectic, 4, 2},
      {ClassicalKind::symplectic, 4, 3}, {ClassicalKind::symplectic, 6, 2}, {ClassicalKind::unitary, 3, 3},
      {ClassicalKind::unitary, 3, 2}};
  for (auto [kind, n, s] : cases) EXPECT_EQ(classical_order(kind, n, s), textbook_order(kind, n, s));
  EXPECT_EQ(classical_order(ClassicalKind::symplectic, 4, 3), 51840u);
  EXPECT_EQ(classical_order(ClassicalKind::unitary, 3, 3), 6048u);
}

TEST(Classical, GeneratorsPreserveTheirForms) {
  for (std::uint64_t s : {2, 3}) {
    const FamilyMember sp = classical_natural(ClassicalKind::symplectic, 4, s);
    EXPECT_EQ(sp.group->order(), textbook_order(ClassicalKind::symplectic, 4, s));
    EXPECT_TRUE(preserves_form(*sp.group, antidiagonal(sp.group->field(), 4, true), 0));
  }
  const FamilyMember su = classical_natural(ClassicalKind::unitary, 3, 3);
  EXPECT_EQ(su.group->order(), 6048u);
  EXPECT_TRUE(preserves_form(*su.group, antidiagonal(su.group->field(), 3, false), 1));
  for (const auto& a : su.group->generators()) EXPECT_EQ(su.group->ops().determinant(a.a), su.group->field().one());
}

TEST(Classical, AlphaOfSl2IsTheTransvectionCount) {
  // Eigenvalue 1 in SL_2(q) means identity or one of the q^2 - 1 transvections.
  for (std::uint64_t q : {2, 3, 4, 5, 7, 8, 9}) {
    const FamilyMember m = sl2(q);
    EXPECT_EQ(m.group->order(), q * (q * q - 1));
    EXPECT_EQ(affine_stats(*m.group, false).alpha, ExactRatio::from_u64(q, q * q - 1)) << q;
  }
}

TEST(Classical, NaturalModuleBoundsHold) {
  const std::vector<std::tuple<ClassicalKind, unsigned, std::uint64_t>> cases = {
      {ClassicalKind::linear, 2, 3},     {ClassicalKind::linear, 2, 5}, {ClassicalKind::linear, 3, 3},
      {ClassicalKind::symplectic, 4, 3}, {ClassicalKind::unitary, 3, 3}, {ClassicalKind::linear, 3, 2},
      {ClassicalKind::linear, 4, 2},     {ClassicalKind::symplectic, 4, 2}};
  for (auto [kind, n, s] : cases) {
    const FamilyMember m = classical_natural(kind, n, s);
    const auto r = natural_module_bounds(kind, n, s, affine_stats(*m.group, false).alpha);
    EXPECT_EQ(r.status, Status::pass) << r.check_id << " " << r.witness.dump();
  }
  // An alpha outside the window is reported.
  EXPECT_EQ(natural_module_bounds(ClassicalKind::linear, 3, 3, ExactRatio(9, 10)).status, Status::fail);
}

TEST(Frobenius, PredictionsMatchBruteForce) {
  for (std::uint64_t n : {5, 7, 8, 9, 11, 16}) {
    for (auto a : divisors(n - 1)) {
      const FamilyMember m = frobenius_affine(n, a);
      const AffineStats s = affine_stats(*m.group);
      EXPECT_EQ(s.delta_affine, *m.delta) << m.name;
      EXPECT_EQ(s.alpha, *m.alpha) << m.name;
    }
  }
  EXPECT_THROW(frobenius_affine(7, 4), std::invalid_argument);
  EXPECT_THROW(frobenius_affine(6, 1), std::invalid_argument);
}

TEST(Sharp, AlphaAndDeltaEqualTheThresholds) {
  for (std::uint64_t q : {16, 64, 81}) {
    const FamilyMember m = sharp_gammal1(q);
    const AffineStats s = affine_stats(*m.group);
    EXPECT_EQ(s.alpha, bound_h(q).lo) << q;
    EXPECT_EQ(s.delta_affine, bound_g(q).lo) << q;
    EXPECT_EQ(m.q_effective, as_prime_power(q)->first);
  }
  EXPECT_THROW(sharp_gammal1(32), std::invalid_argument);
}

TEST(Sl25, OrderCensusAndSemiregularMember) {
  const FamilyMember l = sl2_5_z(11, false);
  std::map<std::size_t, std::size_t> census;
  for (std::size_t i = 0; i < l.group->order(); ++i)
    ++census[detail::element_order(l.group->ops(), l.group->elements()[i])];
  EXPECT_EQ(census, (std::map<std::size_t, std::size_t>{{1, 1}, {2, 1}, {3, 20}, {4, 30}, {5, 24}, {6, 20}, {10, 24}}));

  const FamilyMember z = sl2_5_z(59, true);
  EXPECT_EQ(z.group->order(), 60u * 58);
  const AffineStats s = affine_stats(*z.group);
  EXPECT_TRUE(s.semiregular_nonzero);
  EXPECT_EQ(s.alpha, *z.alpha);
  EXPECT_EQ(s.delta_affine, *z.delta);
  EXPECT_EQ(s.delta_affine, bound_f(59 * 59).lo);
  EXPECT_THROW(sl2_5_z(13, false), std::invalid_argument);
}

TEST(Q8, NormalizerChainOrders) {
  for (std::uint64_t q : {3, 5, 7, 9}) {
    const std::uint64_t expected[] = {8, 4 * (q - 1), 12 * (q - 1), 24 * (q - 1)};
    for (unsigned level = 0; level <= 3; ++level) {
      const FamilyMember m = q8_normalizer_member(q, level);
      EXPECT_EQ(m.group->order(), expected[level]) << m.name;
    }
  }
  EXPECT_THROW(q8_normalizer_member(4, 0), std::invalid_argument);
  EXPECT_THROW(q8_normalizer_member(5, 4), std::invalid_argument);
}

TEST(Extraspecial, InvolutionCensus) {
  for (unsigned s : {1u, 2u, 3u})
    for (int sign : {1, -1}) {
      const FamilyMember m = extraspecial2(s, sign);
      const auto c = extraspecial_census(*m.group);
      EXPECT_EQ(m.group->order(), 2u << (2 * s));
      EXPECT_EQ(c.noncentral_involutions, extraspecial_involution_prediction(s, sign)) << m.name;
      EXPECT_EQ(c.eigen1_nontrivial, c.noncentral_involutions) << m.name;
      EXPECT_TRUE(c.eigen1_are_noncentral_involutions);
      EXPECT_EQ(affine_stats(*m.group, false).alpha, *m.alpha);
    }
  // D_8 has 5 involutions, 4 of them noncentral; Q_8 has only -1.
  EXPECT_EQ(extraspecial_involution_prediction(1, 1), 4u);
  EXPECT_EQ(extraspecial_involution_prediction(1, -1), 0u);
}

TEST(Alternating, TwoCycleProportion) {
  for (std::size_t m = 3; m <= 9; ++m) {
    PermGroup a = alternating_group(m);
    a.enumerate();
    EXPECT_EQ(two_cycle_census(a), two_cycle_formula(m)) << m;
  }
}

TEST(Alternating, DeletedModuleIsARepresentation) {
  std::mt19937 rng(9);
  for (auto [m, p] : std::vector<std::pair<std::size_t, std::uint64_t>>{{6, 2}, {6, 3}, {7, 2}, {7, 7}, {8, 2}, {9, 3}}) {
    auto k = make_field(p, 1);
    MatOps ops(k, deleted_module_dim(m, p));
    PermGroup a = alternating_group(m);
    a.enumerate();
    for (int t = 0; t < 40; ++t) {
      const Perm x = a.element(rng() % a.order()), y = a.element(rng() % a.order());
      const Perm xy = x * y;
      ASSERT_EQ(deleted_module_matrix(*k, xy.images.data(), m),
                ops.compose(deleted_module_matrix(*k, x.images.data(), m), deleted_module_matrix(*k, y.images.data(), m)));
    }
    EXPECT_EQ(deleted_module_matrix(*k, Perm::identity(m).images.data(), m), ops.identity());
  }
  EXPECT_EQ(deleted_module_dim(6, 3), 4u);
  EXPECT_EQ(deleted_module_dim(7, 3), 6u);
}

TEST(Alternating, DeletedModuleGroupHasFullOrder) {
  const FamilyMember m = alt_deleted(6, 2);
  EXPECT_EQ(m.group->order(), 360u);
  EXPECT_EQ(m.group->dim(), 4u);
  EXPECT_THROW(alt_deleted(11, 2), std::invalid_argument);
}

TEST(SimpleEstimate, ProportionsAreExact) {
  for (std::uint64_t q : {3, 4, 5}) {
    const auto checks = simple_estimate_checks(q);
    EXPECT_EQ(checks.size(), (q - 1) * (q - 1));
    for (const auto& c : checks) EXPECT_EQ(c.status, Status::pass) << c.check_id;
  }
}

TEST(Orthogonal, SamplerPreservesTheFormAndIsReproducible) {
  for (int sign : {1, -1}) {
    const auto a = sample_orthogonal_alpha(sign, 3, 300, 17);
    const auto b = sample_orthogonal_alpha(sign, 3, 300, 17);
    EXPECT_TRUE(a.form_preserved);
    EXPECT_EQ(a.with_eigenvalue_one, b.with_eigenvalue_one);
    EXPECT_GT(a.with_eigenvalue_one, 0u);
    EXPECT_LT(a.with_eigenvalue_one, a.samples);
  }
  EXPECT_THROW(sample_orthogonal_alpha(1, 9, 10, 1), std::invalid_argument);
}

TEST(Dispatch, MakeFamilyValidatesParameters) {
  EXPECT_EQ(make_family("frobenius_affine", {7, 2}).group->order(), 3u);
  EXPECT_EQ(make_family("extraspecial2", {1, -1}).group->order(), 8u);
  EXPECT_EQ(make_family("classical_natural", {1, 4, 2}).group->order(), 720u);
  EXPECT_THROW(make_family("frobenius_affine", {7}), std::invalid_argument);
  EXPECT_THROW(make_family("sl2q", {-3}), std::invalid_argument);
  EXPECT_THROW(make_family("no_such_family", {}), std::invalid_argument);
  EXPECT_THROW(make_family("classical_natural", {3, 2, 2}), std::invalid_argument);
}
