#include <gtest/gtest.h>

#include <random>

#include "derange/families.hpp"
#include "derange/matgroup.hpp"

using namespace derange;

namespace {

SemilinearMap mat(const FieldCtx& k, std::size_t d, std::initializer_list<long long> codes, unsigned frob = 0) {
  SemilinearMap m{d, {}, frob};
  for (auto c : codes) m.a.push_back(k.from_code(static_cast<std::uint64_t>(c)));
  return m;
}

SemilinearMap random_invertible(const MatOps& ops, std::mt19937& rng, bool semilinear) {
  const FieldCtx& k = ops.field();
  while (true) {
    SemilinearMap m{ops.dim(), std::vector<FieldElem>(ops.dim() * ops.dim()), 0};
    for (auto& x : m.a) x = FieldElem{static_cast<std::uint32_t>(rng() % k.q())};
    if (semilinear) m.frob = rng() % k.f();
    if (ops.matrix_inverse(m.a)) return m;
  }
}

std::uint64_t brute_fixed(const MatOps& ops, const SemilinearMap& g) {
  const FieldCtx& k = ops.field();
  const auto w = g.words();
  const std::uint64_t n = checked_pow(k.q(), static_cast<unsigned>(ops.dim()));
  std::uint64_t count = 0;
  for (std::uint64_t x = 0; x < n; ++x) {
    auto v = decode_vector(k, ops.dim(), x);
    count += ops.apply(w.data(), v) == v;
  }
  return count;
}

MatGroup enumerated(FieldPtr k, std::size_t d, std::vector<SemilinearMap> gens) {
  MatGroup g(std::move(k), d, std::move(gens));
  g.enumerate();
  return g;
}

MatGroup sl2_3() {
  auto k = make_field(3, 1);
  return enumerated(k, 2, {mat(*k, 2, {1, 1, 0, 1}), mat(*k, 2, {1, 0, 1, 1})});
}

MatGroup gl2_3() {
  auto k = make_field(3, 1);
  return enumerated(k, 2, {mat(*k, 2, {1, 1, 0, 1}), mat(*k, 2, {1, 0, 1, 1}), mat(*k, 2, {2, 0, 0, 1})});
}

// Full semilinear group GammaL_1(8): multiplication by a generator and the Frobenius.
MatGroup gammal1_8() {
  auto k = make_field(2, 3);
  return enumerated(k, 1, {SemilinearMap{1, {k->omega()}, 0}, SemilinearMap{1, {k->one()}, 1}});
}

// Lower-right entry fixed to 1: the line spanned by e_2 is invariant under v -> vA.
MatGroup borel_2(std::uint64_t p) {
  auto k = make_field(p, 1);
  return enumerated(k, 2, {mat(*k, 2, {1, 1, 0, 1}), mat(*k, 2, {static_cast<long long>(k->omega().code), 0, 0, 1})});
}

// Brute force: some nonzero v spans a line mapped to itself by every generator.
bool has_invariant_line(const MatGroup& g) {
  const FieldCtx& k = g.field();
  const std::size_t d = g.dim();
  const std::uint64_t n = g.vector_count();
  for (std::uint64_t x = 1; x < n; ++x) {
    auto v = decode_vector(k, d, x);
    bool invariant = true;
    for (const auto& s : g.generators()) {
      auto w = g.ops().apply(s.words().data(), v);
      bool multiple = false;
      for (std::uint64_t c = 1; c < k.q() && !multiple; ++c) {
        std::vector<FieldElem> cv(d);
        for (std::size_t i = 0; i < d; ++i) cv[i] = k.mul(FieldElem{static_cast<std::uint32_t>(c)}, v[i]);
        multiple = cv == w;
      }
      invariant = invariant && multiple;
    }
    if (invariant) return true;
  }
  return false;
}

}  // namespace

TEST(MatOps, CompositionAppliesLeftFactorFirst) {
  std::mt19937 rng(1);
  for (auto [p, f, d] : std::vector<std::tuple<int, unsigned, std::size_t>>{{3, 2, 2}, {2, 3, 2}, {2, 2, 3}, {5, 1, 3}}) {
    MatOps ops(make_field(p, f), d);
    for (int t = 0; t < 50; ++t) {
      auto a = random_invertible(ops, rng, true), b = random_invertible(ops, rng, true);
      auto ab = ops.compose(a, b);
      auto v = decode_vector(ops.field(), d, rng() % checked_pow(ops.field().q(), static_cast<unsigned>(d)));
      ASSERT_EQ(ops.apply(ab.words().data(), v), ops.apply(b.words().data(), ops.apply(a.words().data(), v)));
      ASSERT_EQ(ops.compose(a, ops.invert(a)), ops.identity());
      ASSERT_EQ(ops.compose(ops.invert(a), a), ops.identity());
    }
  }
}

TEST(MatOps, DeterminantIsMultiplicativeOnLinearMaps) {
  std::mt19937 rng(2);
  MatOps ops(make_field(7, 1), 3);
  for (int t = 0; t < 100; ++t) {
    auto a = random_invertible(ops, rng, false), b = random_invertible(ops, rng, false);
    ASSERT_EQ(ops.determinant(ops.compose(a, b).a), ops.field().mul(ops.determinant(a.a), ops.determinant(b.a)));
  }
  const FieldCtx& k = ops.field();
  EXPECT_FALSE(ops.matrix_inverse(mat(k, 3, {1, 2, 3, 2, 4, 6, 0, 0, 1}).a).has_value());
  EXPECT_EQ(ops.rank(mat(k, 3, {1, 2, 3, 2, 4, 6, 0, 0, 1}).a, 3, 3), 2u);
}

TEST(MatOps, FixedVectorCountMatchesBruteForce) {
  std::mt19937 rng(3);
  for (auto [p, f, d] : std::vector<std::tuple<int, unsigned, std::size_t>>{
           {2, 3, 1}, {3, 2, 1}, {2, 4, 1}, {5, 2, 1}, {3, 2, 2}, {2, 2, 2}, {2, 3, 2}, {3, 1, 3}, {2, 2, 3}}) {
    MatOps ops(make_field(p, f), d);
    for (int t = 0; t < 60; ++t) {
      auto g = random_invertible(ops, rng, true);
      ASSERT_EQ(ops.fixed_vector_count(g), brute_fixed(ops, g)) << p << "^" << f << " d=" << d;
      if (g.is_linear()) {
        const auto w = g.words();
        ASSERT_EQ(ops.fixed_vector_count(g),
                  checked_pow(ops.field().q(), static_cast<unsigned>(ops.fixed_space_dim_linear(w.data()))));
      }
    }
  }
}

TEST(MatOps, RejectsMalformedMaps) {
  auto k = make_field(3, 1);
  MatOps ops(k, 2);
  EXPECT_THROW(ops.check(mat(*k, 2, {1, 0, 0, 1}, 1)), std::invalid_argument);
  EXPECT_THROW(ops.check(SemilinearMap{2, {k->one()}, 0}), std::invalid_argument);
  EXPECT_THROW(MatGroup(k, 2, {mat(*k, 2, {1, 1, 1, 1})}), std::invalid_argument);
  EXPECT_THROW(MatOps(make_field(2, 17), 1), std::invalid_argument);
}

TEST(MatGroup, ClassicalOrders) {
  EXPECT_EQ(sl2_3().order(), 24u);
  EXPECT_EQ(gl2_3().order(), 48u);
  EXPECT_EQ(gammal1_8().order(), 21u);
  EXPECT_EQ(borel_2(5).order(), 20u);
}

TEST(MatGroup, EncodeDecodeRoundTrip) {
  auto k = make_field(3, 2);
  for (std::uint64_t x = 0; x < 729; ++x) ASSERT_EQ(encode_vector(*k, decode_vector(*k, 3, x)), x);
}

TEST(AffineStats, EtaIdentityAgreesWithPermutationImage) {
  std::vector<MatGroup> groups;
  groups.push_back(sl2_3());
  groups.push_back(gl2_3());
  groups.push_back(gammal1_8());
  groups.push_back(borel_2(5));
  groups.push_back(*q8_in_gl2(3).group);
  for (const auto& g : groups) {
    const AffineStats s = affine_stats(g);
    PermGroup affine = affine_to_perm(g);
    affine.enumerate();
    ASSERT_EQ(affine.order(), g.order() * g.vector_count());
    EXPECT_EQ(delta(affine), s.delta_affine);
    EXPECT_EQ(s.eta + s.delta_affine, ExactRatio(1));
    SplitPermGroup split = affine_to_split(g);
    EXPECT_EQ(ExactRatio::from_u64(split.derangement_count(), split.order()), s.delta_affine);
  }
}

TEST(AffineStats, SandwichAndSubgroupIndex) {
  const AffineStats sl = affine_stats(sl2_3());
  EXPECT_EQ(sl.a_index, 1u);
  EXPECT_TRUE(sandwich_check("sl2_3", sl, 3).status == Status::pass);

  const AffineStats q8 = affine_stats(*q8_in_gl2(3).group);
  EXPECT_TRUE(q8.semiregular_nonzero);
  EXPECT_EQ(q8.alpha, ExactRatio(1, 8));
  EXPECT_EQ(q8.a_order, 1u);
  EXPECT_EQ(q8.a_index, 8u);
  // V x| Q_8 is Frobenius with kernel V: delta = (9 - 1)/72.
  EXPECT_EQ(q8.delta_affine, ExactRatio(1, 9));

  const AffineStats gl1 = affine_stats(gammal1_8());
  // Semilinear: fixed spaces are F_2-spaces, so the sandwich uses p = 2.
  EXPECT_TRUE(sandwich_check("gammal1_8", gl1, 2).status == Status::pass);
  for (auto [value, count] : gl1.fixed_count_histogram) EXPECT_EQ(value & (value - 1), 0u) << value;

  for (const MatGroup& g : {sl2_3(), gl2_3(), borel_2(5), gammal1_8()}) {
    const AffineStats s = affine_stats(g);
    EXPECT_EQ(a_subgroup_index_identity("x", g, s).status, Status::pass);
  }
  const FamilyMember m = q8_in_gl2(3);
  EXPECT_EQ(a_subgroup_index_identity("q8", *m.group, q8).status, Status::pass);
}

TEST(AffineStats, SandwichDetectsAWrongAlpha) {
  AffineStats s = affine_stats(gl2_3());
  s.alpha = s.delta_affine / ExactRatio(2);
  EXPECT_EQ(sandwich_check("bad", s, 3).status, Status::fail);
}

TEST(Irreducible, AgreesWithInvariantLineSearch) {
  for (const MatGroup& g : {sl2_3(), gl2_3(), borel_2(5), borel_2(7), *q8_in_gl2(3).group, *q8_in_gl2(5).group}) {
    EXPECT_EQ(is_irreducible(g), !has_invariant_line(g));
  }
  EXPECT_FALSE(is_irreducible(borel_2(5)));
  EXPECT_TRUE(is_irreducible(sl2_3()));
  EXPECT_THROW(is_irreducible(gammal1_8()), std::invalid_argument);
  // A reducible 3-dimensional group with no invariant line: stabilizer of a plane only.
  auto k = make_field(2, 1);
  MatGroup plane(k, 3, {mat(*k, 3, {0, 1, 0, 1, 1, 0, 0, 0, 1}), mat(*k, 3, {1, 0, 0, 0, 1, 0, 1, 0, 1})});
  plane.enumerate();
  EXPECT_FALSE(is_irreducible(plane));
}

TEST(CosetEigenvalues, MatchFixedVectorRoute) {
  const MatGroup base = sl2_3();
  const FieldCtx& k = base.field();
  const SemilinearMap rep = mat(k, 2, {2, 0, 0, 1});
  for (std::uint32_t l = 1; l < 3; ++l) {
    const FieldElem lambda{l};
    // lambda is an eigenvalue of x iff lambda^{-1} x fixes a nonzero vector.
    const SemilinearMap scale = SemilinearMap::scalar(k, 2, k.inv(lambda));
    std::uint64_t hits = 0;
    for (std::size_t i = 0; i < base.order(); ++i) {
      auto x = base.ops().compose(base.element(i), rep);
      hits += base.ops().fixed_vector_count(base.ops().compose(x, scale)) > 1;
    }
    EXPECT_EQ(coset_eigenvalue_proportion(base, rep, lambda), ExactRatio::from_u64(hits, base.order()));
  }
}
