#include <gtest/gtest.h>

#include <set>

#include "derange/families.hpp"
#include "derange/gammal1.hpp"

using namespace derange;

namespace {

using CodeSet = std::vector<std::uint32_t>;

// Every subgroup of a metacyclic group is metacyclic, hence generated by two elements.
std::set<CodeSet> subgroups_by_pairs(const FieldCtx& k) {
  const std::uint32_t total = static_cast<std::uint32_t>((k.q() - 1) * k.f());
  std::set<CodeSet> out;
  for (std::uint32_t a = 0; a < total; ++a)
    for (std::uint32_t b = a; b < total; ++b) out.insert(detail::gammal1_closure(k, {a, b}));
  return out;
}

SemilinearMap as_map(const FieldCtx& k, std::uint32_t code) {
  return SemilinearMap{1, {k.exp(static_cast<long long>(code / k.f()))}, code % k.f()};
}

}  // namespace

TEST(GammaL1, EnumerationFindsEverySubgroupOnce) {
  for (auto [p, f] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 2}, {2, 3}, {3, 2}, {2, 4}, {5, 2}, {3, 3}, {7, 2}, {2, 6}}) {
    auto k = make_field(p, f);
    const auto subs = enumerate_gammal1_subgroups(k);
    std::set<CodeSet> found;
    for (const auto& g : subs) found.insert(g.codes());
    EXPECT_EQ(found.size(), subs.size()) << "duplicate subgroup for q = " << k->q();
    EXPECT_EQ(found, subgroups_by_pairs(*k)) << "q = " << k->q();
  }
  // GL_1(13) is cyclic of order 12: one subgroup per divisor.
  EXPECT_EQ(enumerate_gammal1_subgroups(make_field(13, 1)).size(), 6u);
}

TEST(GammaL1, CodeCompositionMatchesSemilinearMatrices) {
  for (auto [p, f] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 3}, {3, 2}, {2, 4}}) {
    auto k = make_field(p, f);
    MatOps ops(k, 1);
    const std::uint32_t total = static_cast<std::uint32_t>((k->q() - 1) * f);
    for (std::uint32_t a = 0; a < total; ++a)
      for (std::uint32_t b = 0; b < total; ++b)
        ASSERT_EQ(as_map(*k, GammaL1Group::compose_codes(*k, a, b)), ops.compose(as_map(*k, a), as_map(*k, b)));
  }
}

TEST(GammaL1, FixedCountsAndStatsAgreeWithMatrixRoute) {
  for (auto [p, f] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 4}, {3, 2}, {5, 2}, {2, 6}}) {
    auto k = make_field(p, f);
    MatOps ops(k, 1);
    for (const auto& g : enumerate_gammal1_subgroups(k)) {
      for (auto code : g.codes()) ASSERT_EQ(g.fixed_count(code), ops.fixed_vector_count(as_map(*k, code)));
      MatGroup m = g.to_matgroup();
      m.enumerate();
      ASSERT_EQ(m.order(), g.order()) << g.label();
      const auto s = gammal1_stats(g);
      const auto a = affine_stats(m);
      ASSERT_EQ(s.alpha, a.alpha) << g.label();
      ASSERT_EQ(s.delta, a.delta_affine) << g.label();
      ASSERT_EQ(s.a_order, a.a_order) << g.label();
    }
  }
}

TEST(GammaL1, ParametersAndCosets) {
  for (std::uint64_t q : {16, 64, 81}) {
    auto [p, f] = *as_prime_power(q);
    auto k = make_field(p, f);
    for (const auto& g : enumerate_gammal1_subgroups(k)) {
      ASSERT_EQ(g.t() * g.m() * g.C(), q - 1);
      ASSERT_EQ(g.order(), g.t() * g.F());
      ASSERT_EQ(g.P(), checked_pow(p, g.e0()));
      for (unsigned ell : g.proper_levels()) {
        // z^l H is the fibre over the Galois exponent l e0.
        CodeSet fibre;
        for (auto code : g.codes())
          if (g.e_of(code) == (ell * g.e0()) % f) fibre.push_back(code);
        ASSERT_EQ(g.coset(ell), fibre) << g.label() << " l=" << ell;
      }
    }
  }
}

TEST(GammaL1, CosetCriteriaHoldOnEverySubgroup) {
  for (std::uint64_t q : {16, 25, 27, 64, 81, 256, 729}) {
    auto [p, f] = *as_prime_power(q);
    for (const auto& g : enumerate_gammal1_subgroups(make_field(p, f))) {
      for (unsigned ell : g.proper_levels()) {
        const auto r = coset_fixers(g, ell);
        ASSERT_EQ(r.nonempty_predicted, r.nonempty_actual) << g.label() << " l=" << ell;
        ASSERT_EQ(r.criterion_predicted, r.nonempty_actual) << g.label() << " l=" << ell;
        ASSERT_TRUE(r.fixers_fix_P_ell);
        if (r.nonempty_actual) {
          ASSERT_EQ(r.count_actual, r.count_formula) << g.label() << " l=" << ell;
        }
      }
      for (const auto& c : check_coset_levels(g)) ASSERT_FALSE(c.failed()) << c.check_id;
    }
  }
  auto g = gammal1_from_generators(make_field(2, 4), {{1, 0}, {0, 1}});
  EXPECT_THROW(coset_fixers(g, 4), std::invalid_argument);
  EXPECT_THROW(coset_fixers(g, 3), std::invalid_argument);
}

TEST(GammaL1, FromGeneratorsBuildsTheFullGroup) {
  auto k = make_field(3, 4);
  auto g = gammal1_from_generators(k, {{1, 0}, {0, 1}});
  EXPECT_EQ(g.order(), 80u * 4);
  EXPECT_EQ(g.t(), 80u);
  EXPECT_EQ(g.e0(), 1u);
}

TEST(GammaL1, SharpGroupMeetsTheBoundsWithEquality) {
  // GL_1(16) extended by x -> x^4, of order 30.
  const GammaL1Group sharp = sharp_gammal1_group(16);
  const auto s = gammal1_stats(sharp);
  EXPECT_EQ(s.alpha, bound_h(16).lo);
  EXPECT_EQ(s.delta, bound_g(16).lo);
  const auto checks = verify_prop_gammal1({sharp});
  auto find = [&](const std::string& prefix) -> const CheckResult* {
    for (const auto& c : checks)
      if (c.check_id.rfind(prefix, 0) == 0) return &c;
    return nullptr;
  };
  ASSERT_NE(find("prop-gammal1.alpha-h/"), nullptr);
  EXPECT_EQ(find("prop-gammal1.alpha-h/")->status, Status::pass);
  ASSERT_NE(find("prop-gammal1.A-order/"), nullptr);
  EXPECT_EQ(find("prop-gammal1.A-order/")->status, Status::pass);
  ASSERT_NE(find("prop-gammal1.delta-formula-sqrt/"), nullptr);
  EXPECT_EQ(find("prop-gammal1.delta-formula-sqrt/")->status, Status::pass);
  const CheckResult* printed = find("prop-gammal1.delta-formula-q/");
  ASSERT_NE(printed, nullptr);
  EXPECT_EQ(printed->status, Status::skipped);
  EXPECT_NE(*printed->lhs, *printed->rhs);
}

TEST(GammaL1, PropositionSweepHasNoHardFailures) {
  for (std::uint64_t q : {16, 25, 64, 81}) {
    auto [p, f] = *as_prime_power(q);
    for (const auto& c : verify_prop_gammal1(make_field(p, f))) EXPECT_FALSE(c.failed()) << c.check_id;
  }
  const auto non_square = verify_prop_gammal1(make_field(2, 3));
  ASSERT_EQ(non_square.size(), 1u);
  EXPECT_EQ(non_square[0].status, Status::skipped);
}
