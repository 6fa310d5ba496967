#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "latgas/error.hpp"
#include "latgas/model.hpp"
#include "oracles.hpp"
#include "testing.hpp"

namespace latgas {
namespace {

using testing::complex_near;

constexpr Site a = 0;
constexpr Site b = 1;

TEST(WConditional, SingletonWithoutBoundaryIsW) {
  InteractionModel m(2);
  m.set_w(SiteSet::singleton(a), {0.3, -0.2});
  EXPECT_EQ(w_conditional(m, SiteSet::singleton(a), {}), Complex(0.3, -0.2));
}

TEST(WConditional, SingletonInsideBoundaryVanishes) {
  InteractionModel m(2);
  EXPECT_EQ(w_conditional(m, SiteSet::singleton(a), SiteSet::singleton(a)), Complex(0.0));
}

TEST(WConditional, ExpandsOverBoundarySubsets) {
  InteractionModel m(2);
  const Complex c{0.4, 0.7};
  m.set_w(SiteSet::of({a, b}), c);
  EXPECT_EQ(w_conditional(m, SiteSet::singleton(a), SiteSet::singleton(b)), c);
}

TEST(WConditional, NonSingletonOverlapIsOne) {
  InteractionModel m(3);
  m.set_w(SiteSet::of({0, 1}), 0.0);
  EXPECT_EQ(w_conditional(m, SiteSet::of({0, 1}), SiteSet::singleton(1)), Complex(1.0));
}

TEST(WConditional, RejectsEmptySet) {
  InteractionModel m(2);
  EXPECT_THROW(w_conditional(m, SiteSet{}, {}), Error);
}

TEST(Kappa, EmptySetIsOne) {
  InteractionModel m(3);
  m.set_w(SiteSet::singleton(0), 0.0);
  EXPECT_EQ(kappa_conditional(m, SiteSet{}, SiteSet::of({0, 2})), Complex(1.0));
}

TEST(Kappa, OnlyPairFactorIsNonUnit) {
  InteractionModel m(2);
  const Complex c{-0.5, 0.25};
  m.set_w(SiteSet::of({a, b}), c);
  EXPECT_EQ(kappa(m, SiteSet::of({a, b})), c);
}

TEST(Kappa, OverlappingBoundaryVanishes) {
  InteractionModel m(2);
  EXPECT_EQ(kappa_conditional(m, SiteSet::singleton(a), SiteSet::singleton(a)), Complex(0.0));
  EXPECT_EQ(kappa_conditional(m, SiteSet::of({a, b}), SiteSet::singleton(b)), Complex(0.0));
}

TEST(Monomial, Examples) {
  InteractionModel m(2);
  EXPECT_EQ(monomial(m, SiteSet{}), Complex(1.0));
  m.set_activity(a, 0.5);
  EXPECT_EQ(monomial(m, SiteSet::singleton(a)), Complex(0.5));
  m.set_activity(a, {0.0, 1.0});
  m.set_activity(b, 2.0);
  EXPECT_EQ(monomial(m, SiteSet::of({a, b})), Complex(0.0, 2.0));
}

TEST(InteractionModel, UnlistedSetsHaveUnitW) {
  InteractionModel m(4);
  m.set_w(SiteSet::of({0, 1}), 0.5);
  EXPECT_EQ(m.w(SiteSet::of({0, 2})), Complex(1.0));
  EXPECT_EQ(m.w(SiteSet{}), Complex(1.0));
  EXPECT_EQ(w_conditional(m, SiteSet::of({1, 3}), {}), Complex(1.0));
}

TEST(InteractionModel, RejectsInvalidEntries) {
  InteractionModel m(3);
  EXPECT_THROW(m.set_w(SiteSet{}, 0.5), Error);
  EXPECT_THROW(m.set_w(SiteSet::singleton(3), 0.5), Error);
  EXPECT_THROW(m.set_w(SiteSet::singleton(0), 1.0), Error);
  EXPECT_THROW(m.set_w(SiteSet::singleton(0), {std::nan(""), 0.0}), Error);
  EXPECT_THROW(m.set_activity(0, {INFINITY, 0.0}), Error);
}

TEST(InteractionModel, BondsStayCanonicallyOrdered) {
  InteractionModel m(4);
  m.set_w(SiteSet::of({2, 3}), 0.5);
  m.set_w(SiteSet::singleton(0), 0.5);
  m.set_w(SiteSet::of({0, 1}), 0.5);
  ASSERT_EQ(m.bonds().size(), 3u);
  for (std::size_t i = 1; i < m.bonds().size(); ++i) {
    EXPECT_LT(m.bonds()[i - 1].set, m.bonds()[i].set);
  }
}

TEST(InteractionModel, PotentialDeterminesW) {
  InteractionModel m(3);
  const Complex v{0.3, -1.1};
  m.set_potential(SiteSet::of({0, 2}), v);
  ASSERT_TRUE(m.has_potential());
  EXPECT_EQ(m.v(SiteSet::of({0, 2})), v);
  EXPECT_EQ(m.v(SiteSet::of({0, 1})), Complex(0.0));
  EXPECT_TRUE(complex_near(m.w(SiteSet::of({0, 2})), std::exp(-v), 1e-15));
  EXPECT_THROW(m.set_w(SiteSet::singleton(1), 0.5), Error);
}

TEST(InteractionModel, MissingPotentialIsReported) {
  InteractionModel m(2);
  try {
    m.v(SiteSet::singleton(0));
    FAIL() << "expected MissingPotential";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMissingPotential);
  }
}

TEST(InteractionModel, FromFactorsMultipliesAndDropsUnits) {
  const std::vector<Complex> z{0.1, 0.2, 0.3};
  const InteractionModel m = InteractionModel::from_factors(
      3, z,
      {{SiteSet::of({0, 1}), 2.0},
       {SiteSet::of({0, 1}), 0.5},
       {SiteSet::singleton(2), 0.25},
       {SiteSet{}, 7.0}});
  EXPECT_EQ(m.bonds().size(), 1u);
  EXPECT_EQ(m.w(SiteSet::singleton(2)), Complex(0.25));
  EXPECT_EQ(m.w(SiteSet::of({0, 1})), Complex(1.0));
  EXPECT_EQ(m.activity(1), Complex(0.2));
}

TEST(CriterionParams, AlphaAndRAreConsistent) {
  const CriterionParams p = CriterionParams::from_r({0.0, 0.25, 0.5, 0.9});
  EXPECT_EQ(p.alpha(0), 0.0);
  EXPECT_DOUBLE_EQ(p.alpha(1), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(p.alpha(2), 1.0);
  const CriterionParams q = CriterionParams::from_alpha({0.0, 1.0 / 3.0, 1.0, 9.0});
  for (Site x = 0; x < 4; ++x) {
    EXPECT_NEAR(q.r(x), q.alpha(x) / (1.0 + q.alpha(x)), 1e-15);
    EXPECT_NEAR(p.r(x), p.alpha(x) / (1.0 + p.alpha(x)), 1e-15);
  }
  EXPECT_THROW(CriterionParams::from_r({1.0}), Error);
  EXPECT_THROW(CriterionParams::from_r({-0.1}), Error);
  EXPECT_THROW(CriterionParams::from_alpha({-1.0}), Error);
}

TEST(CriterionParams, MaxAlphaPowerMatchesEnumeration) {
  const CriterionParams p = CriterionParams::from_alpha({0.5, 2.0, 0.25, 3.0, 1.0});
  EXPECT_EQ(p.max_alpha_power(SiteSet{}), 0.0);
  EXPECT_DOUBLE_EQ(p.max_alpha_power(SiteSet::of({0, 2})), 0.5);
  EXPECT_DOUBLE_EQ(p.max_alpha_power(SiteSet::of({0, 1, 2, 3})), 6.0);
  EXPECT_DOUBLE_EQ(p.max_alpha_power(SiteSet::of({4})), 1.0);
  EXPECT_DOUBLE_EQ(p.alpha_power(SiteSet::of({1, 3})), 6.0);
  EXPECT_DOUBLE_EQ(p.r_power(SiteSet{}), 1.0);
}

TEST(CriterionParams, MaxAlphaPowerOnLargeSets) {
  std::vector<double> alpha(26);
  for (std::size_t i = 0; i < alpha.size(); ++i) alpha[i] = 0.3 + 0.1 * static_cast<double>(i);
  const CriterionParams p = CriterionParams::from_alpha(alpha);
  double expected = 1.0;
  for (double v : alpha) {
    if (v > 1.0) expected *= v;
  }
  EXPECT_NEAR(p.max_alpha_power(SiteSet::first(26)), expected, 1e-9 * expected);
  const CriterionParams small = CriterionParams::uniform_alpha(24, 0.5);
  EXPECT_DOUBLE_EQ(small.max_alpha_power(SiteSet::first(24)), 0.5);
}

class ModelProperties : public ::testing::TestWithParam<int> {};

TEST_P(ModelProperties, ConditionalMultiplicativity) {
  testing::Rng rng(1000 + GetParam());
  testing::ModelShape shape;
  shape.sites = 5;
  shape.max_bonds = 8;
  shape.max_bond_size = 4;
  const InteractionModel m = testing::random_model(rng, shape);
  for (int t = 0; t < 20; ++t) {
    const SiteSet x = testing::random_subset(rng, m.lattice());
    const SiteSet y = testing::random_subset(rng, m.lattice() - x);
    const SiteSet bnd = testing::random_subset(rng, m.lattice(), 0.3);
    EXPECT_TRUE(complex_near(kappa_conditional(m, x | y, bnd),
                             kappa_conditional(m, x, y | bnd) * kappa_conditional(m, y, bnd),
                             1e-12));
  }
}

TEST_P(ModelProperties, MatchesOracleAndRestriction) {
  testing::Rng rng(2000 + GetParam());
  testing::ModelShape shape;
  shape.sites = 5;
  const InteractionModel m = testing::random_model(rng, shape);
  for_each_subset(m.lattice(), [&](SiteSet x) {
    Complex unconditioned = 1.0;
    for_each_subset(x, [&](SiteSet s) {
      if (!s.empty()) unconditioned *= m.w(s);
    });
    EXPECT_TRUE(complex_near(kappa(m, x), unconditioned, 1e-14));
    const SiteSet bnd = testing::random_subset(rng, m.lattice(), 0.4);
    EXPECT_TRUE(complex_near(kappa_conditional(m, x, bnd), testing::oracle::kappa(m, x, bnd),
                             1e-13));
    if (!x.empty()) {
      EXPECT_TRUE(complex_near(w_conditional(m, x, bnd), testing::oracle::w_cond(m, x, bnd),
                               1e-13));
    }
  });
}

TEST_P(ModelProperties, ConditionedModelCarriesConditionalW) {
  testing::Rng rng(3000 + GetParam());
  testing::ModelShape shape;
  shape.sites = 5;
  const InteractionModel m = testing::random_model(rng, shape);
  const SiteSet bnd = testing::random_subset(rng, m.lattice(), 0.4);
  const InteractionModel c = condition(m, bnd);
  for_each_subset(m.lattice(), [&](SiteSet x) {
    if (x.empty()) return;
    EXPECT_TRUE(complex_near(c.w(x), w_conditional(m, x, bnd), 1e-14)) << x.to_string();
  });
  EXPECT_TRUE(complex_near(c.activity(0), m.activity(0), 0.0));
}

INSTANTIATE_TEST_SUITE_P(Random, ModelProperties, ::testing::Range(0, 25));

}  // namespace
}  // namespace latgas
