#include <gtest/gtest.h>

#include "generators.hpp"
#include "latgas/criteria.hpp"
#include "latgas/error.hpp"
#include "latgas/exact.hpp"
#include "latgas/recursion.hpp"
#include "testing.hpp"

namespace latgas {
namespace {

using recursion::IdentityCheck;
using testing::complex_near;
using testing::relative_near;

InteractionModel hard_core_pair(Complex t) {
  InteractionModel m(2);
  m.set_activity(0, t);
  m.set_activity(1, t);
  m.set_w(SiteSet::of({0, 1}), 0.0);
  return m;
}

// Root 0 with a pair, a triple and a bond that avoids the root.
InteractionModel five_site_model() {
  InteractionModel m(5);
  const Complex z[] = {{0.3, 0.1}, {0.2, -0.15}, {-0.1, 0.25}, {0.35, 0.05}, {0.12, 0.2}};
  for (Site x = 0; x < 5; ++x) m.set_activity(x, z[x]);
  m.set_w(SiteSet::of({0, 2}), {0.4, 0.3});
  m.set_w(SiteSet::of({0, 1, 3}), {1.5, -0.4});
  m.set_w(SiteSet::of({1, 4}), {0.0, 0.0});
  m.set_w(SiteSet::singleton(0), {0.9, 0.2});
  return m;
}

TEST(RelevantBonds, FiltersByVolume) {
  const InteractionModel m = five_site_model();
  EXPECT_EQ(recursion::relevant_bonds(m, 0, SiteSet::of({1, 2, 3, 4})),
            (std::vector<SiteSet>{SiteSet::singleton(0), SiteSet::of({0, 2}),
                                  SiteSet::of({0, 1, 3})}));
  EXPECT_EQ(recursion::relevant_bonds(m, 0, SiteSet::of({2, 3})),
            (std::vector<SiteSet>{SiteSet::singleton(0), SiteSet::of({0, 2})}));
}

TEST(InterpolatedW, ThreeCases) {
  const InteractionModel m = five_site_model();
  const recursion::InterpolationContext ctx =
      recursion::make_context(m, 0, SiteSet::of({1, 2, 3, 4}));
  const SiteSet marker = SiteSet::of({0, 1, 3});
  EXPECT_EQ(recursion::interpolated_w(ctx, marker, marker), m.w(marker));
  EXPECT_EQ(recursion::interpolated_w(ctx, marker, SiteSet::of({0, 2})), Complex(1.0));
  EXPECT_EQ(recursion::interpolated_w(ctx, marker, SiteSet::singleton(0)), Complex(1.0));
  // {0} u {2} precedes the marker, so W({2}) picks up W({0,2})
  EXPECT_EQ(recursion::interpolated_w(ctx, marker, SiteSet::singleton(2)),
            m.w(SiteSet::singleton(2)) * m.w(SiteSet::of({0, 2})));
  // {0} u {1,4} follows the marker
  EXPECT_EQ(recursion::interpolated_w(ctx, marker, SiteSet::of({1, 4})), m.w(SiteSet::of({1, 4})));
  const SiteSet early = SiteSet::of({0, 2});
  EXPECT_EQ(recursion::interpolated_w(ctx, early, SiteSet::of({1, 3})), m.w(SiteSet::of({1, 3})));
}

TEST(Interpolate, MaterializesInterpolatedW) {
  const InteractionModel m = five_site_model();
  const recursion::InterpolationContext ctx = recursion::make_context(m, 0, m.lattice().without(0));
  for (const SiteSet& marker : ctx.bond_order) {
    const InteractionModel wx = recursion::interpolate(m, 0, marker);
    for_each_subset(m.lattice(), [&](SiteSet y) {
      if (y.empty()) return;
      EXPECT_TRUE(complex_near(wx.w(y), recursion::interpolated_w(ctx, marker, y), 1e-15));
    });
  }
  EXPECT_THROW(recursion::interpolate(m, 0, SiteSet::of({1, 2})), Error);
}

TEST(InterpolationIdentity, EmptyBondSetIsTrivial) {
  InteractionModel m(3);
  m.set_activity(0, {0.2, 0.3});
  m.set_w(SiteSet::of({1, 2}), 0.5);
  const IdentityCheck c = recursion::interpolation_identity_check(m, 0, SiteSet::of({1, 2}));
  EXPECT_EQ(c.rhs, m.activity(0));
  EXPECT_TRUE(complex_near(c.lhs, c.rhs, 1e-15));
}

TEST(InterpolationIdentity, ZeroActivityGivesZeroes) {
  InteractionModel m = five_site_model();
  m.set_activity(0, 0.0);
  const IdentityCheck c = recursion::interpolation_identity_check(m, 0, SiteSet::of({1, 2, 3}));
  EXPECT_EQ(c.lhs, Complex(0.0));
  EXPECT_EQ(c.rhs, Complex(0.0));
}

TEST(InterpolationIdentity, FiveSiteModel) {
  const InteractionModel m = five_site_model();
  const IdentityCheck c = recursion::interpolation_identity_check(m, 0, SiteSet::of({1, 2, 3, 4}));
  EXPECT_TRUE(complex_near(c.lhs, c.rhs, 1e-10));
  EXPECT_TRUE(complex_near(c.lhs, exact::effective_activity(m, 0, SiteSet::of({1, 2, 3, 4})),
                           1e-15));
}

TEST(InterpolationIdentity, UnitActivityProductForm) {
  InteractionModel m = five_site_model();
  m.set_activity(0, 1.0);
  const SiteSet volume = SiteSet::of({1, 2, 3, 4});
  EXPECT_TRUE(complex_near(recursion::interpolated_zhat_product(m, 0, volume),
                           exact::effective_activity(m, 0, volume), 1e-10));
}

TEST(RemovalIdentity, BondOutsideVolumeIsOne) {
  const InteractionModel m = five_site_model();
  const IdentityCheck c =
      recursion::removal_identity_check(m, 0, SiteSet::of({0, 1, 3}), SiteSet::of({1, 2}));
  EXPECT_EQ(c.rhs, Complex(1.0));
  EXPECT_TRUE(complex_near(c.lhs, 1.0, 1e-14));
}

TEST(RemovalIdentity, SingletonBond) {
  const InteractionModel m = five_site_model();
  const IdentityCheck c =
      recursion::removal_identity_check(m, 0, SiteSet::singleton(0), SiteSet::of({1, 2, 3}));
  EXPECT_EQ(c.rhs, m.activity(0) * m.w(SiteSet::singleton(0)));
  EXPECT_TRUE(complex_near(c.lhs, c.rhs, 1e-14));
}

TEST(RemovalIdentity, HardCorePair) {
  const Complex t{0.4, -0.3};
  const IdentityCheck c = recursion::removal_identity_check(
      hard_core_pair(t), 0, SiteSet::of({0, 1}), SiteSet::singleton(1));
  EXPECT_TRUE(complex_near(c.lhs, 1.0 - t / (1.0 + t), 1e-15));
  EXPECT_TRUE(complex_near(c.rhs, c.lhs, 1e-15));
}

TEST(RecursiveZhat, EmptyBondSet) {
  InteractionModel m(3);
  m.set_activity(0, {0.2, 0.3});
  m.set_w(SiteSet::singleton(0), 0.5);
  m.set_w(SiteSet::of({1, 2}), 0.0);
  EXPECT_EQ(recursion::recursive_effective_activity(m, 0, SiteSet::of({1, 2}), {}),
            Complex(0.1, 0.15));
}

TEST(RecursiveZhat, HardCorePair) {
  const Complex t{0.3, 0.2};
  EXPECT_TRUE(complex_near(
      recursion::recursive_effective_activity(hard_core_pair(t), 0, SiteSet::singleton(1), {}),
      t / (1.0 + t), 1e-15));
}

TEST(RecursiveZhat, FiveSiteModelWithBoundary) {
  const InteractionModel m = five_site_model();
  for_each_subset(m.lattice().without(0), [&](SiteSet bnd) {
    const SiteSet volume = m.lattice().without(0) - bnd;
    EXPECT_TRUE(complex_near(recursion::recursive_effective_activity(m, 0, volume, bnd),
                             exact::effective_activity(m, 0, volume, bnd), 1e-12))
        << "boundary " << bnd.to_string();
  });
}

TEST(RecursiveZhat, RejectsRootInVolume) {
  const InteractionModel m = five_site_model();
  EXPECT_THROW(recursion::recursive_effective_activity(m, 0, SiteSet::of({0, 1}), {}), Error);
}

TEST(RecursiveZhat, DepthGuard) {
  InteractionModel m(3);
  for (Site x = 0; x < 3; ++x) m.set_activity(x, 0.1);
  m.set_w(SiteSet::of({0, 1}), 0.0);
  m.set_w(SiteSet::of({1, 2}), 0.0);
  recursion::RecursionOptions options;
  options.depth_guard = 1;
  try {
    recursion::recursive_effective_activity(m, 0, SiteSet::of({1, 2}), {}, options);
    FAIL() << "expected DepthGuardExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDepthGuardExceeded);
  }
  options.depth_guard = 2;
  EXPECT_NO_THROW(recursion::recursive_effective_activity(m, 0, SiteSet::of({1, 2}), {}, options));
}

TEST(RecursiveZhat, VanishingInnerDenominatorReportsPath) {
  const InteractionModel m = hard_core_pair(-1.0);
  try {
    recursion::recursive_effective_activity(m, 0, SiteSet::singleton(1), {});
    FAIL() << "expected VanishingDenominator";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kVanishingDenominator);
    EXPECT_NE(std::string(e.what()).find("depth 1"), std::string::npos) << e.what();
  }
}

TEST(RecursiveZhat, ZeroInnerActivityWinsOverUndefinedFactor) {
  // Bond {0,1}: inner zhat(1, {}) = 0 so the bond contributes 1 even though
  // bond {0,2} sees 1 + zhat(2, {}) = 0.
  InteractionModel m(3);
  m.set_activity(0, 0.5);
  m.set_activity(1, 0.0);
  m.set_activity(2, -1.0);
  m.set_w(SiteSet::of({0, 1}), 0.0);
  EXPECT_EQ(recursion::recursive_effective_activity(m, 0, SiteSet::singleton(1), {}),
            Complex(0.5));
  m.set_w(SiteSet::of({0, 2}), 0.0);
  EXPECT_THROW(recursion::recursive_effective_activity(m, 0, SiteSet::of({1, 2}), {}), Error);
}

TEST(RecursiveZhat, TraceRecordsEveryNode) {
  const InteractionModel m = five_site_model();
  std::vector<recursion::RecursionCall> trace;
  recursion::RecursionOptions options;
  options.trace = &trace;
  const Complex value =
      recursion::recursive_effective_activity(m, 0, SiteSet::of({1, 2, 3, 4}), {}, options);
  ASSERT_FALSE(trace.empty());
  EXPECT_EQ(trace.back().depth, 0u);
  EXPECT_EQ(trace.back().value, value);
  for (const recursion::RecursionCall& call : trace) {
    EXPECT_FALSE(call.volume.contains(call.root));
    EXPECT_TRUE(complex_near(call.value,
                             exact::effective_activity(call.model, call.root, call.volume), 1e-12));
  }
}

TEST(Stability, EmptyBoundaryIsEquality) {
  const InteractionModel m = five_site_model();
  const CriterionParams p = CriterionParams::uniform_alpha(5, 0.7);
  const recursion::StabilityCheck c =
      recursion::stability_lhs_rhs(m, p, 0, SiteSet{}, SiteSet::of({0, 1, 3}));
  EXPECT_DOUBLE_EQ(c.lhs, c.rhs);
}

TEST(Stability, UnitInteraction) {
  InteractionModel m(4);
  const CriterionParams p = CriterionParams::uniform_alpha(4, 0.7);
  const recursion::StabilityCheck c =
      recursion::stability_lhs_rhs(m, p, 0, SiteSet::singleton(3), SiteSet::of({0, 1}));
  EXPECT_EQ(c.lhs, 1.0);
  EXPECT_EQ(c.rhs, 1.0);
}

TEST(Stability, HardCoreTripleWithOneBoundarySite) {
  InteractionModel m(3);
  m.set_w(SiteSet::of({0, 1}), 0.0);
  m.set_w(SiteSet::of({0, 1, 2}), 0.0);
  const CriterionParams p = CriterionParams::from_alpha({0.2, 0.5, 0.9});
  const recursion::StabilityCheck c =
      recursion::stability_lhs_rhs(m, p, 0, SiteSet::singleton(2), SiteSet::of({0, 1}));
  // W({0,1}|{2}) = 0, lhs = 1 + alpha(1); rhs = (1 + alpha(1)) (1 + alpha(1))
  EXPECT_DOUBLE_EQ(c.lhs, 1.5);
  EXPECT_DOUBLE_EQ(c.rhs, 2.25);
}

TEST(Stability, RejectsBadArguments) {
  InteractionModel m(3);
  const CriterionParams p = CriterionParams::uniform_alpha(3, 0.5);
  EXPECT_THROW(recursion::stability_lhs_rhs(m, p, 0, SiteSet::singleton(0), SiteSet::of({0, 1})),
               Error);
  EXPECT_THROW(recursion::stability_lhs_rhs(m, p, 0, SiteSet{}, SiteSet::of({1, 2})), Error);
}

TEST(ConditionalStability, RootInBoundary) {
  const InteractionModel m = five_site_model();
  const CriterionParams p = CriterionParams::uniform_alpha(5, 0.5);
  const recursion::StabilityCheck c =
      recursion::conditional_stability(m, p, 0, SiteSet::of({0, 2}));
  EXPECT_EQ(c.rhs, 0.0);
  EXPECT_EQ(c.lhs, 0.0);
}

class RecursionProperties : public ::testing::TestWithParam<int> {};

TEST_P(RecursionProperties, AgreesWithEnumeration) {
  testing::Rng rng(900 + GetParam());
  testing::ModelShape shape;
  shape.sites = 6;
  shape.min_bonds = 3;
  shape.max_bonds = 5;
  shape.max_bond_size = 4;
  const CriterionParams p = testing::random_params(rng, 6, 0.1, 0.6);
  const InteractionModel m =
      testing::scale_into_dobrushin(rng, testing::random_model(rng, shape), p);
  for (Site x = 0; x < m.size(); ++x) {
    const SiteSet bnd = testing::random_subset(rng, m.lattice().without(x), 0.25);
    const SiteSet volume = testing::random_subset(rng, m.lattice().without(x) - bnd, 0.8);
    EXPECT_TRUE(complex_near(recursion::recursive_effective_activity(m, x, volume, bnd),
                             exact::effective_activity(m, x, volume, bnd), 1e-9));
  }
}

TEST_P(RecursionProperties, IdentitiesHold) {
  testing::Rng rng(1900 + GetParam());
  testing::ModelShape shape;
  shape.sites = 5;
  shape.max_bond_size = 4;
  const CriterionParams p = testing::random_params(rng, 5, 0.1, 0.6);
  const InteractionModel m =
      testing::scale_into_dobrushin(rng, testing::random_model(rng, shape), p);
  const Site x = GetParam() % 5;
  const SiteSet volume = testing::random_subset(rng, m.lattice().without(x), 0.7);
  const IdentityCheck c = recursion::interpolation_identity_check(m, x, volume);
  EXPECT_TRUE(relative_near(c.lhs, c.rhs, 1e-10));
  for (SiteSet bond : recursion::relevant_bonds(m, x, m.lattice().without(x))) {
    const IdentityCheck r = recursion::removal_identity_check(m, x, bond, volume);
    EXPECT_TRUE(relative_near(r.lhs, r.rhs, 1e-10)) << bond.to_string();
  }
}

TEST_P(RecursionProperties, TraceValuesStayInsideRadius) {
  testing::Rng rng(2900 + GetParam());
  testing::ModelShape shape;
  shape.sites = 6;
  shape.min_bonds = 3;
  shape.max_bond_size = 4;
  const CriterionParams p = testing::random_params(rng, 6, 0.1, 0.6);
  const InteractionModel m =
      testing::scale_into_dobrushin(rng, testing::random_model(rng, shape), p);
  std::vector<recursion::RecursionCall> trace;
  recursion::RecursionOptions options;
  options.trace = &trace;
  for (Site x = 0; x < m.size(); ++x) {
    recursion::recursive_effective_activity(m, x, m.lattice().without(x), {}, options);
  }
  for (const recursion::RecursionCall& call : trace) {
    EXPECT_LE(std::abs(call.value), p.r(call.root) + 1e-12);
  }
}

TEST_P(RecursionProperties, StabilityInequalities) {
  testing::Rng rng(3900 + GetParam());
  testing::ModelShape shape;
  shape.sites = 5;
  shape.max_bonds = 8;
  shape.max_bond_size = 4;
  const InteractionModel m = testing::random_model(rng, shape);
  const CriterionParams p = testing::random_params(rng, 5, 0.0, 0.8);
  for (Site x = 0; x < m.size(); ++x) {
    const SiteSet bnd = testing::random_subset(rng, m.lattice().without(x), 0.4);
    for_each_subset(m.lattice() - bnd - SiteSet::singleton(x), [&](SiteSet rest) {
      const recursion::StabilityCheck c = recursion::stability_lhs_rhs(m, p, x, bnd, rest.with(x));
      EXPECT_LE(c.lhs, c.rhs + 1e-12);
    });
    const recursion::StabilityCheck cond = recursion::conditional_stability(m, p, x, bnd);
    EXPECT_LE(cond.lhs, cond.rhs + 1e-12);
    for (SiteSet marker : recursion::relevant_bonds(m, x, m.lattice().without(x))) {
      for (Site y = 0; y < m.size(); ++y) {
        const recursion::StabilityCheck c = recursion::interpolation_stability(m, p, x, marker, y);
        if (y != x || std::abs(m.w(SiteSet::singleton(x))) >= 1.0) {
          EXPECT_LE(c.lhs, c.rhs + 1e-12) << "y = " << y << " marker " << marker.to_string();
        }
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Random, RecursionProperties, ::testing::Range(0, 30));

}  // namespace
}  // namespace latgas
